// src/regression.cpp

// Copyright 2026 The VoxMeta Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "voxmeta/regression.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"
#include "voxmeta/common.hpp"
#include "voxmeta/kernels.hpp"

namespace voxmeta::regression {

namespace {

// std below this fraction of max(1, |mean|) counts as zero variance; a
// constant column accumulates rounding noise of order eps * |value|.
constexpr double kZeroVarianceTol = 1e-12;

void check_finite(const std::vector<double>& rows, std::size_t n,
                  std::size_t d) {
  for (std::size_t i = 0; i < n * d; ++i) {
    if (!std::isfinite(rows[i])) {
      throw NumericError("design matrix has non-finite entry at row " +
                         std::to_string(i / d) + ", col " +
                         std::to_string(i % d));
    }
  }
}

// In-place lower Cholesky of the d x d matrix `a`; returns false when a
// pivot falls below tol (positive semidefinite but rank deficient).
bool cholesky(std::vector<double>& a, std::size_t d) {
  double max_diag = 0.0;
  for (std::size_t j = 0; j < d; ++j)
    max_diag = std::max(max_diag, std::fabs(a[j * d + j]));
  const double tol = 1e-12 * std::max(1.0, max_diag);
  for (std::size_t j = 0; j < d; ++j) {
    double diag = a[j * d + j];
    for (std::size_t k = 0; k < j; ++k) diag -= a[j * d + k] * a[j * d + k];
    if (diag <= tol) return false;
    const double ljj = std::sqrt(diag);
    a[j * d + j] = ljj;
    for (std::size_t i = j + 1; i < d; ++i) {
      double v = a[i * d + j];
      for (std::size_t k = 0; k < j; ++k) v -= a[i * d + k] * a[j * d + k];
      a[i * d + j] = v / ljj;
    }
  }
  return true;
}

void cholesky_solve(const std::vector<double>& l, std::vector<double>& b,
                    std::size_t d) {
  for (std::size_t i = 0; i < d; ++i) {
    double v = b[i];
    for (std::size_t k = 0; k < i; ++k) v -= l[i * d + k] * b[k];
    b[i] = v / l[i * d + i];
  }
  for (std::size_t ii = d; ii > 0; --ii) {
    const std::size_t i = ii - 1;
    double v = b[i];
    for (std::size_t k = i + 1; k < d; ++k) v -= l[k * d + i] * b[k];
    b[i] = v / l[i * d + i];
  }
}

// Cyclic Jacobi eigendecomposition for symmetric matrices. Only used on the
// rank-deficient fallback path, so d stays small in practice.
void jacobi_eigh(std::vector<double> a, std::size_t d,
                 std::vector<double>& eigvals, std::vector<double>& eigvecs) {
  eigvecs.assign(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) eigvecs[i * d + i] = 1.0;
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = p + 1; q < d; ++q) off += a[p * d + q] * a[p * d + q];
    if (off < 1e-24) break;
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const double apq = a[p * d + q];
        if (apq == 0.0) continue;
        const double app = a[p * d + p];
        const double aqq = a[q * d + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < d; ++k) {
          const double akp = a[k * d + p];
          const double akq = a[k * d + q];
          a[k * d + p] = c * akp - s * akq;
          a[k * d + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double apk = a[p * d + k];
          const double aqk = a[q * d + k];
          a[p * d + k] = c * apk - s * aqk;
          a[q * d + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double vkp = eigvecs[k * d + p];
          const double vkq = eigvecs[k * d + q];
          eigvecs[k * d + p] = c * vkp - s * vkq;
          eigvecs[k * d + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  eigvals.resize(d);
  for (std::size_t i = 0; i < d; ++i) eigvals[i] = a[i * d + i];
}

// Minimum-norm solution of A beta = b for symmetric PSD A via pseudo-inverse.
std::vector<double> min_norm_solve(const std::vector<double>& a,
                                   const std::vector<double>& b,
                                   std::size_t d) {
  std::vector<double> eigvals, eigvecs;
  jacobi_eigh(a, d, eigvals, eigvecs);
  double max_eig = 0.0;
  for (double v : eigvals) max_eig = std::max(max_eig, std::fabs(v));
  const double cutoff = 1e-10 * std::max(1.0, max_eig);
  std::vector<double> beta(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    if (eigvals[i] <= cutoff) continue;
    double vi_b = 0.0;
    for (std::size_t k = 0; k < d; ++k) vi_b += eigvecs[k * d + i] * b[k];
    const double scale = vi_b / eigvals[i];
    for (std::size_t k = 0; k < d; ++k) beta[k] += scale * eigvecs[k * d + i];
  }
  return beta;
}

double mean_of(const std::vector<double>& y) {
  return kernels::sum(y.data(), y.size()) / static_cast<double>(y.size());
}

void check_y(const DesignMatrix& x, std::size_t y_size) {
  if (y_size != x.n_rows())
    throw ValidationError("target length " + std::to_string(y_size) +
                          " does not match design rows " +
                          std::to_string(x.n_rows()));
}

struct NormalEq {
  std::vector<double> gram;  // n_active x n_active
  std::vector<double> xty;   // n_active
  double yty = 0.0;          // centered
  double y_mean = 0.0;
};

NormalEq build_normal_eq(const DesignMatrix& x, const std::vector<double>& y) {
  NormalEq eq;
  const std::size_t da = x.n_active();
  const std::size_t n = x.n_rows();
  for (double v : y)
    if (!std::isfinite(v)) throw NumericError("target vector has non-finite entry");
  eq.y_mean = mean_of(y);
  std::vector<double> yc(n);
  for (std::size_t i = 0; i < n; ++i) yc[i] = y[i] - eq.y_mean;
  eq.gram.resize(da * da);
  kernels::gram(x.cols_data(), da, n, eq.gram.data());
  eq.xty.resize(da);
  kernels::matvec_cols(x.cols_data(), da, n, yc.data(), eq.xty.data());
  eq.yty = kernels::dot(yc.data(), yc.data(), n);
  return eq;
}

// Shared by fit_ols and fit_ridge so that ridge(0) is bit-identical to OLS.
Coefficients solve_linear(const DesignMatrix& x, const std::vector<double>& y,
                          double lambda, ModelKind kind) {
  check_y(x, y.size());
  if (lambda < 0.0) throw ValidationError("lambda must be >= 0");
  const std::size_t da = x.n_active();
  NormalEq eq = build_normal_eq(x, y);

  Coefficients out;
  out.model_kind = kind;
  out.lambda = lambda;
  out.intercept = eq.y_mean;
  out.column_means = x.means();
  out.column_stds = x.stds();
  out.weights.assign(x.n_cols(), 0.0);

  std::vector<double> a = eq.gram;
  for (std::size_t j = 0; j < da; ++j) a[j * da + j] += lambda;
  std::vector<double> beta = eq.xty;
  std::vector<double> chol = a;
  if (cholesky(chol, da)) {
    cholesky_solve(chol, beta, da);
  } else {
    beta = min_norm_solve(a, eq.xty, da);
    out.warnings.push_back("rank-deficient normal equations; minimum-norm solution");
  }
  for (std::size_t j = 0; j < da; ++j) out.weights[x.active()[j]] = beta[j];

  // Final objective for the record: RSS (+ ridge penalty).
  std::vector<double> abeta(da);
  kernels::matvec_rows(eq.gram.data(), da, da, beta.data(), abeta.data());
  double rss = eq.yty - 2.0 * kernels::dot(beta.data(), eq.xty.data(), da) +
               kernels::dot(beta.data(), abeta.data(), da);
  double penalty = 0.0;
  for (double w : beta) penalty += w * w;
  out.objective_trace.push_back(rss + lambda * penalty);
  return out;
}

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

double sigmoid(double s) {
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

double softplus(double s) {
  return s > 0.0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s));
}

}  // namespace

const char* to_token(ModelKind k) {
  switch (k) {
    case ModelKind::OLS: return "ols";
    case ModelKind::Ridge: return "ridge";
    case ModelKind::Lasso: return "lasso";
    case ModelKind::Logistic: return "logistic";
  }
  return "?";
}

ModelKind model_kind_from_token(const std::string& token) {
  if (token == "ols" || token == "linear") return ModelKind::OLS;
  if (token == "ridge") return ModelKind::Ridge;
  if (token == "lasso") return ModelKind::Lasso;
  if (token == "logistic") return ModelKind::Logistic;
  throw ValidationError("unknown model kind: " + token);
}

DesignMatrix DesignMatrix::build(const std::vector<double>& rows,
                                 std::size_t n, std::size_t d) {
  if (n == 0 || d == 0) throw ValidationError("empty design matrix");
  if (rows.size() != n * d)
    throw ValidationError("design buffer size does not match n x d");
  check_finite(rows, n, d);

  DesignMatrix m;
  m.n_ = n;
  m.d_ = d;
  m.means_.assign(d, 0.0);
  m.stds_.assign(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += rows[i * d + j];
    m.means_[j] = s / static_cast<double>(n);
  }
  for (std::size_t j = 0; j < d; ++j) {
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = rows[i * d + j] - m.means_[j];
      ss += c * c;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n));
    if (sd <= kZeroVarianceTol * std::max(1.0, std::fabs(m.means_[j]))) {
      m.stds_[j] = 0.0;
      m.dropped_.push_back(j);
    } else {
      m.stds_[j] = sd;
      m.active_.push_back(j);
    }
  }
  m.cols_.resize(m.active_.size() * n);
  for (std::size_t jj = 0; jj < m.active_.size(); ++jj) {
    const std::size_t j = m.active_[jj];
    double* col = m.cols_.data() + jj * n;
    const double inv = 1.0 / m.stds_[j];
    for (std::size_t i = 0; i < n; ++i)
      col[i] = (rows[i * d + j] - m.means_[j]) * inv;
  }
  return m;
}

DesignMatrix DesignMatrix::build_raw(const std::vector<double>& rows,
                                     std::size_t n, std::size_t d) {
  if (n == 0 || d == 0) throw ValidationError("empty design matrix");
  if (rows.size() != n * d)
    throw ValidationError("design buffer size does not match n x d");
  check_finite(rows, n, d);
  DesignMatrix m;
  m.n_ = n;
  m.d_ = d;
  m.means_.assign(d, 0.0);
  m.stds_.assign(d, 1.0);
  m.active_.resize(d);
  for (std::size_t j = 0; j < d; ++j) m.active_[j] = j;
  m.cols_.resize(d * n);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < n; ++i) m.cols_[j * n + i] = rows[i * d + j];
  return m;
}

Coefficients fit_ols(const DesignMatrix& x, const std::vector<double>& y) {
  return solve_linear(x, y, 0.0, ModelKind::OLS);
}

Coefficients fit_ridge(const DesignMatrix& x, const std::vector<double>& y,
                       double lambda) {
  return solve_linear(x, y, lambda, ModelKind::Ridge);
}

double lasso_lambda_max(const DesignMatrix& x, const std::vector<double>& y) {
  check_y(x, y.size());
  NormalEq eq = build_normal_eq(x, y);
  double m = 0.0;
  for (double v : eq.xty) m = std::max(m, std::fabs(v));
  return 2.0 * m;
}

Coefficients fit_lasso(const DesignMatrix& x, const std::vector<double>& y,
                       double lambda, double tol, std::size_t max_sweeps) {
  check_y(x, y.size());
  if (lambda < 0.0) throw ValidationError("lambda must be >= 0");
  const std::size_t da = x.n_active();
  NormalEq eq = build_normal_eq(x, y);

  Coefficients out;
  out.model_kind = ModelKind::Lasso;
  out.lambda = lambda;
  out.intercept = eq.y_mean;
  out.column_means = x.means();
  out.column_stds = x.stds();
  out.weights.assign(x.n_cols(), 0.0);
  out.converged = false;

  std::vector<double> beta(da, 0.0);
  std::vector<double> q(da, 0.0);  // q = gram * beta, kept incrementally
  const double half_lambda = 0.5 * lambda;

  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (std::size_t j = 0; j < da; ++j) {
      const double ajj = eq.gram[j * da + j];
      const double rho = eq.xty[j] - q[j] + ajj * beta[j];
      const double updated = soft_threshold(rho, half_lambda) / ajj;
      const double delta = updated - beta[j];
      if (delta != 0.0) {
        beta[j] = updated;
        kernels::axpy(delta, eq.gram.data() + j * da, q.data(), da);
        max_change = std::max(max_change, std::fabs(delta));
      }
    }
    // Recompute q exactly once per sweep: bounds incremental drift and gives
    // a consistent objective evaluation.
    kernels::matvec_rows(eq.gram.data(), da, da, beta.data(), q.data());
    double l1 = 0.0;
    for (double b : beta) l1 += std::fabs(b);
    const double rss = eq.yty -
                       2.0 * kernels::dot(beta.data(), eq.xty.data(), da) +
                       kernels::dot(beta.data(), q.data(), da);
    out.objective_trace.push_back(rss + lambda * l1);
    if (max_change < tol) {
      out.converged = true;
      break;
    }
  }
  if (!out.converged)
    out.warnings.push_back("coordinate descent hit max_sweeps without converging");
  for (std::size_t j = 0; j < da; ++j) out.weights[x.active()[j]] = beta[j];
  return out;
}

double logistic_objective(const DesignMatrix& x, const std::vector<int>& y,
                          const std::vector<double>& w, double intercept,
                          double lambda) {
  const std::size_t n = x.n_rows();
  const std::size_t da = x.n_active();
  std::vector<double> s(n);
  kernels::combine_cols(x.cols_data(), da, n, w.data(), s.data());
  std::vector<double> terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double si = s[i] + intercept;
    terms[i] = softplus(si) - (y[i] ? si : 0.0);
  }
  double obj = kernels::sum(terms.data(), n);
  for (double wj : w) obj += lambda * wj * wj;
  return obj;
}

void logistic_gradient(const DesignMatrix& x, const std::vector<int>& y,
                       const std::vector<double>& w, double intercept,
                       double lambda, std::vector<double>& grad) {
  const std::size_t n = x.n_rows();
  const std::size_t da = x.n_active();
  grad.assign(da + 1, 0.0);
  std::vector<double> s(n);
  kernels::combine_cols(x.cols_data(), da, n, w.data(), s.data());
  std::vector<double> resid(n);
  for (std::size_t i = 0; i < n; ++i)
    resid[i] = sigmoid(s[i] + intercept) - static_cast<double>(y[i]);
  kernels::matvec_cols(x.cols_data(), da, n, resid.data(), grad.data());
  for (std::size_t j = 0; j < da; ++j) grad[j] += 2.0 * lambda * w[j];
  grad[da] = kernels::sum(resid.data(), n);
}

Coefficients fit_logistic(const DesignMatrix& x, const std::vector<int>& y,
                          double lambda, std::size_t max_iters,
                          double grad_tol) {
  check_y(x, y.size());
  if (lambda < 0.0) throw ValidationError("lambda must be >= 0");
  bool has_pos = false, has_neg = false;
  for (int v : y) {
    if (v != 0 && v != 1) throw ValidationError("labels must be 0/1");
    (v ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg)
    throw ValidationError("logistic fit needs both classes present");

  const std::size_t da = x.n_active();
  std::vector<double> w(da, 0.0);
  double b = 0.0;

  Coefficients out;
  out.model_kind = ModelKind::Logistic;
  out.lambda = lambda;
  out.column_means = x.means();
  out.column_stds = x.stds();
  out.weights.assign(x.n_cols(), 0.0);
  out.converged = false;

  double f = logistic_objective(x, y, w, b, lambda);
  out.objective_trace.push_back(f);
  std::vector<double> grad, w_try(da);
  double step = 1.0 / static_cast<double>(x.n_rows());

  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    logistic_gradient(x, y, w, b, lambda, grad);
    double g_inf = 0.0, g_sq = 0.0;
    for (double g : grad) {
      g_inf = std::max(g_inf, std::fabs(g));
      g_sq += g * g;
    }
    if (g_inf <= grad_tol * static_cast<double>(x.n_rows())) {
      out.converged = true;
      break;
    }
    // Armijo backtracking from twice the last accepted step.
    double t = step * 2.0;
    double f_try = 0.0;
    double b_try = 0.0;
    bool accepted = false;
    while (t > 1e-20) {
      for (std::size_t j = 0; j < da; ++j) w_try[j] = w[j] - t * grad[j];
      b_try = b - t * grad[da];
      f_try = logistic_objective(x, y, w_try, b_try, lambda);
      if (f_try <= f - 1e-4 * t * g_sq) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    w.swap(w_try);
    b = b_try;
    f = f_try;
    step = t;
    out.objective_trace.push_back(f);
  }

  // Unpenalized separable data has no finite optimum: the norm grows until
  // the gradient underflows. Report it instead of calling that convergence.
  if (lambda == 0.0) {
    double w_inf = 0.0;
    for (double wj : w) w_inf = std::max(w_inf, std::fabs(wj));
    if (w_inf > 15.0) {
      std::vector<double> s(x.n_rows());
      kernels::combine_cols(x.cols_data(), da, x.n_rows(), w.data(), s.data());
      bool separated = true;
      for (std::size_t i = 0; i < x.n_rows(); ++i)
        if ((s[i] + b > 0.0) != (y[i] == 1)) separated = false;
      if (separated) {
        out.converged = false;
        out.warnings.push_back(
            "perfect separation: weight norm diverging under lambda=0");
      }
    }
  }
  if (!out.converged && out.warnings.empty())
    out.warnings.push_back("gradient descent hit max_iters without converging");

  out.intercept = b;
  for (std::size_t j = 0; j < da; ++j) out.weights[x.active()[j]] = w[j];
  return out;
}

namespace {

std::vector<double> affine_scores(const Coefficients& coefs,
                                  const std::vector<double>& rows,
                                  std::size_t n, std::size_t d) {
  if (d != coefs.weights.size())
    throw ValidationError("prediction dimension " + std::to_string(d) +
                          " does not match model dimension " +
                          std::to_string(coefs.weights.size()));
  if (rows.size() != n * d)
    throw ValidationError("prediction buffer size does not match n x d");
  std::vector<double> out(n, 0.0);
  const std::int64_t nn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < nn; ++i) {
    const double* row = rows.data() + static_cast<std::size_t>(i) * d;
    double acc = coefs.intercept;
    for (std::size_t j = 0; j < d; ++j) {
      const double w = coefs.weights[j];
      if (w == 0.0) continue;  // dropped columns carry std 0
      acc += w * (row[j] - coefs.column_means[j]) / coefs.column_stds[j];
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

}  // namespace

std::vector<double> predict(const Coefficients& coefs,
                            const std::vector<double>& rows, std::size_t n,
                            std::size_t d) {
  return affine_scores(coefs, rows, n, d);
}

std::vector<double> predict_proba(const Coefficients& coefs,
                                  const std::vector<double>& rows,
                                  std::size_t n, std::size_t d) {
  std::vector<double> s = affine_scores(coefs, rows, n, d);
  for (double& v : s) v = sigmoid(v);
  return s;
}

std::vector<int> classify(const Coefficients& coefs,
                          const std::vector<double>& rows, std::size_t n,
                          std::size_t d, double threshold) {
  std::vector<double> p = predict_proba(coefs, rows, n, d);
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = p[i] >= threshold ? 1 : 0;
  return out;
}

void save_model(const std::string& path, const Coefficients& coefs,
                std::uint64_t seed, const std::string& stream, bool force) {
  if (!force) {
    std::ifstream probe(path);
    if (probe.good())
      throw ValidationError("refusing to overwrite " + path +
                            " (pass force to allow)");
  }
  nlohmann::ordered_json j;
  j["model_kind"] = to_token(coefs.model_kind);
  j["lambda"] = coefs.lambda;
  j["intercept"] = coefs.intercept;
  j["weights"] = coefs.weights;
  j["column_means"] = coefs.column_means;
  j["column_stds"] = coefs.column_stds;
  j["converged"] = coefs.converged;
  j["seed_context"] = {{"seed", seed}, {"stream", stream}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open model file " + path);
  out << j.dump(2) << '\n';
  if (!out.flush()) throw IoError("failed writing model file " + path);
}

Coefficients load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read model file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed model file " + path + ": " + e.what());
  }
  Coefficients c;
  try {
    c.model_kind = model_kind_from_token(j.at("model_kind").get<std::string>());
    c.lambda = j.at("lambda").get<double>();
    c.intercept = j.at("intercept").get<double>();
    c.weights = j.at("weights").get<std::vector<double>>();
    c.column_means = j.at("column_means").get<std::vector<double>>();
    c.column_stds = j.at("column_stds").get<std::vector<double>>();
    c.converged = j.at("converged").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("model file " + path + " missing field: " + e.what());
  }
  if (c.weights.size() != c.column_means.size() ||
      c.weights.size() != c.column_stds.size())
    throw ValidationError("model file " + path + " has inconsistent lengths");
  return c;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  grid.reserve(17);
  for (int k = 0; k <= 16; ++k)
    grid.push_back(std::pow(10.0, -4.0 + 0.5 * static_cast<double>(k)));
  return grid;
}

}  // namespace voxmeta::regression
