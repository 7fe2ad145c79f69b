// tests/unit/test_regression.cpp

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

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "voxmeta/common.hpp"
#include "voxmeta/regression.hpp"
#include "voxmeta/rng.hpp"

namespace r = voxmeta::regression;
using voxmeta::Rng;

namespace {

// Effective affine map in original units, for comparing against planted
// coefficients: slope_j = w_j / std_j, intercept = b - sum_j w_j mean_j / std_j.
std::vector<double> effective_slopes(const r::Coefficients& c) {
  std::vector<double> out(c.weights.size(), 0.0);
  for (std::size_t j = 0; j < c.weights.size(); ++j)
    if (c.weights[j] != 0.0) out[j] = c.weights[j] / c.column_stds[j];
  return out;
}

double effective_intercept(const r::Coefficients& c) {
  double b = c.intercept;
  for (std::size_t j = 0; j < c.weights.size(); ++j)
    if (c.weights[j] != 0.0)
      b -= c.weights[j] * c.column_means[j] / c.column_stds[j];
  return b;
}

std::vector<double> random_matrix(std::size_t n, std::size_t d,
                                  std::uint64_t salt) {
  Rng rng = Rng::keyed(99, "regression-test", salt);
  std::vector<double> x(n * d);
  for (auto& v : x) v = rng.normal();
  return x;
}

}  // namespace

TEST_CASE("ols recovers an exact line") {
  const std::size_t n = 10;
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = static_cast<double>(i);
    y[i] = 2.0 * x[i] + 1.0;
  }
  const auto design = r::DesignMatrix::build(x, n, 1);
  const auto coefs = r::fit_ols(design, y);
  CHECK(std::fabs(effective_slopes(coefs)[0] - 2.0) < 1e-9);
  CHECK(std::fabs(effective_intercept(coefs) - 1.0) < 1e-9);
  const auto pred = r::predict(coefs, x, n, 1);
  for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(pred[i] - y[i]) < 1e-9);
}

TEST_CASE("ols on a constant target") {
  const auto x = random_matrix(20, 3, 1);
  const std::vector<double> y(20, 7.5);
  const auto coefs = r::fit_ols(r::DesignMatrix::build(x, 20, 3), y);
  for (double w : coefs.weights) CHECK(std::fabs(w) < 1e-9);
  CHECK(coefs.intercept == doctest::Approx(7.5));
}

TEST_CASE("ols recovers planted coefficients") {
  // Oracle: the generating model itself (beta* known by construction).
  const std::size_t n = 200, d = 5;
  const std::vector<double> beta_star = {1.5, -2.0, 0.0, 0.7, 3.1};
  const double intercept_star = 4.0;
  auto x = random_matrix(n, d, 2);
  Rng noise = Rng::keyed(99, "regression-test", 3);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = intercept_star;
    for (std::size_t j = 0; j < d; ++j) s += beta_star[j] * x[i * d + j];
    y[i] = s + 0.01 * noise.normal();
  }
  const auto coefs = r::fit_ols(r::DesignMatrix::build(x, n, d), y);
  const auto slopes = effective_slopes(coefs);
  for (std::size_t j = 0; j < d; ++j)
    CHECK(std::fabs(slopes[j] - beta_star[j]) < 0.05);
  CHECK(std::fabs(effective_intercept(coefs) - intercept_star) < 0.05);
}

TEST_CASE("ols falls back to minimum norm on duplicated columns") {
  const std::size_t n = 30;
  auto base = random_matrix(n, 1, 4);
  std::vector<double> x(n * 2);
  for (std::size_t i = 0; i < n; ++i) {
    x[i * 2] = base[i];
    x[i * 2 + 1] = base[i];  // exact duplicate
  }
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = 3.0 * base[i] + 1.0;
  const auto coefs = r::fit_ols(r::DesignMatrix::build(x, n, 2), y);
  REQUIRE_FALSE(coefs.warnings.empty());
  CHECK(coefs.warnings.front().find("minimum-norm") != std::string::npos);
  const auto pred = r::predict(coefs, x, n, 2);
  for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(pred[i] - y[i]) < 1e-6);
}

TEST_CASE("ridge at lambda zero equals ols") {
  const auto x = random_matrix(50, 4, 5);
  std::vector<double> y(50);
  Rng rng = Rng::keyed(99, "regression-test", 6);
  for (auto& v : y) v = rng.uniform(0.0, 10.0);
  const auto design = r::DesignMatrix::build(x, 50, 4);
  const auto ols = r::fit_ols(design, y);
  const auto ridge = r::fit_ridge(design, y, 0.0);
  for (std::size_t j = 0; j < 4; ++j)
    CHECK(std::fabs(ols.weights[j] - ridge.weights[j]) < 1e-8);
  CHECK(std::fabs(ols.intercept - ridge.intercept) < 1e-8);
}

TEST_CASE("ridge shrinks to zero in the large-lambda limit") {
  const auto x = random_matrix(40, 3, 7);
  std::vector<double> y(40);
  Rng rng = Rng::keyed(99, "regression-test", 8);
  for (auto& v : y) v = rng.uniform(-5.0, 5.0);
  const auto design = r::DesignMatrix::build(x, 40, 3);
  const auto coefs = r::fit_ridge(design, y, 1e12);
  double max_w = 0.0;
  for (double w : effective_slopes(coefs)) max_w = std::max(max_w, std::fabs(w));
  CHECK(max_w < 1e-6);
  double mean_y = 0.0;
  for (double v : y) mean_y += v;
  mean_y /= 40.0;
  CHECK(coefs.intercept == doctest::Approx(mean_y));
}

TEST_CASE("ridge weight norm is monotone in lambda") {
  // Oracle: solve both and compare.
  const auto x = random_matrix(60, 6, 9);
  std::vector<double> y(60);
  Rng rng = Rng::keyed(99, "regression-test", 10);
  for (auto& v : y) v = rng.normal();
  const auto design = r::DesignMatrix::build(x, 60, 6);
  double prev_norm = -1.0;
  for (double lambda : {0.0, 0.1, 1.0, 10.0, 100.0, 1e4}) {
    const auto coefs = r::fit_ridge(design, y, lambda);
    double norm = 0.0;
    for (double w : coefs.weights) norm += w * w;
    if (prev_norm >= 0.0) CHECK(norm <= prev_norm + 1e-12);
    prev_norm = norm;
  }
}

TEST_CASE("ridge solution satisfies its normal equations") {
  const std::size_t n = 80, d = 7;
  const auto x = random_matrix(n, d, 11);
  std::vector<double> y(n);
  Rng rng = Rng::keyed(99, "regression-test", 12);
  for (auto& v : y) v = rng.uniform(0.0, 50.0);
  const double lambda = 2.5;
  const auto design = r::DesignMatrix::build(x, n, d);
  const auto coefs = r::fit_ridge(design, y, lambda);

  // Residual computed from scratch on independently standardized data.
  std::vector<double> mu(d, 0.0), sd(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n; ++i) mu[j] += x[i * d + j];
    mu[j] /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double c = x[i * d + j] - mu[j];
      sd[j] += c * c;
    }
    sd[j] = std::sqrt(sd[j] / static_cast<double>(n));
  }
  double y_mean = 0.0;
  for (double v : y) y_mean += v;
  y_mean /= static_cast<double>(n);

  std::vector<double> z(n * d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j)
      z[i * d + j] = (x[i * d + j] - mu[j]) / sd[j];

  std::vector<double> xty(d, 0.0);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < n; ++i)
      xty[j] += z[i * d + j] * (y[i] - y_mean);

  double max_resid = 0.0, max_rhs = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double lhs = lambda * coefs.weights[j];
    for (std::size_t k = 0; k < d; ++k) {
      double ajk = 0.0;
      for (std::size_t i = 0; i < n; ++i) ajk += z[i * d + j] * z[i * d + k];
      lhs += ajk * coefs.weights[k];
    }
    max_resid = std::max(max_resid, std::fabs(lhs - xty[j]));
    max_rhs = std::max(max_rhs, std::fabs(xty[j]));
  }
  CHECK(max_resid < 1e-6 * max_rhs);
}

TEST_CASE("lasso at lambda zero matches ols") {
  const auto x = random_matrix(50, 4, 13);
  std::vector<double> y(50);
  Rng rng = Rng::keyed(99, "regression-test", 14);
  for (auto& v : y) v = rng.uniform(-2.0, 2.0);
  const auto design = r::DesignMatrix::build(x, 50, 4);
  const auto ols = r::fit_ols(design, y);
  const auto lasso = r::fit_lasso(design, y, 0.0, 1e-10, 5000);
  for (std::size_t j = 0; j < 4; ++j)
    CHECK(std::fabs(ols.weights[j] - lasso.weights[j]) < 1e-5);
}

TEST_CASE("lasso is identically zero at lambda_max") {
  const std::size_t n = 300, d = 40;
  const auto x = random_matrix(n, d, 15);
  std::vector<double> y(n);
  Rng rng = Rng::keyed(99, "regression-test", 16);
  for (auto& v : y) v = rng.uniform(10.0, 60.0);
  const auto design = r::DesignMatrix::build(x, n, d);
  const double lambda_max = r::lasso_lambda_max(design, y);

  // KKT oracle: at beta = 0 the zero solution is optimal iff
  // |x_j^T y_centered| <= lambda/2 for every column, computed from scratch.
  double y_mean = 0.0;
  for (double v : y) y_mean += v;
  y_mean /= static_cast<double>(n);
  double max_corr = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      c += design.col(j)[i] * (y[i] - y_mean);
    max_corr = std::max(max_corr, std::fabs(c));
  }
  CHECK(max_corr <= lambda_max / 2.0 + 1e-9);

  for (double lambda : {lambda_max, 1.5 * lambda_max}) {
    const auto coefs = r::fit_lasso(design, y, lambda);
    CHECK(coefs.converged);
    for (double w : coefs.weights) CHECK(w == 0.0);
  }
}

TEST_CASE("lasso reproduces the 1-d soft-threshold solution") {
  // Oracle: analytic minimizer of (y - b x)^2 + lambda |b| for zero-mean x.
  const std::size_t n = 25;
  Rng rng = Rng::keyed(99, "regression-test", 17);
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rng.normal();
  double x_mean = 0.0;
  for (double v : x) x_mean += v;
  x_mean /= static_cast<double>(n);
  for (double& v : x) v -= x_mean;
  for (std::size_t i = 0; i < n; ++i) y[i] = 1.8 * x[i] + 0.2 * rng.normal();

  double xx = 0.0;
  for (double v : x) xx += v * v;
  double y_mean = 0.0;
  for (double v : y) y_mean += v;
  y_mean /= static_cast<double>(n);
  double xy = 0.0;
  for (std::size_t i = 0; i < n; ++i) xy += x[i] * (y[i] - y_mean);

  for (double lambda : {0.0, 0.5, 2.0, 10.0, 100.0}) {
    const double shrunk = std::fabs(xy) - lambda / 2.0;
    const double analytic =
        shrunk <= 0.0 ? 0.0 : (xy > 0 ? shrunk : -shrunk) / xx;
    const auto coefs = r::fit_lasso(r::DesignMatrix::build_raw(x, n, 1), y,
                                    lambda, 1e-12, 10000);
    CHECK(std::fabs(coefs.weights[0] - analytic) < 1e-10);
  }
}

TEST_CASE("lasso objective trace is non-increasing") {
  const std::size_t n = 120, d = 30;
  const auto x = random_matrix(n, d, 18);
  std::vector<double> y(n);
  Rng rng = Rng::keyed(99, "regression-test", 19);
  for (auto& v : y) v = rng.uniform(0.0, 30.0);
  const auto design = r::DesignMatrix::build(x, n, d);
  for (double lambda : {0.1, 5.0, 50.0}) {
    const auto coefs = r::fit_lasso(design, y, lambda);
    REQUIRE(!coefs.objective_trace.empty());
    for (std::size_t s = 1; s < coefs.objective_trace.size(); ++s) {
      CHECK(coefs.objective_trace[s] <=
            coefs.objective_trace[s - 1] +
                1e-9 * std::max(1.0, std::fabs(coefs.objective_trace[s - 1])));
    }
  }
}

TEST_CASE("logistic separates two gaussian clouds") {
  const std::size_t n = 400, d = 2;
  std::vector<double> x(n * d);
  std::vector<int> y(n);
  Rng rng = Rng::keyed(99, "regression-test", 20);
  for (std::size_t i = 0; i < n; ++i) {
    const bool pos = i % 2 == 0;
    y[i] = pos ? 1 : 0;
    x[i * d] = rng.normal() + (pos ? 2.5 : -2.5);
    x[i * d + 1] = rng.normal() + (pos ? 2.5 : -2.5);
  }
  const auto design = r::DesignMatrix::build(x, n, d);
  const auto coefs = r::fit_logistic(design, y, 1e-3);
  const auto pred = r::classify(coefs, x, n, d);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i) correct += pred[i] == y[i];
  CHECK(static_cast<double>(correct) / static_cast<double>(n) >= 0.99);
}

TEST_CASE("logistic label flip negates the weights") {
  const std::size_t n = 60, d = 3;
  const auto x = random_matrix(n, d, 21);
  std::vector<int> y(n), y_flip(n);
  Rng rng = Rng::keyed(99, "regression-test", 22);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = rng.below(2) ? 1 : 0;
    y_flip[i] = 1 - y[i];
  }
  const auto design = r::DesignMatrix::build(x, n, d);
  const auto a = r::fit_logistic(design, y, 0.1);
  const auto b = r::fit_logistic(design, y_flip, 0.1);
  for (std::size_t j = 0; j < d; ++j)
    CHECK(a.weights[j] == doctest::Approx(-b.weights[j]).epsilon(1e-4));
  CHECK(a.intercept == doctest::Approx(-b.intercept).epsilon(1e-4));
}

TEST_CASE("logistic gradient matches central finite differences") {
  const std::size_t n = 30, d = 8;
  const auto x = random_matrix(n, d, 23);
  std::vector<int> y(n);
  Rng rng = Rng::keyed(99, "regression-test", 24);
  for (auto& v : y) v = rng.below(2) ? 1 : 0;
  const auto design = r::DesignMatrix::build_raw(x, n, d);
  const double lambda = 0.7;

  for (int point = 0; point < 20; ++point) {
    std::vector<double> w(d);
    for (auto& v : w) v = rng.uniform(-1.0, 1.0);
    const double b = rng.uniform(-1.0, 1.0);

    std::vector<double> grad;
    r::logistic_gradient(design, y, w, b, lambda, grad);

    const double h = 1e-6;
    for (std::size_t j = 0; j <= d; ++j) {
      auto wp = w, wm = w;
      double bp = b, bm = b;
      if (j < d) {
        wp[j] += h;
        wm[j] -= h;
      } else {
        bp += h;
        bm -= h;
      }
      const double fd = (r::logistic_objective(design, y, wp, bp, lambda) -
                         r::logistic_objective(design, y, wm, bm, lambda)) /
                        (2.0 * h);
      CHECK(std::fabs(grad[j] - fd) <= 1e-5 * std::max(1.0, std::fabs(fd)));
    }
  }
}

TEST_CASE("logistic objective trace is non-increasing") {
  const std::size_t n = 80, d = 4;
  const auto x = random_matrix(n, d, 25);
  std::vector<int> y(n);
  Rng rng = Rng::keyed(99, "regression-test", 26);
  for (auto& v : y) v = rng.below(2) ? 1 : 0;
  const auto coefs = r::fit_logistic(r::DesignMatrix::build(x, n, d), y, 0.01);
  for (std::size_t s = 1; s < coefs.objective_trace.size(); ++s)
    CHECK(coefs.objective_trace[s] <= coefs.objective_trace[s - 1]);
}

TEST_CASE("perfect separation is reported, not hidden") {
  const std::size_t n = 12;
  std::vector<double> x(n);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = i < n / 2 ? -1.0 - 0.1 * static_cast<double>(i) : 1.0 + 0.1 * static_cast<double>(i);
    y[i] = i < n / 2 ? 0 : 1;
  }
  const auto coefs = r::fit_logistic(r::DesignMatrix::build(x, n, 1), y, 0.0,
                                     2000, 1e-12);
  CHECK_FALSE(coefs.converged);
  bool mentions_separation = false;
  for (const auto& w : coefs.warnings)
    if (w.find("separation") != std::string::npos) mentions_separation = true;
  CHECK(mentions_separation);
}

TEST_CASE("prediction basics") {
  r::Coefficients c;
  c.model_kind = r::ModelKind::OLS;
  c.intercept = 42.0;
  c.weights = {0.0, 0.0};
  c.column_means = {1.0, 2.0};
  c.column_stds = {1.0, 1.0};
  const std::vector<double> x = {5.0, 6.0, 7.0, 8.0};
  const auto pred = r::predict(c, x, 2, 2);
  CHECK(pred[0] == 42.0);
  CHECK(pred[1] == 42.0);
  CHECK_THROWS_AS(r::predict(c, x, 1, 4), voxmeta::ValidationError);
}

TEST_CASE("sigmoid is one half on the decision boundary") {
  const std::size_t n = 50;
  std::vector<double> x(n);
  std::vector<int> y(n);
  Rng rng = Rng::keyed(99, "regression-test", 27);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = rng.uniform(-4.0, 4.0);
    y[i] = x[i] + 0.5 * rng.normal() > 0.5 ? 1 : 0;
  }
  const auto coefs = r::fit_logistic(r::DesignMatrix::build(x, n, 1), y, 0.05);
  REQUIRE(coefs.weights[0] != 0.0);
  // Boundary in original units: weight*(x - mean)/std + b = 0.
  const double boundary = coefs.column_means[0] -
                          coefs.intercept * coefs.column_stds[0] / coefs.weights[0];
  const auto p = r::predict_proba(coefs, {boundary}, 1, 1);
  CHECK(std::fabs(p[0] - 0.5) < 1e-9);
}

TEST_CASE("predictions are invariant to column rescaling") {
  const std::size_t n = 50, d = 4;
  auto x = random_matrix(n, d, 28);
  std::vector<double> y(n);
  Rng rng = Rng::keyed(99, "regression-test", 29);
  for (auto& v : y) v = rng.uniform(20.0, 60.0);
  auto x_test = random_matrix(10, d, 30);

  const auto fit_predict = [&](const std::vector<double>& xt,
                               const std::vector<double>& xq) {
    const auto coefs = r::fit_ridge(r::DesignMatrix::build(xt, n, d), y, 1.7);
    return r::predict(coefs, xq, 10, d);
  };
  const auto base = fit_predict(x, x_test);

  auto x_scaled = x;
  auto x_test_scaled = x_test;
  for (std::size_t i = 0; i < n; ++i) x_scaled[i * d + 2] *= 1000.0;
  for (std::size_t i = 0; i < 10; ++i) x_test_scaled[i * d + 2] *= 1000.0;
  const auto scaled = fit_predict(x_scaled, x_test_scaled);
  for (std::size_t i = 0; i < 10; ++i)
    CHECK(std::fabs(base[i] - scaled[i]) < 1e-6);
}

TEST_CASE("zero-variance columns are dropped and restored as zero weights") {
  const std::size_t n = 30;
  auto x = random_matrix(n, 3, 31);
  for (std::size_t i = 0; i < n; ++i) x[i * 3 + 1] = 5.0;  // constant column
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i * 3] - x[i * 3 + 2];
  const auto design = r::DesignMatrix::build(x, n, 3);
  CHECK(design.dropped() == std::vector<std::size_t>{1});
  const auto coefs = r::fit_ols(design, y);
  CHECK(coefs.weights[1] == 0.0);
  CHECK(coefs.column_stds[1] == 0.0);
  const auto pred = r::predict(coefs, x, n, 3);
  for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(pred[i] - y[i]) < 1e-8);
}

TEST_CASE("fits are deterministic") {
  const auto x = random_matrix(40, 5, 32);
  std::vector<double> y(40);
  Rng rng = Rng::keyed(99, "regression-test", 33);
  for (auto& v : y) v = rng.normal();
  const auto design = r::DesignMatrix::build(x, 40, 5);
  const auto a = r::fit_lasso(design, y, 0.3);
  const auto b = r::fit_lasso(design, y, 0.3);
  CHECK(a.weights == b.weights);
  CHECK(a.objective_trace == b.objective_trace);
}

TEST_CASE("non-finite inputs are rejected") {
  std::vector<double> x = {1.0, 2.0, std::nan(""), 4.0};
  CHECK_THROWS_AS(r::DesignMatrix::build(x, 2, 2), voxmeta::NumericError);
  const std::vector<double> ok = {1.0, 2.0, 3.0, 4.5};
  const auto design = r::DesignMatrix::build(ok, 2, 2);
  CHECK_THROWS_AS(r::fit_ols(design, {1.0, std::nan("")}),
                  voxmeta::NumericError);
}
