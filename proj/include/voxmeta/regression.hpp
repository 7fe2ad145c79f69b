// include/voxmeta/regression.hpp

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

#ifndef VOXMETA_REGRESSION_HPP
#define VOXMETA_REGRESSION_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace voxmeta::regression {

enum class ModelKind { OLS, Ridge, Lasso, Logistic };

const char* to_token(ModelKind k);
ModelKind model_kind_from_token(const std::string& token);

// Design matrix in feature-major layout, standardized column-wise to zero
// mean and unit (population) variance. Zero-variance columns are removed
// before fitting and reported; they come back as zero weights at prediction.
class DesignMatrix {
 public:
  // rows is row-major n x d. Throws NumericError on NaN/Inf, ValidationError
  // on empty input.
  static DesignMatrix build(const std::vector<double>& rows, std::size_t n,
                            std::size_t d);

  // No standardization (means 0, stds 1, all columns active). Used where raw
  // geometry matters, e.g. the gradient checks.
  static DesignMatrix build_raw(const std::vector<double>& rows, std::size_t n,
                                std::size_t d);

  std::size_t n_rows() const { return n_; }
  std::size_t n_cols() const { return d_; }
  std::size_t n_active() const { return active_.size(); }
  const std::vector<std::size_t>& active() const { return active_; }
  const std::vector<std::size_t>& dropped() const { return dropped_; }
  const std::vector<double>& means() const { return means_; }
  // Per original column; exactly 0.0 for dropped columns.
  const std::vector<double>& stds() const { return stds_; }
  // Feature-major: row j holds standardized column active()[j], length n.
  const double* col(std::size_t j) const { return cols_.data() + j * n_; }
  const double* cols_data() const { return cols_.data(); }

 private:
  std::size_t n_ = 0, d_ = 0;
  std::vector<double> cols_;
  std::vector<std::size_t> active_, dropped_;
  std::vector<double> means_, stds_;
};

// Fitted model. Weights live in standardized space; predict() applies the
// stored column statistics, so predictions are invariant to affine rescaling
// of any input column.
struct Coefficients {
  ModelKind model_kind = ModelKind::OLS;
  double lambda = 0.0;
  double intercept = 0.0;
  std::vector<double> weights;       // length d, zeros for dropped columns
  std::vector<double> column_means;  // length d
  std::vector<double> column_stds;   // length d, 0.0 for dropped columns
  bool converged = true;
  std::vector<double> objective_trace;
  std::vector<std::string> warnings;
};

// Ordinary least squares via the normal equations; rank-deficient systems
// fall back to the minimum-norm solution (recorded as a warning).
Coefficients fit_ols(const DesignMatrix& x, const std::vector<double>& y);

// min (Y - Yhat)^2 + lambda * sum(beta^2); closed-form solve of
// (X^T X + lambda I) beta = X^T y on standardized features.
Coefficients fit_ridge(const DesignMatrix& x, const std::vector<double>& y,
                       double lambda);

// min (Y - Yhat)^2 + lambda * sum(|beta|) by cyclic coordinate descent with
// soft-thresholding. objective_trace holds the penalized objective per sweep.
Coefficients fit_lasso(const DesignMatrix& x, const std::vector<double>& y,
                       double lambda, double tol = 1e-6,
                       std::size_t max_sweeps = 1000);

// Smallest lambda for which the lasso solution is identically zero
// (2 * max_j |x_j^T y_centered| under this objective convention).
double lasso_lambda_max(const DesignMatrix& x, const std::vector<double>& y);

// Penalized negative log-likelihood minimized by gradient descent with
// Armijo backtracking; the recorded trace is non-increasing. With lambda = 0
// and separable classes the weights diverge; this is reported via
// converged = false plus a warning, not an exception.
Coefficients fit_logistic(const DesignMatrix& x, const std::vector<int>& y,
                          double lambda = 0.0, std::size_t max_iters = 500,
                          double grad_tol = 1e-5);

// Objective/gradient pair used by fit_logistic, exposed so tests can check
// the analytic gradient against finite differences on the exact code path.
// w has x.n_active() entries; grad has n_active()+1 (intercept last).
double logistic_objective(const DesignMatrix& x, const std::vector<int>& y,
                          const std::vector<double>& w, double intercept,
                          double lambda);
void logistic_gradient(const DesignMatrix& x, const std::vector<int>& y,
                       const std::vector<double>& w, double intercept,
                       double lambda, std::vector<double>& grad);

// Raw affine outputs; no rounding, no clipping.
std::vector<double> predict(const Coefficients& coefs,
                            const std::vector<double>& rows, std::size_t n,
                            std::size_t d);

// Sigmoid probabilities for a logistic model.
std::vector<double> predict_proba(const Coefficients& coefs,
                                  const std::vector<double>& rows,
                                  std::size_t n, std::size_t d);

// 1 where predicted probability >= threshold.
std::vector<int> classify(const Coefficients& coefs,
                          const std::vector<double>& rows, std::size_t n,
                          std::size_t d, double threshold = 0.5);

// Model file round trip: JSON {model_kind, lambda, intercept, weights,
// column_means, column_stds, converged, seed_context}.
void save_model(const std::string& path, const Coefficients& coefs,
                std::uint64_t seed, const std::string& stream,
                bool force = false);
Coefficients load_model(const std::string& path);

// CV grid for lambda selection: 17 log-spaced points in [1e-4, 1e4].
std::vector<double> default_lambda_grid();

}  // namespace voxmeta::regression

#endif  // VOXMETA_REGRESSION_HPP
