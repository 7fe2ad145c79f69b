// include/voxmeta/kernels.hpp

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

#ifndef VOXMETA_KERNELS_HPP
#define VOXMETA_KERNELS_HPP

#include <cstddef>

namespace voxmeta::kernels {

// Dense kernels used by the solvers and the Monte Carlo baselines.
//
// Every parallel kernel is bitwise deterministic for any thread count:
// reductions are blocked into fixed-size chunks whose partial sums are
// combined in chunk order, and element-parallel kernels compute each output
// element with a serial inner loop. The serial:: namespace keeps plain
// reference implementations for the tests and the benchmark.

// Fixed reduction block; independent of the number of threads.
inline constexpr std::size_t kChunk = 4096;

namespace serial {

double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double sum_abs_diff(const double* a, const double* b, std::size_t n);

// out[i] = row_i(x) . v for row-major x (n_rows x n_cols).
void matvec_rows(const double* x, std::size_t n_rows, std::size_t n_cols,
                 const double* v, double* out);

// xt is feature-major (d x n): row j holds column j of the design matrix.
// out[j] = col_j . v.
void matvec_cols(const double* xt, std::size_t d, std::size_t n,
                 const double* v, double* out);

// out[i] = sum_j coef[j] * col_j[i]  (out has length n).
void combine_cols(const double* xt, std::size_t d, std::size_t n,
                  const double* coef, double* out);

// a = X^T X for feature-major xt (d x n); a is d x d row-major, symmetric.
void gram(const double* xt, std::size_t d, std::size_t n, double* a);

void axpy(double alpha, const double* x, double* y, std::size_t n);

}  // namespace serial

// Parallel variants. matvec_rows/matvec_cols/combine_cols/gram/axpy produce
// bitwise-identical results to their serial counterparts; dot/sum/
// sum_abs_diff use chunked summation and agree with serial up to rounding.
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double sum_abs_diff(const double* a, const double* b, std::size_t n);
void matvec_rows(const double* x, std::size_t n_rows, std::size_t n_cols,
                 const double* v, double* out);
void matvec_cols(const double* xt, std::size_t d, std::size_t n,
                 const double* v, double* out);
void combine_cols(const double* xt, std::size_t d, std::size_t n,
                  const double* coef, double* out);
void gram(const double* xt, std::size_t d, std::size_t n, double* a);
void axpy(double alpha, const double* x, double* y, std::size_t n);

}  // namespace voxmeta::kernels

#endif  // VOXMETA_KERNELS_HPP
