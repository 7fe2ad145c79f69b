// src/kernels.cpp

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

#include "voxmeta/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace voxmeta::kernels {

namespace serial {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

double sum_abs_diff(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(a[i] - b[i]);
  return acc;
}

void matvec_rows(const double* x, std::size_t n_rows, std::size_t n_cols,
                 const double* v, double* out) {
  for (std::size_t i = 0; i < n_rows; ++i)
    out[i] = dot(x + i * n_cols, v, n_cols);
}

void matvec_cols(const double* xt, std::size_t d, std::size_t n,
                 const double* v, double* out) {
  for (std::size_t j = 0; j < d; ++j) out[j] = dot(xt + j * n, v, n);
}

void combine_cols(const double* xt, std::size_t d, std::size_t n,
                  const double* coef, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double c = coef[j];
    if (c == 0.0) continue;
    const double* col = xt + j * n;
    for (std::size_t i = 0; i < n; ++i) out[i] += c * col[i];
  }
}

void gram(const double* xt, std::size_t d, std::size_t n, double* a) {
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = j; k < d; ++k) {
      const double v = dot(xt + j * n, xt + k * n, n);
      a[j * d + k] = v;
      a[k * d + j] = v;
    }
  }
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace serial

namespace {

// Entering the OpenMP runtime costs more than this much work (the if()
// clause on a pragma still pays the runtime call), so small inputs dispatch
// straight to the serial loop. Thresholding never changes any arithmetic.
constexpr std::size_t kParallelCutoff = 16384;

// Chunked reduction: per-chunk partials in a fixed layout, combined in chunk
// order. The result does not depend on how chunks are scheduled to threads.
template <typename ChunkFn>
double chunked_reduce(std::size_t n, const ChunkFn& fn) {
  if (n == 0) return 0.0;
  const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
  if (n_chunks == 1) return fn(0, n);
  std::vector<double> partial(n_chunks);
  const std::int64_t nc = static_cast<std::int64_t>(n_chunks);
  if (n < kParallelCutoff) {
    for (std::int64_t c = 0; c < nc; ++c) {
      const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
      const std::size_t end = begin + kChunk < n ? begin + kChunk : n;
      partial[static_cast<std::size_t>(c)] = fn(begin, end);
    }
  } else {
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < nc; ++c) {
      const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
      const std::size_t end = begin + kChunk < n ? begin + kChunk : n;
      partial[static_cast<std::size_t>(c)] = fn(begin, end);
    }
  }
  double acc = 0.0;
  for (double p : partial) acc += p;
  return acc;
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  return chunked_reduce(n, [&](std::size_t lo, std::size_t hi) {
    return serial::dot(a + lo, b + lo, hi - lo);
  });
}

double sum(const double* a, std::size_t n) {
  return chunked_reduce(n, [&](std::size_t lo, std::size_t hi) {
    return serial::sum(a + lo, hi - lo);
  });
}

double sum_abs_diff(const double* a, const double* b, std::size_t n) {
  return chunked_reduce(n, [&](std::size_t lo, std::size_t hi) {
    return serial::sum_abs_diff(a + lo, b + lo, hi - lo);
  });
}

void matvec_rows(const double* x, std::size_t n_rows, std::size_t n_cols,
                 const double* v, double* out) {
  if (n_rows * n_cols < kParallelCutoff)
    return serial::matvec_rows(x, n_rows, n_cols, v, out);
  const std::int64_t n = static_cast<std::int64_t>(n_rows);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    out[i] = serial::dot(x + static_cast<std::size_t>(i) * n_cols, v, n_cols);
}

void matvec_cols(const double* xt, std::size_t d, std::size_t n,
                 const double* v, double* out) {
  if (d * n < kParallelCutoff) return serial::matvec_cols(xt, d, n, v, out);
  const std::int64_t dd = static_cast<std::int64_t>(d);
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < dd; ++j)
    out[j] = serial::dot(xt + static_cast<std::size_t>(j) * n, v, n);
}

void combine_cols(const double* xt, std::size_t d, std::size_t n,
                  const double* coef, double* out) {
  // Parallel over output ranges; each out[i] accumulates columns in j order,
  // matching the serial result bit for bit.
  if (d * n < kParallelCutoff) return serial::combine_cols(xt, d, n, coef, out);
  const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
  const std::int64_t nc = static_cast<std::int64_t>(n_chunks);
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < nc; ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
    const std::size_t hi = lo + kChunk < n ? lo + kChunk : n;
    for (std::size_t i = lo; i < hi; ++i) out[i] = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double cf = coef[j];
      if (cf == 0.0) continue;
      const double* col = xt + j * n;
      for (std::size_t i = lo; i < hi; ++i) out[i] += cf * col[i];
    }
  }
}

void gram(const double* xt, std::size_t d, std::size_t n, double* a) {
  // Parallel over upper-triangle entries; each entry is one serial dot.
  if (d * d * n < kParallelCutoff) return serial::gram(xt, d, n, a);
  const std::int64_t n_pairs = static_cast<std::int64_t>(d * (d + 1) / 2);
#pragma omp parallel for schedule(static)
  for (std::int64_t p = 0; p < n_pairs; ++p) {
    // Row j of the upper triangle starts at offset j*d - j*(j-1)/2.
    std::size_t j = 0;
    std::size_t rem = static_cast<std::size_t>(p);
    while (rem >= d - j) {
      rem -= d - j;
      ++j;
    }
    const std::size_t k = j + rem;
    const double v = serial::dot(xt + j * n, xt + k * n, n);
    a[j * d + k] = v;
    a[k * d + j] = v;
  }
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  if (n < kParallelCutoff) return serial::axpy(alpha, x, y, n);
  const std::int64_t nn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < nn; ++i) y[i] += alpha * x[i];
}

}  // namespace voxmeta::kernels
