// bench/kernel_bench.cpp

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

// Times the OpenMP kernels against their serial reference implementations
// and reports the numeric deviation alongside the speedup. Usage:
//   kernel_bench [repeats]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "voxmeta/baselines.hpp"
#include "voxmeta/kernels.hpp"
#include "voxmeta/rng.hpp"

namespace k = voxmeta::kernels;
using voxmeta::Rng;

namespace {

int g_repeats = 5;

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <typename Fn>
double time_best_ms(const Fn& fn) {
  double best = 1e300;
  for (int r = 0; r < g_repeats; ++r) {
    const double t0 = now_ms();
    fn();
    best = std::min(best, now_ms() - t0);
  }
  return best;
}

void report(const char* name, const std::string& size, double serial_ms,
            double parallel_ms, double max_diff) {
  std::printf("%-18s %-14s %10.2f %10.2f %8.2fx   %.3e\n", name, size.c_str(),
              serial_ms, parallel_ms, serial_ms / parallel_ms, max_diff);
}

std::vector<double> random_vec(std::size_t n, std::uint64_t salt) {
  Rng rng = Rng::keyed(1234, "bench", salt);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_repeats = std::max(1, std::atoi(argv[1]));
#ifdef _OPENMP
  const int threads = omp_get_max_threads();
#else
  const int threads = 1;
#endif
  std::printf("kernel benchmark: serial reference vs OpenMP (%d threads), "
              "best of %d runs\n\n",
              threads, g_repeats);
  std::printf("%-18s %-14s %10s %10s %9s   %s\n", "kernel", "size",
              "serial ms", "omp ms", "speedup", "max |diff|");

  {
    const std::size_t n = std::size_t(1) << 23;
    const auto a = random_vec(n, 1);
    const auto b = random_vec(n, 2);
    double serial_out = 0.0, parallel_out = 0.0;
    const double ts = time_best_ms(
        [&] { serial_out = k::serial::dot(a.data(), b.data(), n); });
    const double tp =
        time_best_ms([&] { parallel_out = k::dot(a.data(), b.data(), n); });
    report("dot", "n=8.4M", ts, tp, std::fabs(serial_out - parallel_out));
  }

  {
    const std::size_t rows = 4096, cols = 512;
    const auto x = random_vec(rows * cols, 3);
    const auto v = random_vec(cols, 4);
    std::vector<double> out_s(rows), out_p(rows);
    const double ts = time_best_ms([&] {
      k::serial::matvec_rows(x.data(), rows, cols, v.data(), out_s.data());
    });
    const double tp = time_best_ms(
        [&] { k::matvec_rows(x.data(), rows, cols, v.data(), out_p.data()); });
    double diff = 0.0;
    for (std::size_t i = 0; i < rows; ++i)
      diff = std::max(diff, std::fabs(out_s[i] - out_p[i]));
    report("matvec_rows", "4096x512", ts, tp, diff);
  }

  {
    const std::size_t d = 512, n = 2048;
    const auto xt = random_vec(d * n, 5);
    std::vector<double> g_s(d * d), g_p(d * d);
    const double ts =
        time_best_ms([&] { k::serial::gram(xt.data(), d, n, g_s.data()); });
    const double tp = time_best_ms([&] { k::gram(xt.data(), d, n, g_p.data()); });
    double diff = 0.0;
    for (std::size_t i = 0; i < d * d; ++i)
      diff = std::max(diff, std::fabs(g_s[i] - g_p[i]));
    report("gram", "512x2048", ts, tp, diff);
  }

  {
    const std::size_t d = 512, n = 65536;
    const auto base = random_vec(d * 64, 6);
    const auto coef = random_vec(d, 7);
    std::vector<double> xt_full(d * n);
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t i = 0; i < n; ++i)
        xt_full[j * n + i] = base[j * 64 + (i % 64)];
    std::vector<double> out_s(n), out_p(n);
    const double ts = time_best_ms([&] {
      k::serial::combine_cols(xt_full.data(), d, n, coef.data(), out_s.data());
    });
    const double tp = time_best_ms([&] {
      k::combine_cols(xt_full.data(), d, n, coef.data(), out_p.data());
    });
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      diff = std::max(diff, std::fabs(out_s[i] - out_p[i]));
    report("combine_cols", "512x65536", ts, tp, diff);
  }

  {
    // The Monte Carlo baseline is thread-count invariant by construction, so
    // the serial column here is the same code pinned to one thread.
    Rng rng = Rng::keyed(1234, "bench", 8);
    std::vector<int> ages(4821);
    for (auto& a : ages) a = static_cast<int>(rng.uniform_int(1, 92));
    double mae_1 = 0.0, mae_p = 0.0;
#ifdef _OPENMP
    omp_set_num_threads(1);
#endif
    const double ts = time_best_ms(
        [&] { mae_1 = voxmeta::eval::baseline_empirical(ages, 20000, 7).mae; });
#ifdef _OPENMP
    omp_set_num_threads(threads);
#endif
    const double tp = time_best_ms(
        [&] { mae_p = voxmeta::eval::baseline_empirical(ages, 20000, 7).mae; });
    report("mc_baseline", "4821x20k", ts, tp, std::fabs(mae_1 - mae_p));
  }

  return 0;
}
