// src/baselines.cpp

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

#include "voxmeta/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "json.hpp"
#include "voxmeta/common.hpp"
#include "voxmeta/kernels.hpp"
#include "voxmeta/rng.hpp"

namespace voxmeta::eval {

const char* to_token(BaselineKind k) {
  switch (k) {
    case BaselineKind::EmpiricalResample: return "empirical";
    case BaselineKind::UniformGuess: return "uniform";
    case BaselineKind::FixedValue: return "fixed";
  }
  return "?";
}

BaselineKind baseline_kind_from_token(const std::string& token) {
  if (token == "empirical") return BaselineKind::EmpiricalResample;
  if (token == "uniform") return BaselineKind::UniformGuess;
  if (token == "fixed") return BaselineKind::FixedValue;
  throw ValidationError("unknown baseline kind: " + token);
}

namespace {

// Mean over repetitions of the per-repetition MAE. `draw` produces one
// prediction given the repetition's substream. Each repetition owns a
// substream keyed by its index, so the result is thread-count independent.
template <typename DrawFn>
double mc_mean_mae(const std::vector<int>& ages, std::uint64_t repetitions,
                   std::uint64_t seed, std::string_view stream,
                   const DrawFn& draw) {
  const std::size_t n = ages.size();
  std::vector<double> rep_mae(repetitions);
  const std::int64_t reps = static_cast<std::int64_t>(repetitions);
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < reps; ++r) {
    Rng rng = Rng::keyed(seed, stream, static_cast<std::uint64_t>(r));
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      total += std::abs(ages[i] - draw(rng));
    rep_mae[static_cast<std::size_t>(r)] = total / static_cast<double>(n);
  }
  return kernels::sum(rep_mae.data(), repetitions) /
         static_cast<double>(repetitions);
}

void require_ages(const std::vector<int>& ages, const char* who) {
  if (ages.empty())
    throw ValidationError(std::string(who) + ": empty test ages");
}

void require_reps(std::uint64_t repetitions, const char* who) {
  if (repetitions == 0)
    throw ValidationError(std::string(who) + ": repetitions must be >= 1");
}

}  // namespace

BaselineResult baseline_empirical(const std::vector<int>& test_ages,
                                  std::uint64_t repetitions,
                                  std::uint64_t seed) {
  require_ages(test_ages, "baseline_empirical");
  require_reps(repetitions, "baseline_empirical");
  BaselineResult out;
  out.kind = BaselineKind::EmpiricalResample;
  out.repetitions = repetitions;
  out.seed = seed;
  const std::size_t n = test_ages.size();
  out.mae = mc_mean_mae(test_ages, repetitions, seed, "baseline-empirical",
                        [&](Rng& rng) {
                          return test_ages[static_cast<std::size_t>(
                              rng.below(n))];
                        });
  return out;
}

BaselineResult baseline_uniform(const std::vector<int>& test_ages,
                                std::uint64_t repetitions, std::uint64_t seed) {
  require_ages(test_ages, "baseline_uniform");
  require_reps(repetitions, "baseline_uniform");
  BaselineResult out;
  out.kind = BaselineKind::UniformGuess;
  out.repetitions = repetitions;
  out.seed = seed;
  const auto [lo_it, hi_it] =
      std::minmax_element(test_ages.begin(), test_ages.end());
  const int lo = *lo_it, hi = *hi_it;
  out.mae = mc_mean_mae(test_ages, repetitions, seed, "baseline-uniform",
                        [&](Rng& rng) {
                          return static_cast<int>(rng.uniform_int(lo, hi));
                        });
  return out;
}

BaselineResult baseline_fixed(const std::vector<int>& test_ages) {
  require_ages(test_ages, "baseline_fixed");
  const auto [lo_it, hi_it] =
      std::minmax_element(test_ages.begin(), test_ages.end());
  const int lo = *lo_it, hi = *hi_it;
  BaselineResult out;
  out.kind = BaselineKind::FixedValue;
  double best = -1.0;
  int best_age = lo;
  for (int c = lo; c <= hi; ++c) {
    double total = 0.0;
    for (int a : test_ages) total += std::abs(a - c);
    const double candidate = total / static_cast<double>(test_ages.size());
    if (best < 0.0 || candidate < best) {  // strict: ties keep the smaller age
      best = candidate;
      best_age = c;
    }
  }
  out.mae = best;
  out.fixed_value = best_age;
  return out;
}

std::string baseline_to_json(const BaselineResult& r) {
  nlohmann::ordered_json j;
  j["kind"] = to_token(r.kind);
  j["mae"] = r.mae;
  if (r.fixed_value.has_value()) j["fixed_value"] = *r.fixed_value;
  j["repetitions"] = r.repetitions;
  j["seed"] = r.seed;
  return j.dump();
}

}  // namespace voxmeta::eval
