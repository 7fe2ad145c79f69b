// include/voxmeta/baselines.hpp

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

#ifndef VOXMETA_BASELINES_HPP
#define VOXMETA_BASELINES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace voxmeta::eval {

// Guessing references the model scores are compared against. All three are
// deterministic given (ages, repetitions, seed); the Monte Carlo loops run
// one seeded substream per repetition, so results do not depend on thread
// count.
enum class BaselineKind { EmpiricalResample, UniformGuess, FixedValue };

const char* to_token(BaselineKind k);
BaselineKind baseline_kind_from_token(const std::string& token);

struct BaselineResult {
  BaselineKind kind = BaselineKind::FixedValue;
  double mae = 0.0;
  std::optional<int> fixed_value;
  std::uint64_t repetitions = 0;
  std::uint64_t seed = 0;
};

// Predictions drawn with replacement from the empirical distribution of the
// test ages; mean MAE across repetitions.
BaselineResult baseline_empirical(const std::vector<int>& test_ages,
                                  std::uint64_t repetitions = 100000,
                                  std::uint64_t seed = 0);

// Predictions drawn uniformly over the integers [min age, max age].
BaselineResult baseline_uniform(const std::vector<int>& test_ages,
                                std::uint64_t repetitions = 100000,
                                std::uint64_t seed = 0);

// Deterministic constant predictor: exhaustive integer grid over
// [min age, max age], ties broken toward the smaller age.
BaselineResult baseline_fixed(const std::vector<int>& test_ages);

std::string baseline_to_json(const BaselineResult& r);

}  // namespace voxmeta::eval

#endif  // VOXMETA_BASELINES_HPP
