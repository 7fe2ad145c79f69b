// tests/support/synthetic.hpp

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

#ifndef VOXMETA_TESTS_SYNTHETIC_HPP
#define VOXMETA_TESTS_SYNTHETIC_HPP

#include <cstdint>
#include <string>

namespace voxmeta::testing {

// Learnable embedding corpus: age is a linear function of the features plus
// noise, gender is linearly separable with a margin. Written in the
// embeddings CSV format with inline age/gender labels.
struct SynthSpec {
  std::size_t n_speakers = 400;
  std::size_t utt_min = 3;
  std::size_t utt_max = 5;
  std::size_t dim = 512;
  int age_lo = 18;
  int age_hi = 75;
  double margin = 2.0;     // gender offset along its own direction
  double noise = 0.3;      // per-dimension Gaussian noise
  std::uint64_t seed = 1;
};

// Writes the CSV to `path`; deterministic per spec.seed.
void write_learnable_embeddings(const std::string& path, const SynthSpec& spec);

}  // namespace voxmeta::testing

#endif  // VOXMETA_TESTS_SYNTHETIC_HPP
