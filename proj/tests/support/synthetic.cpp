// tests/support/synthetic.cpp

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

#include "support/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "voxmeta/rng.hpp"

namespace voxmeta::testing {

void write_learnable_embeddings(const std::string& path, const SynthSpec& spec) {
  Rng rng = Rng::keyed(spec.seed, "synthetic-embeddings");
  const std::size_t d = spec.dim;

  // Age direction u and gender direction v, unit length, orthogonalized.
  std::vector<double> u(d), v(d);
  for (std::size_t k = 0; k < d; ++k) u[k] = rng.normal();
  for (std::size_t k = 0; k < d; ++k) v[k] = rng.normal();
  double un = 0.0;
  for (double x : u) un += x * x;
  un = std::sqrt(un);
  for (double& x : u) x /= un;
  double uv = 0.0;
  for (std::size_t k = 0; k < d; ++k) uv += u[k] * v[k];
  for (std::size_t k = 0; k < d; ++k) v[k] -= uv * u[k];
  double vn = 0.0;
  for (double x : v) vn += x * x;
  vn = std::sqrt(vn);
  for (double& x : v) x /= vn;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "speaker_id,utterance_id,age,gender";
  for (std::size_t k = 0; k < d; ++k) out << ",f" << k;
  out << '\n';

  const double age_mid = 0.5 * (spec.age_lo + spec.age_hi);
  char cell[32];
  std::size_t utt_counter = 0;
  for (std::size_t s = 0; s < spec.n_speakers; ++s) {
    char speaker[32];
    std::snprintf(speaker, sizeof(speaker), "synth%05zu", s);
    const int age = static_cast<int>(rng.uniform_int(spec.age_lo, spec.age_hi));
    const bool male = s % 2 == 0;
    const std::size_t utts =
        spec.utt_min +
        static_cast<std::size_t>(rng.below(spec.utt_max - spec.utt_min + 1));
    for (std::size_t t = 0; t < utts; ++t) {
      out << speaker << ",utt" << utt_counter++ << ',' << age << ','
          << (male ? 'm' : 'f');
      const double age_coord = static_cast<double>(age) - age_mid;
      const double gender_coord = male ? spec.margin : -spec.margin;
      for (std::size_t k = 0; k < d; ++k) {
        const double value = age_coord * u[k] + gender_coord * v[k] +
                             spec.noise * rng.normal();
        std::snprintf(cell, sizeof(cell), "%.4f", value);
        out << ',' << cell;
      }
      out << '\n';
    }
  }
  if (!out.flush()) throw std::runtime_error("failed writing " + path);
}

}  // namespace voxmeta::testing
