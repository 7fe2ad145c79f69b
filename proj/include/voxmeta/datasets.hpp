// include/voxmeta/datasets.hpp

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

#ifndef VOXMETA_DATASETS_HPP
#define VOXMETA_DATASETS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "voxmeta/types.hpp"

namespace voxmeta::datasets {

// Speaker-disjoint partition. Splits operate on speakers, never utterances;
// TitleOnly-tier speakers may be pinned to the train side and never test.
struct Split {
  std::uint64_t seed = 0;
  double ratio = 0.6;
  int k = 5;
  std::vector<std::string> train;           // sorted
  std::vector<std::string> test;            // sorted
  std::map<std::string, int> folds;         // train speakers -> fold in [0,k)
};

// |train| = round(ratio * N) of the given speakers by seeded shuffle.
// Throws ValidationError when fewer than two speakers or ratio outside (0,1).
Split holdout_split(const std::vector<std::string>& speakers, double ratio,
                    std::uint64_t seed);

// Speaker-level fold assignment; fold sizes differ by at most one.
std::map<std::string, int> make_cv_folds(const std::vector<std::string>& speakers,
                                         int k, std::uint64_t seed);

// Holdout over `eligible` plus fold assignment over the full train side;
// `train_only` speakers (TitleOnly tier) are appended to train and never
// appear in test.
Split make_split(const std::vector<std::string>& eligible,
                 const std::vector<std::string>& train_only, double ratio,
                 int k, std::uint64_t seed);

// Returns indices into `records` keeping all utterances of the retained
// speakers: equal male/female speaker counts, majority class downsampled by
// seeded choice. Records with non-binary or missing gender are a
// ValidationError, as is a single-class input.
std::vector<std::size_t> balance_gender(const std::vector<EmbeddingRecord>& records,
                                        std::uint64_t seed);

struct EqualizeResult {
  std::vector<std::size_t> kept;            // indices into records
  std::vector<std::string> dropped_speakers;  // fewer than n utterances
};

// Exactly n utterances per retained speaker (seeded sample without
// replacement); speakers with fewer are dropped and reported.
EqualizeResult equalize_utterances(const std::vector<EmbeddingRecord>& records,
                                   std::size_t n_per_speaker,
                                   std::uint64_t seed);

// Split manifest round trip:
// JSON {seed, ratio, k, train:[...], test:[...], folds:{speaker: fold}}.
void write_split_json(const std::string& path, const Split& split,
                      bool force = false);
Split read_split_json(const std::string& path);

}  // namespace voxmeta::datasets

#endif  // VOXMETA_DATASETS_HPP
