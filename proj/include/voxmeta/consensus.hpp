// include/voxmeta/consensus.hpp

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

#ifndef VOXMETA_CONSENSUS_HPP
#define VOXMETA_CONSENSUS_HPP

#include <optional>
#include <string>
#include <vector>

#include "voxmeta/types.hpp"

namespace voxmeta::consensus {

// An attribute is accepted only when all three sources reported it and every
// value agrees. Rejection reasons:
//   missing_source  - fewer than the three distinct sources have a record
//   unknown_value   - all three present, but one reported no usable value
//   disagreement    - all three reported values, not all equal
//   ambiguous_name  - one source holds non-identical duplicate records for
//                     the key (homonym); the key is excluded entirely
inline constexpr const char* kMissingSource = "missing_source";
inline constexpr const char* kUnknownValue = "unknown_value";
inline constexpr const char* kDisagreement = "disagreement";
inline constexpr const char* kAmbiguousName = "ambiguous_name";

template <typename T>
struct Outcome {
  std::optional<T> value;
  std::string reason;  // empty iff value present
  bool accepted() const { return value.has_value(); }
};

// All records must share one person_key (ValidationError otherwise).
Outcome<Gender> gender_consensus(const std::vector<SourceRecord>& records);
Outcome<int> birth_year_consensus(const std::vector<SourceRecord>& records);

// Joins the roster with the grouped source records; one PersonConsensus per
// roster entry, sorted by speaker_id.
std::vector<PersonConsensus> build_consensus(
    const std::vector<OriginalLabel>& roster,
    const std::vector<SourceRecord>& records);

struct Relabeled {
  std::string speaker_id;
  Gender original = Gender::Unknown;
  Gender consensus = Gender::Unknown;
  std::string category;  // m_to_f | f_to_m | trans_vs_binary
};

struct DivergenceReport {
  std::uint64_t agreed_count = 0;
  std::vector<Relabeled> relabeled;  // sorted by speaker_id
  std::uint64_t m_to_f = 0, f_to_m = 0, trans_vs_binary = 0;
  // Consensus gender exists but the original corpus has no label; listed
  // separately, never counted as divergence.
  std::vector<std::string> consensus_only;
};

DivergenceReport compare_with_original(
    const std::vector<PersonConsensus>& consensus,
    const std::vector<OriginalLabel>& originals);

// CSV `speaker_id,person_key,gender,birth_year,status,reason` where status is
// ok | gender_only | birth_year_only | rejected and reason lists the failing
// attributes as `gender=<why>;birth_year=<why>`.
void write_consensus_csv(const std::string& path,
                         const std::vector<PersonConsensus>& consensus,
                         bool force = false);

// Reads back a CSV produced by write_consensus_csv.
std::vector<PersonConsensus> read_consensus_csv(const std::string& path);

// CSV `speaker_id,original_gender,consensus_gender,category`.
void write_divergence_csv(const std::string& path, const DivergenceReport& rep,
                          bool force = false);

std::string format_divergence_text(const DivergenceReport& rep);

}  // namespace voxmeta::consensus

#endif  // VOXMETA_CONSENSUS_HPP
