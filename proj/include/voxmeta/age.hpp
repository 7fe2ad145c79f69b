// include/voxmeta/age.hpp

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

#ifndef VOXMETA_AGE_HPP
#define VOXMETA_AGE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "voxmeta/types.hpp"

namespace voxmeta::age {

// Plausible age bounds; ages outside are chronology errors, not data.
inline constexpr int kMinAge = 1;
inline constexpr int kMaxAge = 110;

struct YearConfirmation {
  std::optional<int> recording_year;
  ReliabilityTier tier = ReliabilityTier::None;
};

// Searches title and description for the upload-year token: both fields ->
// Strict, title only -> TitleOnly, anything else (including description
// only) -> None. Total function.
YearConfirmation confirm_recording_year(const VideoMeta& video);

struct AgeOutcome {
  std::optional<int> age;
  std::string error;  // implausible_chronology | implausible_age
};

// age = recording_year - birth_year, accepted iff in [kMinAge, kMaxAge].
AgeOutcome derive_age(int birth_year, int recording_year);

// Why each (video, speaker) candidate did or did not become a triplet.
struct ProvenanceSummary {
  std::uint64_t videos_total = 0;
  std::uint64_t videos_strict = 0;
  std::uint64_t videos_title_only = 0;
  std::uint64_t videos_unconfirmed = 0;
  std::uint64_t candidates = 0;
  std::uint64_t no_birth_year = 0;
  std::uint64_t implausible_chronology = 0;
  std::uint64_t implausible_age = 0;
  std::uint64_t duplicates_collapsed = 0;
  std::uint64_t triplets = 0;
};

struct TripletBuild {
  std::vector<AgeTriplet> triplets;  // sorted by (speaker_id, youtube_id)
  ProvenanceSummary summary;
};

// One triplet per (video, speaker) with a confirmed year and a valid age.
// Duplicate (youtube_id, speaker_id) pairs with equal age collapse silently;
// an unequal age for the same pair is an internal-consistency failure
// (NumericError).
TripletBuild build_triplets(const std::vector<PersonConsensus>& consensus,
                            const std::vector<VideoMeta>& videos);

// Uniform choice over the speaker's distinct triplets, keyed by
// (seed, speaker_id): stable under reordering and across runs.
SpeakerAgePair select_single_age(const std::vector<AgeTriplet>& speaker_triplets,
                                 std::uint64_t seed);

// One pair per speaker present in `triplets`, sorted by speaker_id.
std::vector<SpeakerAgePair> select_all_single_ages(
    const std::vector<AgeTriplet>& triplets, std::uint64_t seed);

struct Histogram {
  std::vector<int> edges;            // left-open right-closed bins
  std::vector<std::uint64_t> counts; // edges.size() - 1 entries
};

std::vector<int> default_bin_edges();  // 0,10,...,80,92

// Throws NumericError when an age falls outside (edges.front(), edges.back()].
Histogram age_histogram(const std::vector<SpeakerAgePair>& pairs,
                        const std::vector<int>& edges = default_bin_edges());

// Released metadata: CSV `youtube_id,voxceleb_id,age,tier`, LF endings,
// sorted by (speaker_id, youtube_id).
void write_triplets_csv(const std::string& path,
                        const std::vector<AgeTriplet>& triplets,
                        bool force = false);

// CSV `speaker_id,age,youtube_id,tier`, sorted by speaker_id.
void write_pairs_csv(const std::string& path,
                     const std::vector<SpeakerAgePair>& pairs,
                     bool force = false);

void write_histogram_csv(const std::string& path, const Histogram& hist,
                         bool force = false);
std::string format_histogram_text(const Histogram& hist);

// Reads pairs written by write_pairs_csv.
std::vector<SpeakerAgePair> read_pairs_csv(const std::string& path);

}  // namespace voxmeta::age

#endif  // VOXMETA_AGE_HPP
