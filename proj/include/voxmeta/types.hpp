// include/voxmeta/types.hpp

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

#ifndef VOXMETA_TYPES_HPP
#define VOXMETA_TYPES_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace voxmeta {

enum class Gender { Male, Female, TransFemale, Unknown };

enum class SourceId { GKG, DBPedia, Wikidata };

inline const char* to_token(SourceId s) {
  switch (s) {
    case SourceId::GKG: return "gkg";
    case SourceId::DBPedia: return "dbpedia";
    case SourceId::Wikidata: return "wikidata";
  }
  return "?";
}

inline const char* to_token(Gender g) {
  switch (g) {
    case Gender::Male: return "male";
    case Gender::Female: return "female";
    case Gender::TransFemale: return "transgender_female";
    case Gender::Unknown: return "unknown";
  }
  return "?";
}

// Calendar date; month/day may be 0 when the source gave only a year.
struct Date {
  int year = 0;
  int month = 0;
  int day = 0;
};

// One knowledge source's claim about a person.
struct SourceRecord {
  std::string person_key;  // normalized name, see text::normalize_person_key
  SourceId source_id = SourceId::GKG;
  Gender gender = Gender::Unknown;
  std::optional<Date> birth_date;
};

// One video's identifiers and free text.
struct VideoMeta {
  std::string youtube_id;
  std::string title;
  std::string description;
  Date upload_date;
  std::vector<std::string> speaker_ids;
};

// Original corpus metadata row: the binary gender label plus the person key
// derived from the speaker's name (the roster that links corpus ids to the
// knowledge-source records).
struct OriginalLabel {
  std::string speaker_id;
  std::string person_key;
  Gender gender = Gender::Unknown;
};

// Fixed-dimension feature vector with optional task labels.
struct EmbeddingRecord {
  std::string speaker_id;
  std::string utterance_id;
  std::vector<double> vector;
  std::optional<int> age;
  std::optional<Gender> gender;
};

// Provenance grade of a derived age. TitleOnly rows may train but never test.
enum class ReliabilityTier { Strict, TitleOnly, None };

inline const char* to_token(ReliabilityTier t) {
  switch (t) {
    case ReliabilityTier::Strict: return "strict";
    case ReliabilityTier::TitleOnly: return "title_only";
    case ReliabilityTier::None: return "none";
  }
  return "?";
}

// The released record: one age assignment for one speaker in one video.
struct AgeTriplet {
  std::string youtube_id;
  std::string speaker_id;
  int age = 0;  // in [1, 110]
  ReliabilityTier tier = ReliabilityTier::Strict;
};

// Post-deduplication: exactly one age per speaker in any emitted dataset.
struct SpeakerAgePair {
  std::string speaker_id;
  int age = 0;
  std::string source_youtube_id;
  ReliabilityTier tier = ReliabilityTier::Strict;
};

// Cross-source consensus for one person. An attribute is set only when all
// three sources reported it and agreed; the *_reason fields carry the
// rejection reason otherwise (missing_source, disagreement, unknown_value,
// ambiguous_name).
struct PersonConsensus {
  std::string speaker_id;
  std::string person_key;
  std::optional<Gender> gender;
  std::optional<int> birth_year;
  std::set<SourceId> sources_seen;
  std::string gender_reason;
  std::string birth_year_reason;
};

}  // namespace voxmeta

#endif  // VOXMETA_TYPES_HPP
