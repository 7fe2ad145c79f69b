// tests/unit/test_consensus.cpp

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

#include <algorithm>

#include "doctest.h"
#include "voxmeta/consensus.hpp"

using namespace voxmeta;
using namespace voxmeta::consensus;

namespace {

SourceRecord rec(SourceId source, Gender gender,
                 std::optional<int> birth_year = std::nullopt,
                 const std::string& key = "test person") {
  SourceRecord r;
  r.person_key = key;
  r.source_id = source;
  r.gender = gender;
  if (birth_year) r.birth_date = Date{*birth_year, 0, 0};
  return r;
}

}  // namespace

TEST_CASE("gender consensus rules") {
  SUBCASE("unanimous male") {
    const auto out = gender_consensus({rec(SourceId::GKG, Gender::Male),
                                       rec(SourceId::DBPedia, Gender::Male),
                                       rec(SourceId::Wikidata, Gender::Male)});
    REQUIRE(out.accepted());
    CHECK(*out.value == Gender::Male);
  }
  SUBCASE("disagreement") {
    const auto out = gender_consensus({rec(SourceId::GKG, Gender::Male),
                                       rec(SourceId::DBPedia, Gender::Female),
                                       rec(SourceId::Wikidata, Gender::Male)});
    CHECK_FALSE(out.accepted());
    CHECK(out.reason == kDisagreement);
  }
  SUBCASE("unanimous transgender female is preserved") {
    const auto out =
        gender_consensus({rec(SourceId::GKG, Gender::TransFemale),
                          rec(SourceId::DBPedia, Gender::TransFemale),
                          rec(SourceId::Wikidata, Gender::TransFemale)});
    REQUIRE(out.accepted());
    CHECK(*out.value == Gender::TransFemale);
  }
  SUBCASE("two sources are not enough") {
    const auto out = gender_consensus({rec(SourceId::GKG, Gender::Male),
                                       rec(SourceId::DBPedia, Gender::Male)});
    CHECK(out.reason == kMissingSource);
  }
  SUBCASE("unknown value blocks acceptance") {
    const auto out = gender_consensus({rec(SourceId::GKG, Gender::Male),
                                       rec(SourceId::DBPedia, Gender::Unknown),
                                       rec(SourceId::Wikidata, Gender::Male)});
    CHECK(out.reason == kUnknownValue);
  }
  SUBCASE("no records at all") {
    CHECK(gender_consensus({}).reason == kMissingSource);
  }
  SUBCASE("conflicting duplicates within one source are ambiguous") {
    const auto out = gender_consensus({rec(SourceId::GKG, Gender::Male, 1765),
                                       rec(SourceId::GKG, Gender::Male, 1978),
                                       rec(SourceId::DBPedia, Gender::Male),
                                       rec(SourceId::Wikidata, Gender::Male)});
    CHECK(out.reason == kAmbiguousName);
  }
  SUBCASE("identical duplicates collapse silently") {
    const auto out = gender_consensus({rec(SourceId::GKG, Gender::Male, 1978),
                                       rec(SourceId::GKG, Gender::Male, 1978),
                                       rec(SourceId::DBPedia, Gender::Male),
                                       rec(SourceId::Wikidata, Gender::Male)});
    REQUIRE(out.accepted());
  }
}

TEST_CASE("birth year consensus rules") {
  SUBCASE("unanimous year") {
    const auto out =
        birth_year_consensus({rec(SourceId::GKG, Gender::Male, 1978),
                              rec(SourceId::DBPedia, Gender::Male, 1978),
                              rec(SourceId::Wikidata, Gender::Male, 1978)});
    REQUIRE(out.accepted());
    CHECK(*out.value == 1978);
  }
  SUBCASE("homonym years disagree") {
    const auto out =
        birth_year_consensus({rec(SourceId::GKG, Gender::Male, 1978),
                              rec(SourceId::DBPedia, Gender::Male, 1765),
                              rec(SourceId::Wikidata, Gender::Male, 1978)});
    CHECK(out.reason == kDisagreement);
  }
  SUBCASE("two sources only") {
    const auto out =
        birth_year_consensus({rec(SourceId::GKG, Gender::Male, 1978),
                              rec(SourceId::DBPedia, Gender::Male, 1978)});
    CHECK(out.reason == kMissingSource);
  }
  SUBCASE("present source without a year is an unknown value") {
    const auto out =
        birth_year_consensus({rec(SourceId::GKG, Gender::Male, 1978),
                              rec(SourceId::DBPedia, Gender::Male),
                              rec(SourceId::Wikidata, Gender::Male, 1978)});
    CHECK(out.reason == kUnknownValue);
  }
}

TEST_CASE("consensus is permutation invariant and value-preserving") {
  std::vector<SourceRecord> records = {rec(SourceId::Wikidata, Gender::Female, 1969),
                                       rec(SourceId::GKG, Gender::Female, 1969),
                                       rec(SourceId::DBPedia, Gender::Female, 1969)};
  std::sort(records.begin(), records.end(),
            [](const auto& a, const auto& b) { return a.source_id < b.source_id; });
  do {
    const auto g = gender_consensus(records);
    const auto y = birth_year_consensus(records);
    REQUIRE(g.accepted());
    REQUIRE(y.accepted());
    // Never an output that was not an input.
    CHECK(*g.value == Gender::Female);
    CHECK(*y.value == 1969);
  } while (std::next_permutation(
      records.begin(), records.end(),
      [](const auto& a, const auto& b) { return a.source_id < b.source_id; }));
}

TEST_CASE("removing any source from an accepted triple rejects it") {
  const std::vector<SourceRecord> records = {
      rec(SourceId::GKG, Gender::Male, 1981),
      rec(SourceId::DBPedia, Gender::Male, 1981),
      rec(SourceId::Wikidata, Gender::Male, 1981)};
  REQUIRE(gender_consensus(records).accepted());
  for (std::size_t drop = 0; drop < records.size(); ++drop) {
    std::vector<SourceRecord> reduced;
    for (std::size_t i = 0; i < records.size(); ++i)
      if (i != drop) reduced.push_back(records[i]);
    CHECK(gender_consensus(reduced).reason == kMissingSource);
    CHECK(birth_year_consensus(reduced).reason == kMissingSource);
  }
}

TEST_CASE("divergence report against original labels") {
  std::vector<PersonConsensus> consensus(4);
  consensus[0].speaker_id = "id001";
  consensus[0].gender = Gender::Male;
  consensus[1].speaker_id = "id002";
  consensus[1].gender = Gender::Female;
  consensus[2].speaker_id = "id003";
  consensus[2].gender = Gender::TransFemale;
  consensus[3].speaker_id = "id999";
  consensus[3].gender = Gender::Male;  // no original label

  std::vector<OriginalLabel> originals(3);
  originals[0] = {"id001", "a", Gender::Female};  // relabeled F -> M
  originals[1] = {"id002", "b", Gender::Female};  // agrees
  originals[2] = {"id003", "c", Gender::Female};  // trans vs binary

  const auto rep = compare_with_original(consensus, originals);
  CHECK(rep.agreed_count == 1);
  REQUIRE(rep.relabeled.size() == 2);
  CHECK(rep.agreed_count + rep.relabeled.size() == 3);
  CHECK(rep.relabeled[0].speaker_id == "id001");
  CHECK(rep.relabeled[0].category == "f_to_m");
  CHECK(rep.relabeled[1].speaker_id == "id003");
  CHECK(rep.relabeled[1].category == "trans_vs_binary");
  CHECK(rep.f_to_m == 1);
  CHECK(rep.m_to_f == 0);
  CHECK(rep.trans_vs_binary == 1);
  REQUIRE(rep.consensus_only.size() == 1);
  CHECK(rep.consensus_only[0] == "id999");

  const auto text = format_divergence_text(rep);
  CHECK(text.find("agreed:          1") != std::string::npos);
}

TEST_CASE("identical labels everywhere") {
  std::vector<PersonConsensus> consensus(2);
  consensus[0].speaker_id = "id001";
  consensus[0].gender = Gender::Male;
  consensus[1].speaker_id = "id002";
  consensus[1].gender = Gender::Female;
  const std::vector<OriginalLabel> originals = {
      {"id001", "a", Gender::Male}, {"id002", "b", Gender::Female}};
  const auto rep = compare_with_original(consensus, originals);
  CHECK(rep.agreed_count == 2);
  CHECK(rep.relabeled.empty());
}
