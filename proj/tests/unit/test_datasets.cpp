// tests/unit/test_datasets.cpp

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
#include <map>
#include <set>

#include "doctest.h"
#include "support/tmpdir.hpp"
#include "voxmeta/common.hpp"
#include "voxmeta/datasets.hpp"

using namespace voxmeta;
using namespace voxmeta::datasets;

namespace {

std::vector<std::string> speakers(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back("spk" + std::to_string(1000 + i));
  return out;
}

EmbeddingRecord utt(const std::string& speaker, int index, Gender gender) {
  EmbeddingRecord r;
  r.speaker_id = speaker;
  r.utterance_id = speaker + "-u" + std::to_string(index);
  r.vector = {0.0};
  r.gender = gender;
  return r;
}

}  // namespace

TEST_CASE("holdout split basics") {
  const auto split = holdout_split(speakers(10), 0.6, 17);
  CHECK(split.train.size() == 6);
  CHECK(split.test.size() == 4);
  std::set<std::string> train(split.train.begin(), split.train.end());
  for (const auto& s : split.test) CHECK_FALSE(train.count(s));

  const auto again = holdout_split(speakers(10), 0.6, 17);
  CHECK(split.train == again.train);
  CHECK(split.test == again.test);

  const auto other_seed = holdout_split(speakers(10), 0.6, 18);
  CHECK(other_seed.train != split.train);  // overwhelmingly likely by design

  CHECK_THROWS_AS(holdout_split({"only"}, 0.6, 1), ValidationError);
  CHECK_THROWS_AS(holdout_split(speakers(10), 1.0, 1), ValidationError);
}

TEST_CASE("cv folds partition the speakers") {
  const auto folds10 = make_cv_folds(speakers(10), 5, 3);
  std::map<int, int> sizes;
  for (const auto& [_, f] : folds10) ++sizes[f];
  for (const auto& [_, n] : sizes) CHECK(n == 2);

  const auto folds11 = make_cv_folds(speakers(11), 5, 3);
  sizes.clear();
  for (const auto& [_, f] : folds11) ++sizes[f];
  std::multiset<int> observed;
  for (const auto& [_, n] : sizes) observed.insert(n);
  CHECK(observed == std::multiset<int>{2, 2, 2, 2, 3});

  CHECK(folds11.size() == 11);  // union of folds = all speakers
  CHECK_THROWS_AS(make_cv_folds(speakers(10), 1, 3), ValidationError);
  CHECK_THROWS_AS(make_cv_folds(speakers(3), 5, 3), ValidationError);
}

TEST_CASE("pinned train-only speakers never reach the test side") {
  const auto eligible = speakers(10);
  const std::vector<std::string> pinned = {"title_a", "title_b", "title_c"};
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto split = make_split(eligible, pinned, 0.6, 5, seed);
    for (const auto& p : pinned) {
      CHECK(std::find(split.test.begin(), split.test.end(), p) == split.test.end());
      CHECK(std::find(split.train.begin(), split.train.end(), p) != split.train.end());
      CHECK(split.folds.count(p) == 1);
    }
    CHECK(split.train.size() == 6 + 3);
    CHECK(split.test.size() == 4);
  }
}

TEST_CASE("gender balancing downsamples the majority class") {
  std::vector<EmbeddingRecord> records;
  for (int i = 0; i < 30; ++i) records.push_back(utt("m" + std::to_string(i), 0, Gender::Male));
  for (int i = 0; i < 20; ++i) records.push_back(utt("f" + std::to_string(i), 0, Gender::Female));

  const auto kept = balance_gender(records, 5);
  std::set<std::string> males, females;
  for (auto idx : kept) {
    const auto& r = records[idx];
    (*r.gender == Gender::Male ? males : females).insert(r.speaker_id);
  }
  CHECK(males.size() == 20);
  CHECK(females.size() == 20);

  const auto kept_again = balance_gender(records, 5);
  CHECK(kept == kept_again);
}

TEST_CASE("already balanced input is the identity") {
  std::vector<EmbeddingRecord> records;
  for (int i = 0; i < 5; ++i) {
    records.push_back(utt("m" + std::to_string(i), 0, Gender::Male));
    records.push_back(utt("f" + std::to_string(i), 0, Gender::Female));
  }
  const auto kept = balance_gender(records, 9);
  CHECK(kept.size() == records.size());
}

TEST_CASE("balancing requires both classes") {
  std::vector<EmbeddingRecord> records = {utt("a", 0, Gender::Male),
                                          utt("b", 0, Gender::Male)};
  CHECK_THROWS_AS(balance_gender(records, 1), ValidationError);
}

TEST_CASE("utterance equalization") {
  std::vector<EmbeddingRecord> records;
  for (int i = 0; i < 7; ++i) records.push_back(utt("rich", i, Gender::Male));
  for (int i = 0; i < 2; ++i) records.push_back(utt("poor", i, Gender::Female));
  for (int i = 0; i < 3; ++i) records.push_back(utt("exact", i, Gender::Male));

  const auto result = equalize_utterances(records, 3, 11);
  std::map<std::string, int> counts;
  for (auto idx : result.kept) ++counts[records[idx].speaker_id];
  CHECK(counts["rich"] == 3);
  CHECK(counts["exact"] == 3);
  CHECK(counts.count("poor") == 0);
  REQUIRE(result.dropped_speakers.size() == 1);
  CHECK(result.dropped_speakers[0] == "poor");
  // Group sizes all equal n: count-by-speaker is a constant function.
  for (const auto& [_, c] : counts) CHECK(c == 3);

  CHECK_THROWS_AS(equalize_utterances(records, 0, 1), ValidationError);
}

TEST_CASE("balance then equalize preserves both properties") {
  std::vector<EmbeddingRecord> records;
  for (int i = 0; i < 9; ++i)
    for (int u = 0; u < 2 + i % 4; ++u)
      records.push_back(utt("m" + std::to_string(i), u, Gender::Male));
  for (int i = 0; i < 6; ++i)
    for (int u = 0; u < 3 + i % 3; ++u)
      records.push_back(utt("f" + std::to_string(i), u, Gender::Female));

  const auto balanced = balance_gender(records, 4);
  std::vector<EmbeddingRecord> stage;
  for (auto idx : balanced) stage.push_back(records[idx]);
  const auto equalized = equalize_utterances(stage, 2, 4);

  std::map<std::string, int> counts;
  std::set<std::string> males, females;
  for (auto idx : equalized.kept) {
    const auto& r = stage[idx];
    ++counts[r.speaker_id];
    (*r.gender == Gender::Male ? males : females).insert(r.speaker_id);
  }
  for (const auto& [_, c] : counts) CHECK(c == 2);
  CHECK(males.size() == females.size());
}

TEST_CASE("disjointness holds across a seed sweep") {
  const auto all = speakers(37);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto split = make_split(all, {}, 0.6, 5, seed);
    std::set<std::string> train(split.train.begin(), split.train.end());
    std::set<std::string> test(split.test.begin(), split.test.end());
    CHECK(train.size() + test.size() == all.size());
    for (const auto& s : test) CHECK_FALSE(train.count(s));
    std::map<int, int> fold_sizes;
    for (const auto& [speaker, fold] : split.folds) {
      CHECK(train.count(speaker));
      ++fold_sizes[fold];
    }
    int lo = 1 << 30, hi = 0;
    for (const auto& [_, n] : fold_sizes) {
      lo = std::min(lo, n);
      hi = std::max(hi, n);
    }
    CHECK(hi - lo <= 1);
  }
}

TEST_CASE("split manifest round trip") {
  voxmeta::testing::ScopedTempDir tmp;
  const auto split = make_split(speakers(12), {"pinned"}, 0.6, 5, 21);
  const auto path = tmp.file("split.json");
  write_split_json(path, split);
  const auto loaded = read_split_json(path);
  CHECK(loaded.train == split.train);
  CHECK(loaded.test == split.test);
  CHECK(loaded.folds == split.folds);
  CHECK(loaded.seed == split.seed);
  CHECK(loaded.ratio == split.ratio);
  CHECK(loaded.k == split.k);
  CHECK_THROWS_AS(write_split_json(path, split), ValidationError);  // no force

  const auto corrupt = tmp.write(
      "bad.json",
      R"({"seed":1,"ratio":0.6,"k":5,"train":["a","b"],"test":["b","c"],"folds":{"a":0,"b":1}})");
  CHECK_THROWS_AS(read_split_json(corrupt), ValidationError);
}
