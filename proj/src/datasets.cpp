// src/datasets.cpp

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

#include "voxmeta/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "voxmeta/common.hpp"
#include "voxmeta/rng.hpp"

namespace voxmeta::datasets {

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void refuse_overwrite(const std::string& path, bool force) {
  if (force) return;
  std::ifstream probe(path);
  if (probe.good())
    throw ValidationError("refusing to overwrite " + path + " (pass force to allow)");
}

}  // namespace

Split holdout_split(const std::vector<std::string>& speakers, double ratio,
                    std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0))
    throw ValidationError("holdout ratio must be in (0, 1)");
  std::vector<std::string> pool = sorted_unique(speakers);
  if (pool.size() < 2)
    throw ValidationError("holdout split needs at least 2 speakers");

  Rng rng = Rng::keyed(seed, "holdout-split");
  rng.shuffle(pool);
  std::size_t n_train = static_cast<std::size_t>(
      std::llround(ratio * static_cast<double>(pool.size())));
  n_train = std::clamp<std::size_t>(n_train, 1, pool.size() - 1);

  Split split;
  split.seed = seed;
  split.ratio = ratio;
  split.train.assign(pool.begin(), pool.begin() + static_cast<long>(n_train));
  split.test.assign(pool.begin() + static_cast<long>(n_train), pool.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::map<std::string, int> make_cv_folds(const std::vector<std::string>& speakers,
                                         int k, std::uint64_t seed) {
  if (k < 2) throw ValidationError("cross-validation needs k >= 2");
  std::vector<std::string> pool = sorted_unique(speakers);
  if (pool.size() < static_cast<std::size_t>(k))
    throw ValidationError("cross-validation needs at least k speakers");
  Rng rng = Rng::keyed(seed, "cv-folds");
  rng.shuffle(pool);
  std::map<std::string, int> folds;
  for (std::size_t i = 0; i < pool.size(); ++i)
    folds[pool[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
  return folds;
}

Split make_split(const std::vector<std::string>& eligible,
                 const std::vector<std::string>& train_only, double ratio,
                 int k, std::uint64_t seed) {
  const auto pinned = sorted_unique(train_only);
  std::vector<std::string> pool;
  const std::unordered_set<std::string> pinned_set(pinned.begin(), pinned.end());
  for (const auto& s : eligible)
    if (!pinned_set.count(s)) pool.push_back(s);

  Split split = holdout_split(pool, ratio, seed);
  split.k = k;
  split.train.insert(split.train.end(), pinned.begin(), pinned.end());
  std::sort(split.train.begin(), split.train.end());
  split.train.erase(std::unique(split.train.begin(), split.train.end()),
                    split.train.end());
  split.folds = make_cv_folds(split.train, k, seed);
  return split;
}

std::vector<std::size_t> balance_gender(const std::vector<EmbeddingRecord>& records,
                                        std::uint64_t seed) {
  std::unordered_map<std::string, Gender> speaker_gender;
  for (const auto& rec : records) {
    if (!rec.gender || (*rec.gender != Gender::Male && *rec.gender != Gender::Female))
      throw ValidationError("balance_gender: record without binary gender label (" +
                            rec.utterance_id + ")");
    const auto it = speaker_gender.find(rec.speaker_id);
    if (it == speaker_gender.end()) {
      speaker_gender.emplace(rec.speaker_id, *rec.gender);
    } else if (it->second != *rec.gender) {
      throw ValidationError("balance_gender: conflicting gender for speaker " +
                            rec.speaker_id);
    }
  }
  std::vector<std::string> males, females;
  for (const auto& [speaker, gender] : speaker_gender)
    (gender == Gender::Male ? males : females).push_back(speaker);
  if (males.empty() || females.empty())
    throw ValidationError("balance_gender: one class absent");
  std::sort(males.begin(), males.end());
  std::sort(females.begin(), females.end());

  const std::size_t keep = std::min(males.size(), females.size());
  std::unordered_set<std::string> retained;
  const auto take = [&](std::vector<std::string>& side, std::string_view label) {
    if (side.size() == keep) {
      retained.insert(side.begin(), side.end());
      return;
    }
    Rng rng = Rng::keyed(seed, "balance-gender", fnv1a64(label));
    rng.shuffle(side);
    for (std::size_t i = 0; i < keep; ++i) retained.insert(side[i]);
  };
  take(males, "male");
  take(females, "female");

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < records.size(); ++i)
    if (retained.count(records[i].speaker_id)) kept.push_back(i);
  return kept;
}

EqualizeResult equalize_utterances(const std::vector<EmbeddingRecord>& records,
                                   std::size_t n_per_speaker,
                                   std::uint64_t seed) {
  if (n_per_speaker < 1)
    throw ValidationError("equalize_utterances: n_per_speaker must be >= 1");
  std::map<std::string, std::vector<std::size_t>> by_speaker;
  for (std::size_t i = 0; i < records.size(); ++i)
    by_speaker[records[i].speaker_id].push_back(i);

  EqualizeResult out;
  for (auto& [speaker, indices] : by_speaker) {
    if (indices.size() < n_per_speaker) {
      out.dropped_speakers.push_back(speaker);
      continue;
    }
    // Stable order before sampling so the choice is independent of input
    // file ordering; the index breaks ties between duplicate utterance ids.
    std::sort(indices.begin(), indices.end(),
              [&](std::size_t a, std::size_t b) {
                if (records[a].utterance_id != records[b].utterance_id)
                  return records[a].utterance_id < records[b].utterance_id;
                return a < b;
              });
    Rng rng = Rng::keyed(seed, "equalize-utterances", fnv1a64(speaker));
    auto chosen = rng.sample_indices(indices.size(), n_per_speaker);
    std::sort(chosen.begin(), chosen.end());
    for (std::size_t c : chosen) out.kept.push_back(indices[c]);
  }
  std::sort(out.kept.begin(), out.kept.end());
  return out;
}

void write_split_json(const std::string& path, const Split& split, bool force) {
  refuse_overwrite(path, force);
  nlohmann::ordered_json j;
  j["seed"] = split.seed;
  j["ratio"] = split.ratio;
  j["k"] = split.k;
  j["train"] = split.train;
  j["test"] = split.test;
  nlohmann::ordered_json folds = nlohmann::ordered_json::object();
  for (const auto& [speaker, fold] : split.folds) folds[speaker] = fold;
  j["folds"] = std::move(folds);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open split manifest " + path);
  out << j.dump(2) << '\n';
  if (!out.flush()) throw IoError("failed writing split manifest " + path);
}

Split read_split_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read split manifest " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed split manifest " + path + ": " + e.what());
  }
  Split split;
  try {
    split.seed = j.at("seed").get<std::uint64_t>();
    split.ratio = j.at("ratio").get<double>();
    split.k = j.at("k").get<int>();
    split.train = j.at("train").get<std::vector<std::string>>();
    split.test = j.at("test").get<std::vector<std::string>>();
    for (const auto& [speaker, fold] : j.at("folds").items())
      split.folds[speaker] = fold.get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("split manifest " + path + " missing field: " + e.what());
  }
  // Disjointness is a structural invariant of the manifest, not a convention.
  std::set<std::string> train_set(split.train.begin(), split.train.end());
  for (const auto& s : split.test)
    if (train_set.count(s))
      throw ValidationError("split manifest " + path +
                            " shares speaker between train and test: " + s);
  for (const auto& [speaker, fold] : split.folds) {
    if (!train_set.count(speaker))
      throw ValidationError("split manifest " + path + " assigns fold to " +
                            speaker + " outside the train side");
    if (fold < 0 || fold >= split.k)
      throw ValidationError("split manifest " + path + " has fold " +
                            std::to_string(fold) + " outside [0, k)");
  }
  return split;
}

}  // namespace voxmeta::datasets
