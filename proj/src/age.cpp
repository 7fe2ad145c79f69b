// src/age.cpp

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

#include "voxmeta/age.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "voxmeta/common.hpp"
#include "voxmeta/csv.hpp"
#include "voxmeta/rng.hpp"
#include "voxmeta/text.hpp"

namespace voxmeta::age {

namespace {

void refuse_overwrite(const std::string& path, bool force) {
  if (force) return;
  std::ifstream probe(path);
  if (probe.good())
    throw ValidationError("refusing to overwrite " + path + " (pass force to allow)");
}

ReliabilityTier tier_from_token(const std::string& token) {
  if (token == "strict") return ReliabilityTier::Strict;
  if (token == "title_only") return ReliabilityTier::TitleOnly;
  throw ValidationError("unknown reliability tier: " + token);
}

}  // namespace

YearConfirmation confirm_recording_year(const VideoMeta& video) {
  const int year = video.upload_date.year;
  const bool in_title = text::has_year_token(video.title, year);
  const bool in_description = text::has_year_token(video.description, year);
  if (in_title && in_description) return {year, ReliabilityTier::Strict};
  if (in_title) return {year, ReliabilityTier::TitleOnly};
  return {std::nullopt, ReliabilityTier::None};
}

AgeOutcome derive_age(int birth_year, int recording_year) {
  const int age = recording_year - birth_year;
  if (age < kMinAge) return {std::nullopt, "implausible_chronology"};
  if (age > kMaxAge) return {std::nullopt, "implausible_age"};
  return {age, {}};
}

TripletBuild build_triplets(const std::vector<PersonConsensus>& consensus,
                            const std::vector<VideoMeta>& videos) {
  std::unordered_map<std::string, int> birth_year_by_speaker;
  for (const auto& p : consensus)
    if (p.birth_year) birth_year_by_speaker[p.speaker_id] = *p.birth_year;

  TripletBuild out;
  // (youtube_id, speaker_id) -> index into out.triplets, for deduplication.
  std::map<std::pair<std::string, std::string>, std::size_t> seen;

  for (const auto& video : videos) {
    ++out.summary.videos_total;
    const YearConfirmation conf = confirm_recording_year(video);
    switch (conf.tier) {
      case ReliabilityTier::Strict: ++out.summary.videos_strict; break;
      case ReliabilityTier::TitleOnly: ++out.summary.videos_title_only; break;
      case ReliabilityTier::None: ++out.summary.videos_unconfirmed; break;
    }
    if (!conf.recording_year) continue;
    for (const auto& speaker_id : video.speaker_ids) {
      ++out.summary.candidates;
      const auto it = birth_year_by_speaker.find(speaker_id);
      if (it == birth_year_by_speaker.end()) {
        ++out.summary.no_birth_year;
        continue;
      }
      const AgeOutcome res = derive_age(it->second, *conf.recording_year);
      if (!res.age) {
        if (res.error == "implausible_chronology")
          ++out.summary.implausible_chronology;
        else
          ++out.summary.implausible_age;
        continue;
      }
      const auto key = std::make_pair(video.youtube_id, speaker_id);
      const auto existing = seen.find(key);
      if (existing != seen.end()) {
        // Same upload year implies the same age; anything else means the
        // inputs are internally inconsistent.
        if (out.triplets[existing->second].age != *res.age)
          throw NumericError("conflicting ages for (" + video.youtube_id + ", " +
                             speaker_id + ")");
        ++out.summary.duplicates_collapsed;
        continue;
      }
      seen.emplace(key, out.triplets.size());
      out.triplets.push_back({video.youtube_id, speaker_id, *res.age, conf.tier});
    }
  }
  std::sort(out.triplets.begin(), out.triplets.end(),
            [](const AgeTriplet& a, const AgeTriplet& b) {
              return std::tie(a.speaker_id, a.youtube_id) <
                     std::tie(b.speaker_id, b.youtube_id);
            });
  out.summary.triplets = out.triplets.size();
  return out;
}

SpeakerAgePair select_single_age(const std::vector<AgeTriplet>& speaker_triplets,
                                 std::uint64_t seed) {
  if (speaker_triplets.empty())
    throw ValidationError("select_single_age: no triplets for speaker");
  const std::string& speaker = speaker_triplets.front().speaker_id;
  for (const auto& t : speaker_triplets) {
    if (t.speaker_id != speaker)
      throw ValidationError("select_single_age: mixed speakers in input");
    if (t.tier == ReliabilityTier::None)
      throw ValidationError("select_single_age: tier None triplet for " + speaker);
  }
  // Sort locally so the choice is independent of input order.
  std::vector<const AgeTriplet*> ordered;
  ordered.reserve(speaker_triplets.size());
  for (const auto& t : speaker_triplets) ordered.push_back(&t);
  std::sort(ordered.begin(), ordered.end(),
            [](const AgeTriplet* a, const AgeTriplet* b) {
              return a->youtube_id < b->youtube_id;
            });
  Rng rng = Rng::keyed(seed, "select-single-age", fnv1a64(speaker));
  const AgeTriplet* chosen =
      ordered[static_cast<std::size_t>(rng.below(ordered.size()))];
  return {speaker, chosen->age, chosen->youtube_id, chosen->tier};
}

std::vector<SpeakerAgePair> select_all_single_ages(
    const std::vector<AgeTriplet>& triplets, std::uint64_t seed) {
  std::map<std::string, std::vector<AgeTriplet>> by_speaker;
  for (const auto& t : triplets) by_speaker[t.speaker_id].push_back(t);
  std::vector<SpeakerAgePair> out;
  out.reserve(by_speaker.size());
  for (const auto& [speaker, group] : by_speaker)
    out.push_back(select_single_age(group, seed));
  return out;  // map iteration is already sorted by speaker_id
}

std::vector<int> default_bin_edges() {
  return {0, 10, 20, 30, 40, 50, 60, 70, 80, 92};
}

Histogram age_histogram(const std::vector<SpeakerAgePair>& pairs,
                        const std::vector<int>& edges) {
  if (edges.size() < 2) throw ValidationError("histogram needs >= 2 edges");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (edges[i] <= edges[i - 1])
      throw ValidationError("histogram edges must be strictly increasing");
  Histogram hist;
  hist.edges = edges;
  hist.counts.assign(edges.size() - 1, 0);
  for (const auto& p : pairs) {
    if (p.age <= edges.front() || p.age > edges.back())
      throw NumericError("age " + std::to_string(p.age) + " for speaker " +
                         p.speaker_id + " outside histogram range (" +
                         std::to_string(edges.front()) + ", " +
                         std::to_string(edges.back()) + "]");
    // Left-open right-closed: age 30 lands in (20, 30].
    const auto it = std::lower_bound(edges.begin() + 1, edges.end(), p.age);
    ++hist.counts[static_cast<std::size_t>(it - edges.begin() - 1)];
  }
  return hist;
}

void write_triplets_csv(const std::string& path,
                        const std::vector<AgeTriplet>& triplets, bool force) {
  refuse_overwrite(path, force);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open triplet file " + path);
  out << "youtube_id,voxceleb_id,age,tier\n";
  for (const auto& t : triplets) {
    out << csv::join({t.youtube_id, t.speaker_id, std::to_string(t.age),
                      to_token(t.tier)})
        << '\n';
  }
  if (!out.flush()) throw IoError("failed writing triplet file " + path);
}

void write_pairs_csv(const std::string& path,
                     const std::vector<SpeakerAgePair>& pairs, bool force) {
  refuse_overwrite(path, force);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open pairs file " + path);
  out << "speaker_id,age,youtube_id,tier\n";
  for (const auto& p : pairs) {
    out << csv::join({p.speaker_id, std::to_string(p.age), p.source_youtube_id,
                      to_token(p.tier)})
        << '\n';
  }
  if (!out.flush()) throw IoError("failed writing pairs file " + path);
}

void write_histogram_csv(const std::string& path, const Histogram& hist,
                         bool force) {
  refuse_overwrite(path, force);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open histogram file " + path);
  out << "bin_low,bin_high,count\n";
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    out << hist.edges[i] << ',' << hist.edges[i + 1] << ',' << hist.counts[i]
        << '\n';
  }
  if (!out.flush()) throw IoError("failed writing histogram file " + path);
}

std::string format_histogram_text(const Histogram& hist) {
  std::ostringstream out;
  out << "Age interval | Number of speakers\n";
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    std::ostringstream bin;
    bin << '(' << hist.edges[i] << ", " << hist.edges[i + 1] << ']';
    out << bin.str();
    for (std::size_t pad = bin.str().size(); pad < 12; ++pad) out << ' ';
    out << " | ";
    const std::string count = std::to_string(hist.counts[i]);
    for (std::size_t pad = count.size(); pad < 18; ++pad) out << ' ';
    out << count << '\n';
  }
  return out.str();
}

std::vector<SpeakerAgePair> read_pairs_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  csv::Table table = csv::read_table(in, path);
  if (table.header != std::vector<std::string>{"speaker_id", "age", "youtube_id",
                                               "tier"})
    throw ValidationError(path + ": expected header speaker_id,age,youtube_id,tier");
  std::vector<SpeakerAgePair> pairs;
  pairs.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    if (row.size() != 4)
      throw ValidationError(path + ": pair row must have 4 fields");
    SpeakerAgePair p;
    p.speaker_id = row[0];
    try {
      p.age = std::stoi(row[1]);
    } catch (const std::exception&) {
      throw ValidationError(path + ": bad age value '" + row[1] + "'");
    }
    p.source_youtube_id = row[2];
    p.tier = tier_from_token(row[3]);
    pairs.push_back(std::move(p));
  }
  return pairs;
}

}  // namespace voxmeta::age
