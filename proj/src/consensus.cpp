// src/consensus.cpp

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

#include "voxmeta/consensus.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "voxmeta/common.hpp"
#include "voxmeta/csv.hpp"

namespace voxmeta::consensus {

namespace {

struct PerSource {
  bool present = false;
  bool homonym = false;  // non-identical duplicates within the source
  Gender gender = Gender::Unknown;
  std::optional<int> birth_year;
};

// Collapses one person's records per source. Exact duplicates (same gender,
// same birth year or same absence of one) merge; anything non-identical
// within one source marks the whole key as a homonym.
std::array<PerSource, 3> collapse(const std::vector<SourceRecord>& records) {
  std::array<PerSource, 3> by_source;
  for (const auto& rec : records) {
    auto& slot = by_source[static_cast<std::size_t>(rec.source_id)];
    const std::optional<int> year =
        rec.birth_date ? std::optional<int>(rec.birth_date->year) : std::nullopt;
    if (!slot.present) {
      slot.present = true;
      slot.gender = rec.gender;
      slot.birth_year = year;
    } else if (slot.gender != rec.gender || slot.birth_year != year) {
      slot.homonym = true;
    }
  }
  return by_source;
}

void require_single_key(const std::vector<SourceRecord>& records) {
  for (const auto& rec : records) {
    if (rec.person_key != records.front().person_key)
      throw ValidationError("consensus input mixes person keys: '" +
                            records.front().person_key + "' vs '" +
                            rec.person_key + "'");
  }
}

const char* status_of(const PersonConsensus& p) {
  if (p.gender && p.birth_year) return "ok";
  if (p.gender) return "gender_only";
  if (p.birth_year) return "birth_year_only";
  return "rejected";
}

std::string reason_of(const PersonConsensus& p) {
  std::string out;
  if (!p.gender) out += "gender=" + p.gender_reason;
  if (!p.birth_year) {
    if (!out.empty()) out += ';';
    out += "birth_year=" + p.birth_year_reason;
  }
  return out;
}

void refuse_overwrite(const std::string& path, bool force) {
  if (force) return;
  std::ifstream probe(path);
  if (probe.good())
    throw ValidationError("refusing to overwrite " + path + " (pass force to allow)");
}

}  // namespace

Outcome<Gender> gender_consensus(const std::vector<SourceRecord>& records) {
  if (records.empty()) return {std::nullopt, kMissingSource};
  require_single_key(records);
  const auto by_source = collapse(records);
  int present = 0;
  for (const auto& s : by_source) {
    if (s.homonym) return {std::nullopt, kAmbiguousName};
    if (s.present) ++present;
  }
  if (present < 3) return {std::nullopt, kMissingSource};
  for (const auto& s : by_source)
    if (s.gender == Gender::Unknown) return {std::nullopt, kUnknownValue};
  const Gender first = by_source[0].gender;
  for (const auto& s : by_source)
    if (s.gender != first) return {std::nullopt, kDisagreement};
  return {first, {}};
}

Outcome<int> birth_year_consensus(const std::vector<SourceRecord>& records) {
  if (records.empty()) return {std::nullopt, kMissingSource};
  require_single_key(records);
  const auto by_source = collapse(records);
  int present = 0;
  for (const auto& s : by_source) {
    if (s.homonym) return {std::nullopt, kAmbiguousName};
    if (s.present) ++present;
  }
  if (present < 3) return {std::nullopt, kMissingSource};
  for (const auto& s : by_source)
    if (!s.birth_year) return {std::nullopt, kUnknownValue};
  const int first = *by_source[0].birth_year;
  for (const auto& s : by_source)
    if (*s.birth_year != first) return {std::nullopt, kDisagreement};
  return {first, {}};
}

std::vector<PersonConsensus> build_consensus(
    const std::vector<OriginalLabel>& roster,
    const std::vector<SourceRecord>& records) {
  std::unordered_map<std::string, std::vector<SourceRecord>> by_key;
  for (const auto& rec : records) by_key[rec.person_key].push_back(rec);

  std::vector<PersonConsensus> out;
  out.reserve(roster.size());
  for (const auto& entry : roster) {
    PersonConsensus p;
    p.speaker_id = entry.speaker_id;
    p.person_key = entry.person_key;
    const auto it = by_key.find(entry.person_key);
    const std::vector<SourceRecord> empty;
    const auto& group = it != by_key.end() ? it->second : empty;
    for (const auto& rec : group) p.sources_seen.insert(rec.source_id);
    auto gender = gender_consensus(group);
    auto year = birth_year_consensus(group);
    p.gender = gender.value;
    p.gender_reason = gender.reason;
    p.birth_year = year.value;
    p.birth_year_reason = year.reason;
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.speaker_id < b.speaker_id; });
  return out;
}

DivergenceReport compare_with_original(
    const std::vector<PersonConsensus>& consensus,
    const std::vector<OriginalLabel>& originals) {
  std::unordered_map<std::string, Gender> original_by_id;
  for (const auto& o : originals) {
    // Roster rows without a usable original label do not take part.
    if (o.gender == Gender::Male || o.gender == Gender::Female)
      original_by_id[o.speaker_id] = o.gender;
  }

  DivergenceReport rep;
  for (const auto& p : consensus) {
    if (!p.gender) continue;
    const auto it = original_by_id.find(p.speaker_id);
    if (it == original_by_id.end()) {
      rep.consensus_only.push_back(p.speaker_id);
      continue;
    }
    const Gender original = it->second;
    const Gender ours = *p.gender;
    if (ours == original) {
      ++rep.agreed_count;
      continue;
    }
    Relabeled r;
    r.speaker_id = p.speaker_id;
    r.original = original;
    r.consensus = ours;
    if (ours == Gender::TransFemale) {
      r.category = "trans_vs_binary";
      ++rep.trans_vs_binary;
    } else if (original == Gender::Male && ours == Gender::Female) {
      r.category = "m_to_f";
      ++rep.m_to_f;
    } else {
      r.category = "f_to_m";
      ++rep.f_to_m;
    }
    rep.relabeled.push_back(std::move(r));
  }
  std::sort(rep.relabeled.begin(), rep.relabeled.end(),
            [](const auto& a, const auto& b) { return a.speaker_id < b.speaker_id; });
  std::sort(rep.consensus_only.begin(), rep.consensus_only.end());
  return rep;
}

void write_consensus_csv(const std::string& path,
                         const std::vector<PersonConsensus>& consensus,
                         bool force) {
  refuse_overwrite(path, force);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open consensus file " + path);
  out << "speaker_id,person_key,gender,birth_year,status,reason\n";
  for (const auto& p : consensus) {
    std::vector<std::string> fields;
    fields.push_back(p.speaker_id);
    fields.push_back(p.person_key);
    fields.push_back(p.gender ? to_token(*p.gender) : "");
    fields.push_back(p.birth_year ? std::to_string(*p.birth_year) : "");
    fields.push_back(status_of(p));
    fields.push_back(reason_of(p));
    out << csv::join(fields) << '\n';
  }
  if (!out.flush()) throw IoError("failed writing consensus file " + path);
}

std::vector<PersonConsensus> read_consensus_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  csv::Table table = csv::read_table(in, path);
  const std::vector<std::string> want = {"speaker_id", "person_key", "gender",
                                         "birth_year", "status", "reason"};
  if (table.header != want)
    throw ValidationError(path +
                          ": expected header speaker_id,person_key,gender,"
                          "birth_year,status,reason");
  std::vector<PersonConsensus> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    if (row.size() != want.size())
      throw ValidationError(path + ": consensus row must have 6 fields");
    PersonConsensus p;
    p.speaker_id = row[0];
    p.person_key = row[1];
    if (!row[2].empty()) {
      if (row[2] == "male") p.gender = Gender::Male;
      else if (row[2] == "female") p.gender = Gender::Female;
      else if (row[2] == "transgender_female") p.gender = Gender::TransFemale;
      else throw ValidationError(path + ": unknown gender token " + row[2]);
    }
    if (!row[3].empty()) {
      try {
        p.birth_year = std::stoi(row[3]);
      } catch (const std::exception&) {
        throw ValidationError(path + ": bad birth_year '" + row[3] + "'");
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

void write_divergence_csv(const std::string& path, const DivergenceReport& rep,
                          bool force) {
  refuse_overwrite(path, force);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open divergence file " + path);
  out << "speaker_id,original_gender,consensus_gender,category\n";
  for (const auto& r : rep.relabeled) {
    out << csv::join({r.speaker_id, to_token(r.original), to_token(r.consensus),
                      r.category})
        << '\n';
  }
  if (!out.flush()) throw IoError("failed writing divergence file " + path);
}

std::string format_divergence_text(const DivergenceReport& rep) {
  std::ostringstream out;
  out << "Gender label comparison against original corpus metadata\n";
  out << "  agreed:          " << rep.agreed_count << "\n";
  out << "  relabeled total: " << rep.relabeled.size() << "\n";
  out << "    male -> female:  " << rep.m_to_f << "\n";
  out << "    female -> male:  " << rep.f_to_m << "\n";
  out << "    trans vs binary: " << rep.trans_vs_binary << "\n";
  out << "  consensus without original label: " << rep.consensus_only.size()
      << "\n";
  return out.str();
}

}  // namespace voxmeta::consensus
