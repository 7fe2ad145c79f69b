// src/ingest.cpp

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

#include "voxmeta/ingest.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <istream>
#include <set>
#include <unordered_set>

#include "json.hpp"
#include "voxmeta/common.hpp"
#include "voxmeta/csv.hpp"
#include "voxmeta/text.hpp"

namespace voxmeta::ingest {

namespace {

using nlohmann::json;

constexpr int kMinBirthYear = 1850;
constexpr int kMinUploadYear = 2005;

std::optional<Gender> gender_from_dump_token(const std::string& token) {
  if (token == "male") return Gender::Male;
  if (token == "female") return Gender::Female;
  if (token == "transgender female") return Gender::TransFemale;
  return std::nullopt;
}

std::optional<Gender> gender_from_csv_token(std::string token) {
  for (char& c : token)
    if (c >= 'A' && c <= 'Z') c += 32;
  if (token == "m" || token == "male") return Gender::Male;
  if (token == "f" || token == "female") return Gender::Female;
  return std::nullopt;
}

bool parse_int(const std::string& s, int& out) {
  if (s.empty()) return false;
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
    if (v > 99999999) return false;
  }
  out = v;
  return true;
}

// "YYYY-MM-DD" or "YYYY".
std::optional<Date> parse_iso_date(const std::string& s) {
  Date d;
  if (s.size() == 4) {
    if (!parse_int(s, d.year)) return std::nullopt;
    return d;
  }
  if (s.size() == 10 && s[4] == '-' && s[7] == '-') {
    if (!parse_int(s.substr(0, 4), d.year)) return std::nullopt;
    if (!parse_int(s.substr(5, 2), d.month)) return std::nullopt;
    if (!parse_int(s.substr(8, 2), d.day)) return std::nullopt;
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31)
      return std::nullopt;
    return d;
  }
  return std::nullopt;
}

// keys must match exactly; extra or missing keys are schema violations.
std::string check_keys(const json& j, const std::set<std::string>& expected) {
  if (!j.is_object()) return "not a JSON object";
  for (const auto& key : expected)
    if (!j.contains(key)) return "missing key: " + key;
  for (const auto& [key, _] : j.items())
    if (!expected.count(key)) return "unexpected key: " + key;
  return {};
}

}  // namespace

ParseOptions::ParseOptions() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  current_year = utc.tm_year + 1900;
}

ParseResult<SourceRecord> parse_source_dump(std::istream& in, SourceId source,
                                            const std::string& stream_name,
                                            const ParseOptions& opts) {
  ParseResult<SourceRecord> result;
  jsonl::for_each_line(in, stream_name, [&](std::size_t line_no,
                                            const std::string& raw) {
    ++result.lines;
    const auto reject = [&](std::string reason) {
      result.rejects.push_back({stream_name, line_no, std::move(reason)});
    };
    if (raw.empty()) return reject("empty line");
    json j = json::parse(raw, nullptr, false);
    if (j.is_discarded()) return reject("malformed JSON");
    if (auto err = check_keys(j, {"name", "gender", "birth_date"}); !err.empty())
      return reject(err);
    if (!j["name"].is_string()) return reject("name must be a string");
    if (!j["gender"].is_string()) return reject("gender must be a string");

    SourceRecord rec;
    rec.source_id = source;
    rec.person_key = text::normalize_person_key(j["name"].get<std::string>());
    if (rec.person_key.empty()) return reject("empty name");
    const auto gender = gender_from_dump_token(j["gender"].get<std::string>());
    if (!gender) return reject("unknown gender token");
    rec.gender = *gender;

    if (!j["birth_date"].is_null()) {
      if (!j["birth_date"].is_string())
        return reject("birth_date must be a string or null");
      const auto date = parse_iso_date(j["birth_date"].get<std::string>());
      if (!date) return reject("malformed birth_date");
      if (date->year < kMinBirthYear || date->year > opts.current_year)
        return reject("birth year out of range");
      rec.birth_date = *date;
    }
    result.items.push_back(std::move(rec));
  });
  return result;
}

ParseResult<VideoMeta> parse_video_meta(std::istream& in,
                                        const std::string& stream_name,
                                        const ParseOptions& opts) {
  ParseResult<VideoMeta> result;
  std::unordered_set<std::string> seen_ids;
  jsonl::for_each_line(in, stream_name, [&](std::size_t line_no,
                                            const std::string& raw) {
    ++result.lines;
    const auto reject = [&](std::string reason) {
      result.rejects.push_back({stream_name, line_no, std::move(reason)});
    };
    if (raw.empty()) return reject("empty line");
    json j = json::parse(raw, nullptr, false);
    if (j.is_discarded()) return reject("malformed JSON");
    if (auto err = check_keys(j, {"youtube_id", "title", "description",
                                  "upload_date", "speaker_ids"});
        !err.empty())
      return reject(err);
    if (!j["youtube_id"].is_string() || !j["title"].is_string() ||
        !j["description"].is_string() || !j["upload_date"].is_string() ||
        !j["speaker_ids"].is_array())
      return reject("field type mismatch");

    VideoMeta v;
    v.youtube_id = j["youtube_id"].get<std::string>();
    if (v.youtube_id.empty()) return reject("empty youtube_id");
    const auto date = parse_iso_date(j["upload_date"].get<std::string>());
    if (!date || date->month == 0) return reject("malformed upload_date");
    if (date->year < kMinUploadYear || date->year > opts.current_year)
      return reject("upload year out of range");
    v.upload_date = *date;
    v.title = j["title"].get<std::string>();
    v.description = j["description"].get<std::string>();
    for (const auto& id : j["speaker_ids"]) {
      if (!id.is_string()) return reject("speaker_ids must be strings");
      v.speaker_ids.push_back(id.get<std::string>());
    }
    if (!seen_ids.insert(v.youtube_id).second)
      return reject("duplicate youtube_id");
    result.items.push_back(std::move(v));
  });
  return result;
}

ParseResult<OriginalLabel> parse_original_labels(std::istream& in,
                                                 const std::string& stream_name,
                                                 const ParseOptions&) {
  if (!in) throw IoError("cannot read " + stream_name);
  ParseResult<OriginalLabel> result;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_header) {
      have_header = true;
      if (csv::split_line(line) !=
          std::vector<std::string>{"speaker_id", "name", "gender"})
        throw ValidationError(stream_name +
                              ": expected header speaker_id,name,gender");
      continue;
    }
    ++result.lines;
    const auto reject = [&](std::string reason) {
      result.rejects.push_back({stream_name, line_no, std::move(reason)});
    };
    if (line.empty()) {
      reject("empty line");
      continue;
    }
    const auto fields = csv::split_line(line);
    if (fields.size() != 3) {
      reject("expected 3 fields");
      continue;
    }
    OriginalLabel rec;
    rec.speaker_id = fields[0];
    if (rec.speaker_id.empty()) {
      reject("empty speaker_id");
      continue;
    }
    rec.person_key = text::normalize_person_key(fields[1]);
    if (rec.person_key.empty()) {
      reject("empty name");
      continue;
    }
    if (fields[2].empty()) {
      rec.gender = Gender::Unknown;  // roster entry without an original label
    } else {
      const auto gender = gender_from_csv_token(fields[2]);
      if (!gender) {
        reject("unknown gender token");
        continue;
      }
      rec.gender = *gender;
    }
    if (!seen.insert(rec.speaker_id).second) {
      reject("duplicate speaker_id");
      continue;
    }
    result.items.push_back(std::move(rec));
  }
  if (in.bad()) throw IoError("I/O failure while reading " + stream_name);
  return result;
}

std::vector<EmbeddingRecord> parse_embeddings(std::istream& in,
                                              const std::string& stream_name) {
  csv::Table table = csv::read_table(in, stream_name);
  if (table.header.empty() && table.rows.empty()) return {};
  const std::vector<std::string> fixed = {"speaker_id", "utterance_id", "age",
                                          "gender"};
  if (table.header.size() < fixed.size() + 1)
    throw ValidationError(stream_name + ": embedding header too short");
  for (std::size_t i = 0; i < fixed.size(); ++i)
    if (table.header[i] != fixed[i])
      throw ValidationError(stream_name + ": embedding header must start with " +
                            "speaker_id,utterance_id,age,gender");
  const std::size_t dim = table.header.size() - fixed.size();
  for (std::size_t j = 0; j < dim; ++j) {
    if (table.header[fixed.size() + j] != "f" + std::to_string(j))
      throw ValidationError(stream_name + ": feature columns must be f0..f" +
                            std::to_string(dim - 1));
  }

  std::vector<EmbeddingRecord> records;
  records.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    EmbeddingRecord rec;
    if (row.size() != fixed.size() + dim)
      throw ValidationError(stream_name + ", data row " + std::to_string(r + 1) +
                            ": dimension mismatch (expected " +
                            std::to_string(dim) + " features, got " +
                            std::to_string(row.size() - fixed.size()) + ")");
    rec.speaker_id = row[0];
    rec.utterance_id = row[1];
    if (rec.speaker_id.empty() || rec.utterance_id.empty())
      throw ValidationError(stream_name + ", data row " + std::to_string(r + 1) +
                            ": empty speaker_id/utterance_id");
    if (!row[2].empty()) {
      int age = 0;
      if (!parse_int(row[2], age))
        throw ValidationError(stream_name + ": bad age for utterance " +
                              rec.utterance_id);
      rec.age = age;
    }
    if (!row[3].empty()) {
      const auto g = gender_from_csv_token(row[3]);
      if (!g)
        throw ValidationError(stream_name + ": bad gender for utterance " +
                              rec.utterance_id);
      rec.gender = g;
    }
    rec.vector.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      char* end = nullptr;
      const std::string& cell = row[fixed.size() + j];
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size())
        throw ValidationError(stream_name + ": bad feature value for utterance " +
                              rec.utterance_id);
      if (!std::isfinite(v))
        throw ValidationError(stream_name + ": non-finite component f" +
                              std::to_string(j) + " in utterance " +
                              rec.utterance_id);
      rec.vector[j] = v;
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::string source_record_to_jsonl(const SourceRecord& rec,
                                   const std::string& display_name) {
  nlohmann::ordered_json j;
  j["name"] = display_name.empty() ? rec.person_key : display_name;
  switch (rec.gender) {
    case Gender::Male: j["gender"] = "male"; break;
    case Gender::Female: j["gender"] = "female"; break;
    case Gender::TransFemale: j["gender"] = "transgender female"; break;
    case Gender::Unknown: j["gender"] = "unknown"; break;
  }
  if (rec.birth_date) {
    char buf[40];
    if (rec.birth_date->month > 0) {
      std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", rec.birth_date->year,
                    rec.birth_date->month, rec.birth_date->day);
    } else {
      std::snprintf(buf, sizeof(buf), "%04d", rec.birth_date->year);
    }
    j["birth_date"] = buf;
  } else {
    j["birth_date"] = nullptr;
  }
  return j.dump();
}

}  // namespace voxmeta::ingest
