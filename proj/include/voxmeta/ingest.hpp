// include/voxmeta/ingest.hpp

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

#ifndef VOXMETA_INGEST_HPP
#define VOXMETA_INGEST_HPP

#include <iosfwd>
#include <vector>

#include "voxmeta/jsonl.hpp"
#include "voxmeta/types.hpp"

namespace voxmeta::ingest {

// Parsing is total: every input line becomes exactly one record or one
// reject entry, so lines == items.size() + rejects.size() for the line
// formats. Fatal conditions (unreadable stream, embedding dimension
// mismatch, NaN components) throw instead.

struct ParseOptions {
  // Upper bound for birth/upload year validation; defaults to the current
  // UTC year. Fixed in tests for reproducibility.
  int current_year;
  ParseOptions();
  explicit ParseOptions(int year) : current_year(year) {}
};

template <typename T>
struct ParseResult {
  std::vector<T> items;
  std::vector<RejectEntry> rejects;
  std::size_t lines = 0;
};

// JSON Lines with keys exactly {name, gender, birth_date}; gender tokens
// {male, female, transgender female}; birth_date ISO-8601 (YYYY-MM-DD or
// YYYY) or null.
ParseResult<SourceRecord> parse_source_dump(std::istream& in, SourceId source,
                                            const std::string& stream_name,
                                            const ParseOptions& opts = {});

// JSON Lines with keys {youtube_id, title, description, upload_date,
// speaker_ids}. Duplicate youtube_id keeps the first occurrence.
ParseResult<VideoMeta> parse_video_meta(std::istream& in,
                                        const std::string& stream_name,
                                        const ParseOptions& opts = {});

// CSV `speaker_id,name,gender` (gender: m/f/male/female, or empty when the
// corpus has no label for the speaker). One row per speaker_id; the name is
// normalized into the person key.
ParseResult<OriginalLabel> parse_original_labels(std::istream& in,
                                                 const std::string& stream_name,
                                                 const ParseOptions& opts = {});

// CSV with header `speaker_id,utterance_id,age,gender,f0,...,fD-1`; age and
// gender may be empty. Dimension mismatch or NaN anywhere is fatal.
std::vector<EmbeddingRecord> parse_embeddings(std::istream& in,
                                              const std::string& stream_name);

// Serialization of SourceRecords back to dump format (used by the cached
// fetch path to persist connector results).
std::string source_record_to_jsonl(const SourceRecord& rec,
                                   const std::string& display_name);

}  // namespace voxmeta::ingest

#endif  // VOXMETA_INGEST_HPP
