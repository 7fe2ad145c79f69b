// include/voxmeta/csv.hpp

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

#ifndef VOXMETA_CSV_HPP
#define VOXMETA_CSV_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace voxmeta::csv {

// One parsed line; quoted fields per RFC 4180, trailing \r tolerated.
std::vector<std::string> split_line(std::string_view line);

// Quotes the field only when needed (comma, quote, newline).
std::string escape(std::string_view field);

std::string join(const std::vector<std::string>& fields);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column, -1 if absent.
  int column(std::string_view name) const;
};

// Reads header + rows verbatim; field-count validation is the caller's call
// (rejects for line-level formats, fatal for embeddings). Empty trailing
// lines are dropped. Throws IoError when the stream is unreadable.
Table read_table(std::istream& in, const std::string& stream_name);

// Shortest round-trip decimal rendering, stable across runs.
std::string format_double(double v);

}  // namespace voxmeta::csv

#endif  // VOXMETA_CSV_HPP
