// include/voxmeta/jsonl.hpp

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

#ifndef VOXMETA_JSONL_HPP
#define VOXMETA_JSONL_HPP

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace voxmeta {

// One line that failed to parse or validate; written to the rejects report
// as JSON Lines {input_file, line, reason}.
struct RejectEntry {
  std::string input_file;
  std::size_t line = 0;
  std::string reason;
};

namespace jsonl {

// Calls fn(line_number, raw_line) for every line (1-based). Throws IoError
// if the stream cannot be read.
void for_each_line(std::istream& in, const std::string& stream_name,
                   const std::function<void(std::size_t, const std::string&)>& fn);

void write_rejects(std::ostream& out, const std::vector<RejectEntry>& rejects);
void write_rejects_file(const std::string& path,
                        const std::vector<RejectEntry>& rejects);

}  // namespace jsonl
}  // namespace voxmeta

#endif  // VOXMETA_JSONL_HPP
