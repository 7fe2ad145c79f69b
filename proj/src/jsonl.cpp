// src/jsonl.cpp

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

#include "voxmeta/jsonl.hpp"

#include <fstream>
#include <istream>

#include "json.hpp"
#include "voxmeta/common.hpp"

namespace voxmeta::jsonl {

void for_each_line(
    std::istream& in, const std::string& stream_name,
    const std::function<void(std::size_t, const std::string&)>& fn) {
  if (!in) throw IoError("cannot read " + stream_name);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    fn(line_no, line);
  }
  if (in.bad()) throw IoError("I/O failure while reading " + stream_name);
}

void write_rejects(std::ostream& out, const std::vector<RejectEntry>& rejects) {
  for (const auto& r : rejects) {
    nlohmann::ordered_json j;
    j["input_file"] = r.input_file;
    j["line"] = r.line;
    j["reason"] = r.reason;
    out << j.dump() << '\n';
  }
}

void write_rejects_file(const std::string& path,
                        const std::vector<RejectEntry>& rejects) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open rejects report " + path);
  write_rejects(out, rejects);
  if (!out.flush()) throw IoError("failed writing rejects report " + path);
}

}  // namespace voxmeta::jsonl
