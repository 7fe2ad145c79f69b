// src/connector.cpp

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

#include "voxmeta/connector.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "voxmeta/common.hpp"
#include "voxmeta/ingest.hpp"
#include "voxmeta/rng.hpp"

namespace voxmeta::ingest {

namespace fs = std::filesystem;

namespace {

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Write-once-then-rename: concurrent fetchers never observe partial entries.
void write_atomic(const fs::path& path, const std::string& bytes) {
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write cache entry " + tmp.string());
    out << bytes;
    if (!out.flush()) throw IoError("failed writing cache entry " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot publish cache entry " + path.string());
}

// Parse one raw payload with the dump-line parser; a payload is valid iff it
// yields exactly one record and no rejects.
std::optional<SourceRecord> parse_payload(const std::string& payload,
                                          SourceId source) {
  std::istringstream in(payload);
  const auto parsed = parse_source_dump(in, source, "connector-payload");
  if (parsed.items.size() == 1 && parsed.rejects.empty())
    return parsed.items.front();
  return std::nullopt;
}

}  // namespace

std::string cache_entry_name(const std::string& person_key) {
  std::string sanitized;
  sanitized.reserve(person_key.size());
  for (char c : person_key) {
    const bool safe = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                      c == '.' || c == '-';
    sanitized.push_back(safe ? c : '_');
  }
  if (sanitized.size() > 64) sanitized.resize(64);
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a64(person_key)));
  return sanitized + "-" + hash;
}

std::optional<std::string> FileConnector::get_by_name(
    const std::string& person_key) {
  const fs::path path = fs::path(root_) / to_token(source_) /
                        (cache_entry_name(person_key) + ".json");
  return read_file(path);
}

CachedFetcher::CachedFetcher(std::string cache_dir, SourceConnector& connector,
                             RetryPolicy retry)
    : cache_dir_(std::move(cache_dir)), connector_(connector),
      retry_(std::move(retry)) {
  if (!retry_.sleep) {
    retry_.sleep = [](double seconds) {
      std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
    };
  }
  const fs::path dir = fs::path(cache_dir_) / to_token(connector_.source_id());
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create cache directory " + dir.string());
}

FetchResult CachedFetcher::fetch(const std::string& person_key) {
  const fs::path dir = fs::path(cache_dir_) / to_token(connector_.source_id());
  const std::string entry = cache_entry_name(person_key);
  const fs::path positive = dir / (entry + ".json");
  const fs::path negative = dir / (entry + ".absent");

  FetchResult result;
  if (const auto cached = read_file(positive)) {
    result.from_cache = true;
    result.record = parse_payload(*cached, connector_.source_id());
    result.status = result.record ? FetchResult::Status::Found
                                  : FetchResult::Status::Unavailable;
    return result;
  }
  if (fs::exists(negative)) {
    result.from_cache = true;
    result.status = FetchResult::Status::Absent;
    return result;
  }

  std::optional<std::string> payload;
  bool got_response = false;
  for (int attempt = 0; attempt < retry_.attempts; ++attempt) {
    try {
      payload = connector_.get_by_name(person_key);
      got_response = true;
      break;
    } catch (const ConnectorError&) {
      if (attempt + 1 < retry_.attempts)
        retry_.sleep(retry_.base_delay_seconds * std::pow(2.0, attempt));
    }
  }
  if (!got_response) {
    // Never fabricated, never cached: a later run may succeed.
    result.status = FetchResult::Status::Unavailable;
    return result;
  }
  if (!payload) {
    write_atomic(negative, "");
    result.status = FetchResult::Status::Absent;
    return result;
  }
  // Raw bytes land on disk before parsing.
  write_atomic(positive, *payload);
  result.record = parse_payload(*payload, connector_.source_id());
  result.status = result.record ? FetchResult::Status::Found
                                : FetchResult::Status::Unavailable;
  return result;
}

}  // namespace voxmeta::ingest
