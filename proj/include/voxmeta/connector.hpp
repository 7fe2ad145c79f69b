// include/voxmeta/connector.hpp

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

#ifndef VOXMETA_CONNECTOR_HPP
#define VOXMETA_CONNECTOR_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "voxmeta/types.hpp"

namespace voxmeta::ingest {

// Transient connector failure (timeout, HTTP 5xx); retried with backoff.
class ConnectorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Pluggable get-by-name client for one knowledge source. Returns the raw
// response payload (one JSON object in dump-line format), or nullopt when
// the source has no entry for the person.
class SourceConnector {
 public:
  virtual ~SourceConnector() = default;
  virtual SourceId source_id() const = 0;
  virtual std::optional<std::string> get_by_name(const std::string& person_key) = 0;
};

// Serves canned responses from <root>/<source>/<sanitized-key>.json files.
// Missing file means the person is absent. Used by tests and offline runs.
class FileConnector final : public SourceConnector {
 public:
  FileConnector(std::string root, SourceId source)
      : root_(std::move(root)), source_(source) {}
  SourceId source_id() const override { return source_; }
  std::optional<std::string> get_by_name(const std::string& person_key) override;

 private:
  std::string root_;
  SourceId source_;
};

// Filesystem name for a cached entry: sanitized key plus a short hash so
// distinct keys never collide after sanitization.
std::string cache_entry_name(const std::string& person_key);

struct FetchResult {
  enum class Status { Found, Absent, Unavailable };
  Status status = Status::Unavailable;
  std::optional<SourceRecord> record;
  bool from_cache = false;
};

struct RetryPolicy {
  int attempts = 3;
  double base_delay_seconds = 0.5;
  // Injected so tests assert the backoff schedule without sleeping.
  std::function<void(double)> sleep;
};

// Directory-backed response cache with write-once-then-rename semantics.
// Layout: <dir>/<source>/<entry>.json holds raw response bytes;
// <entry>.absent is the negative-cache marker. Unavailable results are not
// cached so a later run can retry. Raw bytes are stored before parsing, so
// malformed payloads remain on disk for debugging.
class CachedFetcher {
 public:
  CachedFetcher(std::string cache_dir, SourceConnector& connector,
                RetryPolicy retry = {});

  FetchResult fetch(const std::string& person_key);

 private:
  std::string cache_dir_;
  SourceConnector& connector_;
  RetryPolicy retry_;
};

}  // namespace voxmeta::ingest

#endif  // VOXMETA_CONNECTOR_HPP
