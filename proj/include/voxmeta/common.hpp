// include/voxmeta/common.hpp

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

#ifndef VOXMETA_COMMON_HPP
#define VOXMETA_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace voxmeta {

// Error taxonomy shared by the library and the CLI. The CLI maps each class
// to a fixed process exit code: validation = 1, I/O = 2, numeric = 3.
class Error : public std::runtime_error {
 public:
  Error(std::string msg, int exit_code)
      : std::runtime_error(std::move(msg)), exit_code_(exit_code) {}
  int exit_code() const { return exit_code_; }

 private:
  int exit_code_;
};

// Bad inputs, bad flags, inconsistent configuration.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::string msg) : Error(std::move(msg), 1) {}
};

// Unreadable or unwritable streams and files.
class IoError : public Error {
 public:
  explicit IoError(std::string msg) : Error(std::move(msg), 2) {}
};

// NaN/Inf data, dimension mismatches inside numeric routines, failed solves.
class NumericError : public Error {
 public:
  explicit NumericError(std::string msg) : Error(std::move(msg), 3) {}
};

}  // namespace voxmeta

#endif  // VOXMETA_COMMON_HPP
