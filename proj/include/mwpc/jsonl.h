// Copyright 2026 The MWPC Harness Authors.
// SPDX-License-Identifier: Apache-2.0
//
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

#ifndef MWPC_JSONL_H_
#define MWPC_JSONL_H_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <mutex>
#include <string>

#include "json.hpp"

namespace mwpc {

// Compact single-line dump terminated by '\n'. UTF-8 is kept as-is.
std::string dump_json_line(const nlohmann::ordered_json& j);
std::string dump_json_line(const nlohmann::json& j);

// Calls `fn(line_number, value)` for every non-blank line (1-based numbers).
// Throws DataError on I/O failure or a malformed line.
void for_each_json_line(
    const std::filesystem::path& path,
    const std::function<void(std::size_t, const nlohmann::json&)>& fn);

std::string read_file(const std::filesystem::path& path);

// Writes through a temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

// Append-only line log. Each append is a single write of a complete line, so
// a reader never observes a partial record. On open, a torn trailing line
// (no final '\n') left by a crash is cut off.
class AppendLog {
 public:
  explicit AppendLog(const std::filesystem::path& path);
  ~AppendLog();
  AppendLog(const AppendLog&) = delete;
  AppendLog& operator=(const AppendLog&) = delete;

  // Thread-safe; `line` must not contain '\n' except as its terminator.
  void append(std::string_view line);

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
  std::mutex mu_;
};

}  // namespace mwpc

#endif  // MWPC_JSONL_H_
