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

#ifndef MWPC_RUNNER_H_
#define MWPC_RUNNER_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mwpc/backends.h"
#include "mwpc/prompting.h"
#include "mwpc/scoring.h"
#include "mwpc/triplets.h"

namespace mwpc {

struct ExperimentConfig {
  std::filesystem::path dataset;
  ModelSpec model;
  std::vector<Task> tasks = {Task::kReasoning, Task::kCorrection};
  std::vector<Dop> modes = {Dop::kSP};
  int concurrency = 1;
  std::filesystem::path output_dir;
  std::optional<std::filesystem::path> templates_dir;

  // Throws ConfigError.
  void validate() const;

  // Relative paths (dataset, output_dir, templates_dir, scripted fixture) are
  // resolved against `base_dir`.
  static ExperimentConfig from_json(const nlohmann::json& j,
                                    const std::filesystem::path& base_dir = {});
  static ExperimentConfig from_file(const std::filesystem::path& path);

  // Echo suitable for config.json: credential-like keys never appear.
  nlohmann::ordered_json to_json() const;
};

// Removes values of keys that look like credentials (api_key, token, secret,
// password, authorization) anywhere in `j`.
nlohmann::json redact_credentials(const nlohmann::json& j);

// One model interaction, persisted as a line of records.jsonl.
struct RunRecord {
  std::string run_id;
  std::string triplet_id;
  std::string model;
  PromptMode mode = PromptMode::reasoning();
  std::string template_id;
  std::string content_hash;
  std::string prompt;
  std::string response;
  int attempts = 0;
  double latency_ms = 0.0;
  std::optional<std::string> error;
  // Replayed from an earlier record with the same (model, content_hash).
  bool cached = false;
  std::string timestamp;

  nlohmann::ordered_json to_json() const;
  static RunRecord from_json(const nlohmann::json& j);
};

std::vector<RunRecord> load_records(const std::filesystem::path& records_path);

struct RunSummary {
  std::string run_id;
  std::size_t cells = 0;
  std::size_t cached = 0;
  std::size_t fresh = 0;
  std::size_t failed = 0;
  // Cells not attempted because the run was stopped early.
  std::size_t pending = 0;
  // Cells excluded from the grid (reasoning-only triplets in correction
  // modes, DOP_BE without a brief explanation).
  std::size_t skipped = 0;
  std::vector<std::string> warnings;

  nlohmann::ordered_json to_json() const;
};

struct RunOptions {
  // Stop handing out new work after this many fresh dispatches; simulates an
  // interrupted run.
  std::optional<std::size_t> max_fresh_calls;
};

// File names inside a run directory.
inline constexpr std::string_view kRecordsFile = "records.jsonl";
inline constexpr std::string_view kConfigFile = "config.json";
inline constexpr std::string_view kManifestFile = "manifest.json";
inline constexpr std::string_view kScoredFile = "scored.jsonl";

// Runs every (triplet, task, mode) cell not yet completed for this model.
// Reasoning counts once per triplet; correction once per mode. Cells whose
// (model, content_hash) already has a successful record are replayed from the
// cache without calling `backend`. Backend failures are recorded, not thrown.
RunSummary run(const ExperimentConfig& config, Backend& backend, const RunOptions& options = {});

// Same, constructing the backend from config.model.
RunSummary run(const ExperimentConfig& config, const RunOptions& options = {});

// Scores stored responses. Per cell the latest successful record wins; a cell
// with only failed records scores as backend-error. Output order follows the
// dataset, then reasoning before correction modes. Throws DataError on
// records naming unknown triplets.
std::vector<ScoredOutcome> rescore(const std::filesystem::path& run_dir, const Dataset& dataset);

std::string serialize_scored(const std::vector<ScoredOutcome>& outcomes);
void write_scored(const std::filesystem::path& path, const std::vector<ScoredOutcome>& outcomes);
std::vector<ScoredOutcome> load_scored(const std::filesystem::path& path);

}  // namespace mwpc

#endif  // MWPC_RUNNER_H_
