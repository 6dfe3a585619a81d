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

#ifndef MWPC_TRIPLETS_H_
#define MWPC_TRIPLETS_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace mwpc {

inline constexpr std::string_view kToolVersion = "0.1.0";

// One {question, reference answer, wrong solution} evaluation unit.
struct Triplet {
  std::string id;
  std::string question;
  std::string reference_solution;
  std::string reference_numeric;
  std::optional<std::string> brief_explanation;
  std::string wrong_solution;
  std::string source;
  nlohmann::json meta = nlohmann::json::object();

  // Records without a wrong solution (GSM8k-style) only take part in
  // reasoning runs.
  bool reasoning_only() const;
};

// Returns one message per violated invariant; empty when the triplet is valid.
std::vector<std::string> triplet_violations(const Triplet& t);

nlohmann::ordered_json triplet_to_json(const Triplet& t);
Triplet triplet_from_json(const nlohmann::json& j);

struct DatasetManifest {
  std::string source;
  std::size_t count = 0;
  std::string digest;
};

// Ordered, validated collection of triplets. Immutable after construction.
class Dataset {
 public:
  Dataset() : Dataset(std::vector<Triplet>{}, "") {}

  // Throws DataError naming the triplet id and the violated invariant, or a
  // duplicated id.
  Dataset(std::vector<Triplet> triplets, std::string source);

  const std::vector<Triplet>& triplets() const { return triplets_; }
  const DatasetManifest& manifest() const { return manifest_; }
  std::size_t size() const { return triplets_.size(); }

  // nullptr when absent.
  const Triplet* find(std::string_view id) const;

 private:
  std::vector<Triplet> triplets_;
  DatasetManifest manifest_;
};

// Canonical JSONL bytes: one object per line, fixed key order, '\n' endings.
std::string serialize_dataset(const std::vector<Triplet>& triplets);

Dataset load_dataset(const std::filesystem::path& path);

// Writes the JSONL file plus a "<path>.manifest.json" sidecar holding
// {count, digest, created_at, tool_version}.
void write_dataset(const std::filesystem::path& path, const Dataset& dataset);

std::filesystem::path manifest_path_for(const std::filesystem::path& dataset_path);

// Source field names for MathDial-style records. `brief_explanation` is
// optional; when empty or missing in a record the explanation is derived.
struct FieldMap {
  std::string id = "qid";
  std::string question = "question";
  std::string reference_solution = "ground_truth";
  std::string wrong_solution = "student_incorrect_solution";
  std::string brief_explanation;

  static FieldMap from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct Rejection {
  std::size_t line = 0;
  std::string id;
  std::string reason;
};

struct IngestResult {
  Dataset dataset;
  std::vector<Rejection> rejections;
};

nlohmann::json rejections_to_json(const std::vector<Rejection>& rejections);

IngestResult ingest_mathdial(const std::filesystem::path& path,
                             const FieldMap& field_map = {});

IngestResult ingest_gsm8k(const std::filesystem::path& path);

// Last sentence of `reference_solution` mentioning `reference_numeric` as a
// number, ignoring "####" marker lines. nullopt when no sentence qualifies.
std::optional<std::string> derive_brief_explanation(
    std::string_view reference_solution, std::string_view reference_numeric);

}  // namespace mwpc

#endif  // MWPC_TRIPLETS_H_
