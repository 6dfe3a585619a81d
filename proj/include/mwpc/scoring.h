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

#ifndef MWPC_SCORING_H_
#define MWPC_SCORING_H_

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "mwpc/extraction.h"
#include "mwpc/prompting.h"
#include "mwpc/triplets.h"

namespace mwpc {

enum class OutcomeReason { kMatched, kMismatched, kNoExtraction, kBackendError };

std::string_view to_string(OutcomeReason reason);
std::optional<OutcomeReason> parse_outcome_reason(std::string_view s);

// Success state of one model response. success holds iff reason is kMatched.
struct Outcome {
  std::string triplet_id;
  PromptMode mode = PromptMode::reasoning();
  std::optional<NumericAnswer> extracted;
  bool success = false;
  OutcomeReason reason = OutcomeReason::kNoExtraction;
};

// Extracts the final answer from `response_text` and compares it with the
// triplet's reference numeric.
Outcome score(const Triplet& triplet, std::string_view response_text,
              const PromptMode& mode, double tolerance = kDefaultTolerance);

// A cell whose request failed: unsuccessful, kept distinguishable from model
// failures.
Outcome backend_error_outcome(const Triplet& triplet, const PromptMode& mode);

enum class Quadrant { kSRSC, kSRUC, kURSC, kURUC };

std::string_view to_string(Quadrant q);
Quadrant quadrant_of(bool reasoned, bool corrected);

struct JointOutcome {
  std::string triplet_id;
  bool s_r = false;
  bool s_c = false;
  Quadrant quadrant = Quadrant::kURUC;
};

// Throws DataError on mismatched ids or tasks.
JointOutcome join(const Outcome& reasoning, const Outcome& correction);

// Outcome plus run attribution, as stored in scored-outcome JSONL files.
struct ScoredOutcome {
  Outcome outcome;
  std::string model;
  std::string template_id;
};

nlohmann::ordered_json scored_to_json(const ScoredOutcome& s);
ScoredOutcome scored_from_json(const nlohmann::json& j);

}  // namespace mwpc

#endif  // MWPC_SCORING_H_
