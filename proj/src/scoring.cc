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

#include "mwpc/scoring.h"

#include "mwpc/errors.h"

namespace mwpc {

std::string_view to_string(OutcomeReason reason) {
  switch (reason) {
    case OutcomeReason::kMatched:
      return "matched";
    case OutcomeReason::kMismatched:
      return "mismatched";
    case OutcomeReason::kNoExtraction:
      return "no-extraction";
    case OutcomeReason::kBackendError:
      return "backend-error";
  }
  return "no-extraction";
}

std::optional<OutcomeReason> parse_outcome_reason(std::string_view s) {
  for (auto r : {OutcomeReason::kMatched, OutcomeReason::kMismatched,
                 OutcomeReason::kNoExtraction, OutcomeReason::kBackendError})
    if (to_string(r) == s) return r;
  return std::nullopt;
}

Outcome score(const Triplet& triplet, std::string_view response_text,
              const PromptMode& mode, double tolerance) {
  Outcome o;
  o.triplet_id = triplet.id;
  o.mode = mode;
  o.extracted = extract(response_text);
  if (!o.extracted) {
    o.reason = OutcomeReason::kNoExtraction;
    return o;
  }
  auto reference = parse_number(triplet.reference_numeric);
  if (!reference) throw DataError("triplet '" + triplet.id + "' has an invalid reference_numeric");
  o.success = equal(*o.extracted, *reference, tolerance);
  o.reason = o.success ? OutcomeReason::kMatched : OutcomeReason::kMismatched;
  return o;
}

Outcome backend_error_outcome(const Triplet& triplet, const PromptMode& mode) {
  Outcome o;
  o.triplet_id = triplet.id;
  o.mode = mode;
  o.reason = OutcomeReason::kBackendError;
  return o;
}

std::string_view to_string(Quadrant q) {
  switch (q) {
    case Quadrant::kSRSC:
      return "sRsC";
    case Quadrant::kSRUC:
      return "sRuC";
    case Quadrant::kURSC:
      return "uRsC";
    case Quadrant::kURUC:
      return "uRuC";
  }
  return "uRuC";
}

Quadrant quadrant_of(bool reasoned, bool corrected) {
  if (reasoned) return corrected ? Quadrant::kSRSC : Quadrant::kSRUC;
  return corrected ? Quadrant::kURSC : Quadrant::kURUC;
}

JointOutcome join(const Outcome& reasoning, const Outcome& correction) {
  if (reasoning.triplet_id != correction.triplet_id)
    throw DataError("cannot join outcomes of '" + reasoning.triplet_id + "' and '" +
                    correction.triplet_id + "'");
  if (reasoning.mode.task() != Task::kReasoning || correction.mode.task() != Task::kCorrection)
    throw DataError("join expects a reasoning outcome and a correction outcome for '" +
                    reasoning.triplet_id + "'");
  return JointOutcome{reasoning.triplet_id, reasoning.success, correction.success,
                      quadrant_of(reasoning.success, correction.success)};
}

nlohmann::ordered_json scored_to_json(const ScoredOutcome& s) {
  const Outcome& o = s.outcome;
  nlohmann::ordered_json j;
  j["triplet_id"] = o.triplet_id;
  j["task"] = to_string(o.mode.task());
  j["dop"] = o.mode.dop() ? nlohmann::ordered_json(to_string(*o.mode.dop()))
                          : nlohmann::ordered_json(nullptr);
  j["model"] = s.model;
  j["template_id"] = s.template_id;
  j["extracted"] = o.extracted ? nlohmann::ordered_json(o.extracted->canonical())
                               : nlohmann::ordered_json(nullptr);
  j["success"] = o.success;
  j["reason"] = to_string(o.reason);
  return j;
}

ScoredOutcome scored_from_json(const nlohmann::json& j) {
  try {
    ScoredOutcome s;
    s.outcome.triplet_id = j.at("triplet_id").get<std::string>();
    auto task = parse_task(j.at("task").get<std::string>());
    if (!task) throw DataError("unknown task " + j.at("task").dump());
    if (*task == Task::kReasoning) {
      s.outcome.mode = PromptMode::reasoning();
    } else {
      auto dop = parse_dop(j.at("dop").get<std::string>());
      if (!dop) throw DataError("unknown dop " + j.at("dop").dump());
      s.outcome.mode = PromptMode::correction(*dop);
    }
    s.model = j.at("model").get<std::string>();
    s.template_id = j.at("template_id").get<std::string>();
    if (!j.at("extracted").is_null()) {
      auto value = parse_number(j.at("extracted").get<std::string>());
      if (!value) throw DataError("unparseable extracted value " + j.at("extracted").dump());
      s.outcome.extracted = value;
    }
    s.outcome.success = j.at("success").get<bool>();
    auto reason = parse_outcome_reason(j.at("reason").get<std::string>());
    if (!reason) throw DataError("unknown reason " + j.at("reason").dump());
    s.outcome.reason = *reason;
    if (s.outcome.success != (s.outcome.reason == OutcomeReason::kMatched))
      throw DataError("success must hold exactly when reason is 'matched'");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed scored outcome: ") + e.what());
  }
}

}  // namespace mwpc
