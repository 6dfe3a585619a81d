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

#include "doctest.h"
#include "mwpc/errors.h"

namespace mwpc {
namespace {

Triplet francine() {
  Triplet t;
  t.id = "francine";
  t.question = "Francine drives 140km to work each day...";
  t.reference_solution = "In 4 weeks he will travel a total of 560 * 4 = 2240km.";
  t.reference_numeric = "2240";
  t.wrong_solution = "... = 1120km.";
  return t;
}

const PromptMode kR = PromptMode::reasoning();
const PromptMode kSP = PromptMode::correction(Dop::kSP);

TEST_CASE("case-study outcomes") {
  auto r = score(francine(),
                 "Francine goes to work 7 - 3 = 4 days a week. This means that she drives a total of "
                 "140 * 4 =560km every week. Therefore in 4 weeks, she drives a total of 560 * 4 = 2240km.",
                 kR);
  CHECK(r.success);
  CHECK(r.reason == OutcomeReason::kMatched);
  REQUIRE(r.extracted);
  CHECK(r.extracted->canonical() == "2240");

  auto c = score(francine(), "Here is the correct solution ... 700km x 4 = 2800km to work. Answer: 2800km.", kSP);
  CHECK_FALSE(c.success);
  CHECK(c.reason == OutcomeReason::kMismatched);

  auto e = score(francine(), "", kSP);
  CHECK_FALSE(e.success);
  CHECK(e.reason == OutcomeReason::kNoExtraction);
  CHECK_FALSE(e.extracted);

  auto b = backend_error_outcome(francine(), kSP);
  CHECK_FALSE(b.success);
  CHECK(b.reason == OutcomeReason::kBackendError);
}

TEST_CASE("formatting-only differences still match") {
  CHECK(score(francine(), "Final answer: 2,240 km", kR).success);
  CHECK(score(francine(), "#### 2240.00", kR).success);
}

TEST_CASE("quadrant mapping and join") {
  CHECK(quadrant_of(true, true) == Quadrant::kSRSC);
  CHECK(quadrant_of(true, false) == Quadrant::kSRUC);
  CHECK(quadrant_of(false, true) == Quadrant::kURSC);
  CHECK(quadrant_of(false, false) == Quadrant::kURUC);
  CHECK(to_string(Quadrant::kURSC) == "uRsC");

  auto r = score(francine(), "2240", kR);
  auto c = score(francine(), "1120", kSP);
  auto j = join(r, c);
  CHECK(j.quadrant == Quadrant::kSRUC);
  CHECK(join(score(francine(), "0", kR), score(francine(), "2240", kSP)).quadrant == Quadrant::kURSC);

  Triplet other = francine();
  other.id = "other";
  CHECK_THROWS_AS(join(r, score(other, "1", kSP)), DataError);
  CHECK_THROWS_AS(join(c, r), DataError);
}

TEST_CASE("success iff matched") {
  for (const char* text : {"2240", "2241", "", "none", "#### 2240", "2240/1"}) {
    auto o = score(francine(), text, kR);
    CHECK(o.success == (o.reason == OutcomeReason::kMatched));
  }
}

TEST_CASE("scored outcome json round trip") {
  ScoredOutcome s{score(francine(), "Answer: 2,240", PromptMode::correction(Dop::kBE)), "gpt-x", "dop_be@abc"};
  auto j = scored_to_json(s);
  CHECK(j["triplet_id"] == "francine");
  CHECK(j["task"] == "correction");
  CHECK(j["dop"] == "DOP_BE");
  CHECK(j["extracted"] == "2240");
  CHECK(j["reason"] == "matched");
  auto back = scored_from_json(j);
  CHECK(scored_to_json(back) == j);

  ScoredOutcome none{score(francine(), "", kR), "m", "t"};
  auto jn = scored_to_json(none);
  CHECK(jn["extracted"].is_null());
  CHECK(jn["dop"].is_null());
  CHECK(scored_to_json(scored_from_json(jn)) == jn);
  CHECK(parse_outcome_reason("backend-error") == OutcomeReason::kBackendError);
}

}  // namespace
}  // namespace mwpc
