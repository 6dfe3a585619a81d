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

#include "mwpc/triplets.h"

#include <random>

#include "doctest.h"
#include "mwpc/errors.h"
#include "mwpc/extraction.h"
#include "mwpc/hashing.h"
#include "mwpc/jsonl.h"
#include "test_util.h"

namespace mwpc {
namespace {

using testing::TempDir;
using testing::write_text;

Triplet francine() {
  Triplet t;
  t.id = "francine";
  t.question = "Francine drives 140km to work each day. If she does not go to work 3 days every week, "
               "find the total distance she drives to work for 4 weeks in kilometers.";
  t.reference_solution = "She goes 7-3 = 4 days every week. In 4 weeks he will travel a total of 560 * 4 = 2240km.";
  t.reference_numeric = "2240";
  t.brief_explanation = "In 4 weeks he will travel a total of 560 * 4 = 2240km.";
  t.wrong_solution = "(700km x 4) - (140km x 12) = 2800km - 1680km = 1120km.";
  t.source = "test";
  t.meta = {{"grade", 3}};
  return t;
}

TEST_CASE("valid triplet has no violations") { CHECK(triplet_violations(francine()).empty()); }

TEST_CASE("invariant violations are named") {
  Triplet t = francine();
  t.question = "   ";
  auto v = triplet_violations(t);
  REQUIRE_FALSE(v.empty());
  CHECK(v.front().find("question") != std::string::npos);

  t = francine();
  t.reference_numeric = "2800";
  CHECK_FALSE(triplet_violations(t).empty());

  t = francine();
  t.reference_numeric = "two";
  CHECK_FALSE(triplet_violations(t).empty());

  t = francine();
  t.wrong_solution = "";
  CHECK_FALSE(triplet_violations(t).empty());
  t.meta["reasoning_only"] = true;
  CHECK(triplet_violations(t).empty());
}

TEST_CASE("dataset rejects duplicate ids and names the bad triplet") {
  CHECK_THROWS_AS(Dataset({francine(), francine()}, "x"), DataError);
  Triplet bad = francine();
  bad.id = "bad-one";
  bad.question = "";
  try {
    Dataset({bad}, "x");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("bad-one") != std::string::npos);
    CHECK(std::string(e.what()).find("question") != std::string::npos);
  }
}

TEST_CASE("empty dataset") {
  TempDir dir;
  write_text(dir / "empty.jsonl", "");
  Dataset d = load_dataset(dir / "empty.jsonl");
  CHECK(d.size() == 0);
  CHECK(d.manifest().count == 0);
  CHECK(d.manifest().digest == sha256_hex(""));
}

TEST_CASE("load reports malformed line numbers") {
  TempDir dir;
  std::string good = dump_json_line(triplet_to_json(francine()));
  write_text(dir / "d.jsonl", good + "{not json\n");
  try {
    load_dataset(dir / "d.jsonl");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("d.jsonl:2:") != std::string::npos);
  }
  CHECK_THROWS_AS(load_dataset(dir / "missing.jsonl"), DataError);
}

TEST_CASE("round trip is byte-identical") {
  TempDir dir;
  std::vector<Triplet> ts;
  std::mt19937 rng(3);
  for (int i = 0; i < 50; ++i) {
    Triplet t = francine();
    t.id = "t" + std::to_string(i);
    t.question += " \"quoted\" \xC3\xA9 \\ tab\t" + std::to_string(rng());
    if (i % 3 == 0) t.brief_explanation.reset();
    t.meta = {{"z", i}, {"a", {{"nested", true}}}};
    ts.push_back(t);
  }
  Dataset d(ts, "gen");
  write_dataset(dir / "a.jsonl", d);
  std::string first = read_file(dir / "a.jsonl");
  CHECK(first == serialize_dataset(d.triplets()));
  Dataset again = load_dataset(dir / "a.jsonl");
  CHECK(serialize_dataset(again.triplets()) == first);
  CHECK(again.manifest().digest == d.manifest().digest);
  CHECK(again.manifest().digest == sha256_hex(first));

  auto manifest = nlohmann::json::parse(read_file(manifest_path_for(dir / "a.jsonl")));
  CHECK(manifest["count"] == 50);
  CHECK(manifest["digest"] == d.manifest().digest);
  CHECK(manifest.contains("created_at"));
  CHECK(manifest["tool_version"] == std::string(kToolVersion));
}

TEST_CASE("json schema uses the documented field names") {
  auto j = triplet_to_json(francine());
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"id", "question", "reference_solution", "reference_numeric",
                                         "brief_explanation", "wrong_solution", "source", "meta"});
  Triplet t = francine();
  t.brief_explanation.reset();
  CHECK(triplet_to_json(t)["brief_explanation"].is_null());
}

TEST_CASE("mathdial ingestion of the Francine record") {
  auto result = ingest_mathdial(testing::fixtures_dir() / "ingest" / "mathdial_10.jsonl");
  CHECK(result.rejections.empty());
  REQUIRE(result.dataset.size() == 10);
  const Triplet* t = result.dataset.find("mathdial-5000001");
  REQUIRE(t != nullptr);
  CHECK(t->reference_numeric == "2240");
  CHECK(t->brief_explanation == "In 4 weeks he will travel a total of 560 * 4 = 2240km.");
  CHECK(t->meta["be_derivation"] == "last-sentence");
  CHECK(t->source == "mathdial:5000001");

  // Deterministic digest.
  auto again = ingest_mathdial(testing::fixtures_dir() / "ingest" / "mathdial_10.jsonl");
  CHECK(again.dataset.manifest().digest == result.dataset.manifest().digest);
}

TEST_CASE("mathdial rejections and field maps") {
  TempDir dir;
  write_text(dir / "src.jsonl",
             R"({"qid": 1, "question": "Q1?", "ground_truth": "It is 4 + 5 = 9.", "student_incorrect_solution": "It is 8."})"
             "\n"
             R"({"qid": 2, "question": "Q2?", "ground_truth": "No idea at all.", "student_incorrect_solution": "It is 8."})"
             "\n"
             R"({"qid": 1, "question": "Q3?", "ground_truth": "The total is 12.", "student_incorrect_solution": ""})"
             "\n"
             R"({"qid": 1, "question": "Q4?", "ground_truth": "Total 20.", "student_incorrect_solution": "19", "be": "Add them: 20."})"
             "\n");
  auto r = ingest_mathdial(dir / "src.jsonl");
  CHECK(r.dataset.size() == 2);
  REQUIRE(r.rejections.size() == 2);
  CHECK(r.rejections[0].line == 2);
  CHECK(r.rejections[0].reason.find("no extractable number") != std::string::npos);
  CHECK(r.rejections[1].line == 3);
  // Repeated qids get suffixed ids.
  CHECK(r.dataset.triplets()[0].id == "mathdial-1");
  CHECK(r.dataset.triplets()[1].id != "mathdial-1");

  FieldMap map;
  map.brief_explanation = "be";
  auto with_be = ingest_mathdial(dir / "src.jsonl", map);
  const Triplet& last = with_be.dataset.triplets().back();
  CHECK(last.brief_explanation == "Add them: 20.");
  CHECK(last.meta["be_derivation"] == "source");

  FieldMap wrong;
  wrong.question = "problem";
  wrong.wrong_solution = "student";
  try {
    ingest_mathdial(dir / "src.jsonl", wrong);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("problem") != std::string::npos);
    CHECK(std::string(e.what()).find("student") != std::string::npos);
  }
  CHECK_THROWS_AS(FieldMap::from_json({{"questoin", "x"}}), ConfigError);
  CHECK(FieldMap::from_json(map.to_json()).brief_explanation == "be");
}

TEST_CASE("gsm8k ingestion") {
  auto r = ingest_gsm8k(testing::fixtures_dir() / "ingest" / "gsm8k_sample.jsonl");
  REQUIRE(r.dataset.size() == 3);
  CHECK(r.rejections.size() == 1);
  const auto& ts = r.dataset.triplets();
  CHECK(ts[0].reference_numeric == "72");
  CHECK(ts[1].reference_numeric == "10");
  CHECK(ts[2].reference_numeric == "2240");
  for (const auto& t : ts) {
    CHECK(t.reasoning_only());
    CHECK(t.wrong_solution.empty());
  }
}

TEST_CASE("brief explanation derivation") {
  CHECK(derive_brief_explanation("A is 3. So B = 3 * 2 = 6. Done!", "6") == "So B = 3 * 2 = 6.");
  CHECK(derive_brief_explanation("First 6 apples.\nThen 2 more gives 8 apples\n#### 8", "8") ==
        "Then 2 more gives 8 apples");
  CHECK(derive_brief_explanation("Half is 0.5 of it.", "1/2") == "Half is 0.5 of it.");
  CHECK_FALSE(derive_brief_explanation("#### 8", "8"));
  CHECK_FALSE(derive_brief_explanation("Nothing here.", "8"));
}

TEST_CASE("property: ingestion never emits invalid triplets") {
  TempDir dir;
  std::mt19937 rng(99);
  const std::vector<std::string> questions = {"", "  ", "How many?", "Q with 5 apples?"};
  const std::vector<std::string> refs = {"", "no number", "It is 12.", "#### 7", "Total: 1,000 + 5 = 1,005."};
  const std::vector<std::string> wrongs = {"", " ", "It is 11."};
  std::string src;
  for (int i = 0; i < 200; ++i) {
    nlohmann::json rec;
    rec["qid"] = i;
    if (rng() % 10) rec["question"] = questions[rng() % questions.size()];
    if (rng() % 10) rec["ground_truth"] = refs[rng() % refs.size()];
    if (rng() % 10) rec["student_incorrect_solution"] = wrongs[rng() % wrongs.size()];
    if (rng() % 15 == 0) rec["ground_truth"] = 42;  // wrong type
    src += rec.dump() + "\n";
  }
  write_text(dir / "fuzz.jsonl", src);
  auto r = ingest_mathdial(dir / "fuzz.jsonl");
  CHECK(r.dataset.size() + r.rejections.size() == 200);
  for (const auto& t : r.dataset.triplets()) CHECK(triplet_violations(t).empty());
}

}  // namespace
}  // namespace mwpc
