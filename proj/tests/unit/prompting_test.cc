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

#include "mwpc/prompting.h"

#include <cctype>
#include <set>

#include "doctest.h"
#include "mwpc/errors.h"
#include "mwpc/hashing.h"
#include "test_util.h"

namespace mwpc {
namespace {

using testing::TempDir;
using testing::write_text;

Triplet francine() {
  Triplet t;
  t.id = "mathdial-5000001";
  t.question = "Francine drives 140km to work each day. If she does not go to work 3 days every week, "
               "find the total distance she drives to work for 4 weeks in kilometers.";
  t.reference_solution =
      "There are 7 days in a week, so if he doesn't go to work for 3 days, he goes 7-3 = 4 days every "
      "week. He travels 140km each day for a weekly total of 140*4 = 560km. In 4 weeks he will "
      "travel a total of 560 * 4 = 2240km.";
  t.reference_numeric = "2240";
  t.brief_explanation = "In 4 weeks he will travel a total of 560 * 4 = 2240km.";
  t.wrong_solution = "In a week, Francine drives 140km x 5 = 700km to work. ... Therefore, the total "
                     "distance she drives to work in 4 weeks is (700km x 4) - (140km x 12) = 2800km - "
                     "1680km = 1120km.";
  return t;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

TEST_CASE("mode tags round trip") {
  for (const PromptMode& m : all_prompt_modes()) {
    auto back = PromptMode::from_tag(m.tag());
    REQUIRE(back);
    CHECK(*back == m);
  }
  CHECK(PromptMode::reasoning().dop() == std::nullopt);
  CHECK(PromptMode::correction(Dop::kBE).tag() == "DOP_BE");
  CHECK(parse_dop("dop_na") == Dop::kNA);
  CHECK_FALSE(parse_dop("DOP_XX"));
  CHECK(all_prompt_modes().size() == 5);
}

TEST_CASE("DOP_NA prompt contains question, wrong solution and numeric answer") {
  auto p = render(francine(), PromptMode::correction(Dop::kNA));
  CHECK(contains(p.text, francine().question));
  CHECK(contains(p.text, "= 1120km."));
  CHECK(contains(p.text, "2240"));
  CHECK(contains(p.text, "Final answer: <number>"));
}

TEST_CASE("containment invariants for every mode") {
  Triplet t = francine();
  for (const PromptMode& m : all_prompt_modes()) {
    auto p = render(t, m);
    CHECK(p.triplet_id == t.id);
    CHECK(contains(p.text, t.question));
    if (m.task() == Task::kCorrection) CHECK(contains(p.text, t.wrong_solution));
    else CHECK_FALSE(contains(p.text, t.wrong_solution));
    if (m.dop() == Dop::kNA) CHECK(contains(p.text, t.reference_numeric));
    if (m.dop() == Dop::kBE) CHECK(contains(p.text, *t.brief_explanation));
    if (m.dop() == Dop::kSA) CHECK(contains(p.text, t.reference_solution));
    if (m.dop() == Dop::kSP || m.task() == Task::kReasoning) {
      CHECK_FALSE(contains(p.text, t.reference_solution));
      CHECK_FALSE(contains(p.text, *t.brief_explanation));
    }
  }
  // SA strictly adds triplet-derived content over SP.
  CHECK(render(t, PromptMode::correction(Dop::kSA)).text.size() >
        render(t, PromptMode::correction(Dop::kSP)).text.size());
}

TEST_CASE("rendering is deterministic and hashes depend on params") {
  auto a = render(francine(), PromptMode::reasoning());
  auto b = render(francine(), PromptMode::reasoning());
  CHECK(a.text == b.text);
  CHECK(a.content_hash == b.content_hash);
  CHECK(a.content_hash.size() == 64);
  auto c = render(francine(), PromptMode::reasoning(), SamplingParams{0.7, 1024});
  CHECK(c.content_hash != a.content_hash);
  CHECK(content_hash(a.template_id, a.text, {}) == a.content_hash);
}

TEST_CASE("render errors") {
  Triplet t = francine();
  t.brief_explanation.reset();
  CHECK_THROWS_AS(render(t, PromptMode::correction(Dop::kBE)), DataError);
  CHECK_NOTHROW(render(t, PromptMode::correction(Dop::kNA)));

  Triplet r = francine();
  r.wrong_solution = "";
  r.meta["reasoning_only"] = true;
  CHECK_NOTHROW(render(r, PromptMode::reasoning()));
  CHECK_THROWS_AS(render(r, PromptMode::correction(Dop::kSP)), DataError);
}

TEST_CASE("field values are substituted once") {
  Triplet t = francine();
  t.question = "What is {{reference_solution}} plus 2?";
  auto p = render(t, PromptMode::reasoning());
  CHECK(contains(p.text, "What is {{reference_solution}} plus 2?"));
  CHECK_FALSE(contains(p.text, "7 days in a week"));
}

TEST_CASE("distinct triplet and mode pairs give distinct hashes") {
  std::set<std::string> hashes;
  for (int i = 0; i < 30; ++i) {
    Triplet t = francine();
    t.id = "t" + std::to_string(i);
    t.question += " #" + std::to_string(i);
    for (const PromptMode& m : all_prompt_modes()) {
      auto p = render(t, m);
      CHECK(contains(p.text, t.question));
      CHECK(hashes.insert(p.content_hash).second);
    }
  }
}

TEST_CASE("default registry") {
  auto list = list_templates();
  REQUIRE(list.size() == 5);
  for (const auto& tpl : list) {
    std::set<std::string> used;
    for (auto& p : placeholders_in(tpl.text)) used.insert(p);
    std::set<std::string> required;
    for (auto r : required_placeholders(tpl.mode)) required.insert(std::string(r));
    CHECK(used == required);
    CHECK(tpl.template_id == template_id_for(tpl.mode, tpl.text));
    std::string prefix = tpl.mode.tag();
    for (char& ch : prefix) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    CHECK(tpl.template_id.rfind(prefix + "@", 0) == 0);
  }
  CHECK(template_id_for(PromptMode::correction(Dop::kNA), "abc") ==
        "dop_na@" + sha256_hex("abc").substr(0, 12));
}

TEST_CASE("shipped template files match the built-in defaults") {
  auto reg = TemplateRegistry::defaults();
  auto warnings = reg.load_directory(testing::data_dir() / "templates");
  CHECK(warnings.empty());
  auto builtin = list_templates();
  auto loaded = reg.list();
  REQUIRE(loaded.size() == builtin.size());
  for (std::size_t i = 0; i < loaded.size(); ++i) CHECK(loaded[i].template_id == builtin[i].template_id);
}

TEST_CASE("custom template directories") {
  TempDir dir;
  write_text(dir / "reasoning.txt", "Solve: {{question}}\nEnd with Final answer: <number>.\n");
  write_text(dir / "sp.txt", "Fix {{question}} only\n");            // missing wrong_solution
  write_text(dir / "dop_xx.txt", "{{question}} {{wrong_solution}}");  // unknown mode
  auto reg = TemplateRegistry::defaults();
  auto warnings = reg.load_directory(dir.path());
  CHECK(warnings.size() == 2);
  auto r = render(francine(), PromptMode::reasoning(), {}, reg);
  CHECK(r.text.rfind("Solve: Francine", 0) == 0);
  CHECK(r.template_id != list_templates()[0].template_id);
  // Rejected override leaves the default in place.
  CHECK(reg.get(PromptMode::correction(Dop::kSP)).template_id == list_templates()[1].template_id);
  CHECK_THROWS_AS(reg.load_directory(dir / "nope"), ConfigError);
}

}  // namespace
}  // namespace mwpc
