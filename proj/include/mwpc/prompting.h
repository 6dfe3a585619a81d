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

#ifndef MWPC_PROMPTING_H_
#define MWPC_PROMPTING_H_

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mwpc/triplets.h"

namespace mwpc {

enum class Task { kReasoning, kCorrection };

// Correction prompting levels: standard prompting and the three
// diagnostic-oriented levels (numeric answer, brief explanation, standard
// answer).
enum class Dop { kSP, kNA, kBE, kSA };

inline constexpr std::array<Dop, 4> kAllDops = {Dop::kSP, Dop::kNA, Dop::kBE,
                                                Dop::kSA};

std::string_view to_string(Task task);    // "reasoning" | "correction"
std::string_view to_string(Dop dop);      // "SP" | "DOP_NA" | "DOP_BE" | "DOP_SA"
std::optional<Task> parse_task(std::string_view s);
std::optional<Dop> parse_dop(std::string_view s);

class PromptMode {
 public:
  static PromptMode reasoning() { return PromptMode(Task::kReasoning, std::nullopt); }
  static PromptMode correction(Dop dop) { return PromptMode(Task::kCorrection, dop); }

  Task task() const { return task_; }
  // Always set for correction, never for reasoning.
  std::optional<Dop> dop() const { return dop_; }

  // "reasoning", "SP", "DOP_NA", ...; also used as template file stem in
  // lowercase.
  std::string tag() const;
  static std::optional<PromptMode> from_tag(std::string_view tag);

  friend bool operator==(const PromptMode&, const PromptMode&) = default;
  friend bool operator<(const PromptMode& a, const PromptMode& b) {
    return a.order() < b.order();
  }

 private:
  PromptMode(Task t, std::optional<Dop> d) : task_(t), dop_(d) {}
  int order() const { return dop_ ? 1 + static_cast<int>(*dop_) : 0; }

  Task task_;
  std::optional<Dop> dop_;
};

std::vector<PromptMode> all_prompt_modes();

struct SamplingParams {
  double temperature = 0.0;
  int max_tokens = 1024;
};

struct RenderedPrompt {
  PromptMode mode = PromptMode::reasoning();
  std::string triplet_id;
  std::string text;
  std::string template_id;
  std::string content_hash;
};

// Placeholder names usable in templates.
inline constexpr std::string_view kQuestion = "question";
inline constexpr std::string_view kWrongSolution = "wrong_solution";
inline constexpr std::string_view kNumericAnswer = "numeric_answer";
inline constexpr std::string_view kBriefExplanation = "brief_explanation";
inline constexpr std::string_view kReferenceSolution = "reference_solution";

// Exactly the placeholders a mode's template must use.
std::vector<std::string_view> required_placeholders(const PromptMode& mode);

// Placeholder names appearing as {{name}} in `text`, in order of first use.
std::vector<std::string> placeholders_in(std::string_view text);

struct PromptTemplate {
  std::string template_id;
  PromptMode mode = PromptMode::reasoning();
  std::string text;
};

// "<mode tag lowercased>@<first 12 hex chars of sha256(text)>": any wording
// change yields a new id.
std::string template_id_for(const PromptMode& mode, std::string_view text);

class TemplateRegistry {
 public:
  // Built-in zero-shot templates, one per mode.
  static TemplateRegistry defaults();

  // Overrides templates from `<dir>/<tag>.txt` files (reasoning.txt, sp.txt,
  // dop_na.txt, dop_be.txt, dop_sa.txt). Unknown files and templates whose
  // placeholder set does not match their mode are ignored; one warning string
  // is returned per ignored file. Throws ConfigError if `dir` is not a
  // directory.
  std::vector<std::string> load_directory(const std::filesystem::path& dir);

  const PromptTemplate& get(const PromptMode& mode) const;
  std::vector<PromptTemplate> list() const;

 private:
  std::map<PromptMode, PromptTemplate> templates_;
};

std::vector<PromptTemplate> list_templates();

// sha256 over the canonical JSON {"params":{...},"template_id":...,"text":...}.
std::string content_hash(std::string_view template_id, std::string_view text,
                         const SamplingParams& params);

// Renders `triplet` under `mode`. Throws DataError when the mode needs a
// field the triplet lacks (brief explanation for DOP_BE; a wrong solution for
// any correction mode).
RenderedPrompt render(const Triplet& triplet, const PromptMode& mode,
                      const SamplingParams& params,
                      const TemplateRegistry& registry);

RenderedPrompt render(const Triplet& triplet, const PromptMode& mode,
                      const SamplingParams& params = {});

}  // namespace mwpc

#endif  // MWPC_PROMPTING_H_
