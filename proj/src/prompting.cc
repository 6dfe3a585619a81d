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

#include <algorithm>

#include "mwpc/errors.h"
#include "mwpc/hashing.h"
#include "mwpc/jsonl.h"

namespace mwpc {
namespace {

constexpr std::string_view kFinalAnswerInstruction =
    "state the final numeric answer on its own last line in the form "
    "\"Final answer: <number>\".";

std::string builtin_text(const PromptMode& mode) {
  const std::string instruction(kFinalAnswerInstruction);
  if (mode.task() == Task::kReasoning) {
    return "You are a careful math tutor. Solve the following math word problem "
           "step by step.\n"
           "\n"
           "Problem:\n"
           "{{question}}\n"
           "\n"
           "Show your reasoning, then " +
           instruction + "\n";
  }
  std::string text =
      "You are a math teacher reviewing a student's work. The student's solution "
      "to the problem below contains an error. Find the mistake and correct the "
      "solution.\n"
      "\n"
      "Problem:\n"
      "{{question}}\n"
      "\n"
      "Student's solution:\n"
      "{{wrong_solution}}\n"
      "\n";
  switch (*mode.dop()) {
    case Dop::kSP:
      break;
    case Dop::kNA:
      text += "Correct numeric answer:\n{{numeric_answer}}\n\n";
      break;
    case Dop::kBE:
      text += "Brief explanation of the correct solution:\n{{brief_explanation}}\n\n";
      break;
    case Dop::kSA:
      text += "Standard answer:\n{{reference_solution}}\n\n";
      break;
  }
  if (mode.dop() != Dop::kSP) {
    text += "Use the reference information above to diagnose where the student went wrong. ";
  }
  text += "Explain the student's mistake, write the corrected solution, then " +
          instruction + "\n";
  return text;
}

std::string lower(std::string s) {
  for (char& c : s)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return s;
}

std::optional<std::string_view> field_for(const Triplet& t, std::string_view name) {
  if (name == kQuestion) return t.question;
  if (name == kWrongSolution) return t.wrong_solution;
  if (name == kNumericAnswer) return t.reference_numeric;
  if (name == kReferenceSolution) return t.reference_solution;
  if (name == kBriefExplanation && t.brief_explanation) return *t.brief_explanation;
  return std::nullopt;
}

// Single left-to-right pass: substituted values are never re-scanned, so a
// question containing "{{" cannot pull in other fields.
std::string substitute(std::string_view text, const Triplet& t) {
  std::string out;
  out.reserve(text.size() + 1024);
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t open = text.find("{{", i);
    if (open == std::string_view::npos) break;
    std::size_t close = text.find("}}", open + 2);
    if (close == std::string_view::npos) break;
    out.append(text.substr(i, open - i));
    std::string_view name = text.substr(open + 2, close - open - 2);
    auto value = field_for(t, name);
    if (!value) throw DataError("template placeholder {{" + std::string(name) + "}} unavailable");
    out.append(*value);
    i = close + 2;
  }
  out.append(text.substr(i));
  return out;
}

}  // namespace

std::string_view to_string(Task task) {
  return task == Task::kReasoning ? "reasoning" : "correction";
}

std::string_view to_string(Dop dop) {
  switch (dop) {
    case Dop::kSP:
      return "SP";
    case Dop::kNA:
      return "DOP_NA";
    case Dop::kBE:
      return "DOP_BE";
    case Dop::kSA:
      return "DOP_SA";
  }
  return "SP";
}

std::optional<Task> parse_task(std::string_view s) {
  std::string l = lower(std::string(s));
  if (l == "reasoning") return Task::kReasoning;
  if (l == "correction") return Task::kCorrection;
  return std::nullopt;
}

std::optional<Dop> parse_dop(std::string_view s) {
  std::string l = lower(std::string(s));
  for (Dop d : kAllDops)
    if (lower(std::string(to_string(d))) == l) return d;
  return std::nullopt;
}

std::string PromptMode::tag() const {
  return dop_ ? std::string(to_string(*dop_)) : std::string("reasoning");
}

std::optional<PromptMode> PromptMode::from_tag(std::string_view tag) {
  if (lower(std::string(tag)) == "reasoning") return reasoning();
  if (auto d = parse_dop(tag)) return correction(*d);
  return std::nullopt;
}

std::vector<PromptMode> all_prompt_modes() {
  std::vector<PromptMode> modes = {PromptMode::reasoning()};
  for (Dop d : kAllDops) modes.push_back(PromptMode::correction(d));
  return modes;
}

std::vector<std::string_view> required_placeholders(const PromptMode& mode) {
  if (mode.task() == Task::kReasoning) return {kQuestion};
  std::vector<std::string_view> out = {kQuestion, kWrongSolution};
  switch (*mode.dop()) {
    case Dop::kSP:
      break;
    case Dop::kNA:
      out.push_back(kNumericAnswer);
      break;
    case Dop::kBE:
      out.push_back(kBriefExplanation);
      break;
    case Dop::kSA:
      out.push_back(kReferenceSolution);
      break;
  }
  return out;
}

std::vector<std::string> placeholders_in(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (true) {
    std::size_t open = text.find("{{", i);
    if (open == std::string_view::npos) break;
    std::size_t close = text.find("}}", open + 2);
    if (close == std::string_view::npos) break;
    std::string name(text.substr(open + 2, close - open - 2));
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
    i = close + 2;
  }
  return out;
}

std::string template_id_for(const PromptMode& mode, std::string_view text) {
  return lower(mode.tag()) + "@" + sha256_hex(text).substr(0, 12);
}

TemplateRegistry TemplateRegistry::defaults() {
  TemplateRegistry r;
  for (const PromptMode& mode : all_prompt_modes()) {
    std::string text = builtin_text(mode);
    r.templates_.emplace(mode, PromptTemplate{template_id_for(mode, text), mode, text});
  }
  return r;
}

std::vector<std::string> TemplateRegistry::load_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw ConfigError("templates directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::vector<std::string> warnings;
  for (const auto& file : files) {
    auto mode = file.extension() == ".txt" ? PromptMode::from_tag(file.stem().string())
                                           : std::nullopt;
    if (!mode) {
      warnings.push_back("ignoring unknown template file " + file.string());
      continue;
    }
    std::string text = read_file(file);
    auto found = placeholders_in(text);
    auto required = required_placeholders(*mode);
    std::vector<std::string> want(required.begin(), required.end());
    std::sort(found.begin(), found.end());
    std::sort(want.begin(), want.end());
    if (found != want) {
      std::string list;
      for (const auto& w : want) list += (list.empty() ? "" : ", ") + w;
      warnings.push_back("ignoring " + file.string() + ": placeholders must be exactly {" +
                         list + "}");
      continue;
    }
    templates_[*mode] = PromptTemplate{template_id_for(*mode, text), *mode, text};
  }
  return warnings;
}

const PromptTemplate& TemplateRegistry::get(const PromptMode& mode) const {
  return templates_.at(mode);
}

std::vector<PromptTemplate> TemplateRegistry::list() const {
  std::vector<PromptTemplate> out;
  for (const auto& [_, t] : templates_) out.push_back(t);
  return out;
}

std::vector<PromptTemplate> list_templates() { return TemplateRegistry::defaults().list(); }

std::string content_hash(std::string_view template_id, std::string_view text,
                         const SamplingParams& params) {
  nlohmann::json canonical = {
      {"params", {{"max_tokens", params.max_tokens}, {"temperature", params.temperature}}},
      {"template_id", template_id},
      {"text", text}};
  return sha256_hex(canonical.dump());
}

RenderedPrompt render(const Triplet& triplet, const PromptMode& mode,
                      const SamplingParams& params, const TemplateRegistry& registry) {
  if (mode.task() == Task::kCorrection) {
    if (triplet.reasoning_only() || triplet.wrong_solution.empty())
      throw DataError("triplet '" + triplet.id +
                      "' has no wrong solution; correction modes need one");
    if (mode.dop() == Dop::kBE && !triplet.brief_explanation)
      throw DataError("triplet '" + triplet.id + "' has no brief explanation for DOP_BE");
  }
  const PromptTemplate& tmpl = registry.get(mode);
  RenderedPrompt p;
  p.mode = mode;
  p.triplet_id = triplet.id;
  p.text = substitute(tmpl.text, triplet);
  p.template_id = tmpl.template_id;
  p.content_hash = content_hash(p.template_id, p.text, params);
  return p;
}

RenderedPrompt render(const Triplet& triplet, const PromptMode& mode,
                      const SamplingParams& params) {
  static const TemplateRegistry kDefaults = TemplateRegistry::defaults();
  return render(triplet, mode, params, kDefaults);
}

}  // namespace mwpc
