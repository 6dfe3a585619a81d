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

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "mwpc/errors.h"
#include "mwpc/extraction.h"
#include "mwpc/hashing.h"
#include "mwpc/jsonl.h"

namespace mwpc {
namespace {

bool blank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n\f\v") == std::string_view::npos;
}

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n\f\v");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n\f\v");
  return std::string(s.substr(b, e - b + 1));
}

std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Field value as text; numbers are stringified so numeric ids survive.
std::optional<std::string> text_field(const nlohmann::json& record,
                                      const std::string& name) {
  if (name.empty() || !record.is_object()) return std::nullopt;
  auto it = record.find(name);
  if (it == record.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number()) return it->dump();
  return std::nullopt;
}

std::string required_string(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string())
    throw DataError(std::string("field '") + key + "' missing or not a string");
  return it->get<std::string>();
}

// Splits text into sentences at '.', '!' or '?' followed by whitespace or the
// end, and at line breaks. Decimal points ("2.5") never split.
std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    std::string t = trim(current);
    if (!t.empty()) out.push_back(std::move(t));
    current.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\n') {
      flush();
      continue;
    }
    current.push_back(c);
    if ((c == '.' || c == '!' || c == '?') &&
        (i + 1 == text.size() || text[i + 1] == ' ' || text[i + 1] == '\n' ||
         text[i + 1] == '\t' || text[i + 1] == '\r')) {
      flush();
    }
  }
  flush();
  return out;
}

// Assigns unique ids: repeated base ids get "#2", "#3", ... suffixes.
class IdAllocator {
 public:
  std::string allocate(const std::string& base) {
    int& n = seen_[base];
    ++n;
    return n == 1 ? base : base + "#" + std::to_string(n);
  }

 private:
  std::unordered_map<std::string, int> seen_;
};

}  // namespace

bool Triplet::reasoning_only() const {
  auto it = meta.find("reasoning_only");
  return it != meta.end() && it->is_boolean() && it->get<bool>();
}

std::vector<std::string> triplet_violations(const Triplet& t) {
  std::vector<std::string> v;
  if (blank(t.id)) v.push_back("id is empty");
  if (blank(t.question)) v.push_back("question is empty");
  if (blank(t.reference_solution)) v.push_back("reference_solution is empty");
  if (!t.reasoning_only() && blank(t.wrong_solution))
    v.push_back("wrong_solution is empty");
  if (!t.meta.is_object()) v.push_back("meta is not an object");
  auto numeric = parse_number(t.reference_numeric);
  if (!numeric) {
    v.push_back("reference_numeric '" + t.reference_numeric +
                "' is not a canonical number");
  } else {
    auto extracted = extract(t.reference_solution);
    if (!extracted || !equal(*extracted, *numeric)) {
      v.push_back("extract(reference_solution) = " +
                  (extracted ? extracted->canonical() : std::string("<none>")) +
                  " does not equal reference_numeric " + t.reference_numeric);
    }
  }
  return v;
}

nlohmann::ordered_json triplet_to_json(const Triplet& t) {
  nlohmann::ordered_json j;
  j["id"] = t.id;
  j["question"] = t.question;
  j["reference_solution"] = t.reference_solution;
  j["reference_numeric"] = t.reference_numeric;
  j["brief_explanation"] =
      t.brief_explanation ? nlohmann::ordered_json(*t.brief_explanation)
                          : nlohmann::ordered_json(nullptr);
  j["wrong_solution"] = t.wrong_solution;
  j["source"] = t.source;
  // Plain json keeps keys sorted, so meta serializes canonically.
  j["meta"] = nlohmann::ordered_json::parse(t.meta.dump());
  return j;
}

Triplet triplet_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DataError("expected a JSON object");
  Triplet t;
  t.id = required_string(j, "id");
  t.question = required_string(j, "question");
  t.reference_solution = required_string(j, "reference_solution");
  t.reference_numeric = required_string(j, "reference_numeric");
  if (auto it = j.find("brief_explanation"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw DataError("field 'brief_explanation' is not a string");
    t.brief_explanation = it->get<std::string>();
  }
  t.wrong_solution = required_string(j, "wrong_solution");
  t.source = required_string(j, "source");
  if (auto it = j.find("meta"); it != j.end() && !it->is_null()) t.meta = *it;
  return t;
}

Dataset::Dataset(std::vector<Triplet> triplets, std::string source)
    : triplets_(std::move(triplets)) {
  std::unordered_set<std::string> ids;
  for (const Triplet& t : triplets_) {
    auto violations = triplet_violations(t);
    if (!violations.empty())
      throw DataError("triplet '" + t.id + "': " + violations.front());
    if (!ids.insert(t.id).second)
      throw DataError("triplet '" + t.id + "': id is not unique");
  }
  manifest_.source = std::move(source);
  manifest_.count = triplets_.size();
  manifest_.digest = sha256_hex(serialize_dataset(triplets_));
}

const Triplet* Dataset::find(std::string_view id) const {
  for (const Triplet& t : triplets_)
    if (t.id == id) return &t;
  return nullptr;
}

std::string serialize_dataset(const std::vector<Triplet>& triplets) {
  std::string out;
  for (const Triplet& t : triplets) {
    out += dump_json_line(triplet_to_json(t));
  }
  return out;
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::vector<Triplet> triplets;
  for_each_json_line(path, [&](std::size_t line_no, const nlohmann::json& j) {
    try {
      triplets.push_back(triplet_from_json(j));
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  });
  return Dataset(std::move(triplets), path.string());
}

std::filesystem::path manifest_path_for(const std::filesystem::path& dataset_path) {
  return std::filesystem::path(dataset_path.string() + ".manifest.json");
}

void write_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  write_file_atomic(path, serialize_dataset(dataset.triplets()));
  nlohmann::ordered_json manifest;
  manifest["count"] = dataset.manifest().count;
  manifest["digest"] = dataset.manifest().digest;
  manifest["created_at"] = utc_timestamp();
  manifest["tool_version"] = kToolVersion;
  write_file_atomic(manifest_path_for(path), manifest.dump(2) + "\n");
}

FieldMap FieldMap::from_json(const nlohmann::json& j) {
  FieldMap m;
  if (!j.is_object()) throw ConfigError("field map must be a JSON object");
  auto take = [&](const char* key, std::string& dst) {
    if (auto it = j.find(key); it != j.end()) {
      if (!it->is_string()) throw ConfigError(std::string("field map entry '") + key + "' must be a string");
      dst = it->get<std::string>();
    }
  };
  take("id", m.id);
  take("question", m.question);
  take("reference_solution", m.reference_solution);
  take("wrong_solution", m.wrong_solution);
  take("brief_explanation", m.brief_explanation);
  for (const auto& [key, _] : j.items()) {
    if (key != "id" && key != "question" && key != "reference_solution" &&
        key != "wrong_solution" && key != "brief_explanation")
      throw ConfigError("field map has unknown target '" + key + "'");
  }
  return m;
}

nlohmann::json FieldMap::to_json() const {
  return {{"id", id},
          {"question", question},
          {"reference_solution", reference_solution},
          {"wrong_solution", wrong_solution},
          {"brief_explanation", brief_explanation}};
}

nlohmann::json rejections_to_json(const std::vector<Rejection>& rejections) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Rejection& r : rejections)
    arr.push_back({{"line", r.line}, {"id", r.id}, {"reason", r.reason}});
  return arr;
}

std::optional<std::string> derive_brief_explanation(
    std::string_view reference_solution, std::string_view reference_numeric) {
  auto target = parse_number(reference_numeric);
  if (!target) return std::nullopt;
  std::string without_markers;
  std::istringstream lines{std::string(reference_solution)};
  for (std::string line; std::getline(lines, line);) {
    if (trim(line).rfind("####", 0) == 0) continue;
    without_markers += line;
    without_markers += '\n';
  }
  std::optional<std::string> best;
  for (const std::string& sentence : split_sentences(without_markers)) {
    for (const NumberToken& tok : scan_numbers(sentence)) {
      NumericAnswer value(tok.value, "", ExtractionRule::kLiteral);
      if (equal(value, *target)) {
        best = sentence;
        break;
      }
    }
  }
  return best;
}

IngestResult ingest_mathdial(const std::filesystem::path& path,
                             const FieldMap& field_map) {
  struct Raw {
    std::size_t line;
    nlohmann::json record;
  };
  std::vector<Raw> raws;
  for_each_json_line(path, [&](std::size_t line_no, const nlohmann::json& j) {
    raws.push_back({line_no, j});
  });

  // A mapping that misses in most records is a configuration mistake, not a
  // data-quality problem.
  if (!raws.empty()) {
    std::vector<std::string> bad;
    for (const std::string* field : {&field_map.question, &field_map.reference_solution,
                                     &field_map.wrong_solution}) {
      std::size_t missing = 0;
      for (const Raw& r : raws)
        if (!r.record.is_object() || !r.record.contains(*field)) ++missing;
      if (missing * 2 > raws.size()) bad.push_back(*field);
    }
    if (!bad.empty()) {
      std::string names;
      for (const auto& b : bad) names += (names.empty() ? "" : ", ") + b;
      throw ConfigError("field map references fields missing in more than half of the records: " +
                        names);
    }
  }

  IdAllocator ids;
  std::vector<Triplet> triplets;
  std::vector<Rejection> rejections;
  for (const Raw& r : raws) {
    std::string base_id = text_field(r.record, field_map.id).value_or("line" + std::to_string(r.line));
    std::string id = ids.allocate("mathdial-" + base_id);
    auto reject = [&](std::string reason) {
      rejections.push_back({r.line, id, std::move(reason)});
    };
    auto question = text_field(r.record, field_map.question);
    auto reference = text_field(r.record, field_map.reference_solution);
    auto wrong = text_field(r.record, field_map.wrong_solution);
    if (!question || blank(*question)) { reject("missing or empty '" + field_map.question + "'"); continue; }
    if (!reference || blank(*reference)) { reject("missing or empty '" + field_map.reference_solution + "'"); continue; }
    if (!wrong || blank(*wrong)) { reject("missing or empty '" + field_map.wrong_solution + "'"); continue; }
    auto numeric = extract(*reference);
    if (!numeric) { reject("no extractable number in reference solution"); continue; }

    Triplet t;
    t.id = id;
    t.question = *question;
    t.reference_solution = *reference;
    t.reference_numeric = numeric->canonical();
    t.wrong_solution = *wrong;
    t.source = "mathdial:" + base_id;
    t.meta = {{"source_line", r.line}};
    if (auto be = text_field(r.record, field_map.brief_explanation); be && !blank(*be)) {
      t.brief_explanation = *be;
      t.meta["be_derivation"] = "source";
    } else if (auto derived = derive_brief_explanation(t.reference_solution, t.reference_numeric)) {
      t.brief_explanation = *derived;
      t.meta["be_derivation"] = "last-sentence";
    } else {
      t.meta["be_derivation"] = "none";
    }
    auto violations = triplet_violations(t);
    if (!violations.empty()) { reject(violations.front()); continue; }
    triplets.push_back(std::move(t));
  }
  return IngestResult{Dataset(std::move(triplets), "mathdial:" + path.filename().string()),
                      std::move(rejections)};
}

IngestResult ingest_gsm8k(const std::filesystem::path& path) {
  IdAllocator ids;
  std::vector<Triplet> triplets;
  std::vector<Rejection> rejections;
  for_each_json_line(path, [&](std::size_t line_no, const nlohmann::json& record) {
    std::string base_id = text_field(record, "id").value_or(std::to_string(line_no));
    std::string id = ids.allocate("gsm8k-" + base_id);
    auto question = text_field(record, "question");
    auto answer = text_field(record, "answer");
    if (!question || blank(*question) || !answer || blank(*answer)) {
      rejections.push_back({line_no, id, "missing or empty 'question'/'answer'"});
      return;
    }
    auto numeric = extract(*answer);
    if (!numeric) {
      rejections.push_back({line_no, id, "no extractable number in answer"});
      return;
    }
    Triplet t;
    t.id = id;
    t.question = *question;
    t.reference_solution = *answer;
    t.reference_numeric = numeric->canonical();
    t.source = "gsm8k:" + base_id;
    t.meta = {{"reasoning_only", true}, {"source_line", line_no}};
    if (auto be = derive_brief_explanation(t.reference_solution, t.reference_numeric)) {
      t.brief_explanation = *be;
      t.meta["be_derivation"] = "last-sentence";
    } else {
      t.meta["be_derivation"] = "none";
    }
    auto violations = triplet_violations(t);
    if (!violations.empty()) {
      rejections.push_back({line_no, id, violations.front()});
      return;
    }
    triplets.push_back(std::move(t));
  });
  return IngestResult{Dataset(std::move(triplets), "gsm8k:" + path.filename().string()),
                      std::move(rejections)};
}

}  // namespace mwpc
