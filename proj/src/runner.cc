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

#include "mwpc/runner.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <map>
#include <random>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "mwpc/errors.h"
#include "mwpc/hashing.h"
#include "mwpc/jsonl.h"

namespace mwpc {
namespace {

namespace fs = std::filesystem;

std::string utc_now(const char* format) {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[40];
  std::strftime(buf, sizeof(buf), format, &tm);
  return buf;
}

std::string new_run_id() {
  std::random_device rd;
  char suffix[9];
  std::snprintf(suffix, sizeof(suffix), "%08x", static_cast<unsigned>(rd()));
  return "run-" + utc_now("%Y%m%dT%H%M%SZ") + "-" + suffix;
}

fs::path resolve(const fs::path& p, const fs::path& base) {
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

bool credential_key(std::string key) {
  for (char& c : key)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  if (key == "auth_env") return false;  // names a variable, holds no secret
  for (const char* needle : {"api_key", "apikey", "token", "secret", "password", "authorization"})
    if (key.find(needle) != std::string::npos) return true;
  return false;
}

std::string cell_key(std::string_view triplet_id, const PromptMode& mode) {
  return std::string(triplet_id) + "|" + mode.tag();
}

struct Cell {
  const Triplet* triplet;
  RenderedPrompt prompt;
};

}  // namespace

void ExperimentConfig::validate() const {
  model.validate();
  if (dataset.empty()) throw ConfigError("config: dataset path is required");
  if (output_dir.empty()) throw ConfigError("config: output_dir is required");
  if (concurrency < 1) throw ConfigError("config: concurrency must be >= 1");
  if (tasks.empty()) throw ConfigError("config: tasks must be non-empty");
  bool correction = std::find(tasks.begin(), tasks.end(), Task::kCorrection) != tasks.end();
  if (correction && modes.empty())
    throw ConfigError("config: modes must be non-empty when correction is selected");
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    ExperimentConfig c;
    c.dataset = resolve(j.at("dataset").get<std::string>(), base_dir);
    c.model = ModelSpec::from_json(j.at("model"));
    if (c.model.is_scripted()) {
      c.model.endpoint = "scripted:" + resolve(c.model.endpoint.substr(9), base_dir).string();
    }
    if (j.contains("tasks")) {
      c.tasks.clear();
      for (const auto& t : j["tasks"]) {
        auto task = parse_task(t.get<std::string>());
        if (!task) throw ConfigError("config: unknown task " + t.dump());
        c.tasks.push_back(*task);
      }
    }
    if (j.contains("modes")) {
      c.modes.clear();
      for (const auto& m : j["modes"]) {
        auto dop = parse_dop(m.get<std::string>());
        if (!dop) throw ConfigError("config: unknown mode " + m.dump());
        c.modes.push_back(*dop);
      }
    }
    c.concurrency = j.value("concurrency", 1);
    c.output_dir = resolve(j.at("output_dir").get<std::string>(), base_dir);
    if (auto it = j.find("templates_dir"); it != j.end() && !it->is_null())
      c.templates_dir = resolve(it->get<std::string>(), base_dir);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig ExperimentConfig::from_file(const fs::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  return from_json(j, path.parent_path());
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  j["dataset"] = dataset.string();
  j["model"] = model.to_json();
  j["tasks"] = nlohmann::ordered_json::array();
  for (Task t : tasks) j["tasks"].push_back(to_string(t));
  j["modes"] = nlohmann::ordered_json::array();
  for (Dop d : modes) j["modes"].push_back(to_string(d));
  j["concurrency"] = concurrency;
  j["output_dir"] = output_dir.string();
  j["templates_dir"] = templates_dir ? nlohmann::ordered_json(templates_dir->string())
                                     : nlohmann::ordered_json(nullptr);
  return j;
}

nlohmann::json redact_credentials(const nlohmann::json& j) {
  if (j.is_object()) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [key, value] : j.items())
      out[key] = credential_key(key) ? nlohmann::json("<redacted>") : redact_credentials(value);
    return out;
  }
  if (j.is_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& v : j) out.push_back(redact_credentials(v));
    return out;
  }
  return j;
}

nlohmann::ordered_json RunRecord::to_json() const {
  nlohmann::ordered_json j;
  j["run_id"] = run_id;
  j["triplet_id"] = triplet_id;
  j["model"] = model;
  j["task"] = to_string(mode.task());
  j["dop"] = mode.dop() ? nlohmann::ordered_json(to_string(*mode.dop()))
                        : nlohmann::ordered_json(nullptr);
  j["template_id"] = template_id;
  j["content_hash"] = content_hash;
  j["prompt"] = prompt;
  j["response"] = response;
  j["attempts"] = attempts;
  j["latency_ms"] = latency_ms;
  j["error"] = error ? nlohmann::ordered_json(*error) : nlohmann::ordered_json(nullptr);
  j["cached"] = cached;
  j["timestamp"] = timestamp;
  return j;
}

RunRecord RunRecord::from_json(const nlohmann::json& j) {
  try {
    RunRecord r;
    r.run_id = j.at("run_id").get<std::string>();
    r.triplet_id = j.at("triplet_id").get<std::string>();
    r.model = j.at("model").get<std::string>();
    auto task = parse_task(j.at("task").get<std::string>());
    if (!task) throw DataError("unknown task " + j.at("task").dump());
    if (*task == Task::kReasoning) {
      r.mode = PromptMode::reasoning();
    } else {
      auto dop = parse_dop(j.at("dop").get<std::string>());
      if (!dop) throw DataError("unknown dop " + j.at("dop").dump());
      r.mode = PromptMode::correction(*dop);
    }
    r.template_id = j.at("template_id").get<std::string>();
    r.content_hash = j.at("content_hash").get<std::string>();
    r.prompt = j.at("prompt").get<std::string>();
    r.response = j.at("response").get<std::string>();
    r.attempts = j.at("attempts").get<int>();
    r.latency_ms = j.at("latency_ms").get<double>();
    if (!j.at("error").is_null()) r.error = j["error"].get<std::string>();
    r.cached = j.value("cached", false);
    r.timestamp = j.value("timestamp", "");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed run record: ") + e.what());
  }
}

std::vector<RunRecord> load_records(const fs::path& records_path) {
  std::vector<RunRecord> records;
  if (!fs::exists(records_path)) return records;
  // A torn final line (crash mid-append) is not a visible record.
  std::string bytes = read_file(records_path);
  std::size_t complete = bytes.rfind('\n');
  bytes.resize(complete == std::string::npos ? 0 : complete + 1);
  std::size_t line_no = 0, pos = 0;
  while (pos < bytes.size()) {
    std::size_t nl = bytes.find('\n', pos);
    std::string_view line(bytes.data() + pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      records.push_back(RunRecord::from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw DataError(records_path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

nlohmann::ordered_json RunSummary::to_json() const {
  nlohmann::ordered_json j;
  j["run_id"] = run_id;
  j["cells"] = cells;
  j["cached"] = cached;
  j["fresh"] = fresh;
  j["failed"] = failed;
  j["pending"] = pending;
  j["skipped"] = skipped;
  j["warnings"] = warnings;
  return j;
}

RunSummary run(const ExperimentConfig& config, Backend& backend, const RunOptions& options) {
  config.validate();
  RunSummary summary;
  summary.run_id = new_run_id();

  Dataset dataset = load_dataset(config.dataset);
  TemplateRegistry registry = TemplateRegistry::defaults();
  if (config.templates_dir) {
    for (auto& w : registry.load_directory(*config.templates_dir))
      summary.warnings.push_back(std::move(w));
  }
  const SamplingParams sampling = config.model.sampling();
  const bool want_reasoning =
      std::find(config.tasks.begin(), config.tasks.end(), Task::kReasoning) != config.tasks.end();
  const bool want_correction =
      std::find(config.tasks.begin(), config.tasks.end(), Task::kCorrection) != config.tasks.end();

  std::vector<Cell> cells;
  for (const Triplet& t : dataset.triplets()) {
    if (want_reasoning)
      cells.push_back({&t, render(t, PromptMode::reasoning(), sampling, registry)});
    if (!want_correction) continue;
    if (t.reasoning_only()) {
      summary.skipped += config.modes.size();
      summary.warnings.push_back("triplet '" + t.id +
                                 "' is reasoning-only; excluded from correction modes");
      continue;
    }
    for (Dop dop : config.modes) {
      if (dop == Dop::kBE && !t.brief_explanation) {
        ++summary.skipped;
        summary.warnings.push_back("triplet '" + t.id +
                                   "' has no brief explanation; excluded from DOP_BE");
        continue;
      }
      cells.push_back({&t, render(t, PromptMode::correction(dop), sampling, registry)});
    }
  }
  summary.cells = cells.size();

  std::unordered_map<std::string, std::string> first_by_hash;
  for (const Cell& c : cells) {
    auto key = cell_key(c.prompt.triplet_id, c.prompt.mode);
    auto [it, inserted] = first_by_hash.emplace(c.prompt.content_hash, key);
    if (!inserted)
      summary.warnings.push_back("prompt hash collision: " + key + " renders identically to " +
                                 it->second + "; the response is shared");
  }

  fs::create_directories(config.output_dir);
  write_file_atomic(config.output_dir / kConfigFile,
                    redact_credentials(nlohmann::json::parse(config.to_json().dump())).dump(2) + "\n");

  const fs::path records_path = config.output_dir / kRecordsFile;
  AppendLog log(records_path);
  std::unordered_set<std::string> completed;
  std::unordered_map<std::string, RunRecord> cache;
  for (RunRecord& r : load_records(records_path)) {
    if (r.model != config.model.name || r.error) continue;
    completed.insert(cell_key(r.triplet_id, r.mode) + "|" + r.content_hash);
    std::string hash = r.content_hash;
    cache.insert_or_assign(std::move(hash), std::move(r));
  }

  auto make_record = [&](const Cell& c) {
    RunRecord r;
    r.run_id = summary.run_id;
    r.triplet_id = c.prompt.triplet_id;
    r.model = config.model.name;
    r.mode = c.prompt.mode;
    r.template_id = c.prompt.template_id;
    r.content_hash = c.prompt.content_hash;
    r.prompt = c.prompt.text;
    r.timestamp = utc_now("%Y-%m-%dT%H:%M:%SZ");
    return r;
  };
  auto replay = [&](const Cell& c, const RunRecord& source) {
    RunRecord r = make_record(c);
    r.response = source.response;
    r.attempts = source.attempts;
    r.cached = true;
    log.append(dump_json_line(r.to_json()));
  };

  // Pending work grouped by prompt hash: identical prompts are sent once.
  std::vector<std::vector<const Cell*>> jobs;
  std::unordered_map<std::string, std::size_t> job_of_hash;
  for (const Cell& c : cells) {
    const std::string& hash = c.prompt.content_hash;
    if (completed.count(cell_key(c.prompt.triplet_id, c.prompt.mode) + "|" + hash)) {
      ++summary.cached;
    } else if (auto it = cache.find(hash); it != cache.end()) {
      replay(c, it->second);
      ++summary.cached;
    } else if (auto jt = job_of_hash.find(hash); jt != job_of_hash.end()) {
      jobs[jt->second].push_back(&c);
    } else {
      job_of_hash.emplace(hash, jobs.size());
      jobs.push_back({&c});
    }
  }

  std::atomic<std::size_t> next_job{0}, dispatched{0};
  std::atomic<std::size_t> fresh{0}, failed{0}, replayed{0};
  auto worker = [&] {
    while (true) {
      std::size_t idx = next_job.fetch_add(1);
      if (idx >= jobs.size()) return;
      if (options.max_fresh_calls && dispatched.fetch_add(1) >= *options.max_fresh_calls) return;
      const auto& job = jobs[idx];
      RunRecord first = make_record(*job.front());
      try {
        CompletionResult result = backend.complete(job.front()->prompt);
        first.response = std::move(result.text);
        first.attempts = result.attempts;
        first.latency_ms = result.latency_ms;
        log.append(dump_json_line(first.to_json()));
        fresh.fetch_add(1);
        for (std::size_t k = 1; k < job.size(); ++k) {
          replay(*job[k], first);
          replayed.fetch_add(1);
        }
      } catch (const BackendError& e) {
        for (const Cell* c : job) {
          RunRecord r = make_record(*c);
          r.attempts = e.attempts();
          r.error = e.what();
          log.append(dump_json_line(r.to_json()));
          failed.fetch_add(1);
        }
      }
    }
  };
  const std::size_t n_workers =
      std::min<std::size_t>(static_cast<std::size_t>(config.concurrency), jobs.size());
  std::vector<std::thread> workers;
  for (std::size_t i = 0; i < n_workers; ++i) workers.emplace_back(worker);
  for (auto& w : workers) w.join();

  summary.fresh = fresh.load();
  summary.failed = failed.load();
  summary.cached += replayed.load();
  summary.pending = summary.cells - summary.cached - summary.fresh - summary.failed;

  nlohmann::ordered_json manifest;
  const fs::path manifest_path = config.output_dir / kManifestFile;
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  if (fs::exists(manifest_path)) {
    try {
      auto previous = nlohmann::ordered_json::parse(read_file(manifest_path));
      if (previous.contains("runs") && previous["runs"].is_array()) runs = previous["runs"];
    } catch (const nlohmann::json::exception&) {
      summary.warnings.push_back("previous manifest.json unreadable; run history restarted");
    }
  }
  runs.push_back(summary.to_json());
  manifest["tool_version"] = kToolVersion;
  manifest["hash_function"] = kHashFunction;
  manifest["dataset"] = {{"path", config.dataset.string()},
                         {"count", dataset.manifest().count},
                         {"digest", dataset.manifest().digest}};
  manifest["model"] = config.model.name;
  nlohmann::ordered_json templates = nlohmann::ordered_json::object();
  for (const PromptTemplate& t : registry.list()) templates[t.mode.tag()] = t.template_id;
  manifest["templates"] = templates;
  manifest["runs"] = runs;
  write_file_atomic(manifest_path, manifest.dump(2) + "\n");
  return summary;
}

RunSummary run(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  auto backend = make_backend(config.model);
  return run(config, *backend, options);
}

std::vector<ScoredOutcome> rescore(const fs::path& run_dir, const Dataset& dataset) {
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < dataset.triplets().size(); ++i)
    position.emplace(dataset.triplets()[i].id, i);

  struct Chosen {
    const RunRecord* record = nullptr;
    bool ok = false;
  };
  // (model, triplet index, mode) -> chosen record.
  std::map<std::tuple<std::string, std::size_t, PromptMode>, Chosen> cells;
  std::vector<RunRecord> records = load_records(run_dir / kRecordsFile);
  for (const RunRecord& r : records) {
    auto it = position.find(r.triplet_id);
    if (it == position.end())
      throw DataError("record references unknown triplet '" + r.triplet_id + "'");
    Chosen& slot = cells[{r.model, it->second, r.mode}];
    bool ok = !r.error.has_value();
    if (ok || !slot.ok) slot = Chosen{&r, ok};
  }

  std::vector<ScoredOutcome> out;
  out.reserve(cells.size());
  for (const auto& [key, chosen] : cells) {
    const Triplet& t = dataset.triplets()[std::get<1>(key)];
    const RunRecord& r = *chosen.record;
    ScoredOutcome s;
    s.model = r.model;
    s.template_id = r.template_id;
    s.outcome = chosen.ok ? score(t, r.response, r.mode) : backend_error_outcome(t, r.mode);
    out.push_back(std::move(s));
  }
  return out;
}

std::string serialize_scored(const std::vector<ScoredOutcome>& outcomes) {
  std::string out;
  for (const ScoredOutcome& s : outcomes) out += dump_json_line(scored_to_json(s));
  return out;
}

void write_scored(const fs::path& path, const std::vector<ScoredOutcome>& outcomes) {
  write_file_atomic(path, serialize_scored(outcomes));
}

std::vector<ScoredOutcome> load_scored(const fs::path& path) {
  std::vector<ScoredOutcome> out;
  for_each_json_line(path, [&](std::size_t line, const nlohmann::json& j) {
    try {
      out.push_back(scored_from_json(j));
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + std::to_string(line) + ": " + e.what());
    }
  });
  return out;
}

}  // namespace mwpc
