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

// mwpc: batch harness contrasting math reasoning and error correction.
//
//   mwpc ingest --format mathdial --input raw.jsonl --output triplets.jsonl
//   mwpc run --config experiment.json
//   mwpc rescore --run-dir runs/gpt4
//   mwpc report --scored runs/gpt4/scored.jsonl --out-dir reports/gpt4
//   mwpc verify-paper
//   mwpc inspect --dataset triplets.jsonl --id mathdial-5000012
//
// Exit codes: 0 success, 1 usage/configuration error, 2 data error,
// 3 verification failure.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mwpc/errors.h"
#include "mwpc/jsonl.h"
#include "mwpc/prompting.h"
#include "mwpc/report.h"
#include "mwpc/runner.h"
#include "mwpc/triplets.h"

#ifndef MWPC_DEFAULT_DATA_DIR
#define MWPC_DEFAULT_DATA_DIR "data"
#endif

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitVerification = 3;

bool g_error_json = false;

int fail(int code, const std::string& kind, const std::string& message) {
  if (g_error_json) {
    nlohmann::ordered_json j;
    j["error"] = kind;
    j["message"] = message;
    j["exit_code"] = code;
    std::cerr << j.dump() << std::endl;
  } else {
    std::cerr << "mwpc: " << kind << " error: " << message << std::endl;
  }
  return code;
}

fs::path data_dir() {
  if (const char* env = std::getenv("MWPC_DATA_DIR"); env != nullptr && *env != '\0') return env;
  return MWPC_DEFAULT_DATA_DIR;
}

struct IngestArgs {
  std::string format = "mathdial";
  std::string input;
  std::string output;
  std::string field_map;
  std::string rejections;
};

int cmd_ingest(const IngestArgs& a) {
  mwpc::IngestResult result;
  if (a.format == "gsm8k") {
    result = mwpc::ingest_gsm8k(a.input);
  } else {
    mwpc::FieldMap map;
    if (!a.field_map.empty()) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(mwpc::read_file(a.field_map));
      } catch (const nlohmann::json::parse_error& e) {
        throw mwpc::ConfigError("field map " + a.field_map + ": " + e.what());
      }
      map = mwpc::FieldMap::from_json(j);
    }
    result = mwpc::ingest_mathdial(a.input, map);
  }
  mwpc::write_dataset(a.output, result.dataset);
  fs::path rejections_path = a.rejections.empty() ? fs::path(a.output + ".rejections.json") : fs::path(a.rejections);
  mwpc::write_file_atomic(rejections_path, mwpc::rejections_to_json(result.rejections).dump(2) + "\n");
  for (const auto& r : result.rejections)
    std::cerr << "rejected line " << r.line << " (" << r.id << "): " << r.reason << "\n";
  nlohmann::ordered_json summary;
  summary["output"] = a.output;
  summary["count"] = result.dataset.manifest().count;
  summary["rejected"] = result.rejections.size();
  summary["digest"] = result.dataset.manifest().digest;
  std::cout << summary.dump(2) << std::endl;
  return kExitOk;
}

struct RunArgs {
  std::string config;
  std::optional<std::size_t> max_fresh_calls;
  std::optional<int> concurrency;
};

int cmd_run(const RunArgs& a) {
  auto config = mwpc::ExperimentConfig::from_file(a.config);
  if (a.concurrency) config.concurrency = *a.concurrency;
  mwpc::RunOptions options;
  options.max_fresh_calls = a.max_fresh_calls;
  mwpc::RunSummary summary = mwpc::run(config, options);
  for (const auto& w : summary.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << summary.to_json().dump(2) << std::endl;
  return kExitOk;
}

struct RescoreArgs {
  std::string run_dir;
  std::string dataset;
  std::string output;
};

int cmd_rescore(const RescoreArgs& a) {
  fs::path dataset_path = a.dataset;
  if (dataset_path.empty()) {
    auto cfg = nlohmann::json::parse(mwpc::read_file(fs::path(a.run_dir) / mwpc::kConfigFile));
    dataset_path = cfg.at("dataset").get<std::string>();
  }
  mwpc::Dataset dataset = mwpc::load_dataset(dataset_path);
  auto outcomes = mwpc::rescore(a.run_dir, dataset);
  fs::path out = a.output.empty() ? fs::path(a.run_dir) / mwpc::kScoredFile : fs::path(a.output);
  mwpc::write_scored(out, outcomes);
  std::size_t ok = 0, backend_errors = 0;
  for (const auto& s : outcomes) {
    ok += s.outcome.success ? 1 : 0;
    backend_errors += s.outcome.reason == mwpc::OutcomeReason::kBackendError ? 1 : 0;
  }
  nlohmann::ordered_json summary;
  summary["output"] = out.string();
  summary["outcomes"] = outcomes.size();
  summary["successes"] = ok;
  summary["backend_errors"] = backend_errors;
  std::cout << summary.dump(2) << std::endl;
  return kExitOk;
}

struct ReportArgs {
  std::vector<std::string> scored;
  std::string table1;
  std::string out_dir = "report";
  int resamples = 1000;
  double level = 0.95;
  std::uint64_t seed = mwpc::BootstrapOptions{}.seed;
  bool no_ci = false;
};

int cmd_report(const ReportArgs& a) {
  mwpc::Report report;
  if (!a.table1.empty()) {
    report = mwpc::report_from_table1(mwpc::load_table1(a.table1), fs::path(a.table1).filename().string());
  } else {
    if (a.scored.empty()) throw mwpc::ConfigError("report needs --scored or --table1");
    std::vector<mwpc::ScoredOutcome> all;
    std::string source;
    for (const auto& path : a.scored) {
      auto part = mwpc::load_scored(path);
      all.insert(all.end(), part.begin(), part.end());
      source += (source.empty() ? "" : ", ") + fs::path(path).filename().string();
    }
    if (all.empty()) throw mwpc::DataError("scored outcome file is empty");
    std::optional<mwpc::BootstrapOptions> bootstrap;
    if (!a.no_ci) bootstrap = mwpc::BootstrapOptions{a.resamples, a.level, a.seed};
    report = mwpc::build_report(all, bootstrap, source);
  }
  mwpc::write_report_files(a.out_dir, report);
  std::cout << mwpc::render_markdown(report);
  return kExitOk;
}

struct VerifyArgs {
  std::string fixture;
  double tolerance = mwpc::kRateTolerance;
};

int cmd_verify(const VerifyArgs& a) {
  fs::path fixture = a.fixture.empty() ? data_dir() / "table1.json" : fs::path(a.fixture);
  auto report = mwpc::verify_table1(mwpc::load_table1(fixture), a.tolerance);
  std::cout << mwpc::render_verification(report);
  return report.all_pass() ? kExitOk : kExitVerification;
}

struct InspectArgs {
  std::string dataset;
  std::string id;
  std::string templates;
};

int cmd_inspect(const InspectArgs& a) {
  mwpc::Dataset dataset = mwpc::load_dataset(a.dataset);
  const mwpc::Triplet* t = dataset.find(a.id);
  if (t == nullptr) throw mwpc::DataError("no triplet with id '" + a.id + "'");
  auto registry = mwpc::TemplateRegistry::defaults();
  if (!a.templates.empty())
    for (const auto& w : registry.load_directory(a.templates)) std::cerr << "warning: " << w << "\n";
  for (const mwpc::PromptMode& mode : mwpc::all_prompt_modes()) {
    std::cout << "===== " << mode.tag() << " =====\n";
    try {
      auto p = mwpc::render(*t, mode, {}, registry);
      std::cout << "template_id: " << p.template_id << "\ncontent_hash: " << p.content_hash << "\n\n"
                << p.text << "\n";
    } catch (const mwpc::DataError& e) {
      std::cout << "(not renderable: " << e.what() << ")\n\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reasoning vs. error-correction evaluation harness for math word problems"};
  app.require_subcommand(1);
  app.add_flag("--error-json", g_error_json, "Print errors as a JSON object on stderr");

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Build a triplet dataset from MathDial- or GSM8k-style JSONL");
  ingest_cmd->add_option("--format", ingest.format, "Source format")->check(CLI::IsMember({"mathdial", "gsm8k"}));
  ingest_cmd->add_option("--input", ingest.input, "Source JSONL file")->required();
  ingest_cmd->add_option("--output", ingest.output, "Triplet JSONL file to write")->required();
  ingest_cmd->add_option("--field-map", ingest.field_map, "JSON object mapping triplet fields to source fields");
  ingest_cmd->add_option("--rejections", ingest.rejections, "Rejection report path (default <output>.rejections.json)");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Query the model for every (triplet, task, mode) cell; resumable");
  run_cmd->add_option("--config", run.config, "Experiment config JSON")->required();
  run_cmd->add_option("--max-fresh-calls", run.max_fresh_calls, "Stop after this many backend calls");
  run_cmd->add_option("--concurrency", run.concurrency, "Override max in-flight requests");

  RescoreArgs rescore;
  auto* rescore_cmd = app.add_subcommand("rescore", "Score stored responses of a run directory");
  rescore_cmd->add_option("--run-dir", rescore.run_dir, "Run directory")->required();
  rescore_cmd->add_option("--dataset", rescore.dataset, "Triplet dataset (default: from the run's config.json)");
  rescore_cmd->add_option("--output", rescore.output, "Scored JSONL (default <run-dir>/scored.jsonl)");

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "Write Markdown/CSV tables and chart data");
  report_cmd->add_option("--scored", report.scored, "Scored outcome JSONL files");
  report_cmd->add_option("--table1", report.table1, "Build the report from published joint counts instead");
  report_cmd->add_option("--out-dir", report.out_dir, "Output directory");
  report_cmd->add_option("--resamples", report.resamples, "Bootstrap resamples")->check(CLI::Range(100, 1000000));
  report_cmd->add_option("--level", report.level, "Confidence level")->check(CLI::Range(0.0, 1.0));
  report_cmd->add_option("--seed", report.seed, "Bootstrap seed");
  report_cmd->add_flag("--no-ci", report.no_ci, "Skip bootstrap intervals");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify-paper", "Recompute published rates from their joint counts");
  verify_cmd->add_option("--fixture", verify.fixture, "Table-1 fixture JSON (default <data>/table1.json)");
  verify_cmd->add_option("--tolerance", verify.tolerance, "Absolute rate tolerance");

  InspectArgs inspect;
  auto* inspect_cmd = app.add_subcommand("inspect", "Print one triplet's prompt in every mode");
  inspect_cmd->add_option("--dataset", inspect.dataset, "Triplet dataset")->required();
  inspect_cmd->add_option("--id", inspect.id, "Triplet id")->required();
  inspect_cmd->add_option("--templates", inspect.templates, "Template directory override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*ingest_cmd) return cmd_ingest(ingest);
    if (*run_cmd) return cmd_run(run);
    if (*rescore_cmd) return cmd_rescore(rescore);
    if (*report_cmd) return cmd_report(report);
    if (*verify_cmd) return cmd_verify(verify);
    if (*inspect_cmd) return cmd_inspect(inspect);
  } catch (const mwpc::ConfigError& e) {
    return fail(kExitUsage, "config", e.what());
  } catch (const mwpc::DataError& e) {
    return fail(kExitData, "data", e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(kExitData, "data", e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(kExitData, "io", e.what());
  }
  return kExitUsage;
}
