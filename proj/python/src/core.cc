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

// Python bindings. Structured values cross the boundary as JSON text; the
// package wrapper decodes them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "json.hpp"
#include "mwpc/errors.h"
#include "mwpc/extraction.h"
#include "mwpc/metrics.h"
#include "mwpc/prompting.h"
#include "mwpc/report.h"
#include "mwpc/runner.h"
#include "mwpc/scoring.h"
#include "mwpc/triplets.h"

namespace py = pybind11;

namespace {

mwpc::PromptMode mode_from_tag(const std::string& tag) {
  auto mode = mwpc::PromptMode::from_tag(tag);
  if (!mode) throw py::value_error("unknown prompt mode: " + tag);
  return *mode;
}

std::optional<std::string> canonical(const std::optional<mwpc::NumericAnswer>& n) {
  if (!n) return std::nullopt;
  return n->canonical();
}

std::string score_json(const std::string& triplet_json, const std::string& response, const std::string& tag) {
  auto t = mwpc::triplet_from_json(nlohmann::json::parse(triplet_json));
  auto o = mwpc::score(t, response, mode_from_tag(tag));
  nlohmann::ordered_json j;
  j["triplet_id"] = o.triplet_id;
  j["mode"] = o.mode.tag();
  j["extracted"] = o.extracted ? nlohmann::ordered_json(o.extracted->canonical()) : nullptr;
  j["success"] = o.success;
  j["reason"] = std::string(mwpc::to_string(o.reason));
  return j.dump();
}

std::string render_json(const std::string& triplet_json, const std::string& tag) {
  auto t = mwpc::triplet_from_json(nlohmann::json::parse(triplet_json));
  auto p = mwpc::render(t, mode_from_tag(tag));
  nlohmann::ordered_json j;
  j["triplet_id"] = p.triplet_id;
  j["mode"] = p.mode.tag();
  j["template_id"] = p.template_id;
  j["content_hash"] = p.content_hash;
  j["text"] = p.text;
  return j.dump();
}

mwpc::QuadrantCounts counts(std::int64_t srsc, std::int64_t sruc, std::int64_t ursc, std::int64_t uruc) {
  return {srsc, sruc, ursc, uruc};
}

std::string verify_json(const std::string& path, double tolerance) {
  auto report = mwpc::verify_table1(mwpc::load_table1(path), tolerance);
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"row", c.row}, {"check", c.check}, {"pass", c.pass}, {"detail", c.detail}});
  nlohmann::ordered_json j;
  j["all_pass"] = report.all_pass();
  j["checks"] = checks;
  j["matrix"] = mwpc::render_verification(report);
  return j.dump();
}

std::string report_markdown(const std::string& scored_path) {
  auto scored = mwpc::load_scored(scored_path);
  if (scored.empty()) throw mwpc::DataError(scored_path + ": no scored outcomes");
  return mwpc::render_markdown(mwpc::build_report(scored, mwpc::BootstrapOptions{}, scored_path));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of the mwpc harness.";
  py::register_exception<mwpc::DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<mwpc::ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def(
      "extract", [](const std::string& text) { return canonical(mwpc::extract(text)); }, py::arg("text"),
      "Canonical final answer in a model response, or None.");
  m.def(
      "canonical", [](const std::string& text) { return canonical(mwpc::parse_number(text)); }, py::arg("text"),
      "Canonical form of a numeric literal, or None.");
  m.def(
      "numbers_equal",
      [](const std::string& a, const std::string& b) {
        auto x = mwpc::parse_number(a), y = mwpc::parse_number(b);
        return x && y && mwpc::equal(*x, *y);
      },
      py::arg("a"), py::arg("b"));
  m.def("score_json", &score_json, py::arg("triplet_json"), py::arg("response"), py::arg("mode"));
  m.def("render_json", &render_json, py::arg("triplet_json"), py::arg("mode"));
  m.def(
      "rates",
      [](std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
        auto r = mwpc::rates(counts(a, b, c, d));
        return std::make_pair(r.r_rate, r.c_rate);
      },
      py::arg("srsc"), py::arg("sruc"), py::arg("ursc"), py::arg("uruc"));
  m.def(
      "e_ratios",
      [](std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
        auto e = mwpc::e_ratios(counts(a, b, c, d));
        return std::make_pair(e.e_r, e.e_c);
      },
      py::arg("srsc"), py::arg("sruc"), py::arg("ursc"), py::arg("uruc"));
  m.def("format_ratio", &mwpc::format_ratio, py::arg("num"), py::arg("den"));
  m.def("verify_table1_json", &verify_json, py::arg("path"), py::arg("tolerance") = mwpc::kRateTolerance);
  m.def("report_markdown", &report_markdown, py::arg("scored_path"));
}
