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

#ifndef MWPC_METRICS_H_
#define MWPC_METRICS_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mwpc/prompting.h"
#include "mwpc/scoring.h"

namespace mwpc {

// Joint outcome counts; every triplet lands in exactly one cell.
struct QuadrantCounts {
  std::int64_t srsc = 0;
  std::int64_t sruc = 0;
  std::int64_t ursc = 0;
  std::int64_t uruc = 0;

  std::int64_t n() const { return srsc + sruc + ursc + uruc; }
  friend bool operator==(const QuadrantCounts&, const QuadrantCounts&) = default;
};

// Throws DataError when a triplet id appears twice.
QuadrantCounts quadrants(std::span<const JointOutcome> joint);

struct Rates {
  double r_rate = 0.0;  // (srsc + sruc) / n
  double c_rate = 0.0;  // (srsc + ursc) / n
};

// Throws DataError when n == 0.
Rates rates(const QuadrantCounts& q);

// Overlap ratios exactly as defined by the joint counts:
//   e_r = srsc / (srsc + ursc)   (of the corrected triplets, share also reasoned)
//   e_c = srsc / (srsc + sruc)   (of the reasoned triplets, share also corrected)
// Each is absent when its denominator is zero.
struct ERatios {
  std::optional<double> e_r;
  std::optional<double> e_c;
};

ERatios e_ratios(const QuadrantCounts& q);

// Correction pass rate per prompting mode present in `outcomes`. Reasoning
// outcomes are ignored. Throws DataError if outcomes mix models.
std::map<Dop, double> dop_pass_rates(std::span<const ScoredOutcome> outcomes);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

struct BootstrapOptions {
  int resamples = 1000;
  double level = 0.95;
  std::uint64_t seed = 20240229;
};

// Percentile bootstrap of `statistic` over `n` items. The statistic receives
// the resampled item indices. Resampling uses mt19937_64 with a
// multiply-shift index map, so intervals are identical across platforms for
// a given seed. Throws std::invalid_argument when n == 0, resamples < 100, or
// level is outside (0, 1).
Interval bootstrap_ci(std::size_t n,
                      const std::function<double(std::span<const std::size_t>)>& statistic,
                      const BootstrapOptions& options = {});

// Bootstrap interval of the success rate of `successes`.
Interval bootstrap_rate_ci(std::span<const bool> successes, const BootstrapOptions& options = {});

struct RateCis {
  Interval r_rate;
  Interval c_rate;
  BootstrapOptions options;
};

// Metrics for one (model, correction mode) pair.
struct RateReport {
  std::string model;
  Dop mode = Dop::kSP;
  QuadrantCounts quadrants;
  Rates rates;
  ERatios e;
  std::optional<RateCis> ci;
};

RateReport make_rate_report(std::string model, Dop mode, const QuadrantCounts& q);

// Joins each model's reasoning outcomes with its correction outcomes per mode
// and builds one report per (model, mode) with at least one joined triplet.
// Reports are ordered by model name, then mode. Bootstrap intervals are
// attached when `bootstrap` is set.
std::vector<RateReport> build_rate_reports(std::span<const ScoredOutcome> outcomes,
                                           const std::optional<BootstrapOptions>& bootstrap);

// {model, mode, quadrants, r_rate, c_rate, e_r, e_c, ci}; undefined ratios are null.
nlohmann::ordered_json rate_report_to_json(const RateReport& r);

// Half-up rounding of num/den to three decimals, e.g. (2317, 2861) -> "0.810".
std::string format_ratio(std::int64_t num, std::int64_t den);
// Half-up three-decimal rendering of a double.
std::string format_rate(double value);

}  // namespace mwpc

#endif  // MWPC_METRICS_H_
