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

#include "mwpc/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "mwpc/errors.h"

namespace mwpc {

QuadrantCounts quadrants(std::span<const JointOutcome> joint) {
  QuadrantCounts q;
  std::unordered_set<std::string> seen;
  for (const JointOutcome& j : joint) {
    if (!seen.insert(j.triplet_id).second)
      throw DataError("duplicate joint outcome for triplet '" + j.triplet_id + "'");
    switch (quadrant_of(j.s_r, j.s_c)) {
      case Quadrant::kSRSC:
        ++q.srsc;
        break;
      case Quadrant::kSRUC:
        ++q.sruc;
        break;
      case Quadrant::kURSC:
        ++q.ursc;
        break;
      case Quadrant::kURUC:
        ++q.uruc;
        break;
    }
  }
  return q;
}

Rates rates(const QuadrantCounts& q) {
  const std::int64_t n = q.n();
  if (n <= 0) throw DataError("rates need at least one triplet");
  const double dn = static_cast<double>(n);
  return Rates{static_cast<double>(q.srsc + q.sruc) / dn, static_cast<double>(q.srsc + q.ursc) / dn};
}

ERatios e_ratios(const QuadrantCounts& q) {
  ERatios e;
  if (q.srsc + q.ursc > 0) e.e_r = static_cast<double>(q.srsc) / static_cast<double>(q.srsc + q.ursc);
  if (q.srsc + q.sruc > 0) e.e_c = static_cast<double>(q.srsc) / static_cast<double>(q.srsc + q.sruc);
  return e;
}

std::map<Dop, double> dop_pass_rates(std::span<const ScoredOutcome> outcomes) {
  std::map<Dop, std::pair<std::int64_t, std::int64_t>> counts;  // successes, total
  const std::string* model = nullptr;
  for (const ScoredOutcome& s : outcomes) {
    if (model && *model != s.model)
      throw DataError("dop_pass_rates: outcomes mix models '" + *model + "' and '" + s.model + "'");
    model = &s.model;
    if (s.outcome.mode.task() != Task::kCorrection) continue;
    auto& [ok, total] = counts[*s.outcome.mode.dop()];
    ok += s.outcome.success ? 1 : 0;
    ++total;
  }
  std::map<Dop, double> out;
  for (const auto& [dop, c] : counts)
    out[dop] = static_cast<double>(c.first) / static_cast<double>(c.second);
  return out;
}

Interval bootstrap_ci(std::size_t n,
                      const std::function<double(std::span<const std::size_t>)>& statistic,
                      const BootstrapOptions& options) {
  if (n == 0) throw std::invalid_argument("bootstrap_ci: no outcomes");
  if (options.resamples < 100) throw std::invalid_argument("bootstrap_ci: resamples must be >= 100");
  if (!(options.level > 0 && options.level < 1))
    throw std::invalid_argument("bootstrap_ci: level must be in (0, 1)");

  std::mt19937_64 rng(options.seed);
  std::vector<std::size_t> idx(n);
  std::vector<double> stats;
  stats.reserve(static_cast<std::size_t>(options.resamples));
  for (int b = 0; b < options.resamples; ++b) {
    for (auto& i : idx) {
      // Lemire multiply-shift: platform-independent, unlike
      // std::uniform_int_distribution.
      i = static_cast<std::size_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
    }
    stats.push_back(statistic(idx));
  }
  std::sort(stats.begin(), stats.end());
  auto quantile = [&](double p) {
    double pos = p * static_cast<double>(stats.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    std::size_t hi = std::min(lo + 1, stats.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return stats[lo] + (stats[hi] - stats[lo]) * frac;
  };
  const double alpha = 1.0 - options.level;
  return Interval{quantile(alpha / 2), quantile(1.0 - alpha / 2)};
}

Interval bootstrap_rate_ci(std::span<const bool> successes, const BootstrapOptions& options) {
  return bootstrap_ci(
      successes.size(),
      [&](std::span<const std::size_t> idx) {
        std::size_t ok = 0;
        for (std::size_t i : idx) ok += successes[i] ? 1 : 0;
        return static_cast<double>(ok) / static_cast<double>(idx.size());
      },
      options);
}

RateReport make_rate_report(std::string model, Dop mode, const QuadrantCounts& q) {
  RateReport r;
  r.model = std::move(model);
  r.mode = mode;
  r.quadrants = q;
  r.rates = rates(q);
  r.e = e_ratios(q);
  return r;
}

std::vector<RateReport> build_rate_reports(std::span<const ScoredOutcome> outcomes,
                                           const std::optional<BootstrapOptions>& bootstrap) {
  // model -> triplet -> reasoning success; model -> mode -> ordered (triplet, success).
  std::map<std::string, std::unordered_map<std::string, bool>> reasoning;
  std::map<std::string, std::map<Dop, std::vector<std::pair<std::string, bool>>>> correction;
  for (const ScoredOutcome& s : outcomes) {
    const Outcome& o = s.outcome;
    if (o.mode.task() == Task::kReasoning) {
      if (!reasoning[s.model].emplace(o.triplet_id, o.success).second)
        throw DataError("duplicate reasoning outcome for '" + o.triplet_id + "' (" + s.model + ")");
    } else {
      correction[s.model][*o.mode.dop()].emplace_back(o.triplet_id, o.success);
    }
  }

  std::vector<RateReport> reports;
  for (const auto& [model, by_mode] : correction) {
    auto r_it = reasoning.find(model);
    if (r_it == reasoning.end()) continue;
    for (const auto& [dop, items] : by_mode) {
      std::vector<JointOutcome> joint;
      for (const auto& [id, corrected] : items) {
        auto found = r_it->second.find(id);
        if (found == r_it->second.end()) continue;
        joint.push_back(JointOutcome{id, found->second, corrected, quadrant_of(found->second, corrected)});
      }
      if (joint.empty()) continue;
      RateReport report = make_rate_report(model, dop, quadrants(joint));
      if (bootstrap) {
        // std::vector<bool> is not contiguous; spans need real bools.
        const std::size_t n = joint.size();
        std::unique_ptr<bool[]> rs(new bool[n]), cs(new bool[n]);
        for (std::size_t i = 0; i < n; ++i) {
          rs[i] = joint[i].s_r;
          cs[i] = joint[i].s_c;
        }
        report.ci = RateCis{bootstrap_rate_ci({rs.get(), n}, *bootstrap),
                            bootstrap_rate_ci({cs.get(), n}, *bootstrap), *bootstrap};
      }
      reports.push_back(std::move(report));
    }
  }
  return reports;
}

std::string format_ratio(std::int64_t num, std::int64_t den) {
  if (den <= 0) return "\xE2\x80\x94";
  // thousandths rounded half-up.
  __int128 scaled = (static_cast<__int128>(num) * 2000 + den) / (static_cast<__int128>(den) * 2);
  auto value = static_cast<long long>(scaled);
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%lld.%03lld", value / 1000, value % 1000);
  return buf;
}

std::string format_rate(double value) {
  double scaled = std::floor(value * 1000.0 + 0.5 + 1e-9);
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3f", scaled / 1000.0);
  return buf;
}

nlohmann::ordered_json rate_report_to_json(const RateReport& r) {
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  nlohmann::ordered_json j;
  j["model"] = r.model;
  j["mode"] = to_string(r.mode);
  j["quadrants"] = {{"srsc", r.quadrants.srsc},
                    {"sruc", r.quadrants.sruc},
                    {"ursc", r.quadrants.ursc},
                    {"uruc", r.quadrants.uruc},
                    {"n", r.quadrants.n()}};
  j["r_rate"] = r.rates.r_rate;
  j["c_rate"] = r.rates.c_rate;
  j["e_r"] = opt(r.e.e_r);
  j["e_c"] = opt(r.e.e_c);
  if (r.ci) {
    j["ci"] = {{"r_rate", {r.ci->r_rate.low, r.ci->r_rate.high}},
               {"c_rate", {r.ci->c_rate.low, r.ci->c_rate.high}},
               {"level", r.ci->options.level},
               {"resamples", r.ci->options.resamples},
               {"seed", r.ci->options.seed}};
  } else {
    j["ci"] = nullptr;
  }
  return j;
}

}  // namespace mwpc
