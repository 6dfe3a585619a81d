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

#include <memory>
#include <random>

#include "doctest.h"
#include "mwpc/errors.h"

namespace mwpc {
namespace {

using doctest::Approx;

JointOutcome jo(std::string id, bool r, bool c) { return {std::move(id), r, c, quadrant_of(r, c)}; }

ScoredOutcome so(std::string model, std::string id, PromptMode mode, bool ok) {
  ScoredOutcome s;
  s.model = std::move(model);
  s.outcome.triplet_id = std::move(id);
  s.outcome.mode = mode;
  s.outcome.success = ok;
  s.outcome.reason = ok ? OutcomeReason::kMatched : OutcomeReason::kMismatched;
  return s;
}

TEST_CASE("quadrants") {
  CHECK(quadrants({}).n() == 0);
  std::vector<JointOutcome> three{jo("a", true, true), jo("b", true, false), jo("c", false, false)};
  CHECK(quadrants(three) == QuadrantCounts{1, 1, 0, 1});
  three.push_back(jo("a", false, false));
  CHECK_THROWS_AS(quadrants(three), DataError);
}

TEST_CASE("GPT-4 counts reconstructed from outcomes") {
  std::vector<JointOutcome> v;
  auto add = [&](int n, bool r, bool c) {
    for (int i = 0; i < n; ++i) v.push_back(jo(std::to_string(v.size()), r, c));
  };
  add(2152, true, true);
  add(306, true, false);
  add(165, false, true);
  add(238, false, false);
  auto q = quadrants(v);
  CHECK(q == QuadrantCounts{2152, 306, 165, 238});
  CHECK(q.n() == 2861);
}

TEST_CASE("rates") {
  // Hand values: 2458/2861 = 0.859140..., 2317/2861 = 0.809856...
  Rates g4 = rates({2152, 306, 165, 238});
  CHECK(g4.r_rate == Approx(0.859140).epsilon(1e-6));
  CHECK(g4.c_rate == Approx(0.809856).epsilon(1e-6));
  CHECK(format_rate(g4.r_rate) == "0.859");
  CHECK(format_rate(g4.c_rate) == "0.810");
  Rates g35 = rates({659, 932, 325, 945});
  CHECK(format_rate(g35.r_rate) == "0.556");
  CHECK(format_rate(g35.c_rate) == "0.344");
  Rates zero = rates({0, 0, 0, 5});
  CHECK(zero.r_rate == 0.0);
  CHECK(zero.c_rate == 0.0);
  CHECK_THROWS_AS(rates({}), DataError);
}

TEST_CASE("e ratios") {
  // 2152/2317 = 0.928787..., 2152/2458 = 0.875508...
  auto e = e_ratios({2152, 306, 165, 238});
  REQUIRE(e.e_r);
  REQUIRE(e.e_c);
  CHECK(*e.e_r == Approx(0.928787).epsilon(1e-6));
  CHECK(*e.e_c == Approx(0.875508).epsilon(1e-6));

  auto undefined = e_ratios({0, 5, 0, 5});
  CHECK_FALSE(undefined.e_r);
  REQUIRE(undefined.e_c);
  CHECK(*undefined.e_c == 0.0);

  for (int k = 1; k < 20; ++k) {
    auto p = e_ratios({k, 0, 0, 7});
    CHECK(*p.e_r == 1.0);
    CHECK(*p.e_c == 1.0);
  }
}

TEST_CASE("property: e_r > e_c iff ursc < sruc") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 5000; ++i) {
    QuadrantCounts q{1 + static_cast<std::int64_t>(rng() % 3000), 1 + static_cast<std::int64_t>(rng() % 3000),
                     1 + static_cast<std::int64_t>(rng() % 3000), 1 + static_cast<std::int64_t>(rng() % 3000)};
    auto e = e_ratios(q);
    CHECK((*e.e_r > *e.e_c) == (q.ursc < q.sruc));
  }
}

TEST_CASE("property: rates of quadrants equal direct averaging") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng() % 300;
    std::vector<JointOutcome> v;
    std::size_t r_ok = 0, c_ok = 0;
    for (std::size_t i = 0; i < n; ++i) {
      bool r = rng() % 2, c = rng() % 3 == 0;
      r_ok += r;
      c_ok += c;
      v.push_back(jo("t" + std::to_string(i), r, c));
    }
    Rates got = rates(quadrants(v));
    CHECK(got.r_rate == static_cast<double>(r_ok) / static_cast<double>(n));
    CHECK(got.c_rate == static_cast<double>(c_ok) / static_cast<double>(n));
  }
}

TEST_CASE("dop pass rates") {
  std::vector<ScoredOutcome> v{so("m", "a", PromptMode::reasoning(), true),
                               so("m", "a", PromptMode::correction(Dop::kSP), false),
                               so("m", "b", PromptMode::correction(Dop::kSP), true),
                               so("m", "a", PromptMode::correction(Dop::kNA), true)};
  auto rates = dop_pass_rates(v);
  CHECK(rates.size() == 2);
  CHECK(rates[Dop::kSP] == 0.5);
  CHECK(rates[Dop::kNA] == 1.0);
  CHECK(dop_pass_rates({}).empty());
  v.push_back(so("other", "a", PromptMode::correction(Dop::kSP), true));
  CHECK_THROWS_AS(dop_pass_rates(v), DataError);
}

TEST_CASE("bootstrap intervals") {
  std::unique_ptr<bool[]> all(new bool[50]);
  for (int i = 0; i < 50; ++i) all[i] = true;
  auto ones = bootstrap_rate_ci({all.get(), 50});
  CHECK(ones.low == 1.0);
  CHECK(ones.high == 1.0);

  // Alternating sample with exactly half successes; the normal-approximation
  // half-width is 1.96 * sqrt(0.25 / 1000) = 0.031.
  std::unique_ptr<bool[]> half(new bool[1000]);
  for (int i = 0; i < 1000; ++i) half[i] = i % 2 == 0;
  auto ci = bootstrap_rate_ci({half.get(), 1000});
  CHECK(ci.low < 0.5);
  CHECK(ci.high > 0.5);
  CHECK(ci.high - ci.low < 0.07);
  CHECK(ci.high - ci.low > 0.04);

  // Same seed, same interval; different seed may differ.
  auto again = bootstrap_rate_ci({half.get(), 1000});
  CHECK(again.low == ci.low);
  CHECK(again.high == ci.high);

  BootstrapOptions bad;
  bad.resamples = 0;
  CHECK_THROWS_AS(bootstrap_rate_ci({half.get(), 1000}, bad), std::invalid_argument);
  bad = {};
  bad.level = 1.0;
  CHECK_THROWS_AS(bootstrap_rate_ci({half.get(), 1000}, bad), std::invalid_argument);
  CHECK_THROWS_AS(bootstrap_rate_ci({}), std::invalid_argument);
}

TEST_CASE("bootstrap resampling stream is pinned") {
  // The first indices drawn for n = 10 with the default seed; a change here
  // means intervals are no longer reproducible across versions.
  std::vector<std::size_t> first;
  BootstrapOptions o;
  o.resamples = 100;
  bootstrap_ci(
      10,
      [&](std::span<const std::size_t> idx) {
        if (first.empty()) first.assign(idx.begin(), idx.end());
        return 0.0;
      },
      o);
  std::mt19937_64 rng(o.seed);
  for (std::size_t i = 0; i < 10; ++i)
    CHECK(first[i] == static_cast<std::size_t>((static_cast<unsigned __int128>(rng()) * 10) >> 64));
}

TEST_CASE("rate reports from scored outcomes") {
  std::vector<ScoredOutcome> v;
  // 4 triplets: (1,1) (1,0) (0,1) (0,0) under SP; NA corrects all.
  const bool r[] = {true, true, false, false}, c[] = {true, false, true, false};
  for (int i = 0; i < 4; ++i) {
    std::string id = "t" + std::to_string(i);
    v.push_back(so("m", id, PromptMode::reasoning(), r[i]));
    v.push_back(so("m", id, PromptMode::correction(Dop::kSP), c[i]));
    v.push_back(so("m", id, PromptMode::correction(Dop::kNA), true));
  }
  auto reports = build_rate_reports(v, std::nullopt);
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].mode == Dop::kSP);
  CHECK(reports[0].quadrants == QuadrantCounts{1, 1, 1, 1});
  CHECK(reports[1].quadrants == QuadrantCounts{2, 0, 2, 0});
  CHECK_FALSE(reports[0].ci);

  auto with_ci = build_rate_reports(v, BootstrapOptions{});
  REQUIRE(with_ci[0].ci);
  auto j = rate_report_to_json(with_ci[0]);
  CHECK(j["mode"] == "SP");
  CHECK(j["quadrants"]["n"] == 4);
  CHECK(j["r_rate"] == 0.5);
  CHECK(j["ci"]["seed"] == 20240229);

  v.push_back(so("m", "t0", PromptMode::reasoning(), true));
  CHECK_THROWS_AS(build_rate_reports(v, std::nullopt), DataError);
}

TEST_CASE("undefined ratios serialize as null") {
  auto j = rate_report_to_json(make_rate_report("m", Dop::kSP, {0, 5, 0, 5}));
  CHECK(j["e_r"].is_null());
  CHECK(j["e_c"] == 0.0);
}

TEST_CASE("presentation rounding is half-up") {
  CHECK(format_ratio(2317, 2861) == "0.810");
  CHECK(format_ratio(1, 8) == "0.125");
  CHECK(format_ratio(1, 16) == "0.063");  // 0.0625 rounds up
  CHECK(format_ratio(1, 2000) == "0.001");
  CHECK(format_ratio(1, 2001) == "0.000");
  CHECK(format_ratio(5, 5) == "1.000");
  CHECK(format_ratio(0, 0) == "\xE2\x80\x94");
  CHECK(format_rate(0.0625) == "0.063");
  CHECK(format_rate(0.8098) == "0.810");
}

}  // namespace
}  // namespace mwpc
