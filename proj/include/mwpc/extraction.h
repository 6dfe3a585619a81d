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

#ifndef MWPC_EXTRACTION_H_
#define MWPC_EXTRACTION_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mwpc {

// Exact rational in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;

  // Returns nullopt on a zero denominator or when the reduced value does not
  // fit in 64 bits.
  static std::optional<Rational> make(__int128 numerator, __int128 denominator);

  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }
  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  friend bool operator==(const Rational&, const Rational&) = default;

 private:
  Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) {}

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// Which precedence rule produced an extracted answer. kLiteral marks values
// parsed directly from a canonical numeric string.
enum class ExtractionRule { kMarker, kAnswerLine, kLastNumber, kLiteral };

std::string_view to_string(ExtractionRule rule);

// A canonical numeric value: exact whenever the source text allows it,
// otherwise a double (very long digit strings).
class NumericAnswer {
 public:
  using Value = std::variant<Rational, double>;

  NumericAnswer(Value value, std::string raw_span, ExtractionRule rule)
      : value_(value), raw_span_(std::move(raw_span)), rule_(rule) {}

  const Value& value() const { return value_; }
  const std::string& raw_span() const { return raw_span_; }
  ExtractionRule rule() const { return rule_; }

  bool is_exact() const { return std::holds_alternative<Rational>(value_); }
  double to_double() const;

  // Canonical spelling: integers as "2240", terminating fractions as decimals
  // ("0.5", "-12.25"), others as "a/b". Parsing the canonical string yields the
  // same value, so canonicalization is idempotent.
  std::string canonical() const;

  // Value equality only; raw_span and rule are provenance.
  friend bool operator==(const NumericAnswer& a, const NumericAnswer& b) {
    return a.value_ == b.value_;
  }

 private:
  Value value_;
  std::string raw_span_;
  ExtractionRule rule_;
};

// One number found in free text, with its byte span.
struct NumberToken {
  std::size_t begin = 0;
  std::size_t end = 0;
  NumericAnswer::Value value;
};

// Scans `text` left to right for numbers: optional sign, optional leading
// currency symbol, digits with optional comma thousands separators, optional
// decimal part, or a simple fraction a/b. Units and '%' are not part of the
// token (no percent rescaling). A '-' is a sign only at the start, after
// whitespace, or after an operator/opening bracket, so "3-5" scans as 3 and 5.
std::vector<NumberToken> scan_numbers(std::string_view text);

// Parses a canonical numeric string ("2240", "-3.5", "1/2", "$1,000", "50%").
// The trimmed input must consist of exactly one number token.
std::optional<NumericAnswer> parse_number(std::string_view text);

// Final-answer extraction. Precedence:
//   1. the first number after the last "####" marker;
//   2. on the last line containing an answer phrase ("final answer",
//      "answer:", "the answer is"; case-insensitive), the last number after
//      the phrase, else the last number on that line;
//   3. the last number in the text.
// A rule that finds no number falls through to the next one.
std::optional<NumericAnswer> extract(std::string_view text);

inline constexpr double kDefaultTolerance = 1e-6;

// Exact comparison when both values are exact; otherwise |a - b| <= tolerance.
bool equal(const NumericAnswer& a, const NumericAnswer& b,
           double tolerance = kDefaultTolerance);

}  // namespace mwpc

#endif  // MWPC_EXTRACTION_H_
