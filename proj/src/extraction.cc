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

#include "mwpc/extraction.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace mwpc {
namespace {

constexpr int kMaxExactDigits = 18;

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Currency symbols that may directly precede the digits.
constexpr std::array<std::string_view, 5> kCurrency = {
    "$", "\xE2\x82\xAC" /* euro */, "\xC2\xA3" /* pound */,
    "\xC2\xA5" /* yen */, "\xE2\x82\xB9" /* rupee */};
constexpr std::string_view kUnicodeMinus = "\xE2\x88\x92";
constexpr std::string_view kTimesSign = "\xC3\x97";

// Length of a currency symbol ending right before `pos`, or 0.
std::size_t currency_before(std::string_view text, std::size_t pos) {
  for (std::string_view sym : kCurrency) {
    if (pos >= sym.size() && text.compare(pos - sym.size(), sym.size(), sym) == 0)
      return sym.size();
  }
  return 0;
}

// Whether the byte range ending at `pos` allows a following '-' to act as a
// sign: start of text, whitespace, or an operator/opening bracket.
bool sign_context(std::string_view text, std::size_t pos) {
  if (pos == 0) return true;
  char prev = text[pos - 1];
  if (is_space(prev)) return true;
  if (std::string_view("([{=+*/:;,<>~").find(prev) != std::string_view::npos)
    return true;
  return pos >= kTimesSign.size() &&
         text.compare(pos - kTimesSign.size(), kTimesSign.size(), kTimesSign) ==
             0;
}

std::optional<NumericAnswer::Value> decimal_value(std::string_view int_digits,
                                                  std::string_view frac_digits,
                                                  bool negative) {
  std::string digits;
  digits.reserve(int_digits.size() + frac_digits.size());
  for (char c : int_digits)
    if (c != ',') digits.push_back(c);
  std::string_view frac = frac_digits;
  // Trailing zeros in the fraction do not change the value.
  while (!frac.empty() && frac.back() == '0') frac.remove_suffix(1);
  std::string all = digits + std::string(frac);
  std::size_t first_nonzero = all.find_first_not_of('0');
  std::size_t significant =
      first_nonzero == std::string::npos ? 0 : all.size() - first_nonzero;
  if (significant <= kMaxExactDigits && frac.size() <= kMaxExactDigits) {
    __int128 num = 0;
    for (char c : all) num = num * 10 + (c - '0');
    __int128 den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    if (auto r = Rational::make(negative ? -num : num, den))
      return NumericAnswer::Value(*r);
  }
  std::string literal = (negative ? "-" : "") + (digits.empty() ? "0" : digits);
  if (!frac_digits.empty()) literal += "." + std::string(frac_digits);
  return NumericAnswer::Value(std::strtod(literal.c_str(), nullptr));
}

std::optional<NumericAnswer::Value> fraction_value(std::string_view a,
                                                   std::string_view b,
                                                   bool negative) {
  if (a.size() > kMaxExactDigits || b.size() > kMaxExactDigits) {
    double num = std::strtod(std::string(a).c_str(), nullptr);
    double den = std::strtod(std::string(b).c_str(), nullptr);
    if (den == 0.0) return std::nullopt;
    return NumericAnswer::Value(negative ? -num / den : num / den);
  }
  __int128 num = 0, den = 0;
  for (char c : a) num = num * 10 + (c - '0');
  for (char c : b) den = den * 10 + (c - '0');
  if (den == 0) return std::nullopt;
  auto r = Rational::make(negative ? -num : num, den);
  if (!r) return std::nullopt;
  return NumericAnswer::Value(*r);
}

std::size_t digit_run(std::string_view text, std::size_t pos) {
  std::size_t end = pos;
  while (end < text.size() && is_digit(text[end])) ++end;
  return end;
}

// Parses one number whose first digit (or leading '.') is at `start`.
NumberToken parse_token_at(std::string_view text, std::size_t start) {
  std::size_t begin = start;
  std::size_t cur = currency_before(text, begin);
  begin -= cur;
  bool negative = false;
  if (begin > 0 && text[begin - 1] == '-' && sign_context(text, begin - 1)) {
    negative = true;
    begin -= 1;
  } else if (begin >= kUnicodeMinus.size() &&
             text.compare(begin - kUnicodeMinus.size(), kUnicodeMinus.size(),
                          kUnicodeMinus) == 0 &&
             sign_context(text, begin - kUnicodeMinus.size())) {
    negative = true;
    begin -= kUnicodeMinus.size();
  }

  std::size_t pos = start;
  std::size_t int_end = digit_run(text, pos);
  bool grouped = false;
  if (int_end - pos >= 1 && int_end - pos <= 3) {
    while (int_end < text.size() && text[int_end] == ',' &&
           digit_run(text, int_end + 1) == int_end + 4) {
      int_end += 4;
      grouped = true;
    }
  }
  std::string_view int_digits = text.substr(pos, int_end - pos);
  std::size_t end = int_end;
  std::string_view frac_digits;
  if (end + 1 < text.size() && text[end] == '.' && is_digit(text[end + 1])) {
    std::size_t frac_end = digit_run(text, end + 1);
    frac_digits = text.substr(end + 1, frac_end - end - 1);
    end = frac_end;
  } else if (!grouped && !int_digits.empty() && end + 1 < text.size() &&
             text[end] == '/' && is_digit(text[end + 1])) {
    std::size_t den_end = digit_run(text, end + 1);
    std::string_view den = text.substr(end + 1, den_end - end - 1);
    // "1/2.5" is not a simple fraction.
    bool decimal_den =
        den_end + 1 < text.size() && text[den_end] == '.' && is_digit(text[den_end + 1]);
    if (!decimal_den) {
      if (auto v = fraction_value(int_digits, den, negative))
        return NumberToken{begin, den_end, *v};
    }
  }
  auto value = decimal_value(int_digits, frac_digits, negative);
  return NumberToken{begin, end, *value};
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

// End offset of the last answer phrase in an (already lowercased) line.
std::optional<std::size_t> last_answer_phrase_end(std::string_view line) {
  std::optional<std::size_t> best;
  auto consider = [&](std::size_t end) {
    if (!best || end > *best) best = end;
  };
  for (std::string_view phrase : {std::string_view("final answer"),
                                  std::string_view("the answer is")}) {
    for (std::size_t p = line.find(phrase); p != std::string_view::npos;
         p = line.find(phrase, p + 1))
      consider(p + phrase.size());
  }
  // "answer:" tolerating markdown emphasis, e.g. "**Answer**:".
  for (std::size_t p = line.find("answer"); p != std::string_view::npos;
       p = line.find("answer", p + 1)) {
    std::size_t q = p + 6;
    while (q < line.size() && (line[q] == '*' || line[q] == '_' || line[q] == ' '))
      ++q;
    if (q < line.size() && line[q] == ':') consider(q + 1);
  }
  return best;
}

NumericAnswer make_answer(std::string_view text, const NumberToken& tok,
                          ExtractionRule rule) {
  return NumericAnswer(tok.value,
                       std::string(text.substr(tok.begin, tok.end - tok.begin)),
                       rule);
}

}  // namespace

std::optional<Rational> Rational::make(__int128 numerator,
                                       __int128 denominator) {
  if (denominator == 0) return std::nullopt;
  if (denominator < 0) {
    numerator = -numerator;
    denominator = -denominator;
  }
  __int128 a = numerator < 0 ? -numerator : numerator;
  __int128 b = denominator;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    numerator /= a;
    denominator /= a;
  }
  constexpr __int128 kMax = std::numeric_limits<std::int64_t>::max();
  if (numerator > kMax || numerator < -kMax || denominator > kMax)
    return std::nullopt;
  return Rational(static_cast<std::int64_t>(numerator),
                  static_cast<std::int64_t>(denominator));
}

std::string_view to_string(ExtractionRule rule) {
  switch (rule) {
    case ExtractionRule::kMarker:
      return "marker";
    case ExtractionRule::kAnswerLine:
      return "answer-line";
    case ExtractionRule::kLastNumber:
      return "last-number";
    case ExtractionRule::kLiteral:
      return "literal";
  }
  return "unknown";
}

double NumericAnswer::to_double() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return r->to_double();
  return std::get<double>(value_);
}

std::string NumericAnswer::canonical() const {
  if (const auto* d = std::get_if<double>(&value_)) {
    std::array<char, 512> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), *d,
                             std::chars_format::fixed);
    return std::string(buf.data(), res.ptr);
  }
  const Rational& r = std::get<Rational>(value_);
  if (r.denominator() == 1) return std::to_string(r.numerator());
  std::int64_t den = r.denominator();
  int twos = 0, fives = 0;
  while (den % 2 == 0) den /= 2, ++twos;
  while (den % 5 == 0) den /= 5, ++fives;
  int scale = std::max(twos, fives);
  if (den != 1 || scale > kMaxExactDigits) {
    return std::to_string(r.numerator()) + "/" +
           std::to_string(r.denominator());
  }
  // numerator * 10^scale / denominator is an integer.
  __int128 scaled = r.numerator();
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  __int128 mult = 1;
  for (int i = 0; i < scale - twos; ++i) mult *= 2;
  for (int i = 0; i < scale - fives; ++i) mult *= 5;
  scaled *= mult;
  std::string digits;
  do {
    digits.insert(digits.begin(), static_cast<char>('0' + scaled % 10));
    scaled /= 10;
  } while (scaled != 0);
  while (static_cast<int>(digits.size()) <= scale) digits.insert(0, "0");
  digits.insert(digits.size() - scale, ".");
  return (negative ? "-" : "") + digits;
}

std::vector<NumberToken> scan_numbers(std::string_view text) {
  std::vector<NumberToken> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    bool prev_digit = i > 0 && is_digit(text[i - 1]);
    bool starts = false;
    if (is_digit(c) && !prev_digit) {
      starts = true;
    } else if (c == '.' && !prev_digit && i + 1 < text.size() &&
               is_digit(text[i + 1])) {
      starts = true;
    }
    if (!starts) {
      ++i;
      continue;
    }
    NumberToken tok;
    if (c == '.') {
      // Leading-dot decimal such as ".5".
      std::size_t frac_end = digit_run(text, i + 1);
      std::size_t begin = i;
      bool negative = false;
      if (begin > 0 && text[begin - 1] == '-' && sign_context(text, begin - 1)) {
        negative = true;
        --begin;
      }
      tok = NumberToken{
          begin, frac_end,
          *decimal_value("", text.substr(i + 1, frac_end - i - 1), negative)};
    } else {
      tok = parse_token_at(text, i);
    }
    tokens.push_back(tok);
    i = std::max(tok.end, i + 1);
  }
  return tokens;
}

std::optional<NumericAnswer> parse_number(std::string_view text) {
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (!text.empty() && text.back() == '%') text.remove_suffix(1);
  auto tokens = scan_numbers(text);
  if (tokens.size() != 1 || tokens[0].begin != 0 || tokens[0].end != text.size())
    return std::nullopt;
  return make_answer(text, tokens[0], ExtractionRule::kLiteral);
}

std::optional<NumericAnswer> extract(std::string_view text) {
  // Rule 1: first number after the last "####".
  if (std::size_t marker = text.rfind("####"); marker != std::string_view::npos) {
    std::string_view tail = text.substr(marker + 4);
    auto tokens = scan_numbers(tail);
    if (!tokens.empty()) return make_answer(tail, tokens.front(), ExtractionRule::kMarker);
  }

  // Rule 2: the last line carrying an answer phrase.
  std::size_t line_end = text.size();
  while (true) {
    std::size_t nl = line_end == 0 ? std::string_view::npos
                                   : text.rfind('\n', line_end - 1);
    std::size_t line_begin = nl == std::string_view::npos ? 0 : nl + 1;
    std::string_view line = text.substr(line_begin, line_end - line_begin);
    if (auto phrase_end = last_answer_phrase_end(to_lower_ascii(line))) {
      auto tokens = scan_numbers(line);
      const NumberToken* pick = nullptr;
      for (const auto& t : tokens)
        if (t.begin >= *phrase_end) pick = &t;
      if (!pick && !tokens.empty()) pick = &tokens.back();
      if (pick) return make_answer(line, *pick, ExtractionRule::kAnswerLine);
      break;
    }
    if (nl == std::string_view::npos) break;
    line_end = nl;
  }

  // Rule 3: the last number anywhere.
  auto tokens = scan_numbers(text);
  if (tokens.empty()) return std::nullopt;
  return make_answer(text, tokens.back(), ExtractionRule::kLastNumber);
}

bool equal(const NumericAnswer& a, const NumericAnswer& b, double tolerance) {
  if (a.is_exact() && b.is_exact()) return a.value() == b.value();
  return std::fabs(a.to_double() - b.to_double()) <= tolerance;
}

}  // namespace mwpc
