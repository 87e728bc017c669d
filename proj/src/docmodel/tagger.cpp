// Copyright 2026 The lfe Authors.
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

// Lexicon-driven tagger for the built-in POS/NER tagsets.

#include <array>
#include <cctype>
#include <string>

#include "common/text_util.hpp"
#include "lfe/docmodel.hpp"

namespace lfe {

namespace {

constexpr std::array<std::string_view, 28> kSpelledNumbers = {
    "one",     "two",      "three",    "four",    "five",     "six",
    "seven",   "eight",    "nine",     "ten",     "eleven",   "twelve",
    "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen",
    "nineteen", "twenty",  "thirty",   "forty",   "fifty",    "sixty",
    "seventy", "eighty",   "ninety",   "hundred"};

constexpr std::array<std::string_view, 12> kTimeUnits = {
    "hour", "hours", "day",  "days",  "week",  "weeks",
    "month", "months", "year", "years", "shift", "shifts"};

constexpr std::array<std::string_view, 8> kOrgSuffixes = {
    "Inc", "LLC", "Ltd", "Corp", "Union", "Local", "Association", "Brotherhood"};

constexpr std::array<std::string_view, 12> kMonths = {
    "january", "february", "march",     "april",   "may",      "june",
    "july",    "august",   "september", "october", "november", "december"};

template <size_t N>
bool in_lexicon(const std::array<std::string_view, N>& lex, std::string_view s) {
  for (auto w : lex) {
    if (w == s) return true;
  }
  return false;
}

bool is_spelled_number(std::string_view lower) {
  return in_lexicon(kSpelledNumbers, lower);
}

bool is_month(std::string_view lower) {
  if (in_lexicon(kMonths, lower)) return true;
  if (lower == "sept") return true;
  if (lower.size() != 3) return false;
  for (auto m : kMonths) {
    if (m.substr(0, 3) == lower) return true;
  }
  return false;
}

bool is_org_suffix(std::string_view surface) {
  for (auto w : kOrgSuffixes) {
    if (surface == w || surface == util::ascii_upper(w)) return true;
  }
  return false;
}

// Day-of-month: 1-31, optionally with an ordinal suffix.
bool is_day(std::string_view s) {
  size_t n = 0;
  while (n < s.size() && util::is_digit(static_cast<unsigned char>(s[n]))) ++n;
  if (n == 0 || n > 2) return false;
  const int v = std::stoi(std::string(s.substr(0, n)));
  if (v < 1 || v > 31) return false;
  const auto suffix = util::ascii_lower(s.substr(n));
  return suffix.empty() || suffix == "st" || suffix == "nd" || suffix == "rd" ||
         suffix == "th";
}

bool is_year(std::string_view s) { return s.size() == 4 && util::all_digits(s); }

bool is_small_number(std::string_view s, int lo, int hi) {
  if (s.empty() || s.size() > 2 || !util::all_digits(s)) return false;
  const int v = std::stoi(std::string(s));
  return v >= lo && v <= hi;
}

class DateScanner {
 public:
  DateScanner(std::string_view text, std::span<const Token> tokens)
      : text_(text), tokens_(tokens) {}

  // Number of tokens of a date expression starting at `i`, or 0.
  size_t match_at(size_t i) const {
    if (size_t n = month_day_year(i)) return n;
    if (size_t n = slashed(i)) return n;
    if (size_t n = iso(i)) return n;
    return 0;
  }

 private:
  std::string_view surf(size_t i) const {
    const CharRange r = tokens_[i].range;
    return text_.substr(r.start, r.end - r.start);
  }
  bool has(size_t i) const { return i < tokens_.size(); }
  bool adjacent(size_t i) const {
    return tokens_[i].range.end == tokens_[i + 1].range.start;
  }

  // Month[.] d[,] yyyy
  size_t month_day_year(size_t i) const {
    if (!has(i) || !is_month(util::ascii_lower(surf(i)))) return 0;
    size_t j = i + 1;
    if (has(j) && surf(j) == "." && surf(i).size() <= 4) ++j;
    if (!has(j) || !is_day(surf(j))) return 0;
    ++j;
    if (has(j) && surf(j) == ",") ++j;
    if (!has(j) || !is_year(surf(j))) return 0;
    return j - i + 1;
  }

  // d/m/yyyy with no intervening whitespace.
  size_t slashed(size_t i) const {
    if (!has(i + 4)) return 0;
    for (size_t k = i; k < i + 4; ++k) {
      if (!adjacent(k)) return 0;
    }
    if (!is_small_number(surf(i), 1, 31) || surf(i + 1) != "/" ||
        !is_small_number(surf(i + 2), 1, 31) || surf(i + 3) != "/" ||
        !is_year(surf(i + 4))) {
      return 0;
    }
    return 5;
  }

  // yyyy-mm-dd with no intervening whitespace.
  size_t iso(size_t i) const {
    if (!has(i + 4)) return 0;
    for (size_t k = i; k < i + 4; ++k) {
      if (!adjacent(k)) return 0;
    }
    if (!is_year(surf(i)) || surf(i + 1) != "-" || surf(i + 2).size() != 2 ||
        !is_small_number(surf(i + 2), 1, 12) || surf(i + 3) != "-" ||
        surf(i + 4).size() != 2 || !is_small_number(surf(i + 4), 1, 31)) {
      return 0;
    }
    return 5;
  }

  std::string_view text_;
  std::span<const Token> tokens_;
};

}  // namespace

void tag_tokens(std::string_view text, std::span<Token> tokens,
                SymbolTable& symbols, std::span<const std::string> external_pos,
                std::span<const std::string> external_ner) {
  const SymbolId num = symbols.intern(tags::kNum);
  const SymbolId word = symbols.intern(tags::kWord);
  const SymbolId punct = symbols.intern(tags::kPunct);
  const SymbolId other = symbols.intern(tags::kOther);
  const SymbolId none = symbols.intern(tags::kNone);
  const SymbolId date = symbols.intern(tags::kDate);
  const SymbolId time_unit = symbols.intern(tags::kTimeUnit);
  const SymbolId org = symbols.intern(tags::kOrgSuffix);

  auto surface = [&](size_t i) {
    const CharRange r = tokens[i].range;
    return text.substr(r.start, r.end - r.start);
  };

  for (size_t i = 0; i < tokens.size(); ++i) {
    const auto s = surface(i);
    const auto lower = util::ascii_lower(s);
    const auto first = static_cast<unsigned char>(s.front());
    Token& t = tokens[i];

    if (util::all_digits(s) || is_spelled_number(lower)) {
      t.pos = num;
    } else if (util::is_word_byte(first)) {
      t.pos = word;
    } else if (first < 0x80 && std::ispunct(first)) {
      t.pos = punct;
    } else {
      t.pos = other;
    }

    if (in_lexicon(kTimeUnits, lower)) {
      t.ner = time_unit;
    } else if (is_org_suffix(s)) {
      t.ner = org;
    } else {
      t.ner = none;
    }
    t.shape = symbols.intern(token_shape(s));
  }

  // Two-token unit "pay period(s)".
  for (size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (util::iequals(surface(i), "pay")) {
      const auto next = util::ascii_lower(surface(i + 1));
      if (next == "period" || next == "periods") {
        tokens[i].ner = time_unit;
        tokens[i + 1].ner = time_unit;
      }
    }
  }

  DateScanner dates(text, tokens);
  for (size_t i = 0; i < tokens.size();) {
    if (size_t n = dates.match_at(i)) {
      for (size_t k = i; k < i + n; ++k) tokens[k].ner = date;
      i += n;
    } else {
      ++i;
    }
  }

  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i < external_pos.size() && !external_pos[i].empty()) {
      tokens[i].pos = symbols.intern(external_pos[i]);
    }
    if (i < external_ner.size() && !external_ner[i].empty()) {
      tokens[i].ner = symbols.intern(external_ner[i]);
    }
  }
}

}  // namespace lfe
