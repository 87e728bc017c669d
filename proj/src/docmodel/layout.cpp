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

// Page-level layout analysis: repeated header/footer lines, sentence
// boundaries and section headings.

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "common/text_util.hpp"
#include "lfe/docmodel.hpp"

namespace lfe {

namespace {

struct Line {
  CharRange range;  // trimmed, document-absolute
};

// Non-blank lines of `text`, trimmed, shifted by `offset`.
std::vector<Line> split_lines(std::string_view text, uint32_t offset) {
  std::vector<Line> lines;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    size_t b = pos;
    size_t e = nl;
    while (b < e && util::is_space(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && util::is_space(static_cast<unsigned char>(text[e - 1]))) --e;
    if (b < e) {
      lines.push_back({{static_cast<uint32_t>(offset + b),
                        static_cast<uint32_t>(offset + e)}});
    }
    pos = nl + 1;
  }
  return lines;
}

// Case-folded, digit runs collapsed to '0', whitespace runs to one space.
std::string normalize_line(std::string_view line) {
  std::string out;
  bool in_digits = false;
  bool in_space = false;
  for (unsigned char c : line) {
    if (util::is_digit(c)) {
      if (!in_digits) out.push_back('0');
      in_digits = true;
      in_space = false;
    } else if (util::is_space(c)) {
      if (!in_space) out.push_back(' ');
      in_space = true;
      in_digits = false;
    } else {
      out.push_back(util::to_lower(static_cast<char>(c)));
      in_digits = false;
      in_space = false;
    }
  }
  return std::string(util::trim(out));
}

}  // namespace

std::vector<CharRange> detect_headers_footers(std::span<const PageText> pages,
                                              const HeaderFooterParams& params) {
  std::vector<CharRange> out;
  if (pages.size() < 2 || params.zone_lines == 0) return out;

  struct Zoned {
    CharRange range;
    std::string norm;
  };
  // zone 0 = top, zone 1 = bottom
  std::vector<std::array<std::vector<Zoned>, 2>> per_page(pages.size());
  std::array<std::map<std::string, size_t>, 2> page_counts;

  for (size_t p = 0; p < pages.size(); ++p) {
    const auto lines = split_lines(pages[p].text, pages[p].offset);
    const size_t k = std::min(params.zone_lines, lines.size());
    for (int zone = 0; zone < 2; ++zone) {
      std::set<std::string> seen;
      for (size_t i = 0; i < k; ++i) {
        const Line& line = zone == 0 ? lines[i] : lines[lines.size() - 1 - i];
        const auto rel = line.range.start - pages[p].offset;
        auto norm = normalize_line(pages[p].text.substr(rel, line.range.length()));
        if (norm.empty()) continue;
        if (seen.insert(norm).second) ++page_counts[zone][norm];
        per_page[p][zone].push_back({line.range, std::move(norm)});
      }
    }
  }

  const double needed = params.threshold * static_cast<double>(pages.size());
  std::set<CharRange> marked;
  for (const auto& zones : per_page) {
    for (int zone = 0; zone < 2; ++zone) {
      for (const Zoned& z : zones[zone]) {
        if (static_cast<double>(page_counts[zone][z.norm]) + 1e-9 >= needed) {
          marked.insert(z.range);
        }
      }
    }
  }
  return {marked.begin(), marked.end()};
}

namespace {

constexpr std::array<std::string_view, 27> kAbbreviations = {
    "no",  "nos", "art", "sec", "mr",  "mrs",  "ms",  "dr",  "st",
    "vs",  "etc", "inc", "ltd", "co",  "corp", "jan", "feb", "mar",
    "apr", "jun", "jul", "aug", "sep", "sept", "oct", "nov", "dec"};

bool is_abbreviation(std::string_view surface) {
  const auto lower = util::ascii_lower(surface);
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), lower) !=
         kAbbreviations.end();
}

// A blank line: two newlines separated only by whitespace.
bool has_blank_line(std::string_view gap) {
  bool seen_newline = false;
  for (unsigned char c : gap) {
    if (c == '\n') {
      if (seen_newline) return true;
      seen_newline = true;
    } else if (!util::is_space(c)) {
      seen_newline = false;
    }
  }
  return false;
}

}  // namespace

std::vector<Sentence> segment_sentences(std::string_view text,
                                        std::span<Token> tokens,
                                        std::span<const uint32_t> page_starts) {
  std::vector<Sentence> out;
  std::vector<uint32_t> eff;
  for (uint32_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].boilerplate) {
      tokens[i].sentence_index = -1;
    } else {
      eff.push_back(i);
    }
  }
  if (eff.empty()) return out;

  auto surf = [&](uint32_t i) {
    return text.substr(tokens[i].range.start, tokens[i].range.length());
  };
  auto crosses_page = [&](uint32_t from, uint32_t to) {
    auto it = std::upper_bound(page_starts.begin(), page_starts.end(), from);
    return it != page_starts.end() && *it <= to;
  };

  auto boundary_after = [&](size_t k) {
    const uint32_t a = eff[k];
    const uint32_t b = eff[k + 1];
    const auto sa = surf(a);
    const auto sb = surf(b);

    const bool skipped = b > a + 1;  // boilerplate in between
    const uint32_t gap_from = tokens[a].range.end;
    const uint32_t gap_to = tokens[b].range.start;
    if (!skipped && !crosses_page(gap_from, gap_to) &&
        has_blank_line(text.substr(gap_from, gap_to - gap_from))) {
      return true;
    }

    if (sa != "." && sa != "!" && sa != "?") return false;
    if (!util::is_upper(static_cast<unsigned char>(sb.front()))) return false;
    if (sa == "." && k > 0) {
      const uint32_t prev = eff[k - 1];
      const auto sp = surf(prev);
      if (tokens[prev].range.end == tokens[a].range.start &&
          ((sp.size() == 1 && util::is_upper(static_cast<unsigned char>(sp[0]))) ||
           is_abbreviation(sp))) {
        return false;
      }
    }
    return true;
  };

  size_t begin = 0;
  for (size_t k = 0; k < eff.size(); ++k) {
    if (k + 1 == eff.size() || boundary_after(k)) {
      Sentence s;
      s.first_token = eff[begin];
      s.last_token = eff[k];
      s.range = {tokens[s.first_token].range.start, tokens[s.last_token].range.end};
      const auto idx = static_cast<int32_t>(out.size());
      for (size_t m = begin; m <= k; ++m) tokens[eff[m]].sentence_index = idx;
      out.push_back(s);
      begin = k + 1;
    }
  }
  return out;
}

namespace {

struct HeadingLine {
  CharRange line;
  int depth = 0;       // 0 = depth assigned from context (caps heading)
  bool bare = false;   // numbering only, no title text on the line
};

bool is_roman(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (std::string_view("IVXLCDM").find(c) == std::string_view::npos) return false;
  }
  return true;
}

// Parses a dotted number "14" / "14.1" / "14.1.3"; returns component count or 0.
size_t dotted_components(std::string_view s) {
  size_t count = 0;
  size_t i = 0;
  while (i < s.size()) {
    size_t j = i;
    while (j < s.size() && util::is_digit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == i) return 0;
    ++count;
    if (j == s.size()) break;
    if (s[j] != '.') return 0;
    i = j + 1;
    if (i == s.size()) break;  // trailing dot
  }
  return count;
}

std::vector<std::string_view> words_of(std::string_view line) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && util::is_space(static_cast<unsigned char>(line[i]))) ++i;
    size_t j = i;
    while (j < line.size() && !util::is_space(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool is_filler(std::string_view w) {
  for (char c : w) {
    if (c != '-' && c != ':' && c != '.' && c != '|') return false;
  }
  return true;
}

// Numbered heading: "ARTICLE 14", "Section 12.3", "14.1 ...", "IV. ...".
// Returns the depth or 0; `bare` reports whether only numbering is present.
int numbered_depth(std::string_view line, bool seen_article, bool* bare) {
  auto words = words_of(line);
  if (words.empty()) return 0;
  auto strip_dot = [](std::string_view w) {
    if (!w.empty() && (w.back() == '.' || w.back() == ':')) w.remove_suffix(1);
    return w;
  };
  const auto head = util::ascii_lower(words[0]);
  int depth = 0;
  size_t used = 0;
  if ((head == "article" || head == "section" || head == "art.") &&
      words.size() >= 2) {
    const auto num = strip_dot(words[1]);
    size_t comps = dotted_components(num);
    if (comps == 0 && is_roman(num)) comps = 1;
    if (comps == 0) return 0;
    depth = static_cast<int>(comps);
    if (head == "section" && seen_article) depth += 1;
    used = 2;
  } else {
    const auto num = words[0];
    const size_t comps = dotted_components(num);
    if (comps >= 2) {
      depth = static_cast<int>(comps);
    } else if (num.size() >= 2 && num.back() == '.' &&
               is_roman(num.substr(0, num.size() - 1))) {
      depth = 1;
    } else {
      return 0;
    }
    used = 1;
  }
  *bare = true;
  for (size_t i = used; i < words.size(); ++i) {
    if (!is_filler(words[i])) *bare = false;
  }
  return depth;
}

// Short (<= 8 tokens) line with letters, all of them uppercase.
bool is_caps_heading(std::string_view line) {
  const auto toks = tokenize(line);
  if (toks.empty() || toks.size() > 8) return false;
  size_t letters = 0;
  for (unsigned char c : line) {
    if (util::is_lower(c)) return false;
    if (util::is_upper(c)) ++letters;
  }
  return letters >= 2;
}

}  // namespace

std::vector<Section> detect_sections(std::string_view text,
                                     std::span<const CharRange> boilerplate) {
  auto lines = split_lines(text, 0);
  std::erase_if(lines, [&](const Line& l) {
    return std::any_of(boilerplate.begin(), boilerplate.end(),
                       [&](const CharRange& b) { return b.overlaps(l.range); });
  });

  std::vector<HeadingLine> headings;
  bool seen_article = false;
  int last_numbered_depth = 0;
  for (size_t i = 0; i < lines.size(); ++i) {
    const auto line = text.substr(lines[i].range.start, lines[i].range.length());
    bool bare = false;
    if (int d = numbered_depth(line, seen_article, &bare)) {
      if (util::iequals(words_of(line)[0], "article")) seen_article = true;
      HeadingLine h{lines[i].range, d, bare};
      // A bare number followed by an all-caps title line forms one heading.
      if (bare && i + 1 < lines.size()) {
        const auto next =
            text.substr(lines[i + 1].range.start, lines[i + 1].range.length());
        bool next_bare = false;
        if (is_caps_heading(next) && !numbered_depth(next, seen_article, &next_bare)) {
          h.line.end = lines[i + 1].range.end;
          ++i;
        }
      }
      headings.push_back(h);
      last_numbered_depth = d;
    } else if (is_caps_heading(line)) {
      headings.push_back({lines[i].range, last_numbered_depth + 1, false});
    }
  }

  std::vector<Section> out;
  const auto size = static_cast<uint32_t>(text.size());
  if (headings.empty()) {
    out.push_back({{0, size}, {0, 0}, 1});
    return out;
  }
  for (size_t i = 0; i < headings.size(); ++i) {
    uint32_t end = size;
    for (size_t j = i + 1; j < headings.size(); ++j) {
      if (headings[j].depth <= headings[i].depth) {
        end = headings[j].line.start;
        break;
      }
    }
    out.push_back({{headings[i].line.start, end}, headings[i].line, headings[i].depth});
  }
  return out;
}

}  // namespace lfe
