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

#include "engine/matcher.hpp"

#include <algorithm>

namespace lfe::engine {

std::vector<Window> windows_for(const Document& doc, dsl::Scope scope) {
  const auto eff = doc.effective_tokens();
  const auto size = static_cast<uint32_t>(doc.text().size());
  std::vector<Window> out;
  switch (scope) {
    case dsl::Scope::kSentence:
      for (const Sentence& s : doc.sentences()) {
        out.push_back({s.range, eff.subspan(s.effective_begin,
                                            s.effective_end - s.effective_begin)});
      }
      break;
    case dsl::Scope::kDocument:
      out.push_back({{0, size}, eff});
      break;
    case dsl::Scope::kSection: {
      std::vector<CharRange> ranges;
      uint32_t cursor = 0;
      for (const Section& s : doc.sections()) {
        if (s.range.start < cursor || s.range.empty()) continue;
        if (s.range.start > cursor) ranges.push_back({cursor, s.range.start});
        ranges.push_back(s.range);
        cursor = s.range.end;
      }
      if (cursor < size || ranges.empty()) ranges.push_back({cursor, size});
      const auto toks = doc.tokens();
      size_t k = 0;
      for (const CharRange& r : ranges) {
        const size_t begin = k;
        while (k < eff.size() && toks[eff[k]].range.start < r.end) ++k;
        out.push_back({r, eff.subspan(begin, k - begin)});
      }
      break;
    }
  }
  return out;
}

namespace detail {

Matcher::Matcher(const Program& program, EvalCache& cache, uint64_t budget)
    : p_(program), cache_(cache), budget_(budget), caps_(program.captures.size()) {}

bool Matcher::phrase_at(const std::vector<uint32_t>& phrase, size_t pos) {
  if (pos + phrase.size() > toks_.size()) return false;
  for (size_t i = 0; i < phrase.size(); ++i) {
    if (!cache_.eval(p_.preds[phrase[i]], toks_[pos + i])) return false;
  }
  return true;
}

bool Matcher::guards_hold(std::span<const uint32_t> toks) {
  toks_ = toks;
  for (const CompiledGuard& g : p_.guards) {
    bool found = false;
    for (const auto& phrase : g.phrases) {
      if (g.kind == dsl::GuardKind::kStarts) {
        found = phrase_at(phrase, 0);
      } else {
        for (size_t pos = 0; !found && pos + phrase.size() <= toks.size(); ++pos) {
          found = phrase_at(phrase, pos);
        }
      }
      if (found) break;
    }
    if (found == g.negated) return false;
  }
  return true;
}

bool Matcher::attempt(std::span<const uint32_t> toks, size_t start, size_t& end) {
  toks_ = toks;
  steps_ = 0;
  depth_ = 0;
  std::fill(caps_.begin(), caps_.end(), CapState{});
  if (!node(p_.root, static_cast<int>(start), nullptr)) return false;
  end = static_cast<size_t>(end_);
  return true;
}

inline int Matcher::rest(const Cont* k) { return k ? k->min_rest : 0; }

bool Matcher::node(uint32_t n, int pos, const Cont* k) {
  if (++steps_ > budget_) throw BudgetExceeded{steps_};
  const Node& nd = p_.nodes[n];
  const int len = static_cast<int>(toks_.size());
  if (pos + nd.min_len + rest(k) > len) return false;
  switch (nd.kind) {
    case Node::Kind::kPred:
      if (!cache_.eval(p_.preds[nd.pred], toks_[pos])) return false;
      return cont(k, pos + 1);
    case Node::Kind::kGroup:
      return seq(nd, 0, pos, k);
    case Node::Kind::kCapture: {
      const Cont c{Cont::kCapEnd, &nd, 0, nd.slot, pos, rest(k), k};
      return seq(nd, 0, pos, &c);
    }
    case Node::Kind::kQuant: {
      const int child_min = p_.nodes[nd.child].min_len;
      for (int c = nd.max; c >= nd.min; --c) {
        if (pos + c * child_min + rest(k) > len) continue;
        if (repeat(nd, c, pos, k)) return true;
      }
      return false;
    }
  }
  return false;
}

bool Matcher::seq(const Node& group, size_t i, int pos, const Cont* k) {
  if (i == group.items.size()) return cont(k, pos);
  const Cont c{Cont::kSeq, &group, i + 1, 0, 0, group.items_rest[i + 1] + rest(k), k};
  return node(group.items[i], pos, &c);
}

bool Matcher::repeat(const Node& quant, int remaining, int pos, const Cont* k) {
  if (remaining == 0) return cont(k, pos);
  const int child_min = p_.nodes[quant.child].min_len;
  const Cont c{Cont::kRep, &quant, static_cast<size_t>(remaining - 1), 0, 0,
               (remaining - 1) * child_min + rest(k), k};
  return node(quant.child, pos, &c);
}

bool Matcher::cont(const Cont* k, int pos) {
  if (!k) {
    end_ = pos;
    return true;
  }
  if (++depth_ > kMaxDepth) throw BudgetExceeded{steps_};
  bool ok = false;
  switch (k->kind) {
    case Cont::kSeq:
      ok = seq(*k->node, k->index, pos, k->next);
      break;
    case Cont::kRep:
      ok = repeat(*k->node, static_cast<int>(k->index), pos, k->next);
      break;
    case Cont::kCapEnd: {
      const CapState saved = caps_[k->slot];
      caps_[k->slot] = {true, k->start, pos};
      ok = cont(k->next, pos);
      if (!ok) caps_[k->slot] = saved;
      break;
    }
  }
  --depth_;
  return ok;
}

}  // namespace detail

namespace {

Match make_match(const Document& doc, std::span<const uint32_t> toks, uint32_t window,
                 size_t start, size_t end, std::span<const detail::CapState> caps) {
  const auto tokens = doc.tokens();
  Match m;
  m.window = window;
  m.first_token = toks[start];
  m.last_token = toks[end - 1];
  m.full_range = {tokens[m.first_token].range.start, tokens[m.last_token].range.end};
  for (size_t slot = 0; slot < caps.size(); ++slot) {
    const auto& c = caps[slot];
    if (!c.set || c.end <= c.start) continue;
    CapturedSpan cs;
    cs.slot = static_cast<uint32_t>(slot);
    cs.first_token = toks[c.start];
    cs.last_token = toks[c.end - 1];
    cs.range = {tokens[cs.first_token].range.start, tokens[cs.last_token].range.end};
    m.captures.push_back(cs);
  }
  return m;
}

}  // namespace

std::vector<Match> detail::match_with(const Program& p, const Document& doc,
                                      EvalCache& cache, const MatchOptions& options,
                                      MatchReport* report) {
  cache.reset_document(doc);
  Matcher matcher(p, cache, options.step_budget);
  std::vector<Match> out;
  const auto windows = windows_for(doc, p.lf.scope);
  const size_t min_len = static_cast<size_t>(p.min_len);
  for (size_t w = 0; w < windows.size(); ++w) {
    const auto toks = windows[w].tokens;
    if (report) ++report->windows;
    if (toks.size() < min_len) continue;
    if (!matcher.guards_hold(toks)) continue;
    if (report) ++report->windows_passed;

    const size_t keep = out.size();
    try {
      size_t pos = 0;
      while (pos + min_len <= toks.size()) {
        size_t end = 0;
        if (matcher.attempt(toks, pos, end)) {
          out.push_back(make_match(doc, toks, static_cast<uint32_t>(w), pos, end,
                                   matcher.captures()));
          pos = end;
        } else {
          ++pos;
        }
      }
    } catch (const BudgetExceeded& e) {
      out.resize(keep);
      if (report) {
        report->budget.push_back({doc.id(), p.lf.name, static_cast<uint32_t>(w), e.steps});
      }
    }
  }
  return out;
}

std::vector<Match> match_document(const CompiledLF& clf, const Document& doc,
                                  const MatchOptions& options, MatchReport* report) {
  detail::EvalCache cache(clf.program());
  return detail::match_with(clf.program(), doc, cache, options, report);
}

void emit_votes(const CompiledLF& clf, const Document& doc, const Match& m,
                uint32_t doc_index, uint32_t source, std::vector<Vote>& out) {
  const auto slots = clf.captures();
  for (const CapturedSpan& c : m.captures) {
    const CaptureSlot& slot = slots[c.slot];
    CharRange range = c.range;
    if (slot.clause) {
      const int sec = doc.innermost_section(range);
      if (sec >= 0) range = doc.sections()[sec].range;
    }
    out.push_back({doc_index, static_cast<uint32_t>(slot.concept_index), range, source});
  }
}

}  // namespace lfe::engine
