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

#include <algorithm>
#include <sstream>

#include "lfe/dsl.hpp"

namespace lfe::dsl {

std::string_view attr_name(Attr a) {
  switch (a) {
    case Attr::kWord: return "word";
    case Attr::kLower: return "lower";
    case Attr::kPos: return "pos";
    case Attr::kNer: return "ner";
    case Attr::kShape: return "shape";
  }
  return "word";
}

std::string_view scope_name(Scope s) {
  switch (s) {
    case Scope::kSentence: return "sentence";
    case Scope::kSection: return "section";
    case Scope::kDocument: return "document";
  }
  return "sentence";
}

bool operator==(const WordLit& a, const WordLit& b) { return a.words == b.words; }
bool operator==(const TokenClass& a, const TokenClass& b) { return a.tests == b.tests; }
bool operator==(const Wildcard&, const Wildcard&) { return true; }
bool operator==(const Group& a, const Group& b) { return a.items == b.items; }
bool operator==(const Capture& a, const Capture& b) {
  return a.name == b.name && a.items == b.items;
}
bool operator==(const Quantified& a, const Quantified& b) {
  if (a.min != b.min || a.max != b.max) return false;
  if (!a.child || !b.child) return a.child == b.child;
  return *a.child == *b.child;
}
bool operator==(const PatternNode& a, const PatternNode& b) { return a.value == b.value; }

bool operator==(const Guard& a, const Guard& b) {
  return a.kind == b.kind && a.negated == b.negated &&
         a.alternatives == b.alternatives;
}

bool operator==(const LabelingFunction& a, const LabelingFunction& b) {
  return a.name == b.name && a.concept_id == b.concept_id &&
         a.priority == b.priority && a.scope == b.scope && a.guards == b.guards &&
         a.pattern == b.pattern;
}

namespace {

void collect_captures(std::span<const PatternNode> seq, std::vector<std::string>& out) {
  for (const PatternNode& n : seq) {
    if (const auto* g = std::get_if<Group>(&n.value)) {
      collect_captures(g->items, out);
    } else if (const auto* c = std::get_if<Capture>(&n.value)) {
      out.push_back(c->name);
      collect_captures(c->items, out);
    } else if (const auto* q = std::get_if<Quantified>(&n.value)) {
      collect_captures(std::span(q->child.get(), 1), out);
    }
  }
}

}  // namespace

std::vector<std::string> LabelingFunction::capture_names() const {
  std::vector<std::string> out;
  collect_captures(pattern, out);
  return out;
}

int min_length(const PatternNode& node) {
  return std::visit(
      [](const auto& v) -> int {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, WordLit>) {
          return static_cast<int>(v.words.size());
        } else if constexpr (std::is_same_v<T, TokenClass> ||
                             std::is_same_v<T, Wildcard>) {
          return 1;
        } else if constexpr (std::is_same_v<T, Group> || std::is_same_v<T, Capture>) {
          return min_length(std::span<const PatternNode>(v.items));
        } else {
          return v.min * min_length(*v.child);
        }
      },
      node.value);
}

int min_length(std::span<const PatternNode> seq) {
  int total = 0;
  for (const auto& n : seq) total += min_length(n);
  return total;
}

const Concept* resolve_capture(std::string_view capture_name,
                               const ConceptSchema& schema) {
  return schema.resolve(capture_name);
}

std::map<std::string, std::string> capture_bindings(const LabelingFunction& lf,
                                                    const ConceptSchema& schema) {
  std::map<std::string, std::string> out;
  for (const auto& name : lf.capture_names()) {
    if (const Concept* c = resolve_capture(name, schema)) out[name] = c->id;
  }
  return out;
}

bool has_errors(std::span<const Diagnostic> diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.is_error(); });
}

std::string format_diagnostic(const Diagnostic& d) {
  std::ostringstream os;
  os << d.line << ":" << d.col << ": "
     << (d.is_error() ? "error" : "warning") << " [" << d.code << "] ";
  if (!d.lf.empty()) os << "(" << d.lf << ") ";
  os << d.message;
  if (!d.expected.empty()) {
    os << "; expected ";
    for (size_t i = 0; i < d.expected.size(); ++i) {
      if (i) os << ", ";
      os << d.expected[i];
    }
  }
  return os.str();
}

// --- Formatting -------------------------------------------------------------

namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (size_t i = 0; i < words.size(); ++i) {
    if (i) out.push_back(' ');
    out += words[i];
  }
  return out;
}

void format_seq(std::span<const PatternNode> seq, std::string& out);

void format_node(const PatternNode& node, std::string& out) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, WordLit>) {
          out += quote(join_words(v.words));
        } else if constexpr (std::is_same_v<T, TokenClass>) {
          out.push_back('[');
          for (size_t i = 0; i < v.tests.size(); ++i) {
            if (i) out += ", ";
            out += attr_name(v.tests[i].attr);
            out.push_back('=');
            out += quote(v.tests[i].value);
          }
          out.push_back(']');
        } else if constexpr (std::is_same_v<T, Wildcard>) {
          out += "[]";
        } else if constexpr (std::is_same_v<T, Group>) {
          out.push_back('(');
          format_seq(v.items, out);
          out.push_back(')');
        } else if constexpr (std::is_same_v<T, Capture>) {
          out += v.name;
          out += ":(";
          format_seq(v.items, out);
          out.push_back(')');
        } else {
          format_node(*v.child, out);
          out += "{" + std::to_string(v.min) + "," + std::to_string(v.max) + "}";
        }
      },
      node.value);
}

void format_seq(std::span<const PatternNode> seq, std::string& out) {
  for (size_t i = 0; i < seq.size(); ++i) {
    if (i) out.push_back(' ');
    format_node(seq[i], out);
  }
}

}  // namespace

std::string format_lf(const LabelingFunction& lf) {
  std::string out = "lf " + lf.name + " for " + lf.concept_id;
  if (lf.priority != kDefaultPriority) out += " priority " + std::to_string(lf.priority);
  if (lf.scope != Scope::kSentence) out += " scope " + std::string(scope_name(lf.scope));
  std::string match = "match: ";
  format_seq(lf.pattern, match);
  if (lf.guards.empty()) return out + " { " + match + " }";

  out += " {\n";
  for (const Guard& g : lf.guards) {
    out += "  require ";
    if (g.negated) out += "not ";
    out += g.kind == GuardKind::kStarts ? "starts(" : "contains(";
    for (size_t i = 0; i < g.alternatives.size(); ++i) {
      if (i) out += " | ";
      out += quote(g.alternatives[i]);
    }
    out += ")\n";
  }
  out += "  " + match + "\n}";
  return out;
}

std::string format_ruleset(std::span<const LabelingFunction> lfs) {
  std::string out;
  for (size_t i = 0; i < lfs.size(); ++i) {
    if (i) out += "\n";
    out += format_lf(lfs[i]);
    out += "\n";
  }
  return out;
}

}  // namespace lfe::dsl
