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

// In-memory grammar model: rules, right-hand-side expression trees,
// location labels, occurrences, and model-level validation.

#ifndef GPG_GRAMMAR_HPP
#define GPG_GRAMMAR_HPP

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gpg/diagnostics.hpp"
#include "gpg/source.hpp"

namespace gpg {

enum class SymbolKind { TokenRule, SyntacticRule, Literal };

struct Symbol {
  std::string name;  // rule name, or the exact quoted text for literals
  SymbolKind kind = SymbolKind::SyntacticRule;

  bool operator==(const Symbol& other) const {
    return name == other.name && kind == other.kind;
  }
};

// Rule names that consist of uppercase letters (plus digits/underscores)
// denote token rules; everything else is syntactic.
inline bool isTokenRuleName(std::string_view name) {
  bool sawUpper = false;
  for (char c : name) {
    if (std::islower(static_cast<unsigned char>(c))) return false;
    if (std::isupper(static_cast<unsigned char>(c))) sawUpper = true;
  }
  return sawUpper;
}

enum class RhsKind {
  Sequence,
  Alternative,
  Iteration,  // '+' when minCount == 1, '*' when minCount == 0
  Optional,   // '?'
  SymbolRef,
  CharRange,
  Labeled,
};

struct RhsExpr {
  RhsKind kind = RhsKind::SymbolRef;
  std::vector<RhsExpr> children;  // Sequence/Alternative: n>=1; Iteration/Optional/Labeled: 1
  Symbol symbol;                  // SymbolRef
  std::uint32_t minCount = 0;     // Iteration
  char rangeLo = 0, rangeHi = 0;  // CharRange
  std::string label;              // Labeled
  Span span;
};

struct Rule {
  std::string name;
  RhsExpr rhs;
  bool isToken = false;
  bool isFragment = false;
  Span span;
  Span nameSpan;
};

// Identifies one node in a rule's rhs tree by the child-index path from the
// root. `symbolOrLabel` records the name the node was addressed by.
struct Occurrence {
  std::string rule;
  std::vector<std::uint32_t> path;
  std::string symbolOrLabel;

  bool operator==(const Occurrence& other) const {
    return rule == other.rule && path == other.path;
  }
  bool operator<(const Occurrence& other) const {
    if (rule != other.rule) return rule < other.rule;
    return path < other.path;
  }
};

struct GrammarModel {
  std::vector<Rule> rules;

  const Rule* findRule(std::string_view name) const {
    for (const Rule& r : rules)
      if (r.name == name) return &r;
    return nullptr;
  }
};

inline const RhsExpr* nodeAt(const RhsExpr& root, const std::vector<std::uint32_t>& path) {
  const RhsExpr* node = &root;
  for (std::uint32_t idx : path) {
    if (idx >= node->children.size()) return nullptr;
    node = &node->children[idx];
  }
  return node;
}

namespace detail {

template <typename Fn>
void walkRhs(const RhsExpr& node, std::vector<std::uint32_t>& path, Fn&& fn) {
  fn(node, path);
  for (std::uint32_t i = 0; i < node.children.size(); ++i) {
    path.push_back(i);
    walkRhs(node.children[i], path, fn);
    path.pop_back();
  }
}

template <typename Fn>
void walkRhs(const RhsExpr& node, Fn&& fn) {
  std::vector<std::uint32_t> path;
  walkRhs(node, path, fn);
}

}  // namespace detail

// Labels declared in a rule, in tree order.
inline std::vector<std::string> ruleLabels(const Rule& rule) {
  std::vector<std::string> labels;
  detail::walkRhs(rule.rhs, [&](const RhsExpr& node, const std::vector<std::uint32_t>&) {
    if (node.kind == RhsKind::Labeled) labels.push_back(node.label);
  });
  return labels;
}

// Resolves an action site name against a rule: a label resolves to its one
// labeled phrase, a symbol name or literal text to every occurrence of that
// symbol. Returns nullopt for names matching neither (UnknownSite).
inline std::optional<std::vector<Occurrence>> resolveActionSite(const Rule& rule,
                                                                std::string_view siteName) {
  std::vector<Occurrence> labelHits;
  std::vector<Occurrence> symbolHits;
  detail::walkRhs(rule.rhs, [&](const RhsExpr& node, const std::vector<std::uint32_t>& path) {
    if (node.kind == RhsKind::Labeled && node.label == siteName) {
      labelHits.push_back(Occurrence{rule.name, path, std::string(siteName)});
    } else if (node.kind == RhsKind::SymbolRef && node.symbol.name == siteName) {
      symbolHits.push_back(Occurrence{rule.name, path, std::string(siteName)});
    }
  });
  if (!labelHits.empty()) return labelHits;
  if (!symbolHits.empty()) return symbolHits;
  return std::nullopt;
}

// Structural comparison ignoring spans.
inline bool sameStructure(const RhsExpr& a, const RhsExpr& b) {
  if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
  switch (a.kind) {
    case RhsKind::SymbolRef:
      if (!(a.symbol == b.symbol)) return false;
      break;
    case RhsKind::Iteration:
      if (a.minCount != b.minCount) return false;
      break;
    case RhsKind::CharRange:
      if (a.rangeLo != b.rangeLo || a.rangeHi != b.rangeHi) return false;
      break;
    case RhsKind::Labeled:
      if (a.label != b.label) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!sameStructure(a.children[i], b.children[i])) return false;
  return true;
}

inline bool sameStructure(const Rule& a, const Rule& b) {
  return a.name == b.name && a.isToken == b.isToken && a.isFragment == b.isFragment &&
         sameStructure(a.rhs, b.rhs);
}

inline bool sameStructure(const GrammarModel& a, const GrammarModel& b) {
  if (a.rules.size() != b.rules.size()) return false;
  for (std::size_t i = 0; i < a.rules.size(); ++i)
    if (!sameStructure(a.rules[i], b.rules[i])) return false;
  return true;
}

// Checks the model invariants: defined references, unique rule names, unique
// labels per rule, char ranges confined to token rules, fragments being token
// rules and referenced only from token rules. Side-effect free.
inline std::vector<Diagnostic> validateGrammar(const GrammarModel& model,
                                               const SourceText& source) {
  std::vector<Diagnostic> diags;
  DiagnosticSink sink(source, diags);

  std::set<std::string> seen;
  for (const Rule& rule : model.rules) {
    if (!seen.insert(rule.name).second)
      sink.error(diag::GrammarDuplicateRule, rule.nameSpan,
                 "Duplicate rule name: " + rule.name);
    if (rule.isFragment && !rule.isToken)
      sink.error(diag::GrammarFragment, rule.nameSpan,
                 "'fragment' applies to token rules only: " + rule.name);
  }

  for (const Rule& rule : model.rules) {
    std::set<std::string> labels;
    detail::walkRhs(rule.rhs, [&](const RhsExpr& node, const std::vector<std::uint32_t>&) {
      switch (node.kind) {
        case RhsKind::Labeled:
          if (!labels.insert(node.label).second)
            sink.error(diag::GrammarDuplicateLabel, node.span,
                       "Duplicate label in rule '" + rule.name + "': $" + node.label);
          break;
        case RhsKind::CharRange:
          if (!rule.isToken)
            sink.error(diag::GrammarCharRange, node.span,
                       "Character ranges may appear in token rules only");
          break;
        case RhsKind::SymbolRef: {
          if (node.symbol.kind == SymbolKind::Literal) break;
          const Rule* target = model.findRule(node.symbol.name);
          if (!target) {
            sink.error(diag::GrammarUndefinedSymbol, node.span,
                       "Undefined symbol: " + node.symbol.name);
            break;
          }
          if (rule.isToken && !target->isToken)
            sink.error(diag::GrammarBadReference, node.span,
                       "Token rule '" + rule.name + "' references syntactic rule '" +
                           target->name + "'");
          if (!rule.isToken && target->isFragment)
            sink.error(diag::GrammarBadReference, node.span,
                       "Fragment rule '" + target->name +
                           "' may be referenced from token rules only");
          break;
        }
        default:
          break;
      }
    });
  }

  sortDiagnostics(diags);
  return diags;
}

}  // namespace gpg

#endif  // GPG_GRAMMAR_HPP
