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

// Resolution of positioned actions onto rule occurrences. This is the single
// source of truth for action placement, shared by definite-assignment
// analysis, the emitter and the interpreter.
//
// Execution order at one grammar position: all 'before' actions, then the
// symbol match (with the 'at' call for nonterminals), then all 'after'
// actions. Actions attached to the same site and position run in the textual
// order of the translation function body. Labels wrapping a phrase fire
// their 'before' actions ahead of the phrase's own and their 'after' actions
// behind it.

#ifndef GPG_SITES_HPP
#define GPG_SITES_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gpg/ast.hpp"
#include "gpg/diagnostics.hpp"
#include "gpg/grammar.hpp"

namespace gpg {

using RhsPath = std::vector<std::uint32_t>;

struct ActionSlots {
  std::vector<std::uint32_t> before;       // indices into tf.actions, textual order
  std::vector<std::uint32_t> after;
  std::optional<std::uint32_t> at;
};

struct SiteMap {
  std::map<RhsPath, ActionSlots> byPath;

  const ActionSlots* slotsAt(const RhsPath& path) const {
    auto it = byPath.find(path);
    return it == byPath.end() ? nullptr : &it->second;
  }
};

namespace detail {

// Descends through label wrappers to the node an 'at' action attaches to.
inline const RhsExpr* unwrapLabels(const RhsExpr* node, RhsPath& path) {
  while (node && node->kind == RhsKind::Labeled) {
    path.push_back(0);
    node = &node->children[0];
  }
  return node;
}

inline bool isAtCallShaped(const Statement& body) {
  if (body.kind == Statement::Kind::CallStatement) return true;
  return body.kind == Statement::Kind::Assignment &&
         body.expr.kind == Expression::Kind::Call;
}

}  // namespace detail

// Resolves every positioned action of the function against its rule.
// Emits UnknownSite for names matching neither a label nor a symbol,
// rejects 'at' actions on tokens/literals and on anything but a single
// translation-function call, and enforces at most one 'at' per occurrence.
inline std::optional<SiteMap> resolveTranslationSites(const Rule& rule,
                                                      const TranslationFunction& fn,
                                                      DiagnosticSink& sink) {
  SiteMap map;
  bool ok = true;
  for (std::uint32_t idx = 0; idx < fn.actions.size(); ++idx) {
    const PositionedAction& action = fn.actions[idx];
    auto occurrences = resolveActionSite(rule, action.site);
    if (!occurrences) {
      sink.error(diag::UnknownSite, action.siteSpan,
                 "Unknown action site '" + action.site + "' in rule '" + rule.name + "'");
      ok = false;
      continue;
    }
    for (const Occurrence& occ : *occurrences) {
      RhsPath path = occ.path;
      if (action.position == ActionPosition::At) {
        const RhsExpr* node = nodeAt(rule.rhs, path);
        node = detail::unwrapLabels(node, path);
        if (!node || node->kind != RhsKind::SymbolRef ||
            node->symbol.kind != SymbolKind::SyntacticRule) {
          sink.error(diag::AtOnToken, action.siteSpan,
                     "'at' actions apply to nonterminal occurrences only; '" + action.site +
                         "' is not one");
          ok = false;
          continue;
        }
        if (!detail::isAtCallShaped(action.body)) {
          sink.error(diag::AtNotACall, action.body.span,
                     "an 'at' action must be a single translation function call");
          ok = false;
          continue;
        }
        ActionSlots& slots = map.byPath[path];
        if (slots.at) {
          sink.error(diag::MultipleAt, action.siteSpan,
                     "occurrence of '" + node->symbol.name +
                         "' already has an 'at' action");
          ok = false;
          continue;
        }
        slots.at = idx;
      } else if (action.position == ActionPosition::Before) {
        map.byPath[path].before.push_back(idx);
      } else {
        map.byPath[path].after.push_back(idx);
      }
    }
  }
  if (!ok) return std::nullopt;
  return map;
}

// Ordered attribute accesses of one statement: right-hand-side reads first,
// then left-hand-side writes, tuples left to right. Token-text reads touch
// no attribute.
struct Access {
  std::string attribute;
  bool isWrite = false;
  Span span;
};

namespace detail {

inline void collectReads(const Expression& e, std::vector<Access>& out) {
  switch (e.kind) {
    case Expression::Kind::AttributeRef:
      out.push_back(Access{e.name, false, e.span});
      break;
    case Expression::Kind::TokenText:
      break;
    case Expression::Kind::Call:
      for (const Expression& arg : e.args) collectReads(arg, out);
      break;
  }
}

}  // namespace detail

inline void collectAccesses(const Statement& s, std::vector<Access>& out) {
  switch (s.kind) {
    case Statement::Kind::Assignment:
      detail::collectReads(s.expr, out);
      for (std::size_t i = 0; i < s.lhs.size(); ++i)
        out.push_back(Access{s.lhs[i], true, i < s.lhsSpans.size() ? s.lhsSpans[i] : s.span});
      break;
    case Statement::Kind::CallStatement:
      detail::collectReads(s.expr, out);
      break;
    case Statement::Kind::Block:
      for (const Statement& inner : s.body) collectAccesses(inner, out);
      break;
  }
}

inline std::vector<Access> statementAccesses(const Statement& s) {
  std::vector<Access> out;
  collectAccesses(s, out);
  return out;
}

}  // namespace gpg

#endif  // GPG_SITES_HPP
