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

// Pretty-printer producing specification text that re-parses to a
// structurally identical model.

#ifndef GPG_PRINTER_HPP
#define GPG_PRINTER_HPP

#include <sstream>
#include <string>

#include "gpg/ast.hpp"
#include "gpg/grammar.hpp"

namespace gpg {

namespace detail {

inline std::string escapeLiteral(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\'': out += "\\'"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c; break;
    }
  }
  return out;
}

// Parenthesization levels: alternatives bind loosest, then sequences, then
// suffixed/labeled atoms.
enum class RhsContext { Alternative, Sequence, Atom };

inline void printRhs(std::ostream& os, const RhsExpr& node, RhsContext ctx) {
  switch (node.kind) {
    case RhsKind::Alternative: {
      bool parens = ctx != RhsContext::Alternative;
      if (parens) os << '(';
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        if (i) os << " | ";
        printRhs(os, node.children[i], RhsContext::Sequence);
      }
      if (parens) os << ')';
      break;
    }
    case RhsKind::Sequence: {
      bool parens = ctx == RhsContext::Atom;
      if (parens) os << '(';
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        if (i) os << ' ';
        printRhs(os, node.children[i], RhsContext::Atom);
      }
      if (parens) os << ')';
      break;
    }
    case RhsKind::Iteration:
    case RhsKind::Optional: {
      // Stacked suffixes need a group to re-parse: (x*)? rather than x*?.
      const RhsExpr& child = node.children[0];
      bool parens = child.kind == RhsKind::Iteration || child.kind == RhsKind::Optional;
      if (parens) os << '(';
      printRhs(os, child, parens ? RhsContext::Alternative : RhsContext::Atom);
      if (parens) os << ')';
      os << (node.kind == RhsKind::Optional ? '?' : (node.minCount == 1 ? '+' : '*'));
      break;
    }
    case RhsKind::Labeled: {
      os << '$' << node.label << '=';
      // The suffix binds outside a label, so a labeled suffixed phrase (and
      // a directly nested label) needs a group to re-parse.
      const RhsExpr& child = node.children[0];
      bool parens = child.kind == RhsKind::Labeled || child.kind == RhsKind::Iteration ||
                    child.kind == RhsKind::Optional;
      if (parens) os << '(';
      printRhs(os, child, parens ? RhsContext::Alternative : RhsContext::Atom);
      if (parens) os << ')';
      break;
    }
    case RhsKind::SymbolRef:
      if (node.symbol.kind == SymbolKind::Literal)
        os << '\'' << escapeLiteral(node.symbol.name) << '\'';
      else
        os << node.symbol.name;
      break;
    case RhsKind::CharRange:
      os << '\'' << escapeLiteral(std::string(1, node.rangeLo)) << "'..'"
         << escapeLiteral(std::string(1, node.rangeHi)) << '\'';
      break;
  }
}

inline void printExpression(std::ostream& os, const Expression& e) {
  switch (e.kind) {
    case Expression::Kind::AttributeRef:
      os << e.name;
      break;
    case Expression::Kind::TokenText:
      os << e.name << '#';
      break;
    case Expression::Kind::Call:
      os << e.name << '(';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) os << ", ";
        printExpression(os, e.args[i]);
      }
      os << ')';
      break;
  }
}

inline void printStatement(std::ostream& os, const Statement& s, int indent) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  switch (s.kind) {
    case Statement::Kind::Block:
      os << "{\n";
      for (const Statement& inner : s.body) {
        os << pad << "  ";
        printStatement(os, inner, indent + 1);
        os << '\n';
      }
      os << pad << '}';
      break;
    case Statement::Kind::Assignment:
      if (s.lhs.size() == 1) {
        os << s.lhs[0];
      } else {
        os << '(';
        for (std::size_t i = 0; i < s.lhs.size(); ++i) {
          if (i) os << ", ";
          os << s.lhs[i];
        }
        os << ')';
      }
      os << " = ";
      printExpression(os, s.expr);
      os << ';';
      break;
    case Statement::Kind::CallStatement:
      printExpression(os, s.expr);
      os << ';';
      break;
  }
}

inline void printAttributeList(std::ostream& os, const std::vector<AttributeDecl>& attrs) {
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    if (i) os << ", ";
    if (attrs[i].declaredType) os << *attrs[i].declaredType << ' ';
    os << attrs[i].name;
  }
}

}  // namespace detail

inline std::string printSpecification(const ParsedSpecification& spec) {
  std::ostringstream os;
  // Declarations re-emit in the imports extension's concrete syntax, the
  // only built-in extension that defines any.
  if (!spec.declarations.options.empty()) {
    os << "#javaoptions {\n";
    for (const auto& [key, value] : spec.declarations.options)
      os << "  " << key << " = '" << detail::escapeLiteral(value) << "';\n";
    os << "}\n";
  }
  for (const std::string& imp : spec.declarations.imports) os << "import " << imp << ";\n";
  if (!spec.declarations.empty()) os << '\n';

  for (const ExternalSignature& ext : spec.externals) {
    if (ext.origin != SignatureOrigin::Declared) continue;
    os << ext.name << '(';
    detail::printAttributeList(os, ext.inputs);
    os << ") --> (";
    detail::printAttributeList(os, ext.outputs);
    os << ");\n";
  }
  if (!spec.externals.empty()) os << '\n';

  for (const Rule& rule : spec.grammar.rules) {
    if (rule.isFragment) os << "fragment ";
    os << rule.name << " : ";
    detail::printRhs(os, rule.rhs, detail::RhsContext::Alternative);
    os << " ;\n";
    for (const TranslationFunction& fn : spec.functions) {
      if (fn.forRule != rule.name) continue;
      os << "  " << fn.name << '(';
      detail::printAttributeList(os, fn.inputs);
      os << ") --> (";
      detail::printAttributeList(os, fn.outputs);
      os << ") {\n";
      for (const AttributeDecl& local : fn.locals) {
        os << "    ";
        if (local.declaredType) os << *local.declaredType << ' ';
        os << local.name << ";\n";
      }
      for (const PositionedAction& action : fn.actions) {
        os << "    ";
        switch (action.position) {
          case ActionPosition::Before: os << "before "; break;
          case ActionPosition::After: os << "after "; break;
          case ActionPosition::At: os << "at "; break;
        }
        if (action.siteIsLabel)
          os << '$' << action.site;
        else if (action.siteIsLiteral)
          os << '\'' << detail::escapeLiteral(action.site) << '\'';
        else
          os << action.site;
        os << " : ";
        detail::printStatement(os, action.body, 2);
        os << '\n';
      }
      os << "  }\n";
    }
  }
  return os.str();
}

}  // namespace gpg

#endif  // GPG_PRINTER_HPP
