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

// Abstract syntax for the specification language: translation functions,
// positioned actions, statements, expressions, external signatures and
// extension-owned declarations.

#ifndef GPG_AST_HPP
#define GPG_AST_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gpg/grammar.hpp"
#include "gpg/source.hpp"

namespace gpg {

enum class AttrRole { Input, Output, Local };

struct AttributeDecl {
  std::string name;
  std::optional<std::string> declaredType;  // absent = to be inferred (locals only)
  AttrRole role = AttrRole::Local;
  Span span;
  Span typeSpan;
};

struct Expression {
  enum class Kind { AttributeRef, TokenText, Call };
  Kind kind = Kind::AttributeRef;
  std::string name;
  std::vector<Expression> args;  // Call
  Span span;
};

struct Statement {
  enum class Kind { Assignment, CallStatement, Block };
  Kind kind = Kind::Assignment;
  std::vector<std::string> lhs;  // Assignment: one name, or the tuple components
  std::vector<Span> lhsSpans;
  Expression expr;               // Assignment rhs / CallStatement call
  std::vector<Statement> body;   // Block
  Span span;
};

enum class ActionPosition { Before, After, At };

struct PositionedAction {
  ActionPosition position = ActionPosition::After;
  std::string site;  // symbol name, literal text, or label name
  bool siteIsLabel = false;
  bool siteIsLiteral = false;
  Span siteSpan;
  Statement body;
  Span span;
};

struct TranslationFunction {
  std::string name;
  std::string forRule;
  std::vector<AttributeDecl> inputs;
  std::vector<AttributeDecl> outputs;
  std::vector<AttributeDecl> locals;
  std::vector<PositionedAction> actions;
  Span span;
  Span nameSpan;
};

enum class SignatureOrigin { Declared, Inferred };

struct ExternalSignature {
  std::string name;
  std::vector<AttributeDecl> inputs;
  std::vector<AttributeDecl> outputs;
  SignatureOrigin origin = SignatureOrigin::Declared;
  Span span;
  Span nameSpan;
};

// Extension-specific payload collected from the optional leading
// declarations section of a specification file.
struct Declarations {
  std::vector<std::string> imports;  // dotted names, possibly ending in ".*"
  std::vector<std::pair<std::string, std::string>> options;

  bool empty() const { return imports.empty() && options.empty(); }

  const std::string* option(std::string_view key) const {
    for (const auto& [k, v] : options)
      if (k == key) return &v;
    return nullptr;
  }
};

struct ParsedSpecification {
  GrammarModel grammar;
  std::vector<TranslationFunction> functions;
  std::vector<ExternalSignature> externals;
  Declarations declarations;

  std::vector<const TranslationFunction*> functionsForRule(std::string_view rule) const {
    std::vector<const TranslationFunction*> out;
    for (const TranslationFunction& f : functions)
      if (f.forRule == rule) out.push_back(&f);
    return out;
  }

  const TranslationFunction* findFunction(std::string_view name) const {
    for (const TranslationFunction& f : functions)
      if (f.name == name) return &f;
    return nullptr;
  }

  const ExternalSignature* findExternal(std::string_view name) const {
    for (const ExternalSignature& e : externals)
      if (e.name == name) return &e;
    return nullptr;
  }
};

// Structural comparisons (spans ignored), used by round-trip checks.

inline bool sameStructure(const Expression& a, const Expression& b) {
  if (a.kind != b.kind || a.name != b.name || a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!sameStructure(a.args[i], b.args[i])) return false;
  return true;
}

inline bool sameStructure(const Statement& a, const Statement& b) {
  if (a.kind != b.kind || a.lhs != b.lhs || a.body.size() != b.body.size()) return false;
  if (a.kind != Statement::Kind::Block && !sameStructure(a.expr, b.expr)) return false;
  for (std::size_t i = 0; i < a.body.size(); ++i)
    if (!sameStructure(a.body[i], b.body[i])) return false;
  return true;
}

inline bool sameStructure(const AttributeDecl& a, const AttributeDecl& b) {
  return a.name == b.name && a.declaredType == b.declaredType && a.role == b.role;
}

inline bool sameStructure(const std::vector<AttributeDecl>& a,
                          const std::vector<AttributeDecl>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!sameStructure(a[i], b[i])) return false;
  return true;
}

inline bool sameStructure(const PositionedAction& a, const PositionedAction& b) {
  return a.position == b.position && a.site == b.site && a.siteIsLabel == b.siteIsLabel &&
         a.siteIsLiteral == b.siteIsLiteral && sameStructure(a.body, b.body);
}

inline bool sameStructure(const TranslationFunction& a, const TranslationFunction& b) {
  if (a.name != b.name || a.forRule != b.forRule) return false;
  if (!sameStructure(a.inputs, b.inputs) || !sameStructure(a.outputs, b.outputs) ||
      !sameStructure(a.locals, b.locals))
    return false;
  if (a.actions.size() != b.actions.size()) return false;
  for (std::size_t i = 0; i < a.actions.size(); ++i)
    if (!sameStructure(a.actions[i], b.actions[i])) return false;
  return true;
}

inline bool sameStructure(const ExternalSignature& a, const ExternalSignature& b) {
  return a.name == b.name && a.origin == b.origin && sameStructure(a.inputs, b.inputs) &&
         sameStructure(a.outputs, b.outputs);
}

inline bool sameStructure(const ParsedSpecification& a, const ParsedSpecification& b) {
  if (!sameStructure(a.grammar, b.grammar)) return false;
  if (a.functions.size() != b.functions.size() || a.externals.size() != b.externals.size())
    return false;
  for (std::size_t i = 0; i < a.functions.size(); ++i)
    if (!sameStructure(a.functions[i], b.functions[i])) return false;
  for (std::size_t i = 0; i < a.externals.size(); ++i)
    if (!sameStructure(a.externals[i], b.externals[i])) return false;
  return a.declarations.imports == b.declarations.imports &&
         a.declarations.options == b.declarations.options;
}

}  // namespace gpg

#endif  // GPG_AST_HPP
