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

// Parser for specification (.gpg) files:
//
//   specification : declarations?
//                   (externalFunctionSignature | (grammarRule translationFunction*))* ;
//
// Ground type syntax inside signatures is delegated to the active
// extension's 'type' sub-grammar; the declarations section to its
// 'declarations' sub-grammar. On any error the parser returns diagnostics
// and no model; recovery is statement-level resynchronization only.

#ifndef GPG_PARSER_HPP
#define GPG_PARSER_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gpg/ast.hpp"
#include "gpg/diagnostics.hpp"
#include "gpg/extension.hpp"
#include "gpg/grammar.hpp"
#include "gpg/lexer.hpp"
#include "gpg/source.hpp"

namespace gpg {

struct SpecParseResult {
  std::optional<ParsedSpecification> spec;
  std::vector<Diagnostic> diagnostics;
};

namespace detail {

class SpecParser {
public:
  SpecParser(TokenStream& ts, const TypeSystemExtension& ext) : ts_(ts), ext_(&ext) {}

  ParsedSpecification parse() {
    ParsedSpecification spec;
    spec.declarations = ext_->parseDeclarations(ts_);

    while (!ts_.atEnd()) {
      if (ts_.atKeyword("fragment") || (ts_.at(Tok::Ident) && ts_.peek(1).kind == Tok::Colon)) {
        parseGrammarRule(spec);
        continue;
      }
      if (ts_.at(Tok::Ident) && ts_.peek(1).kind == Tok::LParen) {
        parseSignatureItem(spec);
        continue;
      }
      ts_.sink().error(diag::Syntax, ts_.peek().span,
                       "expected a grammar rule, translation function or external signature");
      skipTopLevel();
    }
    return spec;
  }

private:
  void parseGrammarRule(ParsedSpecification& spec) {
    Rule rule;
    rule.isFragment = ts_.acceptKeyword("fragment");
    if (!ts_.at(Tok::Ident)) {
      ts_.sink().error(diag::Syntax, ts_.peek().span, "expected rule name");
      skipTopLevel();
      return;
    }
    Token name = ts_.advance();
    rule.name = name.text;
    rule.nameSpan = name.span;
    rule.span = name.span;
    rule.isToken = isTokenRuleName(rule.name);
    if (!ts_.expect(Tok::Colon, "after rule name")) {
      skipTopLevel();
      return;
    }
    auto rhs = parseRhsAlternative();
    if (!rhs) {
      skipTopLevel();
      return;
    }
    rule.rhs = std::move(*rhs);
    ts_.expect(Tok::Semi, "after rule body");
    spec.grammar.rules.push_back(std::move(rule));
  }

  std::optional<RhsExpr> parseRhsAlternative() {
    auto first = parseRhsSequence();
    if (!first) return std::nullopt;
    if (!ts_.at(Tok::Pipe)) return first;
    RhsExpr alt;
    alt.kind = RhsKind::Alternative;
    alt.span = first->span;
    alt.children.push_back(std::move(*first));
    while (ts_.accept(Tok::Pipe)) {
      auto branch = parseRhsSequence();
      if (!branch) return std::nullopt;
      alt.span = alt.span.merge(branch->span);
      alt.children.push_back(std::move(*branch));
    }
    return alt;
  }

  std::optional<RhsExpr> parseRhsSequence() {
    std::vector<RhsExpr> elements;
    while (startsRhsElement()) {
      auto element = parseRhsElement();
      if (!element) return std::nullopt;
      elements.push_back(std::move(*element));
    }
    if (elements.empty()) {
      ts_.sink().error(diag::Syntax, ts_.peek().span, "expected a grammar phrase");
      return std::nullopt;
    }
    if (elements.size() == 1) return std::move(elements.front());
    RhsExpr seq;
    seq.kind = RhsKind::Sequence;
    seq.span = elements.front().span.merge(elements.back().span);
    seq.children = std::move(elements);
    return seq;
  }

  bool startsRhsElement() const {
    return ts_.at(Tok::Ident) || ts_.at(Tok::Literal) || ts_.at(Tok::Label) ||
           ts_.at(Tok::LParen);
  }

  std::optional<RhsExpr> parseRhsElement() {
    std::optional<std::pair<std::string, Span>> label;
    if (ts_.at(Tok::Label)) {
      Token l = ts_.advance();
      label = {l.text, l.span};
      if (!ts_.expect(Tok::Equals, "after location label")) return std::nullopt;
    }
    auto atom = parseRhsAtom();
    if (!atom) return std::nullopt;
    RhsExpr node;
    if (label) {
      node.kind = RhsKind::Labeled;
      node.label = label->first;
      node.span = label->second.merge(atom->span);
      node.children.push_back(std::move(*atom));
    } else {
      node = std::move(*atom);
    }
    // The iteration/option suffix applies outside the label.
    if (ts_.at(Tok::Plus) || ts_.at(Tok::Star) || ts_.at(Tok::Question)) {
      Token suffix = ts_.advance();
      RhsExpr wrapped;
      wrapped.kind = suffix.kind == Tok::Question ? RhsKind::Optional : RhsKind::Iteration;
      wrapped.minCount = suffix.kind == Tok::Plus ? 1 : 0;
      wrapped.span = node.span.merge(suffix.span);
      wrapped.children.push_back(std::move(node));
      return wrapped;
    }
    return node;
  }

  std::optional<RhsExpr> parseRhsAtom() {
    if (ts_.at(Tok::Ident)) {
      Token name = ts_.advance();
      RhsExpr node;
      node.kind = RhsKind::SymbolRef;
      node.symbol.name = name.text;
      node.symbol.kind =
          isTokenRuleName(name.text) ? SymbolKind::TokenRule : SymbolKind::SyntacticRule;
      node.span = name.span;
      return node;
    }
    if (ts_.at(Tok::Literal)) {
      Token lit = ts_.advance();
      if (ts_.at(Tok::DotDot)) {
        ts_.advance();
        if (!ts_.at(Tok::Literal)) {
          ts_.sink().error(diag::Syntax, ts_.peek().span,
                           "expected a character literal after '..'");
          return std::nullopt;
        }
        Token hi = ts_.advance();
        if (lit.text.size() != 1 || hi.text.size() != 1) {
          ts_.sink().error(diag::Syntax, lit.span.merge(hi.span),
                           "character range bounds must be single characters");
          return std::nullopt;
        }
        RhsExpr node;
        node.kind = RhsKind::CharRange;
        node.rangeLo = lit.text[0];
        node.rangeHi = hi.text[0];
        node.span = lit.span.merge(hi.span);
        return node;
      }
      RhsExpr node;
      node.kind = RhsKind::SymbolRef;
      node.symbol.name = lit.text;
      node.symbol.kind = SymbolKind::Literal;
      node.span = lit.span;
      return node;
    }
    if (ts_.accept(Tok::LParen)) {
      auto inner = parseRhsAlternative();
      if (!inner) return std::nullopt;
      ts_.expect(Tok::RParen, "to close group");
      return inner;
    }
    ts_.sink().error(diag::Syntax, ts_.peek().span, "expected a grammar phrase");
    return std::nullopt;
  }

  // Common prefix of external signatures and translation functions:
  //   NAME '(' attributes? ')' '-->' '(' attributes? ')'
  void parseSignatureItem(ParsedSpecification& spec) {
    Token name = ts_.advance();
    ts_.expect(Tok::LParen, "after function name");
    std::vector<AttributeDecl> inputs;
    if (!parseAttributeDecls(spec, inputs, AttrRole::Input)) {
      skipTopLevel();
      return;
    }
    ts_.expect(Tok::RParen, "after input attributes");
    if (!ts_.expect(Tok::Arrow, "between attribute lists")) {
      skipTopLevel();
      return;
    }
    ts_.expect(Tok::LParen, "before output attributes");
    std::vector<AttributeDecl> outputs;
    if (!parseAttributeDecls(spec, outputs, AttrRole::Output)) {
      skipTopLevel();
      return;
    }
    ts_.expect(Tok::RParen, "after output attributes");

    if (ts_.accept(Tok::Semi)) {
      ExternalSignature sig;
      sig.name = name.text;
      sig.nameSpan = name.span;
      sig.span = name.span;
      sig.inputs = std::move(inputs);
      sig.outputs = std::move(outputs);
      sig.origin = SignatureOrigin::Declared;
      spec.externals.push_back(std::move(sig));
      return;
    }
    if (!ts_.expect(Tok::LBrace, "to open translation function body")) {
      skipTopLevel();
      return;
    }
    TranslationFunction fn;
    fn.name = name.text;
    fn.nameSpan = name.span;
    fn.span = name.span;
    fn.inputs = std::move(inputs);
    fn.outputs = std::move(outputs);
    if (spec.grammar.rules.empty()) {
      ts_.sink().error(diag::FunctionPlacement, name.span,
                       "translation function '" + fn.name +
                           "' does not follow a grammar rule");
    } else {
      fn.forRule = spec.grammar.rules.back().name;
    }
    parseFunctionBody(spec, fn);
    spec.functions.push_back(std::move(fn));
  }

  bool parseAttributeDecls(ParsedSpecification& spec, std::vector<AttributeDecl>& out,
                           AttrRole role) {
    if (ts_.at(Tok::RParen)) return true;
    while (true) {
      AttributeDecl decl;
      decl.role = role;
      Span typeSpan;
      auto type = ext_->parseTypeRef(ts_, spec.declarations, &typeSpan);
      if (type) decl.declaredType = *type;
      decl.typeSpan = typeSpan;
      if (!ts_.at(Tok::Ident)) {
        ts_.sink().error(diag::Syntax, ts_.peek().span, "expected attribute name");
        return false;
      }
      Token name = ts_.advance();
      decl.name = name.text;
      decl.span = name.span;
      out.push_back(std::move(decl));
      if (!ts_.accept(Tok::Comma)) return true;
    }
  }

  void parseFunctionBody(ParsedSpecification& spec, TranslationFunction& fn) {
    while (!ts_.at(Tok::RBrace) && !ts_.atEnd()) {
      if (ts_.atKeyword("before") || ts_.atKeyword("after") || ts_.atKeyword("at")) {
        parseAction(fn);
        continue;
      }
      // Local attribute declaration: type NAME ';'
      AttributeDecl decl;
      decl.role = AttrRole::Local;
      Span typeSpan;
      auto type = ext_->parseTypeRef(ts_, spec.declarations, &typeSpan);
      if (!type && !ts_.at(Tok::Ident)) {
        recoverInBody();
        continue;
      }
      if (type) decl.declaredType = *type;
      decl.typeSpan = typeSpan;
      if (!ts_.at(Tok::Ident)) {
        ts_.sink().error(diag::Syntax, ts_.peek().span, "expected attribute name");
        recoverInBody();
        continue;
      }
      Token name = ts_.advance();
      decl.name = name.text;
      decl.span = name.span;
      ts_.expect(Tok::Semi, "after local attribute declaration");
      fn.locals.push_back(std::move(decl));
    }
    ts_.expect(Tok::RBrace, "to close translation function body");
  }

  void parseAction(TranslationFunction& fn) {
    Token keyword = ts_.advance();
    PositionedAction action;
    action.span = keyword.span;
    action.position = keyword.text == "before"  ? ActionPosition::Before
                      : keyword.text == "after" ? ActionPosition::After
                                                : ActionPosition::At;
    if (ts_.at(Tok::Ident)) {
      Token site = ts_.advance();
      action.site = site.text;
      action.siteSpan = site.span;
    } else if (ts_.at(Tok::Label)) {
      Token site = ts_.advance();
      action.site = site.text;
      action.siteIsLabel = true;
      action.siteSpan = site.span;
    } else if (ts_.at(Tok::Literal)) {
      Token site = ts_.advance();
      action.site = site.text;
      action.siteIsLiteral = true;
      action.siteSpan = site.span;
    } else {
      ts_.sink().error(diag::Syntax, ts_.peek().span,
                       "expected an action site (symbol, label or literal)");
      recoverInBody();
      return;
    }
    if (!ts_.expect(Tok::Colon, "after action site")) {
      recoverInBody();
      return;
    }
    auto body = parseStatement();
    if (!body) {
      recoverInBody();
      return;
    }
    action.body = std::move(*body);
    fn.actions.push_back(std::move(action));
  }

  std::optional<Statement> parseStatement() {
    if (ts_.at(Tok::LBrace)) {
      Token open = ts_.advance();
      Statement block;
      block.kind = Statement::Kind::Block;
      block.span = open.span;
      while (!ts_.at(Tok::RBrace) && !ts_.atEnd()) {
        auto inner = parseStatement();
        if (!inner) {
          recoverInBody();
          if (ts_.at(Tok::RBrace)) break;
          continue;
        }
        block.body.push_back(std::move(*inner));
      }
      ts_.expect(Tok::RBrace, "to close block");
      return block;
    }

    Statement stmt;
    stmt.span = ts_.peek().span;
    if (ts_.accept(Tok::LParen)) {
      // Attribute tuple on the left-hand side.
      stmt.kind = Statement::Kind::Assignment;
      while (true) {
        if (!ts_.at(Tok::Ident)) {
          ts_.sink().error(diag::Syntax, ts_.peek().span, "expected attribute name in tuple");
          return std::nullopt;
        }
        Token name = ts_.advance();
        stmt.lhs.push_back(name.text);
        stmt.lhsSpans.push_back(name.span);
        if (!ts_.accept(Tok::Comma)) break;
      }
      if (!ts_.expect(Tok::RParen, "to close attribute tuple")) return std::nullopt;
      if (!ts_.expect(Tok::Equals, "after attribute tuple")) return std::nullopt;
      auto rhs = parseExpression();
      if (!rhs) return std::nullopt;
      stmt.expr = std::move(*rhs);
      if (!ts_.expect(Tok::Semi, "after statement")) return std::nullopt;
      return stmt;
    }

    if (ts_.at(Tok::Ident) && ts_.peek(1).kind == Tok::Equals) {
      Token name = ts_.advance();
      ts_.advance();  // '='
      stmt.kind = Statement::Kind::Assignment;
      stmt.lhs.push_back(name.text);
      stmt.lhsSpans.push_back(name.span);
      auto rhs = parseExpression();
      if (!rhs) return std::nullopt;
      stmt.expr = std::move(*rhs);
      if (!ts_.expect(Tok::Semi, "after statement")) return std::nullopt;
      return stmt;
    }

    if (ts_.at(Tok::Ident) && ts_.peek(1).kind == Tok::LParen) {
      auto call = parseExpression();
      if (!call) return std::nullopt;
      stmt.kind = Statement::Kind::CallStatement;
      stmt.expr = std::move(*call);
      if (!ts_.expect(Tok::Semi, "after statement")) return std::nullopt;
      return stmt;
    }

    ts_.sink().error(diag::Syntax, ts_.peek().span, "expected a statement");
    return std::nullopt;
  }

  std::optional<Expression> parseExpression() {
    if (ts_.at(Tok::TokenText)) {
      Token t = ts_.advance();
      Expression e;
      e.kind = Expression::Kind::TokenText;
      e.name = t.text;
      e.span = t.span;
      return e;
    }
    if (ts_.at(Tok::Ident)) {
      Token name = ts_.advance();
      if (ts_.accept(Tok::LParen)) {
        Expression call;
        call.kind = Expression::Kind::Call;
        call.name = name.text;
        call.span = name.span;
        if (!ts_.at(Tok::RParen)) {
          while (true) {
            auto arg = parseExpression();
            if (!arg) return std::nullopt;
            call.args.push_back(std::move(*arg));
            if (!ts_.accept(Tok::Comma)) break;
          }
        }
        if (!ts_.expect(Tok::RParen, "to close argument list")) return std::nullopt;
        return call;
      }
      Expression ref;
      ref.kind = Expression::Kind::AttributeRef;
      ref.name = name.text;
      ref.span = name.span;
      return ref;
    }
    if (ts_.at(Tok::Number)) {
      ts_.sink().error(diag::Syntax, ts_.peek().span,
                       "numeric literals are not part of the action language; "
                       "use an external function");
      return std::nullopt;
    }
    ts_.sink().error(diag::Syntax, ts_.peek().span, "expected an expression");
    return std::nullopt;
  }

  // Skip to the next ';' (consumed) or a closing '}' (left in place), so the
  // surrounding body or top level can continue.
  void recoverInBody() {
    int depth = 0;
    while (!ts_.atEnd()) {
      if (ts_.at(Tok::Semi) && depth == 0) {
        ts_.advance();
        return;
      }
      if (ts_.at(Tok::LBrace)) ++depth;
      if (ts_.at(Tok::RBrace)) {
        if (depth == 0) return;
        --depth;
      }
      ts_.advance();
    }
  }

  void skipTopLevel() {
    int depth = 0;
    while (!ts_.atEnd()) {
      if (ts_.at(Tok::Semi) && depth == 0) {
        ts_.advance();
        return;
      }
      if (ts_.at(Tok::LBrace)) ++depth;
      if (ts_.at(Tok::RBrace)) {
        ts_.advance();
        if (--depth <= 0) return;
        continue;
      }
      ts_.advance();
    }
  }

  TokenStream& ts_;
  const TypeSystemExtension* ext_;
};

}  // namespace detail

// Parses a specification; returns either a model or diagnostics, never a
// partial model alongside errors.
inline SpecParseResult parseSpecification(const SourceText& source,
                                          const TypeSystemExtension& extension) {
  SpecParseResult result;
  DiagnosticSink sink(source, result.diagnostics);
  TokenStream ts(lexSource(source, sink), sink);
  detail::SpecParser parser(ts, extension);
  ParsedSpecification spec = parser.parse();
  sortDiagnostics(result.diagnostics);
  if (!hasErrors(result.diagnostics)) result.spec = std::move(spec);
  return result;
}

// Parses just a declarations section through the extension hook.
inline std::pair<Declarations, std::vector<Diagnostic>> parseDeclarations(
    const SourceText& source, const TypeSystemExtension& extension) {
  std::vector<Diagnostic> diags;
  DiagnosticSink sink(source, diags);
  TokenStream ts(lexSource(source, sink), sink);
  Declarations decls = extension.parseDeclarations(ts);
  if (!ts.atEnd())
    sink.error(diag::Syntax, ts.peek().span, "unexpected input after declarations");
  sortDiagnostics(diags);
  return {std::move(decls), std::move(diags)};
}

}  // namespace gpg

#endif  // GPG_PARSER_HPP
