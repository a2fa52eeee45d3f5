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

// Direct interpreter: tokenizes input with longest-match lexing (literals
// outrank token rules at equal length), then runs recursive descent over the
// rhs trees, executing translation-function actions in order. Alternative
// and loop decisions are LL(1); conflicts are reported before any input is
// read. In debug mode every stored value's dynamic type tag is checked
// against the attribute's static type.

#ifndef GPG_INTERPRETER_HPP
#define GPG_INTERPRETER_HPP

#include <any>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gpg/first_follow.hpp"
#include "gpg/sites.hpp"
#include "gpg/typecheck.hpp"

namespace gpg {

struct RuntimeValue {
  std::string tag;  // ground type name
  std::variant<std::monostate, std::int64_t, std::string, std::any> value;

  static RuntimeValue ofInt(std::int64_t v, std::string tag) {
    RuntimeValue r;
    r.tag = std::move(tag);
    r.value = v;
    return r;
  }
  static RuntimeValue ofString(std::string v, std::string tag) {
    RuntimeValue r;
    r.tag = std::move(tag);
    r.value = std::move(v);
    return r;
  }
  static RuntimeValue ofHost(std::any v, std::string tag) {
    RuntimeValue r;
    r.tag = std::move(tag);
    r.value = std::move(v);
    return r;
  }

  bool isInt() const { return std::holds_alternative<std::int64_t>(value); }
  bool isString() const { return std::holds_alternative<std::string>(value); }
  std::int64_t asInt() const { return std::get<std::int64_t>(value); }
  const std::string& asString() const { return std::get<std::string>(value); }
  const std::any& asHost() const { return std::get<std::any>(value); }

  std::string render() const {
    if (isInt()) return std::to_string(asInt());
    if (isString()) return asString();
    return "<" + tag + ">";
  }
};

struct InterpError : std::runtime_error {
  explicit InterpError(const std::string& what) : std::runtime_error(what) {}
};
struct LexError : InterpError {
  LineCol at;
  LexError(const std::string& what, LineCol where) : InterpError(what), at(where) {}
};
struct ParseError : InterpError {
  LineCol at;
  ParseError(const std::string& what, LineCol where) : InterpError(what), at(where) {}
};
struct NotLL1Error : InterpError {
  std::vector<std::string> conflicts;
  explicit NotLL1Error(std::vector<std::string> all)
      : InterpError("grammar is not LL(1): " + (all.empty() ? std::string() : all.front())),
        conflicts(std::move(all)) {}
};
struct HostError : InterpError {
  explicit HostError(const std::string& what) : InterpError(what) {}
};
struct EvalError : InterpError {
  explicit EvalError(const std::string& what) : InterpError(what) {}
};

class ExternalFunctionTable {
public:
  using HostFn = std::function<std::vector<RuntimeValue>(const std::vector<RuntimeValue>&)>;

  void bind(std::string name, HostFn fn) { bindings_[std::move(name)] = std::move(fn); }

  const HostFn* find(const std::string& name) const {
    auto it = bindings_.find(name);
    return it == bindings_.end() ? nullptr : &it->second;
  }

private:
  std::map<std::string, HostFn> bindings_;
};

struct InterpretOptions {
  bool checkTags = true;
};

struct LexedToken {
  int kind = TokenCatalog::kEof;
  std::string text;
  std::uint32_t offset = 0;
};

namespace detail {

// Longest-match engine over token-rule rhs trees. Returns every offset a
// node can end at when matching from `pos`; recursion through token rules is
// guarded so cyclic lexical rules cannot loop.
class TokenMatcher {
public:
  TokenMatcher(const GrammarModel& model, std::string_view input)
      : model_(&model), input_(input) {}

  std::set<std::size_t> ends(const RhsExpr& node, std::size_t pos) {
    switch (node.kind) {
      case RhsKind::SymbolRef: {
        if (node.symbol.kind == SymbolKind::Literal) return matchText(node.symbol.name, pos);
        const Rule* rule = model_->findRule(node.symbol.name);
        if (!rule || !rule->isToken) return {};
        auto key = std::make_pair(rule, pos);
        if (active_.count(key)) return {};
        active_.insert(key);
        std::set<std::size_t> result = ends(rule->rhs, pos);
        active_.erase(key);
        return result;
      }
      case RhsKind::CharRange:
        if (pos < input_.size() && input_[pos] >= node.rangeLo && input_[pos] <= node.rangeHi)
          return {pos + 1};
        return {};
      case RhsKind::Labeled:
        return ends(node.children[0], pos);
      case RhsKind::Sequence: {
        std::set<std::size_t> frontier{pos};
        for (const RhsExpr& child : node.children) {
          std::set<std::size_t> next;
          for (std::size_t p : frontier) {
            std::set<std::size_t> e = ends(child, p);
            next.insert(e.begin(), e.end());
          }
          frontier = std::move(next);
          if (frontier.empty()) break;
        }
        return frontier;
      }
      case RhsKind::Alternative: {
        std::set<std::size_t> out;
        for (const RhsExpr& child : node.children) {
          std::set<std::size_t> e = ends(child, pos);
          out.insert(e.begin(), e.end());
        }
        return out;
      }
      case RhsKind::Iteration: {
        std::set<std::size_t> out;
        if (node.minCount == 0) out.insert(pos);
        std::set<std::size_t> frontier = ends(node.children[0], pos);
        while (!frontier.empty()) {
          std::set<std::size_t> fresh;
          for (std::size_t p : frontier)
            if (out.insert(p).second) fresh.insert(p);
          frontier.clear();
          for (std::size_t p : fresh) {
            std::set<std::size_t> e = ends(node.children[0], p);
            frontier.insert(e.begin(), e.end());
          }
        }
        return out;
      }
      case RhsKind::Optional: {
        std::set<std::size_t> out = ends(node.children[0], pos);
        out.insert(pos);
        return out;
      }
    }
    return {};
  }

private:
  std::set<std::size_t> matchText(const std::string& text, std::size_t pos) {
    if (input_.compare(pos, text.size(), text) == 0) return {pos + text.size()};
    return {};
  }

  const GrammarModel* model_;
  std::string_view input_;
  std::set<std::pair<const Rule*, std::size_t>> active_;
};

}  // namespace detail

// Whitespace between tokens is skipped; the token at each position is the
// longest match, with literals outranking token rules of equal length and
// earlier-declared token rules outranking later ones.
inline std::vector<LexedToken> tokenizeInput(const GrammarModel& model,
                                             const TokenCatalog& catalog,
                                             std::string_view input) {
  std::vector<LexedToken> tokens;
  SourceText positions("<input>", std::string(input));
  std::vector<const Rule*> tokenRules;
  for (const Rule& rule : model.rules)
    if (rule.isToken && !rule.isFragment) tokenRules.push_back(&rule);

  std::size_t pos = 0;
  while (pos < input.size()) {
    char c = input[pos];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++pos;
      continue;
    }
    std::size_t bestLen = 0;
    int bestKind = -1;
    bool bestIsLiteral = false;
    for (const auto& [text, kind] : catalog.literals) {
      if (input.compare(pos, text.size(), text) == 0) {
        std::size_t len = text.size();
        if (len > bestLen || (len == bestLen && !bestIsLiteral && len > 0)) {
          bestLen = len;
          bestKind = kind;
          bestIsLiteral = true;
        }
      }
    }
    detail::TokenMatcher matcher(model, input);
    for (const Rule* rule : tokenRules) {
      std::set<std::size_t> ends = matcher.ends(rule->rhs, pos);
      std::size_t longest = 0;
      for (std::size_t e : ends)
        if (e - pos > longest) longest = e - pos;
      if (longest > bestLen) {
        bestLen = longest;
        bestKind = catalog.tokenRules.at(rule->name);
        bestIsLiteral = false;
      }
    }
    if (bestLen == 0) {
      LineCol at = positions.locate(static_cast<std::uint32_t>(pos));
      throw LexError("no token matches input at " + std::to_string(at.line) + ":" +
                         std::to_string(at.column),
                     at);
    }
    LexedToken token;
    token.kind = bestKind;
    token.text = std::string(input.substr(pos, bestLen));
    token.offset = static_cast<std::uint32_t>(pos);
    tokens.push_back(std::move(token));
    pos += bestLen;
  }
  LexedToken eof;
  eof.kind = TokenCatalog::kEof;
  eof.offset = static_cast<std::uint32_t>(input.size());
  tokens.push_back(std::move(eof));
  return tokens;
}

class Interpreter {
public:
  Interpreter(const CheckedSpec& checked, ExternalFunctionTable externals,
              InterpretOptions options = {})
      : checked_(&checked),
        externals_(std::move(externals)),
        options_(options),
        catalog_(TokenCatalog::build(checked.spec.grammar)) {}

  // Parses `text` with `startRule`, executing `startFunction`; returns the
  // function's outputs. LL(1) conflicts surface before the input is read.
  std::vector<RuntimeValue> run(const std::string& startRule, const std::string& startFunction,
                                std::vector<RuntimeValue> inputs, std::string_view text) {
    const Rule* rule = checked_->spec.grammar.findRule(startRule);
    if (!rule || rule->isToken) throw EvalError("unknown start rule '" + startRule + "'");
    const TranslationFunction* fn = checked_->spec.findFunction(startFunction);
    if (!fn || fn->forRule != startRule)
      throw EvalError("'" + startFunction + "' is not a translation function of '" + startRule +
                      "'");

    for (const ExternalSignature& sig : checked_->allExternals)
      if (!externals_.find(sig.name))
        throw HostError("external function '" + sig.name + "' is not bound");

    FirstFollow ff(checked_->spec.grammar, catalog_, startRule);
    if (!ff.conflicts().empty()) throw NotLL1Error(ff.conflicts());
    ff_ = &ff;

    positions_ = SourceText("<input>", std::string(text));
    tokens_ = tokenizeInput(checked_->spec.grammar, catalog_, text);
    cursor_ = 0;

    std::vector<RuntimeValue> outputs = callFunction(*rule, fn, std::move(inputs));
    if (lookahead().kind != TokenCatalog::kEof)
      throw ParseError("unexpected input after " + describe(lookahead()), tokenAt(cursor_));
    ff_ = nullptr;
    return outputs;
  }

private:
  struct Activation {
    const TranslationFunction* fn = nullptr;
    std::map<std::string, RuntimeValue> values;
    std::set<std::string> assigned;
    std::map<std::string, std::string> tokenTexts;
  };

  const LexedToken& lookahead() const { return tokens_[cursor_]; }

  LineCol tokenAt(std::size_t index) const { return positions_.locate(tokens_[index].offset); }

  std::string describe(const LexedToken& token) const {
    if (token.kind == TokenCatalog::kEof) return "end of input";
    const std::string& display = catalog_.display[static_cast<std::size_t>(token.kind)];
    if (!display.empty() && display.front() == '\'') return display;  // literal token
    return display + " '" + token.text + "'";
  }

  [[noreturn]] void parseError(const std::string& expected) const {
    LineCol at = tokenAt(cursor_);
    throw ParseError("expected " + expected + ", found " + describe(lookahead()) + " at " +
                         std::to_string(at.line) + ":" + std::to_string(at.column),
                     at);
  }

  std::vector<RuntimeValue> callFunction(const Rule& rule, const TranslationFunction* fn,
                                         std::vector<RuntimeValue> inputs) {
    Activation act;
    act.fn = fn;
    if (fn) {
      if (inputs.size() != fn->inputs.size())
        throw EvalError("function '" + fn->name + "' expects " +
                        std::to_string(fn->inputs.size()) + " inputs, got " +
                        std::to_string(inputs.size()));
      for (std::size_t i = 0; i < inputs.size(); ++i)
        store(act, fn->inputs[i].name, std::move(inputs[i]));
    }
    RhsPath path;
    walk(rule, rule.rhs, path, act);
    std::vector<RuntimeValue> outputs;
    if (fn) {
      for (const AttributeDecl& out : fn->outputs) {
        auto it = act.values.find(out.name);
        if (it == act.values.end())
          throw EvalError("output attribute '" + out.name + "' was never assigned");
        outputs.push_back(it->second);
      }
    }
    return outputs;
  }

  void walk(const Rule& rule, const RhsExpr& node, RhsPath& path, Activation& act) {
    const ActionSlots* slots = nullptr;
    if (act.fn) {
      const SiteMap* sites = checked_->sitesOf(act.fn->name);
      if (sites) slots = sites->slotsAt(path);
    }
    if (slots)
      for (std::uint32_t idx : slots->before) execStatement(act.fn->actions[idx].body, act);

    switch (node.kind) {
      case RhsKind::SymbolRef: {
        if (node.symbol.kind != SymbolKind::SyntacticRule) {
          matchTerminal(node.symbol, act);
          break;
        }
        const Rule* target = checked_->spec.grammar.findRule(node.symbol.name);
        if (!target) throw EvalError("undefined rule '" + node.symbol.name + "'");
        if (slots && slots->at) {
          const PositionedAction& action = act.fn->actions[*slots->at];
          const Expression& call = action.body.expr;
          std::vector<RuntimeValue> args;
          for (const Expression& arg : call.args) args.push_back(evalScalar(arg, act));
          const TranslationFunction* callee = checked_->spec.findFunction(call.name);
          if (!callee) throw EvalError("undefined translation function '" + call.name + "'");
          std::vector<RuntimeValue> results = callFunction(*target, callee, std::move(args));
          if (action.body.kind == Statement::Kind::Assignment) {
            if (results.size() != action.body.lhs.size())
              throw EvalError("call to '" + call.name + "' returned " +
                              std::to_string(results.size()) + " values for " +
                              std::to_string(action.body.lhs.size()) + " attributes");
            for (std::size_t i = 0; i < results.size(); ++i)
              store(act, action.body.lhs[i], std::move(results[i]));
          }
        } else {
          // No 'at' action: parse the occurrence without translating.
          callFunction(*target, nullptr, {});
        }
        break;
      }
      case RhsKind::CharRange:
        throw EvalError("character range outside a token rule");
      case RhsKind::Labeled:
        path.push_back(0);
        walk(rule, node.children[0], path, act);
        path.pop_back();
        break;
      case RhsKind::Sequence:
        for (std::uint32_t i = 0; i < node.children.size(); ++i) {
          path.push_back(i);
          walk(rule, node.children[i], path, act);
          path.pop_back();
        }
        break;
      case RhsKind::Alternative: {
        const std::set<int>& follow = ff_->followOfNode(rule.name, path);
        int choice = -1;
        for (std::size_t i = 0; i < node.children.size() && choice < 0; ++i) {
          std::set<int> la = ff_->firstOfNode(node.children[i]);
          if (ff_->nodeIsNullable(node.children[i])) la.insert(follow.begin(), follow.end());
          if (la.count(lookahead().kind)) choice = static_cast<int>(i);
        }
        if (choice < 0) {
          std::set<int> expected = ff_->firstOfNode(node);
          std::string names;
          for (int k : expected) {
            if (!names.empty()) names += ", ";
            names += catalog_.display[static_cast<std::size_t>(k)];
          }
          parseError("one of " + names);
        }
        path.push_back(static_cast<std::uint32_t>(choice));
        walk(rule, node.children[static_cast<std::size_t>(choice)], path, act);
        path.pop_back();
        break;
      }
      case RhsKind::Iteration: {
        std::set<int> bodyFirst = ff_->firstOfNode(node.children[0]);
        bool first = true;
        while (true) {
          if (!first || node.minCount == 0) {
            if (!bodyFirst.count(lookahead().kind)) break;
          }
          path.push_back(0);
          walk(rule, node.children[0], path, act);
          path.pop_back();
          first = false;
        }
        break;
      }
      case RhsKind::Optional: {
        std::set<int> bodyFirst = ff_->firstOfNode(node.children[0]);
        if (bodyFirst.count(lookahead().kind)) {
          path.push_back(0);
          walk(rule, node.children[0], path, act);
          path.pop_back();
        }
        break;
      }
    }

    if (slots)
      for (std::uint32_t idx : slots->after) execStatement(act.fn->actions[idx].body, act);
  }

  void matchTerminal(const Symbol& symbol, Activation& act) {
    int kind = catalog_.kindOf(symbol);
    if (kind < 0) throw EvalError("unknown terminal '" + symbol.name + "'");
    if (lookahead().kind != kind)
      parseError(catalog_.display[static_cast<std::size_t>(kind)]);
    if (symbol.kind == SymbolKind::TokenRule) act.tokenTexts[symbol.name] = lookahead().text;
    ++cursor_;
  }

  void execStatement(const Statement& s, Activation& act) {
    switch (s.kind) {
      case Statement::Kind::Block:
        for (const Statement& inner : s.body) execStatement(inner, act);
        break;
      case Statement::Kind::CallStatement:
        evalExpression(s.expr, act);
        break;
      case Statement::Kind::Assignment: {
        std::vector<RuntimeValue> values = evalExpression(s.expr, act);
        if (values.size() != s.lhs.size())
          throw EvalError("cannot assign " + std::to_string(values.size()) + " values to " +
                          std::to_string(s.lhs.size()) + " attributes");
        for (std::size_t i = 0; i < values.size(); ++i)
          store(act, s.lhs[i], std::move(values[i]));
        break;
      }
    }
  }

  std::vector<RuntimeValue> evalExpression(const Expression& e, Activation& act) {
    switch (e.kind) {
      case Expression::Kind::AttributeRef: {
        auto it = act.values.find(e.name);
        if (it == act.values.end())
          throw EvalError("read of unassigned attribute '" + e.name + "'");
        return {it->second};
      }
      case Expression::Kind::TokenText: {
        auto it = act.tokenTexts.find(e.name);
        if (it == act.tokenTexts.end())
          throw EvalError("text of token '" + e.name + "' is not available here");
        return {RuntimeValue::ofString(it->second, checked_->types.stringType())};
      }
      case Expression::Kind::Call: {
        std::vector<RuntimeValue> args;
        for (const Expression& arg : e.args) args.push_back(evalScalar(arg, act));
        return callExternal(e.name, args);
      }
    }
    return {};
  }

  RuntimeValue evalScalar(const Expression& e, Activation& act) {
    std::vector<RuntimeValue> values = evalExpression(e, act);
    if (values.size() != 1)
      throw EvalError("expected a single value, got " + std::to_string(values.size()));
    return std::move(values.front());
  }

  std::vector<RuntimeValue> callExternal(const std::string& name,
                                         const std::vector<RuntimeValue>& args) {
    const ExternalFunctionTable::HostFn* fn = externals_.find(name);
    if (!fn) throw HostError("external function '" + name + "' is not bound");
    const ExternalSignature* sig = nullptr;
    for (const ExternalSignature& s : checked_->allExternals)
      if (s.name == name) sig = &s;
    std::vector<RuntimeValue> results;
    try {
      results = (*fn)(args);
    } catch (const InterpError&) {
      throw;
    } catch (const std::exception& e) {
      throw HostError("external function '" + name + "' failed: " + e.what());
    }
    if (sig) {
      if (results.size() != sig->outputs.size())
        throw HostError("external function '" + name + "' returned " +
                        std::to_string(results.size()) + " values, expected " +
                        std::to_string(sig->outputs.size()));
      for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i].tag.empty() && sig->outputs[i].declaredType)
          results[i].tag = *sig->outputs[i].declaredType;
        if (options_.checkTags && sig->outputs[i].declaredType &&
            !checked_->types.isSubtype(results[i].tag, *sig->outputs[i].declaredType))
          throw HostError("external function '" + name + "' returned a value of type " +
                          results[i].tag + " where " + *sig->outputs[i].declaredType +
                          " was declared");
      }
    }
    return results;
  }

  // Every store is tag-checked against the attribute's static type.
  void store(Activation& act, const std::string& attr, RuntimeValue value) {
    if (options_.checkTags && act.fn) {
      const auto* types = checked_->attributeTypesOf(act.fn->name);
      if (types) {
        auto it = types->find(attr);
        if (it != types->end() && !checked_->types.isSubtype(value.tag, it->second))
          throw EvalError("value of type " + value.tag + " cannot be stored into attribute '" +
                          attr + "' of type " + it->second);
      }
    }
    act.assigned.insert(attr);
    act.values[attr] = std::move(value);
  }

  const CheckedSpec* checked_;
  ExternalFunctionTable externals_;
  InterpretOptions options_;
  TokenCatalog catalog_;
  const FirstFollow* ff_ = nullptr;
  SourceText positions_;
  std::vector<LexedToken> tokens_;
  std::size_t cursor_ = 0;
};

}  // namespace gpg

#endif  // GPG_INTERPRETER_HPP
