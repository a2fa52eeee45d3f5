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

// Type checking of translation functions. Token text is of the string type,
// attributes carry their context type, a call's arguments must be subtypes
// of the parameters and its type is the output tuple (collapsed when unary).
// Assignments require the right-hand side to be an extended subtype of the
// left-hand side. Undeclared attributes become local unknowns, undeclared
// functions become external-signature skeletons; both are resolved by the
// constraint solver afterwards. Ground-ground requirements are checked
// eagerly at their own source span.

#ifndef GPG_TYPECHECK_HPP
#define GPG_TYPECHECK_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gpg/ast.hpp"
#include "gpg/constraint_solver.hpp"
#include "gpg/diagnostics.hpp"
#include "gpg/grammar.hpp"
#include "gpg/sites.hpp"
#include "gpg/typesystem.hpp"

namespace gpg {

// Ground type name or unknown; what an expression slot carries before
// inference completes.
using CtxTerm = std::variant<std::string, std::uint32_t>;

struct FunctionSig {
  enum class Kind { Translation, External };
  Kind kind = Kind::External;
  std::vector<CtxTerm> inputs;
  std::vector<CtxTerm> outputs;
  const TranslationFunction* translation = nullptr;
  Span span;
};

// Signatures of all functions in the specification; attributes of the
// function being checked are tracked per-run by the checker itself.
struct TypeContext {
  std::map<std::string, FunctionSig> functions;
};

inline TypeContext buildTypeContext(const ParsedSpecification& spec, DiagnosticSink& sink) {
  TypeContext ctx;
  auto groundTuple = [](const std::vector<AttributeDecl>& attrs) {
    std::vector<CtxTerm> terms;
    for (const AttributeDecl& a : attrs) terms.emplace_back(a.declaredType.value_or("_"));
    return terms;
  };
  for (const TranslationFunction& fn : spec.functions) {
    if (ctx.functions.count(fn.name)) {
      sink.error(diag::DuplicateFunction, fn.nameSpan,
                 "Duplicate function name: " + fn.name);
      continue;
    }
    FunctionSig sig;
    sig.kind = FunctionSig::Kind::Translation;
    sig.inputs = groundTuple(fn.inputs);
    sig.outputs = groundTuple(fn.outputs);
    sig.translation = &fn;
    sig.span = fn.nameSpan;
    ctx.functions.emplace(fn.name, std::move(sig));
  }
  for (const ExternalSignature& ext : spec.externals) {
    if (ctx.functions.count(ext.name)) {
      sink.error(diag::DuplicateFunction, ext.nameSpan,
                 "Duplicate function name: " + ext.name);
      continue;
    }
    FunctionSig sig;
    sig.kind = FunctionSig::Kind::External;
    sig.inputs = groundTuple(ext.inputs);
    sig.outputs = groundTuple(ext.outputs);
    sig.span = ext.nameSpan;
    ctx.functions.emplace(ext.name, std::move(sig));
  }
  return ctx;
}

struct CheckedFunction {
  std::string name;
  std::map<std::string, std::string> attributeTypes;  // declared and inferred
  std::vector<ExternalSignature> inferredExternals;
  bool typesResolved = false;  // every unknown received a ground type
  bool hadTypeErrors = false;
};

namespace detail {

class FunctionChecker {
public:
  FunctionChecker(const TypeContext& ctx, const GroundTypeSystem& sys,
                  const GrammarModel& grammar, const Rule& rule,
                  const TranslationFunction& fn, DiagnosticSink& sink)
      : ctx_(ctx), sys_(sys), grammar_(grammar), rule_(rule), fn_(fn), sink_(sink) {}

  CheckedFunction run() {
    CheckedFunction result;
    result.name = fn_.name;

    declareAttributes();
    for (const PositionedAction& action : fn_.actions) checkAction(action);

    auto solved = solveConstraints(sys_, vars_, constraints_, sink_);
    result.hadTypeErrors = errors_;
    if (!solved) {
      result.typesResolved = false;
      return result;
    }
    for (const auto& [name, term] : attrs_) {
      if (const auto* g = std::get_if<std::string>(&term))
        result.attributeTypes[name] = *g;
      else
        result.attributeTypes[name] = solved->at(std::get<std::uint32_t>(term));
    }
    for (const auto& [name, skeleton] : inferred_) {
      ExternalSignature sig;
      sig.name = name;
      sig.origin = SignatureOrigin::Inferred;
      sig.span = skeleton.span;
      sig.nameSpan = skeleton.span;
      for (std::size_t i = 0; i < skeleton.inputs.size(); ++i) {
        AttributeDecl decl;
        decl.name = skeleton.argNames[i];
        decl.role = AttrRole::Input;
        decl.declaredType = solved->at(skeleton.inputs[i]);
        sig.inputs.push_back(std::move(decl));
      }
      AttributeDecl out;
      out.name = "result";
      out.role = AttrRole::Output;
      out.declaredType = solved->at(skeleton.output);
      sig.outputs.push_back(std::move(out));
      result.inferredExternals.push_back(std::move(sig));
    }
    result.typesResolved = true;
    return result;
  }

private:
  struct ExprType {
    std::vector<CtxTerm> terms;
    bool tuple = false;  // tuples never collapse; scalars have one term
  };

  struct Skeleton {
    std::vector<std::uint32_t> inputs;
    std::vector<std::string> argNames;
    std::uint32_t output = 0;
    Span span;
  };

  void declareAttributes() {
    auto declare = [this](const AttributeDecl& decl) {
      if (attrs_.count(decl.name)) {
        sink_.error(diag::DuplicateAttribute, decl.span,
                    "Duplicate attribute name: " + decl.name);
        errors_ = true;
        return;
      }
      if (decl.declaredType)
        attrs_.emplace(decl.name, *decl.declaredType);
      else
        attrs_.emplace(decl.name, freshVar(decl.span, decl.name));
    };
    for (const AttributeDecl& d : fn_.inputs) declare(d);
    for (const AttributeDecl& d : fn_.outputs) declare(d);
    for (const AttributeDecl& d : fn_.locals) declare(d);
  }

  std::uint32_t freshVar(Span origin, std::string name) {
    TypeVar v;
    v.id = nextVar_++;
    v.origin = origin;
    v.owner = fn_.name;
    v.name = std::move(name);
    vars_.push_back(v);
    return v.id;
  }

  CtxTerm attributeTerm(const std::string& name, Span span) {
    auto it = attrs_.find(name);
    if (it != attrs_.end()) return it->second;
    // Used but not declared: assume a local attribute with an unknown type.
    CtxTerm term = freshVar(span, name);
    attrs_.emplace(name, term);
    return term;
  }

  std::string displayTerm(const CtxTerm& term) const {
    if (const auto* g = std::get_if<std::string>(&term)) return *g;
    return "?";
  }

  // rhs <= lhs; ground-ground pairs checked in place.
  void require(const CtxTerm& sub, const CtxTerm& super, Span span) {
    const auto* subG = std::get_if<std::string>(&sub);
    const auto* superG = std::get_if<std::string>(&super);
    if (subG && superG) {
      if (!sys_.isSubtype(*subG, *superG)) {
        sink_.error(diag::IncompatibleTypes, span,
                    "Incompatible types: " + *subG + " and " + *superG);
        errors_ = true;
      }
      return;
    }
    Constraint c;
    c.lower = subG ? ConstraintTerm(*subG) : ConstraintTerm(std::get<std::uint32_t>(sub));
    c.upper = superG ? ConstraintTerm(*superG) : ConstraintTerm(std::get<std::uint32_t>(super));
    c.span = span;
    constraints_.push_back(std::move(c));
  }

  ExprType typeOfExpression(const Expression& e, bool inAtCall) {
    switch (e.kind) {
      case Expression::Kind::TokenText: {
        const Rule* token = grammar_.findRule(e.name);
        if (!token || !token->isToken) {
          sink_.error(diag::UnknownToken, e.span, "Unknown token: " + e.name);
          errors_ = true;
        }
        return ExprType{{CtxTerm(sys_.stringType())}, false};
      }
      case Expression::Kind::AttributeRef:
        return ExprType{{attributeTerm(e.name, e.span)}, false};
      case Expression::Kind::Call:
        return typeOfCall(e, inAtCall);
    }
    return ExprType{{CtxTerm(sys_.stringType())}, false};
  }

  ExprType typeOfCall(const Expression& call, bool inAtCall) {
    std::vector<CtxTerm> params;
    std::vector<CtxTerm> outputs;
    bool known = false;

    auto it = ctx_.functions.find(call.name);
    if (it != ctx_.functions.end()) {
      known = true;
      if (it->second.kind == FunctionSig::Kind::Translation && !inAtCall) {
        sink_.error(diag::TranslationCall, call.span,
                    "translation function '" + call.name +
                        "' may only be called in an 'at' action");
        errors_ = true;
      }
      params = it->second.inputs;
      outputs = it->second.outputs;
    } else {
      // Assume an external function with one output attribute and as many
      // input attributes as there are arguments.
      auto sk = inferred_.find(call.name);
      if (sk == inferred_.end()) {
        Skeleton skeleton;
        skeleton.span = call.span;
        for (std::size_t i = 0; i < call.args.size(); ++i) {
          std::string argName = call.args[i].kind == Expression::Kind::AttributeRef
                                    ? call.args[i].name
                                    : "a" + std::to_string(i + 1);
          skeleton.inputs.push_back(
              freshVar(call.args[i].span, call.name + ":" + argName));
          skeleton.argNames.push_back(std::move(argName));
        }
        skeleton.output = freshVar(call.span, call.name + ":result");
        sk = inferred_.emplace(call.name, std::move(skeleton)).first;
      }
      for (std::uint32_t in : sk->second.inputs) params.emplace_back(in);
      outputs.emplace_back(sk->second.output);
    }

    if (call.args.size() != params.size()) {
      sink_.error(diag::ArityMismatch, call.span,
                  "Function '" + call.name + "' expects " + std::to_string(params.size()) +
                      (params.size() == 1 ? " argument, got " : " arguments, got ") +
                      std::to_string(call.args.size()));
      errors_ = true;
    }
    (void)known;
    for (std::size_t i = 0; i < call.args.size(); ++i) {
      ExprType arg = typeOfExpression(call.args[i], false);
      if (arg.tuple) {
        sink_.error(diag::TupleArityMismatch, call.args[i].span,
                    "a call argument cannot be a tuple");
        errors_ = true;
        continue;
      }
      if (i < params.size()) require(arg.terms.front(), params[i], call.args[i].span);
    }
    return ExprType{outputs, outputs.size() != 1};
  }

  void checkStatement(const Statement& s, bool inAtAction) {
    switch (s.kind) {
      case Statement::Kind::Block:
        for (const Statement& inner : s.body) checkStatement(inner, false);
        break;
      case Statement::Kind::CallStatement:
        typeOfExpression(s.expr, inAtAction);
        break;
      case Statement::Kind::Assignment: {
        ExprType rhs = typeOfExpression(s.expr, inAtAction);
        if (s.lhs.size() == 1) {
          CtxTerm lhs = attributeTerm(s.lhs[0], s.lhsSpans[0]);
          if (rhs.tuple) {
            sink_.error(diag::TupleArityMismatch, s.span,
                        "cannot assign " + std::to_string(rhs.terms.size()) +
                            " values to a single attribute");
            errors_ = true;
            break;
          }
          require(rhs.terms.front(), lhs, s.span);
          break;
        }
        std::vector<std::string> seen;
        for (std::size_t i = 0; i < s.lhs.size(); ++i) {
          if (std::find(seen.begin(), seen.end(), s.lhs[i]) != seen.end()) {
            sink_.error(diag::DuplicateAttribute, s.lhsSpans[i],
                        "Duplicate attribute in tuple: " + s.lhs[i]);
            errors_ = true;
          }
          seen.push_back(s.lhs[i]);
        }
        if (rhs.terms.size() != s.lhs.size()) {
          sink_.error(diag::TupleArityMismatch, s.span,
                      "cannot assign " + std::to_string(rhs.terms.size()) + " values to " +
                          std::to_string(s.lhs.size()) + " attributes");
          errors_ = true;
          break;
        }
        for (std::size_t i = 0; i < s.lhs.size(); ++i) {
          CtxTerm lhs = attributeTerm(s.lhs[i], s.lhsSpans[i]);
          require(rhs.terms[i], lhs, s.lhsSpans[i]);
        }
        break;
      }
    }
  }

  void checkAction(const PositionedAction& action) {
    if (action.position != ActionPosition::At) {
      checkStatement(action.body, false);
      return;
    }
    // The call of an 'at' action must target a translation function of the
    // referenced nonterminal.
    const std::string* callee = nullptr;
    if (action.body.kind == Statement::Kind::CallStatement ||
        (action.body.kind == Statement::Kind::Assignment &&
         action.body.expr.kind == Expression::Kind::Call))
      callee = &action.body.expr.name;
    std::string targetRule = atTargetRule(action);
    if (callee && !targetRule.empty()) {
      auto it = ctx_.functions.find(*callee);
      if (it == ctx_.functions.end() || it->second.kind != FunctionSig::Kind::Translation ||
          it->second.translation->forRule != targetRule) {
        sink_.error(diag::AtTarget, action.body.expr.span,
                    "'" + *callee + "' is not a translation function of '" + targetRule + "'");
        errors_ = true;
        return;
      }
    }
    checkStatement(action.body, true);
  }

  std::string atTargetRule(const PositionedAction& action) const {
    auto occurrences = resolveActionSite(rule_, action.site);
    if (!occurrences || occurrences->empty()) return {};
    const RhsExpr* node = nodeAt(rule_.rhs, occurrences->front().path);
    while (node && node->kind == RhsKind::Labeled) node = &node->children[0];
    if (!node || node->kind != RhsKind::SymbolRef) return {};
    return node->symbol.name;
  }

  const TypeContext& ctx_;
  const GroundTypeSystem& sys_;
  const GrammarModel& grammar_;
  const Rule& rule_;
  const TranslationFunction& fn_;
  DiagnosticSink& sink_;

  std::map<std::string, CtxTerm> attrs_;
  std::vector<TypeVar> vars_;
  std::vector<Constraint> constraints_;
  std::map<std::string, Skeleton> inferred_;
  std::uint32_t nextVar_ = 0;
  bool errors_ = false;
};

}  // namespace detail

// Each translation function is checked separately against the shared
// context; checking continues past errors within the function so one run
// aggregates everything.
inline CheckedFunction checkTranslationFunction(const TypeContext& ctx,
                                                const GroundTypeSystem& sys,
                                                const GrammarModel& grammar, const Rule& rule,
                                                const TranslationFunction& fn,
                                                DiagnosticSink& sink) {
  detail::FunctionChecker checker(ctx, sys, grammar, rule, fn, sink);
  return checker.run();
}

inline std::string formatSignature(const ExternalSignature& sig) {
  std::string out = "(";
  for (std::size_t i = 0; i < sig.inputs.size(); ++i) {
    if (i) out += ", ";
    out += sig.inputs[i].declaredType.value_or("?");
  }
  out += ") --> (";
  for (std::size_t i = 0; i < sig.outputs.size(); ++i) {
    if (i) out += ", ";
    out += sig.outputs[i].declaredType.value_or("?");
  }
  out += ")";
  return out;
}

// Everything the back-ends need: the parsed model, the ground type system,
// resolved action sites and attribute types per function, and the merged
// external signatures (declared first, inferred appended in name order).
struct CheckedSpec {
  ParsedSpecification spec;
  GroundTypeSystem types;
  std::map<std::string, SiteMap> sites;              // by function name
  std::map<std::string, CheckedFunction> functions;  // by function name
  std::vector<ExternalSignature> allExternals;

  const std::map<std::string, std::string>* attributeTypesOf(const std::string& fn) const {
    auto it = functions.find(fn);
    return it == functions.end() ? nullptr : &it->second.attributeTypes;
  }
  const SiteMap* sitesOf(const std::string& fn) const {
    auto it = sites.find(fn);
    return it == sites.end() ? nullptr : &it->second;
  }
};

// Deterministic merge (name order) of the signatures inferred by separately
// checked functions; disagreeing inferences for one name are an error.
inline std::vector<ExternalSignature> mergeInferredExternals(
    const std::vector<const CheckedFunction*>& checked, DiagnosticSink& sink) {
  std::map<std::string, const ExternalSignature*> byName;
  bool ok = true;
  for (const CheckedFunction* fn : checked) {
    for (const ExternalSignature& sig : fn->inferredExternals) {
      auto [it, inserted] = byName.emplace(sig.name, &sig);
      if (inserted) continue;
      const ExternalSignature& prev = *it->second;
      auto types = [](const std::vector<AttributeDecl>& attrs) {
        std::vector<std::string> out;
        for (const AttributeDecl& a : attrs) out.push_back(a.declaredType.value_or("?"));
        return out;
      };
      if (types(prev.inputs) != types(sig.inputs) || types(prev.outputs) != types(sig.outputs)) {
        sink.error(diag::InferenceConflict, sig.span,
                   "Conflicting inferred signatures for external function '" + sig.name +
                       "': " + formatSignature(prev) + " vs " + formatSignature(sig));
        ok = false;
      }
    }
  }
  std::vector<ExternalSignature> merged;
  if (!ok) return merged;
  for (const auto& [name, sig] : byName) merged.push_back(*sig);
  return merged;
}

}  // namespace gpg

#endif  // GPG_TYPECHECK_HPP
