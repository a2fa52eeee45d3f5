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

// Shared fixtures and oracles for the test suites.

#ifndef GPG_TEST_UTIL_HPP
#define GPG_TEST_UTIL_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gpg/gpg.hpp"

namespace gpgtest {

using namespace gpg;

// The arithmetic-evaluator specification.
inline const char* arithSpecText() {
  return R"(strToInt(String s) --> (Int value);
value(Environment env, String variable) --> (Int value);
zero() --> (Int zero);
one() --> (Int one);
neg(Int x) --> (Int negx);
add(Int x, Int y) --> (Int sum);
mul(Int x, Int y) --> (Int prod);

fragment LETTER : 'a'..'z' | 'A'..'Z' | '_' ;
fragment DIGIT  : '0'..'9' ;
VAR    : LETTER (LETTER | DIGIT)* ;
INT    : DIGIT+ ;

factor : VAR | INT | '(' expr ')' ;
  factor(Environment env) --> (Int result) {
    after VAR : result = value(env, VAR#);
    after INT : result = strToInt(INT#);
    at expr   : result = expr(env);
  }

term : $f1=factor ('*' $f2=factor)* ;
  term(Environment env) --> (Int result) {
    Int f;
    at factor : f = factor(env);
    after $f1 : result = f;
    after $f2 : result = mul(result, f);
  }

expr : $t1=term ( $sgn=('+' | '-') term)* ;
  expr(Environment env) --> (Int result) {
    at     term : t = term(env);
    before $t1  : {
      result = zero();
      sign = one();
    }
    after  term : result = add(result, mul(sign, t));
    before $sgn : sign = one();
    after  '-'  : sign = neg(sign);
  }
)";
}

inline TypeSystemDesc simpleDesc() {
  TypeSystemDesc desc;
  desc.name = "Simple";
  desc.stringName = "String";
  desc.declaredTypes = {"Int", "Environment", "Object"};
  desc.declaredSubtypings = {{"Environment", "Object", {}}, {"String", "Object", {}}};
  return desc;
}

inline GroundTypeSystem makeSystem(const TypeSystemDesc& desc) {
  std::vector<Diagnostic> diags;
  SourceText dummy("<desc>", "");
  DiagnosticSink sink(dummy, diags);
  auto sys = closeSubtyping(desc, sink);
  if (!sys) throw std::runtime_error("type system description did not close");
  return *sys;
}

inline GroundTypeSystem simpleSystem() { return makeSystem(simpleDesc()); }

struct FrontEnd {
  SourceText source;
  FrontEndResult result;
};

inline FrontEnd runArithFrontEnd(const std::string& text, const GroundTypeSystem& sys) {
  DeclarativeExtension ext(sys);
  FrontEnd fe{SourceText("spec.gpg", text), {}};
  fe.result = runFrontEnd(fe.source, ext);
  return fe;
}

inline std::string replaceOnce(std::string text, const std::string& from,
                               const std::string& to) {
  std::size_t at = text.find(from);
  if (at == std::string::npos) throw std::runtime_error("replacement target not found");
  return text.replace(at, from.size(), to);
}

inline std::vector<std::string> errorMessages(const std::vector<Diagnostic>& diags) {
  std::vector<std::string> out;
  for (const Diagnostic& d : diags)
    if (d.severity == Severity::Error) out.push_back(d.message);
  return out;
}

inline bool hasCode(const std::vector<Diagnostic>& diags, std::string_view code) {
  return std::any_of(diags.begin(), diags.end(),
                     [&](const Diagnostic& d) { return d.code == code; });
}

// --- random structures --------------------------------------------------

// Random type system: a DAG over T0..Tn-1 plus a string type, sometimes a
// declared top type.
inline TypeSystemDesc randomTypeSystemDesc(std::mt19937& rng, int maxTypes = 6,
                                           bool allowTop = true) {
  std::uniform_int_distribution<int> countDist(1, maxTypes);
  int n = countDist(rng);
  TypeSystemDesc desc;
  desc.name = "R";
  desc.stringName = "T0";  // the string type takes part in subtyping like any other
  for (int i = 0; i < n; ++i) desc.declaredTypes.push_back("T" + std::to_string(i));
  std::uniform_int_distribution<int> coin(0, 1);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng) && coin(rng))
        desc.declaredSubtypings.push_back({"T" + std::to_string(i), "T" + std::to_string(j), {}});
  if (allowTop && coin(rng)) {
    desc.topName = "Top";
    desc.declaredTypes.push_back("Top");
  }
  return desc;
}

// Brute-force reflexive-transitive closure by the Warshall triple loop.
inline std::vector<std::vector<bool>> warshallClosure(std::size_t n,
                                                      std::vector<std::vector<bool>> adj) {
  for (std::size_t i = 0; i < n; ++i) adj[i][i] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (adj[i][k] && adj[k][j]) adj[i][j] = true;
  return adj;
}

// Depth-2-unrolled path enumeration: the intersection of write sets over all
// paths reaching each node, with every back edge taken at most twice per path.
inline std::vector<std::vector<bool>> pathEnumerationOracle(const Cfg& cfg,
                                                            const TranslationFunction& fn,
                                                            std::vector<std::string>& attrsOut) {
  std::map<std::string, std::size_t> index;
  std::vector<std::string> attrs;
  auto intern = [&](const std::string& name) {
    if (!index.count(name)) {
      index[name] = attrs.size();
      attrs.push_back(name);
    }
    return index[name];
  };
  for (const AttributeDecl& d : fn.inputs) intern(d.name);
  for (const AttributeDecl& d : fn.outputs) intern(d.name);
  for (const AttributeDecl& d : fn.locals) intern(d.name);
  for (const CfgEdge& e : cfg.edges)
    for (const Access& a : e.accesses) intern(a.attribute);

  const std::size_t n = attrs.size();
  std::vector<std::vector<bool>> meet(cfg.nodes.size(), std::vector<bool>(n, true));
  std::vector<bool> entry(n, false);
  for (const AttributeDecl& d : fn.inputs) entry[index[d.name]] = true;

  auto outEdges = cfg.outEdges();
  std::map<std::uint32_t, int> backCount;
  std::function<void(std::uint32_t, std::vector<bool>)> walk =
      [&](std::uint32_t node, std::vector<bool> state) {
        for (std::size_t i = 0; i < n; ++i) meet[node][i] = meet[node][i] && state[i];
        for (std::uint32_t e : outEdges[node]) {
          const CfgEdge& edge = cfg.edges[e];
          if (edge.isBack && backCount[e] >= 2) continue;
          if (edge.isBack) ++backCount[e];
          std::vector<bool> next = state;
          for (const Access& a : edge.accesses)
            if (a.isWrite) next[index[a.attribute]] = true;
          walk(edge.to, std::move(next));
          if (edge.isBack) --backCount[e];
        }
      };
  walk(cfg.entry, entry);
  attrsOut = attrs;
  return meet;
}

// Random structured control flow: a random rule over three token symbols and
// a translation function with random before/after assignments.
struct RandomFlowCase {
  ParsedSpecification spec;
  Cfg cfg;
};

inline std::optional<RandomFlowCase> randomFlowCase(std::mt19937& rng) {
  std::uniform_int_distribution<int> shapeDist(0, 5);
  std::uniform_int_distribution<int> symDist(0, 2);
  const char* symbols[] = {"A", "B", "C"};

  std::function<RhsExpr(int)> make = [&](int depth) -> RhsExpr {
    RhsExpr node;
    if (depth >= 2 || shapeDist(rng) < 2) {
      node.kind = RhsKind::SymbolRef;
      node.symbol = {symbols[symDist(rng)], SymbolKind::TokenRule};
      return node;
    }
    switch (shapeDist(rng)) {
      case 2:
        node.kind = RhsKind::Sequence;
        node.children.push_back(make(depth + 1));
        node.children.push_back(make(depth + 1));
        break;
      case 3:
        node.kind = RhsKind::Alternative;
        node.children.push_back(make(depth + 1));
        node.children.push_back(make(depth + 1));
        break;
      case 4:
        node.kind = RhsKind::Iteration;
        node.minCount = static_cast<std::uint32_t>(shapeDist(rng) % 2);
        node.children.push_back(make(depth + 1));
        break;
      default:
        node.kind = RhsKind::Optional;
        node.children.push_back(make(depth + 1));
        break;
    }
    return node;
  };

  RandomFlowCase out;
  Rule rule;
  rule.name = "r";
  rule.rhs = make(0);

  TranslationFunction fn;
  fn.name = "f";
  fn.forRule = "r";
  AttributeDecl input;
  input.name = "i";
  input.role = AttrRole::Input;
  input.declaredType = "Int";
  fn.inputs.push_back(input);
  AttributeDecl output;
  output.name = "o";
  output.role = AttrRole::Output;
  output.declaredType = "Int";
  fn.outputs.push_back(output);

  std::set<std::string> present;
  gpg::detail::walkRhs(rule.rhs, [&](const RhsExpr& node, const RhsPath&) {
    if (node.kind == RhsKind::SymbolRef) present.insert(node.symbol.name);
  });
  std::vector<std::string> sites(present.begin(), present.end());
  const char* attrs[] = {"i", "o", "p", "q"};
  std::uniform_int_distribution<int> attrDist(0, 3);
  std::uniform_int_distribution<int> actionCountDist(0, 4);
  std::uniform_int_distribution<std::size_t> siteDist(0, sites.size() - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  int actions = actionCountDist(rng);
  for (int i = 0; i < actions; ++i) {
    PositionedAction action;
    action.position = coin(rng) ? ActionPosition::Before : ActionPosition::After;
    action.site = sites[siteDist(rng)];
    Statement stmt;
    stmt.kind = Statement::Kind::Assignment;
    stmt.lhs.push_back(attrs[attrDist(rng)]);
    stmt.lhsSpans.push_back({});
    if (coin(rng)) {
      stmt.expr.kind = Expression::Kind::AttributeRef;
      stmt.expr.name = attrs[attrDist(rng)];
    } else {
      stmt.expr.kind = Expression::Kind::Call;
      stmt.expr.name = "mk";
    }
    action.body = std::move(stmt);
    fn.actions.push_back(std::move(action));
  }

  out.spec.grammar.rules.push_back(rule);
  out.spec.functions.push_back(fn);

  std::vector<Diagnostic> diags;
  SourceText src("rand.gpg", "");
  DiagnosticSink sink(src, diags);
  auto siteMap = resolveTranslationSites(out.spec.grammar.rules[0], out.spec.functions[0], sink);
  if (!siteMap) return std::nullopt;
  out.cfg = buildCfg(out.spec.grammar.rules[0], out.spec.functions[0], *siteMap);
  return out;
}

// Exhaustive enumeration of satisfying assignments for a constraint set.
inline std::vector<std::vector<std::size_t>> enumerateSolutions(
    const GroundTypeSystem& sys, std::size_t varCount,
    const std::vector<Constraint>& constraints) {
  const std::vector<std::string>& types = sys.types();
  std::vector<std::vector<std::size_t>> solutions;
  std::vector<std::size_t> assign(varCount, 0);
  auto term = [&](const ConstraintTerm& t) -> std::string {
    if (const auto* g = std::get_if<std::string>(&t)) return *g;
    return types[assign[std::get<std::uint32_t>(t)]];
  };
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == varCount) {
      for (const Constraint& c : constraints)
        if (!sys.isSubtype(term(c.lower), term(c.upper))) return;
      solutions.push_back(assign);
      return;
    }
    for (std::size_t t = 0; t < types.size(); ++t) {
      assign[i] = t;
      go(i + 1);
    }
  };
  if (varCount > 0) go(0);
  return solutions;
}

}  // namespace gpgtest

#endif  // GPG_TEST_UTIL_HPP
