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

// Acceptance suite. Each criterion prints one PASS/FAIL line; the process
// exits nonzero if any criterion fails.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "test_util.hpp"

using namespace gpgtest;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int number, const std::string& title, bool ok, const std::string& detail = "") {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << number << ": " << title;
  if (!ok && !detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!ok) ++failures;
}

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool condition, const std::string& what) {
    if (!condition && ok) {
      ok = false;
      detail = what;
    }
  }
};

std::string samplePath(const std::string& name) {
  return (fs::path(GPG_SAMPLES_DIR) / name).string();
}

std::string sampleText(const std::string& name) {
  auto text = readFile(samplePath(name));
  if (!text) throw std::runtime_error("missing sample: " + name);
  return *text;
}

FrontEndResult frontEnd(const std::string& specText) {
  SourceText gts("simple.gts", sampleText("simple.gts"));
  auto parsed = parseTypeSystemFile(gts);
  if (!parsed.file) throw std::runtime_error("simple.gts did not parse");
  std::vector<Diagnostic> diags;
  DiagnosticSink sink(gts, diags);
  auto sys = closeSubtyping(parsed.file->typesystems.front(), sink);
  if (!sys) throw std::runtime_error("simple.gts did not close");
  DeclarativeExtension ext(*sys);
  SourceText src("arith.gpg", specText);
  return runFrontEnd(src, ext);
}

// 1. Interpreting the arithmetic sample returns 20 on "x*(3+2)" with
//    [x=4] and rejects "(x+*3)"; in under a second.
void criterion1() {
  Check c;
  auto started = std::chrono::steady_clock::now();

  FrontEndResult fe = frontEnd(sampleText("arith.gpg"));
  c.expect(fe.ok(), "front end rejected the sample");
  if (fe.ok()) {
    {
      ExternalFunctionTable table;
      demo::bindArithExternals(table);
      Interpreter interp(*fe.checked, std::move(table));
      auto outputs =
          interp.run("expr", "expr", {demo::makeEnvironment({{"x", 4}})}, "x*(3+2)");
      c.expect(outputs.size() == 1 && outputs[0].isInt() && outputs[0].asInt() == 20,
               "x*(3+2) with x=4 did not evaluate to 20");
    }
    {
      ExternalFunctionTable table;
      demo::bindArithExternals(table);
      Interpreter interp(*fe.checked, std::move(table));
      bool rejected = false;
      try {
        interp.run("expr", "expr", {demo::makeEnvironment({{"x", 4}})}, "(x+*3)");
      } catch (const ParseError&) {
        rejected = true;
      }
      c.expect(rejected, "(x+*3) was not rejected with a parse error");
    }
  }

  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - started)
                     .count();
  c.expect(elapsed < 1000, "took " + std::to_string(elapsed) + " ms");
  report(1, "end-to-end evaluation of the arithmetic example", c.ok, c.detail);
}

// 2. The error walkthrough: "result = INT" yields exactly the uninitialized
//    message, "result = INT#" exactly the incompatibility message, and the
//    corrected specification is diagnostic-free.
void criterion2() {
  Check c;
  std::string base = sampleText("arith.gpg");

  {
    FrontEndResult fe =
        frontEnd(replaceOnce(base, "result = strToInt(INT#)", "result = INT"));
    auto errors = errorMessages(fe.diagnostics);
    c.expect(errors.size() == 1, "INT variant produced " + std::to_string(errors.size()) +
                                     " errors");
    if (errors.size() == 1)
      c.expect(errors[0] == "The local attribute INT might have not been initialized",
               "unexpected message: " + errors[0]);
  }
  {
    FrontEndResult fe =
        frontEnd(replaceOnce(base, "result = strToInt(INT#)", "result = INT#"));
    auto errors = errorMessages(fe.diagnostics);
    c.expect(errors.size() == 1, "INT# variant produced " + std::to_string(errors.size()) +
                                     " errors");
    if (errors.size() == 1)
      c.expect(errors[0] == "Incompatible types: String and Int",
               "unexpected message: " + errors[0]);
  }
  {
    FrontEndResult fe = frontEnd(base);
    c.expect(fe.diagnostics.empty() && fe.ok(),
             "corrected specification is not diagnostic-free");
  }
  report(2, "the error walkthrough diagnostics are reproduced verbatim", c.ok, c.detail);
}

// 3. Inference: t in the expr function becomes Int; the two-type worked
//    example picks Integer; no constraints takes the top type when there is
//    one and errors when there is none.
void criterion3() {
  Check c;
  {
    FrontEndResult fe = frontEnd(sampleText("arith.gpg"));
    c.expect(fe.ok(), "front end rejected the sample");
    if (fe.ok()) {
      const CheckedFunction& expr = fe.checked->functions.at("expr");
      auto it = expr.attributeTypes.find("t");
      c.expect(it != expr.attributeTypes.end() && it->second == "Int",
               "t was not inferred as Int");
    }
  }
  {
    TypeSystemDesc desc;
    desc.name = "T";
    desc.stringName = "Str";
    desc.declaredTypes = {"Object", "Integer"};
    desc.declaredSubtypings = {{"Integer", "Object", {}}};
    GroundTypeSystem sys = makeSystem(desc);
    std::vector<TypeVar> vars{{0, {}, "f", "t"}};
    std::vector<Constraint> cs{{ConstraintTerm(std::string("Integer")), ConstraintTerm(0u), {}},
                               {ConstraintTerm(0u), ConstraintTerm(std::string("Object")), {}}};
    std::vector<Diagnostic> diags;
    SourceText src("s", "");
    DiagnosticSink sink(src, diags);
    auto solved = solveConstraints(sys, vars, cs, sink);
    c.expect(solved.has_value() && solved->at(0) == "Integer",
             "the {Object, Integer} example did not infer Integer");
  }
  {
    TypeSystemDesc desc;
    desc.name = "T";
    desc.topName = "Top";
    desc.stringName = "S";
    desc.declaredTypes = {"A"};
    GroundTypeSystem sys = makeSystem(desc);
    std::vector<TypeVar> vars{{0, {}, "f", "t"}};
    std::vector<Diagnostic> diags;
    SourceText src("s", "");
    DiagnosticSink sink(src, diags);
    auto solved = solveConstraints(sys, vars, {}, sink);
    c.expect(solved.has_value() && solved->at(0) == "Top",
             "no constraints did not choose the top type");
  }
  {
    GroundTypeSystem sys = simpleSystem();
    std::vector<TypeVar> vars{{0, {}, "f", "t"}};
    std::vector<Diagnostic> diags;
    SourceText src("s", "");
    DiagnosticSink sink(src, diags);
    auto solved = solveConstraints(sys, vars, {}, sink);
    c.expect(!solved.has_value() && hasCode(diags, diag::NoConstraintsNoTop),
             "no constraints without a top type was not an error");
  }
  report(3, "local type inference matches the worked examples", c.ok, c.detail);
}

// 4. Solver-oracle equivalence over at least 500 random systems, within 30 s.
void criterion4() {
  Check c;
  auto started = std::chrono::steady_clock::now();
  std::mt19937 rng(424242);
  std::uniform_int_distribution<int> varCountDist(1, 5);
  std::uniform_int_distribution<int> constraintCountDist(0, 10);
  std::uniform_int_distribution<int> kindDist(0, 2);

  const int rounds = 600;
  for (int round = 0; round < rounds && c.ok; ++round) {
    GroundTypeSystem sys = makeSystem(randomTypeSystemDesc(rng));
    std::uniform_int_distribution<std::size_t> typeDist(0, sys.types().size() - 1);
    const int varCount = varCountDist(rng);
    std::uniform_int_distribution<std::uint32_t> varDist(
        0, static_cast<std::uint32_t>(varCount - 1));

    std::vector<TypeVar> vars;
    for (int v = 0; v < varCount; ++v)
      vars.push_back(TypeVar{static_cast<std::uint32_t>(v), {}, "f", "v" + std::to_string(v)});
    std::vector<Constraint> cs;
    for (int i = 0, n = constraintCountDist(rng); i < n; ++i) {
      switch (kindDist(rng)) {
        case 0:
          cs.push_back({ConstraintTerm(sys.types()[typeDist(rng)]),
                        ConstraintTerm(varDist(rng)), {}});
          break;
        case 1:
          cs.push_back({ConstraintTerm(varDist(rng)),
                        ConstraintTerm(sys.types()[typeDist(rng)]), {}});
          break;
        default:
          cs.push_back({ConstraintTerm(varDist(rng)), ConstraintTerm(varDist(rng)), {}});
          break;
      }
    }

    auto solutions = enumerateSolutions(sys, static_cast<std::size_t>(varCount), cs);
    std::vector<Diagnostic> diags;
    SourceText src("s", "");
    DiagnosticSink sink(src, diags);
    auto solved = solveConstraints(sys, vars, cs, sink);

    if (solutions.empty()) {
      c.expect(!solved.has_value() && hasCode(diags, diag::IncompatibleTypes),
               "solver disagreed on an unsatisfiable system (round " +
                   std::to_string(round) + ")");
      continue;
    }
    if (!solved.has_value()) {
      c.expect((hasCode(diags, diag::AmbiguousType) ||
                hasCode(diags, diag::NoConstraintsNoTop)) &&
                   !hasCode(diags, diag::IncompatibleTypes),
               "solver rejected a satisfiable system as incompatible (round " +
                   std::to_string(round) + ")");
      continue;
    }

    std::vector<std::size_t> assign(static_cast<std::size_t>(varCount));
    bool valid = true;
    for (int v = 0; v < varCount; ++v) {
      const std::string& type = solved->at(static_cast<std::uint32_t>(v));
      auto it = std::find(sys.types().begin(), sys.types().end(), type);
      if (it == sys.types().end()) valid = false;
      else
        assign[static_cast<std::size_t>(v)] =
            static_cast<std::size_t>(it - sys.types().begin());
    }
    c.expect(valid && std::find(solutions.begin(), solutions.end(), assign) != solutions.end(),
             "returned assignment violates a constraint (round " + std::to_string(round) + ")");
    if (!c.ok) break;

    // Variables grounded from below must take minimal admissible values.
    std::vector<bool> grounded(static_cast<std::size_t>(varCount), false);
    for (const Constraint& con : cs) {
      const auto* upperVar = std::get_if<std::uint32_t>(&con.upper);
      if (upperVar && std::holds_alternative<std::string>(con.lower))
        grounded[*upperVar] = true;
    }
    for (bool changed = true; changed;) {
      changed = false;
      for (const Constraint& con : cs) {
        const auto* lowerVar = std::get_if<std::uint32_t>(&con.lower);
        const auto* upperVar = std::get_if<std::uint32_t>(&con.upper);
        if (lowerVar && upperVar && grounded[*lowerVar] && !grounded[*upperVar]) {
          grounded[*upperVar] = true;
          changed = true;
        }
      }
    }
    for (const auto& other : solutions) {
      bool allLe = true, strict = false;
      for (int v = 0; v < varCount; ++v) {
        if (!grounded[static_cast<std::size_t>(v)]) continue;
        std::size_t sv = static_cast<std::size_t>(v);
        if (!sys.isSubtype(sys.types()[other[sv]], sys.types()[assign[sv]])) allLe = false;
        if (other[sv] != assign[sv]) strict = true;
      }
      c.expect(!(allLe && strict),
               "a satisfying assignment lies strictly below the returned one (round " +
                   std::to_string(round) + ")");
      if (!c.ok) break;
    }
  }

  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - started)
                     .count();
  c.expect(elapsed < 30000, "took " + std::to_string(elapsed) + " ms");
  report(4, "solver agrees with exhaustive enumeration on " + std::to_string(rounds) +
                " random systems",
         c.ok, c.detail);
}

// 5. Subtyping closure: the declared pairs of the Simple system, and
//    closure == Warshall on random DAGs of up to 8 types.
void criterion5() {
  Check c;
  GroundTypeSystem sys = simpleSystem();
  c.expect(sys.isSubtype("Environment", "Object"), "Environment <= Object does not hold");
  c.expect(sys.isSubtype("String", "Object"), "String <= Object does not hold");
  c.expect(!sys.isSubtype("Int", "Object"), "Int <= Object holds but must not");

  std::mt19937 rng(5555);
  std::uniform_int_distribution<int> sizeDist(1, 8);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int round = 0; round < 300 && c.ok; ++round) {
    int n = sizeDist(rng);
    TypeSystemDesc desc;
    desc.name = "R";
    desc.stringName = "T0";
    std::vector<std::vector<bool>> adj(static_cast<std::size_t>(n),
                                       std::vector<bool>(static_cast<std::size_t>(n), false));
    for (int i = 0; i < n; ++i) desc.declaredTypes.push_back("T" + std::to_string(i));
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (coin(rng) && coin(rng)) {
          desc.declaredSubtypings.push_back(
              {"T" + std::to_string(i), "T" + std::to_string(j), {}});
          adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
        }
      }
    }
    GroundTypeSystem random = makeSystem(desc);
    auto closed = warshallClosure(static_cast<std::size_t>(n), adj);
    for (int i = 0; i < n && c.ok; ++i)
      for (int j = 0; j < n; ++j)
        c.expect(random.isSubtype("T" + std::to_string(i), "T" + std::to_string(j)) ==
                     closed[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                 "closure disagrees with Warshall (round " + std::to_string(round) + ")");
  }
  report(5, "subtyping closure matches the declared pairs and the Warshall oracle", c.ok,
         c.detail);
}

// 6. Definite assignment equals depth-2 path enumeration on small graphs, and
//    the expr function's graph has one loop containing one branch.
void criterion6() {
  Check c;
  std::mt19937 rng(6666);
  int tested = 0;
  while (tested < 150 && c.ok) {
    auto made = randomFlowCase(rng);
    if (!made || made->cfg.nodes.size() > 12) continue;
    ++tested;
    DefiniteAssignment solved = solveDefiniteAssignment(made->cfg, made->spec.functions[0]);
    std::vector<std::string> attrs;
    auto oracle = pathEnumerationOracle(made->cfg, made->spec.functions[0], attrs);
    c.expect(solved.attributes == attrs, "attribute universes differ");
    for (std::uint32_t node = 0; node < made->cfg.nodes.size() && c.ok; ++node)
      for (std::size_t a = 0; a < attrs.size(); ++a)
        c.expect(solved.inAtNode[node][a] == oracle[node][a],
                 "fixpoint differs from path enumeration at node " + std::to_string(node) +
                     " for " + attrs[a]);
  }

  FrontEndResult fe = frontEnd(sampleText("arith.gpg"));
  c.expect(fe.ok(), "front end rejected the sample");
  if (fe.ok()) {
    const Rule* rule = fe.checked->spec.grammar.findRule("expr");
    const TranslationFunction* fn = fe.checked->spec.findFunction("expr");
    const SiteMap* sites = fe.checked->sitesOf("expr");
    Cfg cfg = buildCfg(*rule, *fn, *sites);
    std::vector<const CfgEdge*> backEdges;
    for (const CfgEdge& e : cfg.edges)
      if (e.isBack) backEdges.push_back(&e);
    c.expect(backEdges.size() == 1, "expected exactly one loop");
    if (backEdges.size() == 1) {
      auto reachable = [&](std::uint32_t from, bool forward) {
        std::vector<bool> seen(cfg.nodes.size(), false);
        std::vector<std::uint32_t> stack{from};
        seen[from] = true;
        while (!stack.empty()) {
          std::uint32_t cur = stack.back();
          stack.pop_back();
          for (const CfgEdge& e : cfg.edges) {
            if (e.isBack) continue;
            std::uint32_t src = forward ? e.from : e.to;
            std::uint32_t dst = forward ? e.to : e.from;
            if (src == cur && !seen[dst]) {
              seen[dst] = true;
              stack.push_back(dst);
            }
          }
        }
        return seen;
      };
      auto inFwd = reachable(backEdges[0]->to, true);
      auto inBwd = reachable(backEdges[0]->from, false);
      std::size_t branchesInside = 0;
      for (const CfgNode& node : cfg.nodes)
        if (node.kind == CfgNodeKind::Branch && inFwd[node.id] && inBwd[node.id])
          ++branchesInside;
      c.expect(branchesInside == 1, "the loop body does not contain exactly one branch");
    }
  }
  report(6, "definite assignment matches path enumeration; expr has the expected CFG shape",
         c.ok, c.detail);
}

// 7. Emission: the expected rule header with realized types, action blocks
//    in position, no reserved identifiers, byte-identical reruns.
void criterion7() {
  Check c;
  FrontEndResult fe = frontEnd(sampleText("arith.gpg"));
  c.expect(fe.ok(), "front end rejected the sample");
  if (!fe.ok()) {
    report(7, "emission", c.ok, c.detail);
    return;
  }

  SourceText gts("simple.gts", sampleText("simple.gts"));
  auto parsed = parseTypeSystemFile(gts);
  const LanguageDesc* lang = parsed.file->findLanguage("Java");
  const BackendProfile* profile = parsed.file->findProfile("antlr-java");

  auto emitOnce = [&](std::string& grammarOut, std::string& interfaceOut, EmissionPlan& plan) {
    plan = makeEmissionPlan(*fe.checked, *lang, profile);
    std::vector<Diagnostic> diags;
    SourceText src("arith.gpg", "");
    DiagnosticSink sink(src, diags);
    auto grammar = emitAntlrGrammar(*fe.checked, *lang, plan, sink);
    if (!grammar) return false;
    grammarOut = *grammar;
    interfaceOut = emitExternalInterface(fe.checked->allExternals, *lang, profile, plan);
    return true;
  };

  std::string grammar1, interface1, grammar2, interface2;
  EmissionPlan plan1, plan2;
  c.expect(emitOnce(grammar1, interface1, plan1), "emission failed");
  c.expect(emitOnce(grammar2, interface2, plan2), "second emission failed");
  if (!c.ok) {
    report(7, "emission", c.ok, c.detail);
    return;
  }

  c.expect(grammar1.find("expr[java.util.Map<String, Integer> env] returns [int result]") !=
               std::string::npos,
           "the expr rule header with realized types is missing");

  const char* ordered[] = {
      "expr[java.util.Map<String, Integer> env] returns [int result]",
      "{result = zero(); sign = one();}",
      "t=term[env]",
      "{result = add(result, mul(sign, t));}",
      "({sign = one();} ('+' | '-' {sign = neg(sign);}) t=term[env]",
  };
  std::size_t pos = 0;
  for (const char* needle : ordered) {
    std::size_t at = grammar1.find(needle, pos);
    c.expect(at != std::string::npos,
             std::string("action block out of position: ") + needle);
    if (at == std::string::npos) break;
    pos = at + std::string(needle).size();
  }

  for (const auto& [original, fresh] : plan1.renames)
    c.expect(!isReservedIdentifier(fresh), "emitted identifier is reserved: " + fresh);

  c.expect(grammar1 == grammar2 && interface1 == interface2,
           "two emission runs are not byte-identical");
  report(7, "emission produces the expected shapes deterministically", c.ok, c.detail);
}

// 8. Front-end-only error reporting: emitting any failing variant writes no
//    files at all.
void criterion8() {
  Check c;
  std::string base = sampleText("arith.gpg");
  const char* replacements[] = {"result = INT", "result = INT#"};

  for (const char* replacement : replacements) {
    fs::path dir = fs::temp_directory_path() /
                   ("gpg-acceptance-" + std::to_string(::getpid()) + "-" +
                    std::to_string(replacement[9]));
    fs::remove_all(dir);
    fs::path specPath = dir;
    fs::create_directories(dir);
    specPath = dir / "variant.gpg";
    {
      std::ofstream out(specPath, std::ios::binary);
      out << replaceOnce(base, "result = strToInt(INT#)", replacement);
    }
    fs::path outDir = dir / "generated";
    std::ostringstream sink;
    int code = commandEmit(specPath.string(), samplePath("simple.gts"), "antlr-java",
                           outDir.string(), sink, sink);
    c.expect(code == 1, "emit did not exit 1 for a failing variant");
    std::size_t written = 0;
    if (fs::exists(outDir))
      for (const auto& entry : fs::directory_iterator(outDir)) {
        (void)entry;
        ++written;
      }
    c.expect(written == 0, "emit wrote files despite front-end errors");
    fs::remove_all(dir);
  }
  report(8, "emission writes nothing when the front end reports errors", c.ok, c.detail);
}

}  // namespace

int main() {
  try {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
  } catch (const std::exception& e) {
    std::cout << "FAIL acceptance harness: " << e.what() << std::endl;
    return 1;
  }
  if (failures == 0) std::cout << "all criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
