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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

using namespace gpgtest;

namespace {

CheckedSpec checkedArith(const std::string& text = arithSpecText()) {
  GroundTypeSystem sys = simpleSystem();
  FrontEnd fe = runArithFrontEnd(text, sys);
  REQUIRE(fe.result.ok());
  return std::move(*fe.result.checked);
}

std::int64_t evalArith(const CheckedSpec& checked, const std::string& input,
                       demo::Environment env = {}) {
  ExternalFunctionTable table;
  demo::bindArithExternals(table);
  Interpreter interp(checked, std::move(table));
  auto outputs = interp.run("expr", "expr", {demo::makeEnvironment(std::move(env))}, input);
  REQUIRE(outputs.size() == 1);
  return outputs[0].asInt();
}

}  // namespace

TEST_CASE("tokenizer: longest match with literal priority") {
  GroundTypeSystem sys = simpleSystem();
  DeclarativeExtension ext(sys);
  SourceText src("lex.gpg",
                 "A : 'a' ;\nAB : 'a' 'b' ;\ns : A AB 'a' ;\n");
  auto parsed = parseSpecification(src, ext);
  REQUIRE(parsed.spec.has_value());
  TokenCatalog catalog = TokenCatalog::build(parsed.spec->grammar);

  // "ab" is one AB token (longest match), not A plus junk.
  auto tokens = tokenizeInput(parsed.spec->grammar, catalog, "ab");
  REQUIRE(tokens.size() == 2);  // AB + EOF
  CHECK(tokens[0].kind == catalog.tokenRules.at("AB"));
  CHECK(tokens[0].text == "ab");

  // On equal length the literal 'a' outranks the token rule A.
  tokens = tokenizeInput(parsed.spec->grammar, catalog, "a");
  REQUIRE(tokens.size() == 2);
  CHECK(tokens[0].kind == catalog.literals.at("a"));
}

TEST_CASE("tokenizer: arithmetic inputs and whitespace") {
  CheckedSpec checked = checkedArith();
  TokenCatalog catalog = TokenCatalog::build(checked.spec.grammar);
  auto tokens = tokenizeInput(checked.spec.grammar, catalog, "x1 * ( 30 + 2 )");
  std::vector<std::string> kinds;
  for (const LexedToken& t : tokens) kinds.push_back(catalog.display[t.kind]);
  CHECK(kinds == std::vector<std::string>{"VAR", "'*'", "'('", "INT", "'+'", "INT", "')'",
                                          "<EOF>"});
  CHECK(tokens[0].text == "x1");
  CHECK(tokens[3].text == "30");

  CHECK_THROWS_AS(tokenizeInput(checked.spec.grammar, catalog, "3 @ 4"), LexError);
}

TEST_CASE("FIRST and FOLLOW sets of the arithmetic grammar") {
  CheckedSpec checked = checkedArith();
  TokenCatalog catalog = TokenCatalog::build(checked.spec.grammar);
  FirstFollow ff(checked.spec.grammar, catalog, "expr");
  CHECK(ff.conflicts().empty());

  auto name = [&](const std::set<int>& kinds) {
    std::vector<std::string> out;
    for (int k : kinds) out.push_back(catalog.display[static_cast<std::size_t>(k)]);
    return out;
  };
  CHECK(name(ff.firstOfRule("factor")) == std::vector<std::string>{"VAR", "INT", "'('"});
  CHECK(name(ff.firstOfRule("expr")) == std::vector<std::string>{"VAR", "INT", "'('"});
  CHECK(!ff.ruleNullable("expr"));

  // FOLLOW of the inner term occurrence includes the loop's own tokens and
  // the expression's follow set.
  const Rule* expr = checked.spec.grammar.findRule("expr");
  auto hits = resolveActionSite(*expr, "term");
  REQUIRE(hits.has_value());
  REQUIRE(hits->size() == 2);
  auto follow = name(ff.followOfNode("expr", hits->back().path));
  CHECK(std::find(follow.begin(), follow.end(), "'+'") != follow.end());
  CHECK(std::find(follow.begin(), follow.end(), "')'") != follow.end());
  CHECK(std::find(follow.begin(), follow.end(), "<EOF>") != follow.end());
}

TEST_CASE("non-LL(1) grammars are rejected before reading input") {
  GroundTypeSystem sys = simpleSystem();
  std::string text =
      "one() --> (Int o);\nA : 'a' ;\nB : 'b' ;\nC : 'c' ;\n"
      "s : A B | A C ;\n"
      "  s() --> (Int r) { after A : r = one(); }\n";
  FrontEnd fe = runArithFrontEnd(text, sys);
  REQUIRE(fe.result.ok());  // static checks pass; LL(1) is an interpreter property
  ExternalFunctionTable table;
  table.bind("one", [](const std::vector<RuntimeValue>&) {
    return std::vector<RuntimeValue>{RuntimeValue::ofInt(1, "Int")};
  });
  Interpreter interp(*fe.result.checked, std::move(table));
  // Even unlexable input reports the LL(1) conflict first.
  CHECK_THROWS_AS(interp.run("s", "s", {}, "@@@"), NotLL1Error);
}

TEST_CASE("the worked example evaluates correctly") {
  CheckedSpec checked = checkedArith();
  CHECK(evalArith(checked, "x*(3+2)", {{"x", 4}}) == 20);
  CHECK(evalArith(checked, "7") == 7);
  CHECK(evalArith(checked, "1+2*3") == 7);
  CHECK(evalArith(checked, "2*3+1") == 7);
  CHECK(evalArith(checked, "10-2-3") == 5);   // left-to-right accumulation
  CHECK(evalArith(checked, "2*(1+1)*(3+4)") == 28);
  CHECK(evalArith(checked, "x*(3+2)", {{"x", -1}}) == -5);
  CHECK(evalArith(checked, "((((42))))") == 42);
}

TEST_CASE("syntactically bad input raises a parse error with a position") {
  CheckedSpec checked = checkedArith();
  auto expectParseError = [&](const std::string& input) {
    ExternalFunctionTable table;
    demo::bindArithExternals(table);
    Interpreter interp(checked, std::move(table));
    CHECK_THROWS_AS(interp.run("expr", "expr", {demo::makeEnvironment({{"x", 4}})}, input),
                    ParseError);
  };
  expectParseError("(x+*3)");
  expectParseError("");
  expectParseError("1+");
  expectParseError("(1");
  expectParseError("1 2");  // trailing input after a complete expression
}

TEST_CASE("host errors from external callbacks propagate") {
  CheckedSpec checked = checkedArith();
  ExternalFunctionTable table;
  demo::bindArithExternals(table);
  Interpreter interp(checked, std::move(table));
  // 'value' fails on an undefined variable.
  CHECK_THROWS_AS(interp.run("expr", "expr", {demo::makeEnvironment({})}, "y+1"), HostError);
}

TEST_CASE("every declared external must be bound before interpretation") {
  CheckedSpec checked = checkedArith();
  ExternalFunctionTable incomplete;
  incomplete.bind("strToInt", [](const std::vector<RuntimeValue>&) {
    return std::vector<RuntimeValue>{RuntimeValue::ofInt(0, "Int")};
  });
  Interpreter interp(checked, std::move(incomplete));
  CHECK_THROWS_AS(interp.run("expr", "expr", {demo::makeEnvironment({})}, "@@@"), HostError);
}

TEST_CASE("debug tag checks reject values violating the static types") {
  CheckedSpec checked = checkedArith();
  ExternalFunctionTable table;
  demo::bindArithExternals(table);
  // 'zero' lies about its result type.
  table.bind("zero", [](const std::vector<RuntimeValue>&) {
    return std::vector<RuntimeValue>{RuntimeValue::ofString("nope", "String")};
  });
  Interpreter interp(checked, std::move(table));
  CHECK_THROWS_AS(interp.run("expr", "expr", {demo::makeEnvironment({})}, "1"), InterpError);

  // With tag checking off the bogus value flows (and the harness adds it).
  ExternalFunctionTable table2;
  demo::bindArithExternals(table2);
  InterpretOptions lax;
  lax.checkTags = false;
  Interpreter interp2(checked, std::move(table2), lax);
  CHECK(interp2.run("expr", "expr", {demo::makeEnvironment({})}, "1").at(0).asInt() == 1);
}

TEST_CASE("multi-output externals fill attribute tuples") {
  GroundTypeSystem sys = simpleSystem();
  std::string text =
      "divide(Int x, Int y) --> (Int quot, Int rem);\n"
      "ten() --> (Int t);\nthree() --> (Int t);\n"
      "B : 'b' ;\n"
      "s : B ;\n"
      "  s() --> (Int q, Int r) { after B : (q, r) = divide(ten(), three()); }\n";
  FrontEnd fe = runArithFrontEnd(text, sys);
  REQUIRE(fe.result.ok());
  ExternalFunctionTable table;
  table.bind("divide", [](const std::vector<RuntimeValue>& args) {
    std::int64_t x = args.at(0).asInt(), y = args.at(1).asInt();
    return std::vector<RuntimeValue>{RuntimeValue::ofInt(x / y, "Int"),
                                     RuntimeValue::ofInt(x % y, "Int")};
  });
  table.bind("ten", [](const std::vector<RuntimeValue>&) {
    return std::vector<RuntimeValue>{RuntimeValue::ofInt(10, "Int")};
  });
  table.bind("three", [](const std::vector<RuntimeValue>&) {
    return std::vector<RuntimeValue>{RuntimeValue::ofInt(3, "Int")};
  });
  Interpreter interp(*fe.result.checked, std::move(table));
  auto outputs = interp.run("s", "s", {}, "b");
  REQUIRE(outputs.size() == 2);
  CHECK(outputs[0].asInt() == 3);
  CHECK(outputs[1].asInt() == 1);
}

TEST_CASE("translation functions can return attribute tuples through 'at' calls") {
  GroundTypeSystem sys = simpleSystem();
  std::string text =
      "two() --> (Int t);\nfive() --> (Int f);\n"
      "B : 'b' ;\n"
      "pair : B ;\n"
      "  pair() --> (Int lo, Int hi) { after B : (lo, hi) = mk(); }\n"
      "mk() --> (Int a, Int b);\n"
      "s : pair ;\n"
      "  s() --> (Int sum) { Int lo; Int hi; at pair : (lo, hi) = pair(); after pair : sum "
      "= add(lo, hi); }\n"
      "add(Int x, Int y) --> (Int s);\n";
  FrontEnd fe = runArithFrontEnd(text, sys);
  REQUIRE(fe.result.ok());
  ExternalFunctionTable table;
  auto intResult = [](std::int64_t v) {
    return std::vector<RuntimeValue>{RuntimeValue::ofInt(v, "Int")};
  };
  table.bind("two", [&](const std::vector<RuntimeValue>&) { return intResult(2); });
  table.bind("five", [&](const std::vector<RuntimeValue>&) { return intResult(5); });
  table.bind("mk", [](const std::vector<RuntimeValue>&) {
    return std::vector<RuntimeValue>{RuntimeValue::ofInt(2, "Int"),
                                     RuntimeValue::ofInt(5, "Int")};
  });
  table.bind("add", [](const std::vector<RuntimeValue>& args) {
    return std::vector<RuntimeValue>{
        RuntimeValue::ofInt(args.at(0).asInt() + args.at(1).asInt(), "Int")};
  });
  Interpreter interp(*fe.result.checked, std::move(table));
  auto outputs = interp.run("s", "s", {}, "b");
  REQUIRE(outputs.size() == 1);
  CHECK(outputs[0].asInt() == 7);
}

TEST_CASE("token text is only available once the token was matched") {
  GroundTypeSystem sys = simpleSystem();
  std::string text =
      "strToInt(String s) --> (Int v);\n"
      "INT : '0'..'9' ;\n"
      "s : INT ;\n"
      "  s() --> (Int r) { before INT : r = strToInt(INT#); }\n";
  FrontEnd fe = runArithFrontEnd(text, sys);
  REQUIRE(fe.result.ok());
  ExternalFunctionTable table;
  demo::bindArithExternals(table);
  Interpreter interp(*fe.result.checked, std::move(table));
  CHECK_THROWS_AS(interp.run("s", "s", {}, "5"), EvalError);
}

TEST_CASE("occurrences without an 'at' action parse without translating") {
  GroundTypeSystem sys = simpleSystem();
  std::string text =
      "one() --> (Int o);\n"
      "B : 'b' ;\n"
      "inner : B ;\n"
      "  inner(Int x) --> (Int y) { after B : y = x; }\n"
      "outer : inner ;\n"
      "  outer() --> (Int r) { after inner : r = one(); }\n";
  FrontEnd fe = runArithFrontEnd(text, sys);
  REQUIRE(fe.result.ok());
  ExternalFunctionTable table;
  table.bind("one", [](const std::vector<RuntimeValue>&) {
    return std::vector<RuntimeValue>{RuntimeValue::ofInt(1, "Int")};
  });
  Interpreter interp(*fe.result.checked, std::move(table));
  auto outputs = interp.run("outer", "outer", {}, "b");
  REQUIRE(outputs.size() == 1);
  CHECK(outputs[0].asInt() == 1);  // inner's function never ran
}

TEST_CASE("actions run before/match/after with outer labels wrapping inner sites") {
  GroundTypeSystem sys = simpleSystem();
  // Textually scrambled on purpose: placement comes from position and site.
  std::string text =
      "t1() --> (Int a);\nt2() --> (Int a);\nt3() --> (Int a);\nt4() --> (Int a);\n"
      "B : 'b' ;\n"
      "a : $l=B ;\n"
      "  a() --> (Int r) {\n"
      "    after  $l : r = t4();\n"
      "    before B  : y = t2();\n"
      "    after  B  : z = t3();\n"
      "    before $l : x = t1();\n"
      "  }\n";
  FrontEnd fe = runArithFrontEnd(text, sys);
  REQUIRE(fe.result.ok());
  auto trace = std::make_shared<std::vector<std::string>>();
  ExternalFunctionTable table;
  for (const char* name : {"t1", "t2", "t3", "t4"}) {
    table.bind(name, [trace, name](const std::vector<RuntimeValue>&) {
      trace->push_back(name);
      return std::vector<RuntimeValue>{RuntimeValue::ofInt(0, "Int")};
    });
  }
  Interpreter interp(*fe.result.checked, std::move(table));
  interp.run("a", "a", {}, "b");
  CHECK(*trace == std::vector<std::string>{"t1", "t2", "t3", "t4"});
}

TEST_CASE("actions at the same site and position run in textual order") {
  GroundTypeSystem sys = simpleSystem();
  std::string text =
      "t1() --> (Int a);\nt2() --> (Int a);\n"
      "B : 'b' ;\n"
      "a : B ;\n"
      "  a() --> (Int r) { after B : x = t1(); after B : r = t2(); }\n";
  FrontEnd fe = runArithFrontEnd(text, sys);
  REQUIRE(fe.result.ok());
  auto trace = std::make_shared<std::vector<std::string>>();
  ExternalFunctionTable table;
  for (const char* name : {"t1", "t2"}) {
    table.bind(name, [trace, name](const std::vector<RuntimeValue>&) {
      trace->push_back(name);
      return std::vector<RuntimeValue>{RuntimeValue::ofInt(0, "Int")};
    });
  }
  Interpreter interp(*fe.result.checked, std::move(table));
  interp.run("a", "a", {}, "b");
  CHECK(*trace == std::vector<std::string>{"t1", "t2"});
}

TEST_CASE("unknown start rules and functions are rejected") {
  CheckedSpec checked = checkedArith();
  ExternalFunctionTable table;
  demo::bindArithExternals(table);
  Interpreter interp(checked, std::move(table));
  CHECK_THROWS_AS(interp.run("nosuch", "expr", {}, "1"), EvalError);
  CHECK_THROWS_AS(interp.run("expr", "term", {demo::makeEnvironment({})}, "1"), EvalError);
}
