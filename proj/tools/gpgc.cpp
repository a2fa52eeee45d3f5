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

// gpgc: checks grammar/translation-function specifications against a
// declarative type system, emits an ANTLR-style grammar plus the external
// function interface, or interprets a specification directly.

#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gpg/driver.hpp"

namespace {

bool parseEnvBinding(const std::string& text, std::map<std::string, std::int64_t>& env) {
  std::size_t eq = text.find('=');
  if (eq == std::string::npos || eq == 0) return false;
  try {
    env[text.substr(0, eq)] = std::stoll(text.substr(eq + 1));
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"statically checked parser-generator front-end"};
  app.require_subcommand(1);

  std::string specPath, typesystemPath, profileName, outDir, dotCfgRule;
  std::string startRule, inputPath, startFunction;
  std::vector<std::string> envBindings;

  CLI::App* check = app.add_subcommand("check", "parse and check a specification");
  check->add_option("spec", specPath, "specification file (.gpg)")->required();
  check->add_option("--typesystem", typesystemPath, "type system description (.gts)")
      ->required();
  check->add_option("--dot-cfg", dotCfgRule,
                    "print the control flow graph of this rule's translation functions");

  CLI::App* emit = app.add_subcommand("emit", "generate parser grammar and interface files");
  emit->add_option("spec", specPath, "specification file (.gpg)")->required();
  emit->add_option("--typesystem", typesystemPath, "type system description (.gts)")
      ->required();
  emit->add_option("--profile", profileName, "back-end profile id from the type system file");
  emit->add_option("--out", outDir, "output directory")->required();

  CLI::App* run = app.add_subcommand("run", "interpret a specification on an input file");
  run->add_option("spec", specPath, "specification file (.gpg)")->required();
  run->add_option("--typesystem", typesystemPath, "type system description (.gts)")
      ->required();
  run->add_option("--start", startRule, "start rule")->required();
  run->add_option("--input", inputPath, "input text file")->required();
  run->add_option("--function", startFunction,
                  "translation function to run (defaults to the rule's only one)");
  run->add_option("--env", envBindings, "demo environment binding, e.g. --env x=4");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : gpg::kExitUsage;
  }

  if (check->parsed())
    return gpg::commandCheck(specPath, typesystemPath, std::cout, std::cerr, dotCfgRule);

  if (emit->parsed())
    return gpg::commandEmit(specPath, typesystemPath, profileName, outDir, std::cout,
                            std::cerr);

  std::map<std::string, std::int64_t> env;
  for (const std::string& binding : envBindings) {
    if (!parseEnvBinding(binding, env)) {
      std::cerr << "invalid --env binding: " << binding << " (expected name=integer)\n";
      return gpg::kExitUsage;
    }
  }
  return gpg::commandRun(specPath, typesystemPath, startRule, inputPath, env, std::cout,
                         std::cerr, startFunction);
}
