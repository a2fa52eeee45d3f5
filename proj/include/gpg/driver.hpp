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

// Front-end driver and CLI commands. Phase ordering is fixed: parse, grammar
// validation, site resolution, type checking and inference, then definite
// assignment; later phases still run for functions whose earlier phases were
// clean, and a data-flow diagnostic is never reported for a function with
// unresolved types. Only the front-end reports errors: the emit command
// writes nothing unless the front-end pass is clean.

#ifndef GPG_DRIVER_HPP
#define GPG_DRIVER_HPP

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gpg/dataflow.hpp"
#include "gpg/demo_externals.hpp"
#include "gpg/diagnostics.hpp"
#include "gpg/emitter.hpp"
#include "gpg/extension.hpp"
#include "gpg/gts_parser.hpp"
#include "gpg/interpreter.hpp"
#include "gpg/parser.hpp"
#include "gpg/typecheck.hpp"

namespace gpg {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDiagnostics = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

struct FrontEndResult {
  std::optional<CheckedSpec> checked;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return checked.has_value(); }
};

inline FrontEndResult runFrontEnd(const SourceText& source,
                                  const TypeSystemExtension& extension) {
  FrontEndResult result;

  SpecParseResult parsed = parseSpecification(source, extension);
  if (!parsed.spec) {
    result.diagnostics = std::move(parsed.diagnostics);
    return result;
  }
  ParsedSpecification& spec = *parsed.spec;

  std::vector<Diagnostic> grammarDiags = validateGrammar(spec.grammar, source);
  result.diagnostics.insert(result.diagnostics.end(), grammarDiags.begin(),
                            grammarDiags.end());

  DiagnosticSink sink(source, result.diagnostics);
  const GroundTypeSystem& types = extension.groundTypes();
  TypeContext ctx = buildTypeContext(spec, sink);

  CheckedSpec checked;
  checked.types = types;
  std::vector<const CheckedFunction*> resolvedFunctions;

  for (const TranslationFunction& fn : spec.functions) {
    const Rule* rule = spec.grammar.findRule(fn.forRule);
    if (!rule) {
      sink.error(diag::FunctionPlacement, fn.nameSpan,
                 "translation function '" + fn.name + "' has no grammar rule");
      continue;
    }
    if (rule->isToken) {
      sink.error(diag::FunctionPlacement, fn.nameSpan,
                 "translation function '" + fn.name + "' follows token rule '" + rule->name +
                     "'; translation functions apply to syntactic rules only");
      continue;
    }
    auto sites = resolveTranslationSites(*rule, fn, sink);
    if (!sites) continue;
    checked.sites.emplace(fn.name, *sites);

    CheckedFunction fnResult = checkTranslationFunction(ctx, types, spec.grammar, *rule, fn, sink);
    if (fnResult.typesResolved) {
      // Definite assignment runs only once every type in the function is known.
      Cfg cfg = buildCfg(*rule, fn, *sites);
      std::vector<Diagnostic> flow = checkDefiniteAssignment(cfg, fn, source);
      result.diagnostics.insert(result.diagnostics.end(), flow.begin(), flow.end());
    }
    auto [it, inserted] = checked.functions.emplace(fn.name, std::move(fnResult));
    if (inserted && it->second.typesResolved) resolvedFunctions.push_back(&it->second);
  }

  std::vector<ExternalSignature> inferred = mergeInferredExternals(resolvedFunctions, sink);
  checked.allExternals = spec.externals;
  checked.allExternals.insert(checked.allExternals.end(), inferred.begin(), inferred.end());

  sortDiagnostics(result.diagnostics);
  if (hasErrors(result.diagnostics)) return result;

  checked.spec = std::move(spec);
  result.checked = std::move(checked);
  return result;
}

inline std::optional<std::string> readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

namespace detail {

struct LoadedTypeSystem {
  TypeSystemFile file;
  std::unique_ptr<TypeSystemExtension> extension;
};

// Loads a .gts file and instantiates the declarative extension for the
// selected (or only) typesystem.
inline std::optional<LoadedTypeSystem> loadTypeSystem(const std::string& path,
                                                      const std::string& typesystemName,
                                                      std::ostream& err, int& exitCode) {
  auto text = readFile(path);
  if (!text) {
    err << "cannot read type system file: " << path << '\n';
    exitCode = kExitUsage;
    return std::nullopt;
  }
  SourceText source(path, std::move(*text));
  TypeSystemFileResult parsed = parseTypeSystemFile(source);
  if (!parsed.file) {
    renderDiagnostics(err, parsed.diagnostics);
    exitCode = kExitDiagnostics;
    return std::nullopt;
  }
  if (parsed.file->typesystems.empty()) {
    err << path << ": no typesystem declared\n";
    exitCode = kExitUsage;
    return std::nullopt;
  }
  const TypeSystemDesc* desc = typesystemName.empty()
                                   ? &parsed.file->typesystems.front()
                                   : parsed.file->findTypesystem(typesystemName);
  if (!desc) {
    err << path << ": unknown typesystem '" << typesystemName << "'\n";
    exitCode = kExitUsage;
    return std::nullopt;
  }
  std::vector<Diagnostic> diags;
  DiagnosticSink sink(source, diags);
  auto system = closeSubtyping(*desc, sink);
  if (!system) {
    renderDiagnostics(err, diags);
    exitCode = kExitDiagnostics;
    return std::nullopt;
  }
  LoadedTypeSystem loaded;
  loaded.file = std::move(*parsed.file);
  loaded.extension = ExtensionRegistry::instance().create("declarative", std::move(*system));
  return loaded;
}

inline std::optional<FrontEndResult> loadSpecification(const std::string& path,
                                                       const TypeSystemExtension& extension,
                                                       std::ostream& err, int& exitCode) {
  auto text = readFile(path);
  if (!text) {
    err << "cannot read specification file: " << path << '\n';
    exitCode = kExitUsage;
    return std::nullopt;
  }
  SourceText source(path, std::move(*text));
  return runFrontEnd(source, extension);
}

}  // namespace detail

// Exit 0 iff no error-severity diagnostics; 2 on I/O or argument errors.
// With `dotCfgRule` set, prints the DOT control flow graph of that rule's
// translation functions on success.
inline int commandCheck(const std::string& specPath, const std::string& typesystemPath,
                        std::ostream& out, std::ostream& err,
                        const std::string& dotCfgRule = {}) {
  int exitCode = kExitOk;
  auto loaded = detail::loadTypeSystem(typesystemPath, {}, err, exitCode);
  if (!loaded) return exitCode;
  auto result = detail::loadSpecification(specPath, *loaded->extension, err, exitCode);
  if (!result) return exitCode;
  renderDiagnostics(err, result->diagnostics);
  if (!result->ok()) return kExitDiagnostics;

  if (!dotCfgRule.empty()) {
    const CheckedSpec& checked = *result->checked;
    const Rule* rule = checked.spec.grammar.findRule(dotCfgRule);
    if (!rule || rule->isToken) {
      err << "unknown syntactic rule: " << dotCfgRule << '\n';
      return kExitUsage;
    }
    bool any = false;
    for (const TranslationFunction* fn : checked.spec.functionsForRule(dotCfgRule)) {
      const SiteMap* sites = checked.sitesOf(fn->name);
      if (!sites) continue;
      out << cfgToDot(buildCfg(*rule, *fn, *sites));
      any = true;
    }
    if (!any) {
      err << "rule '" << dotCfgRule << "' has no translation functions\n";
      return kExitUsage;
    }
  }
  return kExitOk;
}

// Emits <parserName>.g and <parserName>Externals.java into outDir. Refuses
// to write anything when the front-end reports any error.
inline int commandEmit(const std::string& specPath, const std::string& typesystemPath,
                       const std::string& profileName, const std::string& outDir,
                       std::ostream& out, std::ostream& err) {
  (void)out;
  int exitCode = kExitOk;
  auto loaded = detail::loadTypeSystem(typesystemPath, {}, err, exitCode);
  if (!loaded) return exitCode;

  const BackendProfile* profile = nullptr;
  if (profileName.empty()) {
    if (loaded->file.profiles.size() == 1) {
      profile = &loaded->file.profiles.front();
    } else {
      err << typesystemPath << ": " << (loaded->file.profiles.empty() ? "no" : "several")
          << " back-end profiles; select one with --profile\n";
      return kExitUsage;
    }
  } else {
    profile = loaded->file.findProfile(profileName);
    if (!profile) {
      err << typesystemPath << ": unknown back-end profile '" << profileName << "'\n";
      return kExitUsage;
    }
  }
  const LanguageDesc* lang = loaded->file.findLanguage(profile->forLanguage);
  if (!lang) {
    err << typesystemPath << ": profile targets unknown language\n";
    return kExitUsage;
  }
  const TypeSystemDesc* desc = loaded->file.findTypesystem(lang->forTypeSystem);
  if (desc && desc->name != loaded->file.typesystems.front().name) {
    // The profile's language may instantiate a non-first typesystem.
    std::string backendId = profile->backendId;
    std::string languageName = profile->forLanguage;
    auto reloaded = detail::loadTypeSystem(typesystemPath, desc->name, err, exitCode);
    if (!reloaded) return exitCode;
    loaded = std::move(reloaded);
    lang = loaded->file.findLanguage(languageName);
    profile = loaded->file.findProfile(backendId);
    if (!lang || !profile) {
      err << typesystemPath << ": inconsistent profile/language references\n";
      return kExitUsage;
    }
  }

  auto result = detail::loadSpecification(specPath, *loaded->extension, err, exitCode);
  if (!result) return exitCode;
  renderDiagnostics(err, result->diagnostics);
  if (!result->ok()) return kExitDiagnostics;

  const CheckedSpec& checked = *result->checked;
  EmissionPlan plan = makeEmissionPlan(checked, *lang, profile);
  std::vector<Diagnostic> emitDiags;
  SourceText specSource(specPath, readFile(specPath).value_or(""));
  DiagnosticSink sink(specSource, emitDiags);
  auto grammarText = emitAntlrGrammar(checked, *lang, plan, sink);
  if (!grammarText) {
    renderDiagnostics(err, emitDiags);
    return kExitDiagnostics;
  }
  std::string interfaceText = emitExternalInterface(checked.allExternals, *lang, profile, plan);

  std::string parserName = "Parser";
  if (const std::string* n = profile->option("parserName")) parserName = *n;
  std::error_code ec;
  std::filesystem::create_directories(outDir, ec);
  if (ec) {
    err << "cannot create output directory: " << outDir << '\n';
    return kExitUsage;
  }
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream file(std::filesystem::path(outDir) / name, std::ios::binary);
    if (!file) return false;
    file << content;
    return file.good();
  };
  if (!write(parserName + ".g", *grammarText) ||
      !write(parserName + "Externals.java", interfaceText)) {
    err << "cannot write output files to " << outDir << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

// Runs the interpreter with the built-in demo externals; prints the output
// tuple one value per line. Exit 1 on front-end errors, 3 on runtime
// lex/parse/host errors.
inline int commandRun(const std::string& specPath, const std::string& typesystemPath,
                      const std::string& startRule, const std::string& inputPath,
                      const std::map<std::string, std::int64_t>& env, std::ostream& out,
                      std::ostream& err, const std::string& startFunction = {}) {
  int exitCode = kExitOk;
  auto loaded = detail::loadTypeSystem(typesystemPath, {}, err, exitCode);
  if (!loaded) return exitCode;
  auto result = detail::loadSpecification(specPath, *loaded->extension, err, exitCode);
  if (!result) return exitCode;
  renderDiagnostics(err, result->diagnostics);
  if (!result->ok()) return kExitDiagnostics;

  auto input = readFile(inputPath);
  if (!input) {
    err << "cannot read input file: " << inputPath << '\n';
    return kExitUsage;
  }

  const CheckedSpec& checked = *result->checked;
  std::vector<const TranslationFunction*> candidates =
      checked.spec.functionsForRule(startRule);
  const TranslationFunction* start = nullptr;
  if (!startFunction.empty()) {
    for (const TranslationFunction* fn : candidates)
      if (fn->name == startFunction) start = fn;
  } else if (candidates.size() == 1) {
    start = candidates.front();
  }
  if (!start) {
    err << "no unique translation function for rule '" << startRule
        << "'; select one with --function\n";
    return kExitUsage;
  }

  std::vector<RuntimeValue> inputs;
  if (start->inputs.size() == 1) {
    inputs.push_back(demo::makeEnvironment(env));
  } else if (!start->inputs.empty()) {
    err << "the demo bindings support start functions with at most one input\n";
    return kExitUsage;
  }

  ExternalFunctionTable table;
  demo::bindArithExternals(table);
  Interpreter interpreter(checked, std::move(table));
  try {
    std::vector<RuntimeValue> outputs =
        interpreter.run(startRule, start->name, std::move(inputs), *input);
    for (const RuntimeValue& value : outputs) out << value.render() << '\n';
  } catch (const NotLL1Error& e) {
    err << e.what() << '\n';
    for (const std::string& conflict : e.conflicts) err << "  " << conflict << '\n';
    return kExitDiagnostics;
  } catch (const InterpError& e) {
    err << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace gpg

#endif  // GPG_DRIVER_HPP
