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

// Back-end emitters: an ANTLR3-style grammar with embedded actions and the
// external-functions interface. Identifiers clashing with Java or ANTLR
// keywords, generator-internal names, or each other are renamed by suffixing
// the smallest free number; emission is deterministic, so identical input
// yields byte-identical output.

#ifndef GPG_EMITTER_HPP
#define GPG_EMITTER_HPP

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gpg/diagnostics.hpp"
#include "gpg/printer.hpp"
#include "gpg/sites.hpp"
#include "gpg/typecheck.hpp"
#include "gpg/typesystem.hpp"

namespace gpg {

inline const std::set<std::string>& javaKeywords() {
  static const std::set<std::string> keywords = {
      "abstract", "assert",    "boolean", "break",      "byte",     "case",     "catch",
      "char",     "class",     "const",   "continue",   "default",  "do",       "double",
      "else",     "enum",      "extends", "final",      "finally",  "float",    "for",
      "goto",     "if",        "implements", "import",  "instanceof", "int",    "interface",
      "long",     "native",    "new",     "package",    "private",  "protected", "public",
      "return",   "short",     "static",  "strictfp",   "super",    "switch",   "synchronized",
      "this",     "throw",     "throws",  "transient",  "try",      "void",     "volatile",
      "while",    "true",      "false",   "null"};
  return keywords;
}

inline const std::set<std::string>& antlrKeywords() {
  static const std::set<std::string> keywords = {
      "grammar", "lexer",   "parser",  "tree",    "options", "tokens", "scope",
      "fragment", "returns", "throws", "catch",  "finally", "template"};
  return keywords;
}

// Names the generated parser uses internally.
inline const std::set<std::string>& generatorInternalNames() {
  static const std::set<std::string> names = {"input", "state", "retval", "memo", "dfa"};
  return names;
}

inline constexpr std::string_view kGeneratorPrefix = "_gpg";

inline bool isReservedIdentifier(std::string_view name) {
  if (name.substr(0, kGeneratorPrefix.size()) == kGeneratorPrefix) return true;
  std::string key(name);
  return javaKeywords().count(key) || antlrKeywords().count(key) ||
         generatorInternalNames().count(key);
}

struct EmissionPlan {
  const BackendProfile* profile = nullptr;
  std::map<std::string, std::string> renames;          // original -> fresh
  std::vector<std::string> imports;                    // sorted qualified names
  std::map<std::string, std::string> carriers;         // multi-output fn -> carrier type
  std::set<std::string> used;                          // occupied output identifiers

  const std::string& rename(const std::string& original) const {
    auto it = renames.find(original);
    return it == renames.end() ? original : it->second;
  }

  // A fresh helper identifier that collides with nothing; not a rename.
  // Generator-internal names (the reserved prefix) are fair game here.
  std::string allocate(const std::string& requested) {
    auto blocked = [](const std::string& name) {
      return javaKeywords().count(name) || antlrKeywords().count(name) ||
             generatorInternalNames().count(name);
    };
    std::string candidate = requested;
    for (int i = 1; blocked(candidate) || used.count(candidate); ++i)
      candidate = requested + std::to_string(i);
    used.insert(candidate);
    return candidate;
  }
};

// Returns `requested` when it is neither reserved nor taken, otherwise the
// name extended with the smallest positive number that is free. The rename
// is recorded in the plan.
inline std::string freshName(EmissionPlan& plan, const std::string& requested,
                             const std::set<std::string>& reserved) {
  // Numbers cannot free a name that carries the generator-internal prefix;
  // such names escape by gaining a leading letter instead.
  std::string base = requested;
  if (base.substr(0, kGeneratorPrefix.size()) == kGeneratorPrefix) base = "u" + base;
  std::string candidate = base;
  for (int i = 1; reserved.count(candidate) || isReservedIdentifier(candidate) ||
                  plan.used.count(candidate);
       ++i)
    candidate = base + std::to_string(i);
  plan.renames[requested] = candidate;
  plan.used.insert(candidate);
  return candidate;
}

namespace detail {

inline void scanQualifiedNames(const std::string& text, std::set<std::string>& out) {
  std::size_t i = 0;
  auto isIdent = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  };
  while (i < text.size()) {
    if (!std::isalpha(static_cast<unsigned char>(text[i])) && text[i] != '_') {
      ++i;
      continue;
    }
    std::size_t start = i;
    bool qualified = false;
    while (i < text.size() && (isIdent(text[i]) || text[i] == '.')) {
      if (text[i] == '.') qualified = true;
      ++i;
    }
    std::string name = text.substr(start, i - start);
    while (!name.empty() && name.back() == '.') name.pop_back();
    if (qualified && name.find('.') != std::string::npos) out.insert(name);
  }
}

}  // namespace detail

// Collects every identifier the output will mention, renames the reserved
// ones, allocates carrier types for multi-output externals, and gathers the
// import list from the realized spellings of all mentioned types.
inline EmissionPlan makeEmissionPlan(const CheckedSpec& checked, const LanguageDesc& lang,
                                     const BackendProfile* profile) {
  EmissionPlan plan;
  plan.profile = profile;

  std::set<std::string> identifiers;
  for (const Rule& rule : checked.spec.grammar.rules) identifiers.insert(rule.name);
  for (const TranslationFunction& fn : checked.spec.functions) {
    identifiers.insert(fn.name);
    if (const auto* attrs = checked.attributeTypesOf(fn.name))
      for (const auto& [name, type] : *attrs) identifiers.insert(name);
  }
  for (const ExternalSignature& sig : checked.allExternals) {
    identifiers.insert(sig.name);
    for (const AttributeDecl& a : sig.inputs) identifiers.insert(a.name);
  }

  // Unreserved identifiers keep their names; the rest get fresh ones.
  for (const std::string& name : identifiers)
    if (!isReservedIdentifier(name)) plan.used.insert(name);
  for (const std::string& name : identifiers) {
    if (!isReservedIdentifier(name)) {
      plan.renames[name] = name;
      continue;
    }
    freshName(plan, name, {});
  }

  for (const ExternalSignature& sig : checked.allExternals) {
    if (sig.outputs.size() > 1) {
      std::string base = plan.rename(sig.name);
      base[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(base[0])));
      plan.carriers[sig.name] = plan.allocate(base + "Result");
    }
  }

  std::set<std::string> mentionedTypes;
  for (const TranslationFunction& fn : checked.spec.functions)
    if (const auto* attrs = checked.attributeTypesOf(fn.name))
      for (const auto& [name, type] : *attrs) mentionedTypes.insert(type);
  for (const ExternalSignature& sig : checked.allExternals) {
    for (const AttributeDecl& a : sig.inputs)
      if (a.declaredType) mentionedTypes.insert(*a.declaredType);
    for (const AttributeDecl& a : sig.outputs)
      if (a.declaredType) mentionedTypes.insert(*a.declaredType);
  }
  std::set<std::string> qualified;
  for (const std::string& type : mentionedTypes)
    detail::scanQualifiedNames(realizeType(lang, type), qualified);
  plan.imports.assign(qualified.begin(), qualified.end());
  return plan;
}

namespace detail {

class AntlrEmitter {
public:
  AntlrEmitter(const CheckedSpec& checked, const LanguageDesc& lang, EmissionPlan& plan,
               DiagnosticSink& sink)
      : checked_(checked), lang_(lang), plan_(plan), sink_(&sink) {}

  std::optional<std::string> emit() {
    std::ostringstream os;
    std::string parserName = "Parser";
    if (plan_.profile)
      if (const std::string* n = plan_.profile->option("parserName")) parserName = *n;
    os << "grammar " << parserName << ";\n";

    if (plan_.profile) {
      // Unknown options pass through as comments.
      for (const auto& [key, value] : plan_.profile->options)
        if (key != "parserName" && key != "package")
          os << "// option " << key << " = '" << value << "'\n";
    }

    const std::string* pkg =
        plan_.profile ? plan_.profile->option("package") : nullptr;
    if (pkg || !plan_.imports.empty()) {
      os << "\n@header {\n";
      if (pkg) os << "package " << *pkg << ";\n";
      for (const std::string& imp : plan_.imports) os << "import " << imp << ";\n";
      os << "}\n";
    }
    os << '\n';

    bool ok = true;
    for (const Rule& rule : checked_.spec.grammar.rules) {
      if (!emitRule(os, rule)) ok = false;
    }
    if (!ok) return std::nullopt;
    return os.str();
  }

private:
  bool emitRule(std::ostringstream& os, const Rule& rule) {
    const TranslationFunction* fn = nullptr;
    if (!rule.isToken) {
      auto fns = checked_.spec.functionsForRule(rule.name);
      if (fns.size() > 1) {
        sink_->error(diag::Unsupported, rule.nameSpan,
                     "rule '" + rule.name +
                         "' has several translation functions; the ANTLR back-end emits at "
                         "most one per rule");
        return false;
      }
      if (!fns.empty()) fn = fns.front();
    }

    if (rule.isFragment) os << "fragment ";
    os << plan_.rename(rule.name);
    if (fn) {
      if (!fn->inputs.empty()) {
        os << '[';
        for (std::size_t i = 0; i < fn->inputs.size(); ++i) {
          if (i) os << ", ";
          os << attrType(*fn, fn->inputs[i].name) << ' ' << plan_.rename(fn->inputs[i].name);
        }
        os << ']';
      }
      if (!fn->outputs.empty()) {
        os << " returns [";
        for (std::size_t i = 0; i < fn->outputs.size(); ++i) {
          if (i) os << ", ";
          os << attrType(*fn, fn->outputs[i].name) << ' ' << plan_.rename(fn->outputs[i].name);
        }
        os << ']';
      }
      std::vector<std::string> initLocals = localsNeedingInit(*fn);
      if (!initLocals.empty()) {
        os << "\n@init { ";
        for (const std::string& local : initLocals)
          os << attrType(*fn, local) << ' ' << plan_.rename(local) << "; ";
        os << '}';
      }
    }
    os << '\n';

    const SiteMap* sites = fn ? checked_.sitesOf(fn->name) : nullptr;
    RhsPath path;
    if (rule.rhs.kind == RhsKind::Alternative) {
      for (std::uint32_t i = 0; i < rule.rhs.children.size(); ++i) {
        os << (i == 0 ? "\t: " : "\t| ");
        path.push_back(i);
        os << renderNode(rule.rhs.children[i], path, fn, sites, false);
        path.pop_back();
        os << '\n';
      }
      os << "\t;\n\n";
    } else {
      os << "\t: " << renderNode(rule.rhs, path, fn, sites, false) << "\n\t;\n\n";
    }
    return true;
  }

  // Locals declared in @init: everything except those introduced by a
  // single-output 'at' call label.
  std::vector<std::string> localsNeedingInit(const TranslationFunction& fn) const {
    std::set<std::string> locals;
    std::set<std::string> declared;
    for (const AttributeDecl& d : fn.inputs) declared.insert(d.name);
    for (const AttributeDecl& d : fn.outputs) declared.insert(d.name);
    for (const AttributeDecl& d : fn.locals) locals.insert(d.name);
    if (const auto* attrs = checked_.attributeTypesOf(fn.name))
      for (const auto& [name, type] : *attrs)
        if (!declared.count(name)) locals.insert(name);
    for (const PositionedAction& action : fn.actions) {
      if (action.position != ActionPosition::At) continue;
      if (action.body.kind != Statement::Kind::Assignment) continue;
      if (action.body.lhs.size() != 1) continue;
      const TranslationFunction* callee = checked_.spec.findFunction(action.body.expr.name);
      if (callee && callee->outputs.size() == 1 && locals.count(action.body.lhs[0]))
        locals.erase(action.body.lhs[0]);
    }
    return {locals.begin(), locals.end()};
  }

  std::string attrType(const TranslationFunction& fn, const std::string& attr) const {
    if (const auto* attrs = checked_.attributeTypesOf(fn.name)) {
      auto it = attrs->find(attr);
      if (it != attrs->end()) return realizeType(lang_, it->second);
    }
    return "Object";
  }

  bool isAtom(const RhsExpr& node) const {
    return node.kind == RhsKind::SymbolRef || node.kind == RhsKind::CharRange;
  }

  std::string renderNode(const RhsExpr& node, RhsPath& path, const TranslationFunction* fn,
                         const SiteMap* sites, bool needAtomic) {
    const ActionSlots* slots = sites ? sites->slotsAt(path) : nullptr;
    std::string out;
    if (slots)
      for (std::uint32_t idx : slots->before)
        out += "{" + renderStatement(fn->actions[idx].body) + "} ";

    switch (node.kind) {
      case RhsKind::SymbolRef:
        if (node.symbol.kind == SymbolKind::Literal)
          out += "'" + escapeLiteral(node.symbol.name) + "'";
        else if (node.symbol.kind == SymbolKind::TokenRule)
          out += plan_.rename(node.symbol.name);
        else
          out += renderNonterminal(node, slots, fn);
        break;
      case RhsKind::CharRange:
        out += "'" + escapeLiteral(std::string(1, node.rangeLo)) + "'..'" +
               escapeLiteral(std::string(1, node.rangeHi)) + "'";
        break;
      case RhsKind::Labeled: {
        path.push_back(0);
        out += renderNode(node.children[0], path, fn, sites, needAtomic);
        path.pop_back();
        break;
      }
      case RhsKind::Sequence: {
        std::string body;
        for (std::uint32_t i = 0; i < node.children.size(); ++i) {
          if (i) body += ' ';
          path.push_back(i);
          body += renderNode(node.children[i], path, fn, sites, false);
          path.pop_back();
        }
        out += needAtomic ? "(" + body + ")" : body;
        break;
      }
      case RhsKind::Alternative: {
        std::string body;
        for (std::uint32_t i = 0; i < node.children.size(); ++i) {
          if (i) body += " | ";
          path.push_back(i);
          body += renderNode(node.children[i], path, fn, sites, false);
          path.pop_back();
        }
        out += "(" + body + ")";
        break;
      }
      case RhsKind::Iteration:
      case RhsKind::Optional: {
        path.push_back(0);
        std::string body = renderNode(node.children[0], path, fn, sites, true);
        path.pop_back();
        out += body;
        out += node.kind == RhsKind::Optional ? "?" : (node.minCount == 1 ? "+" : "*");
        break;
      }
    }

    if (slots)
      for (std::uint32_t idx : slots->after)
        out += " {" + renderStatement(fn->actions[idx].body) + "}";
    return out;
  }

  std::string renderNonterminal(const RhsExpr& node, const ActionSlots* slots,
                                const TranslationFunction* fn) {
    std::string ruleName = plan_.rename(node.symbol.name);
    if (!slots || !slots->at) return ruleName;
    const PositionedAction& action = fn->actions[*slots->at];
    const Expression& call = action.body.expr;
    std::string args;
    if (!call.args.empty()) {
      args += '[';
      for (std::size_t i = 0; i < call.args.size(); ++i) {
        if (i) args += ", ";
        args += renderExpression(call.args[i]);
      }
      args += ']';
    }
    if (action.body.kind == Statement::Kind::CallStatement) return ruleName + args;

    const TranslationFunction* callee = checked_.spec.findFunction(call.name);
    bool singleOutput = callee && callee->outputs.size() == 1;
    if (singleOutput && action.body.lhs.size() == 1 && isPlainLocal(*fn, action.body.lhs[0]))
      return plan_.rename(action.body.lhs[0]) + "=" + ruleName + args;

    // Store through a fresh label; multi-output rules expose their returns
    // as fields of the label.
    std::string label = plan_.allocate(plan_.rename(action.body.lhs.empty()
                                                        ? call.name
                                                        : action.body.lhs.front()));
    std::string out = label + "=" + ruleName + args + " {";
    if (singleOutput) {
      out += plan_.rename(action.body.lhs.front()) + " = " + label + ";";
    } else if (callee) {
      for (std::size_t i = 0; i < action.body.lhs.size(); ++i) {
        if (i) out += ' ';
        out += plan_.rename(action.body.lhs[i]) + " = $" + label + "." +
               plan_.rename(callee->outputs[i].name) + ";";
      }
    }
    out += "}";
    return out;
  }

  bool isPlainLocal(const TranslationFunction& fn, const std::string& attr) const {
    for (const AttributeDecl& d : fn.inputs)
      if (d.name == attr) return false;
    for (const AttributeDecl& d : fn.outputs)
      if (d.name == attr) return false;
    return true;
  }

  std::string renderStatement(const Statement& s) {
    switch (s.kind) {
      case Statement::Kind::Block: {
        std::string out;
        for (std::size_t i = 0; i < s.body.size(); ++i) {
          if (i) out += ' ';
          out += renderStatement(s.body[i]);
        }
        return out;
      }
      case Statement::Kind::CallStatement:
        return renderExpression(s.expr) + ";";
      case Statement::Kind::Assignment: {
        if (s.lhs.size() == 1)
          return plan_.rename(s.lhs[0]) + " = " + renderExpression(s.expr) + ";";
        // Multi-output external call: route through the generated carrier.
        auto carrier = plan_.carriers.find(s.expr.name);
        std::string type = carrier == plan_.carriers.end() ? "Object" : carrier->second;
        std::string tmp = plan_.allocate(std::string(kGeneratorPrefix) + "_r");
        std::string out = type + " " + tmp + " = " + renderExpression(s.expr) + ";";
        for (std::size_t i = 0; i < s.lhs.size(); ++i)
          out += " " + plan_.rename(s.lhs[i]) + " = " + tmp + "._" + std::to_string(i + 1) +
                 ";";
        return out;
      }
    }
    return {};
  }

  std::string renderExpression(const Expression& e) {
    switch (e.kind) {
      case Expression::Kind::AttributeRef:
        return plan_.rename(e.name);
      case Expression::Kind::TokenText:
        return "$" + plan_.rename(e.name) + ".getText()";
      case Expression::Kind::Call: {
        std::string out = plan_.rename(e.name) + "(";
        for (std::size_t i = 0; i < e.args.size(); ++i) {
          if (i) out += ", ";
          out += renderExpression(e.args[i]);
        }
        return out + ")";
      }
    }
    return {};
  }

  const CheckedSpec& checked_;
  const LanguageDesc& lang_;
  EmissionPlan& plan_;
  DiagnosticSink* sink_;
};

}  // namespace detail

// One ANTLR-style rule per grammar rule; the designated translation
// function's inputs become bracketed parameters, outputs become 'returns',
// before/after actions become inline blocks in position and 'at' calls
// become subrule invocations with arguments.
inline std::optional<std::string> emitAntlrGrammar(const CheckedSpec& checked,
                                                   const LanguageDesc& lang, EmissionPlan& plan,
                                                   DiagnosticSink& sink) {
  detail::AntlrEmitter emitter(checked, lang, plan, sink);
  return emitter.emit();
}

// One method per external function, realized types throughout; multi-output
// functions get an auxiliary tuple carrier named after the function and
// inferred signatures carry a provenance comment.
inline std::string emitExternalInterface(const std::vector<ExternalSignature>& signatures,
                                         const LanguageDesc& lang, const BackendProfile* profile,
                                         EmissionPlan& plan) {
  std::ostringstream os;
  std::string parserName = "Parser";
  if (profile) {
    if (const std::string* n = profile->option("parserName")) parserName = *n;
    if (const std::string* pkg = profile->option("package"))
      os << "package " << *pkg << ";\n\n";
  }
  os << "// External functions required by " << parserName
     << "; implement this interface and hand it to the generated parser.\n";
  os << "public interface " << parserName << "Externals {\n";
  for (const ExternalSignature& sig : signatures) {
    std::string ret;
    if (sig.outputs.empty()) {
      ret = "void";
    } else if (sig.outputs.size() == 1) {
      ret = realizeType(lang, sig.outputs[0].declaredType.value_or("Object"));
    } else {
      auto it = plan.carriers.find(sig.name);
      ret = it == plan.carriers.end() ? "Object" : it->second;
      os << "\n\tfinal class " << ret << " {\n";
      for (std::size_t i = 0; i < sig.outputs.size(); ++i)
        os << "\t\tpublic " << realizeType(lang, sig.outputs[i].declaredType.value_or("Object"))
           << " _" << (i + 1) << ";\n";
      os << "\t}\n";
    }
    if (sig.origin == SignatureOrigin::Inferred) os << "\n\t// inferred\n";
    os << '\t' << ret << ' ' << plan.rename(sig.name) << '(';
    for (std::size_t i = 0; i < sig.inputs.size(); ++i) {
      if (i) os << ", ";
      os << realizeType(lang, sig.inputs[i].declaredType.value_or("Object")) << ' '
         << plan.rename(sig.inputs[i].name);
    }
    os << ");\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace gpg

#endif  // GPG_EMITTER_HPP
