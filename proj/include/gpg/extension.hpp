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

// Ground-type-system extension points. An extension supplies the 'type'
// sub-grammar used inside signatures, the 'declarations' sub-grammar for the
// optional leading section of a specification, and the semantic side: the
// ground type system itself (predefined types, subtyping oracle, string and
// top types). Extensions register in-process, keyed by name.

#ifndef GPG_EXTENSION_HPP
#define GPG_EXTENSION_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gpg/ast.hpp"
#include "gpg/diagnostics.hpp"
#include "gpg/lexer.hpp"
#include "gpg/typesystem.hpp"

namespace gpg {

class TypeSystemExtension {
public:
  virtual ~TypeSystemExtension() = default;

  virtual std::string_view id() const = 0;
  virtual const GroundTypeSystem& groundTypes() const = 0;

  // 'type' hook: parse one ground type reference at the cursor and resolve
  // it to a predefined type's display name. Always consumes the type tokens;
  // returns nullopt (with a diagnostic) when resolution fails.
  virtual std::optional<std::string> parseTypeRef(TokenStream& ts, const Declarations& decls,
                                                  Span* spanOut) const = 0;

  // 'declarations' hook: parse the optional leading declarations section.
  virtual Declarations parseDeclarations(TokenStream& ts) const = 0;
};

// Default extension backed by a declarative type system description: a type
// is written as a single (possibly dotted) identifier naming a declared type.
// There is no declarations section.
class DeclarativeExtension final : public TypeSystemExtension {
public:
  explicit DeclarativeExtension(GroundTypeSystem system) : system_(std::move(system)) {}

  std::string_view id() const override { return "declarative"; }
  const GroundTypeSystem& groundTypes() const override { return system_; }

  std::optional<std::string> parseTypeRef(TokenStream& ts, const Declarations&,
                                          Span* spanOut) const override {
    if (!ts.at(Tok::Ident)) {
      ts.sink().error(diag::Syntax, ts.peek().span, "expected a type name");
      return std::nullopt;
    }
    Token name = ts.advance();
    if (spanOut) *spanOut = name.span;
    if (!system_.contains(name.text)) {
      ts.sink().error(diag::UnknownType, name.span, "Unknown type: " + name.text);
      return std::nullopt;
    }
    return name.text;
  }

  Declarations parseDeclarations(TokenStream&) const override { return Declarations{}; }

private:
  GroundTypeSystem system_;
};

// Extension for namespaced implementation languages: types are dotted names
// resolved through import declarations, subtyping stays purely nominal (the
// declared pairs of the backing description). The declarations section is
//
//   declarations      : options? importDeclaration* ;
//   options           : '#javaoptions' '{' option+ '}' ;
//   option            : NAME '=' STRING ';' ;
//   importDeclaration : 'import' IDENTIFIER ('.' IDENTIFIER)* ('.' '*')? ';' ;
class ImportsExtension final : public TypeSystemExtension {
public:
  explicit ImportsExtension(GroundTypeSystem system) : system_(std::move(system)) {}

  std::string_view id() const override { return "imports"; }
  const GroundTypeSystem& groundTypes() const override { return system_; }

  std::optional<std::string> parseTypeRef(TokenStream& ts, const Declarations& decls,
                                          Span* spanOut) const override {
    if (!ts.at(Tok::Ident)) {
      ts.sink().error(diag::Syntax, ts.peek().span, "expected a type name");
      return std::nullopt;
    }
    Token first = ts.advance();
    std::string name = first.text;
    Span span = first.span;
    while (ts.at(Tok::Dot)) {
      ts.advance();
      if (!ts.at(Tok::Ident)) {
        ts.sink().error(diag::Syntax, ts.peek().span, "expected identifier after '.'");
        return std::nullopt;
      }
      Token part = ts.advance();
      name += "." + part.text;
      span = span.merge(part.span);
    }
    if (spanOut) *spanOut = span;

    if (system_.contains(name)) return name;
    if (name.find('.') == std::string::npos) {
      std::vector<std::string> candidates;
      for (const std::string& imp : decls.imports) {
        if (imp.size() > 2 && imp.compare(imp.size() - 2, 2, ".*") == 0) {
          std::string qualified = imp.substr(0, imp.size() - 1) + name;
          if (system_.contains(qualified)) candidates.push_back(qualified);
        } else if (imp.size() > name.size() + 1 &&
                   imp.compare(imp.size() - name.size() - 1, name.size() + 1, "." + name) == 0) {
          if (system_.contains(imp)) candidates.push_back(imp);
        }
      }
      if (candidates.size() == 1) return candidates.front();
      if (candidates.size() > 1) {
        ts.sink().error(diag::UnknownType, span,
                        "Ambiguous type '" + name + "': " + candidates[0] + " or " +
                            candidates[1]);
        return std::nullopt;
      }
    }
    ts.sink().error(diag::UnknownType, span, "Unknown type: " + name);
    return std::nullopt;
  }

  Declarations parseDeclarations(TokenStream& ts) const override {
    Declarations decls;
    if (ts.at(Tok::HashWord) && ts.peek().text == "javaoptions") {
      ts.advance();
      if (ts.expect(Tok::LBrace, "to open options")) {
        while (ts.at(Tok::Ident)) {
          std::string key = ts.advance().text;
          if (!ts.expect(Tok::Equals, "in option")) break;
          if (!ts.at(Tok::Literal)) {
            ts.sink().error(diag::Syntax, ts.peek().span, "expected quoted option value");
            break;
          }
          std::string value = ts.advance().text;
          decls.options.emplace_back(std::move(key), std::move(value));
          ts.expect(Tok::Semi, "after option");
        }
        ts.expect(Tok::RBrace, "to close options");
      }
    }
    while (ts.atKeyword("import")) {
      ts.advance();
      if (!ts.at(Tok::Ident)) {
        ts.sink().error(diag::Syntax, ts.peek().span, "expected name after 'import'");
        break;
      }
      std::string name = ts.advance().text;
      bool done = false;
      while (ts.at(Tok::Dot) && !done) {
        ts.advance();
        if (ts.at(Tok::Star)) {
          ts.advance();
          name += ".*";
          done = true;
        } else if (ts.at(Tok::Ident)) {
          name += "." + ts.advance().text;
        } else {
          ts.sink().error(diag::Syntax, ts.peek().span, "expected identifier or '*' after '.'");
          done = true;
        }
      }
      decls.imports.push_back(std::move(name));
      ts.expect(Tok::Semi, "after import");
    }
    return decls;
  }

private:
  GroundTypeSystem system_;
};

class ExtensionRegistry {
public:
  using Factory = std::function<std::unique_ptr<TypeSystemExtension>(GroundTypeSystem)>;

  static ExtensionRegistry& instance() {
    static ExtensionRegistry registry = [] {
      ExtensionRegistry r;
      r.add("declarative", [](GroundTypeSystem sys) {
        return std::make_unique<DeclarativeExtension>(std::move(sys));
      });
      r.add("imports", [](GroundTypeSystem sys) {
        return std::make_unique<ImportsExtension>(std::move(sys));
      });
      return r;
    }();
    return registry;
  }

  void add(std::string name, Factory factory) { factories_[std::move(name)] = std::move(factory); }

  std::unique_ptr<TypeSystemExtension> create(std::string_view name,
                                              GroundTypeSystem system) const {
    auto it = factories_.find(std::string(name));
    if (it == factories_.end()) return nullptr;
    return it->second(std::move(system));
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& [name, factory] : factories_) out.push_back(name);
    return out;
  }

private:
  std::map<std::string, Factory> factories_;
};

}  // namespace gpg

#endif  // GPG_EXTENSION_HPP
