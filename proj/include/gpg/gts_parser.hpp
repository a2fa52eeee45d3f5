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

// Parser for type-system description (.gts) files: typesystem blocks with
// declared types and subtyping rules, language descriptions instantiating
// them, and back-end profiles with name-value options.

#ifndef GPG_GTS_PARSER_HPP
#define GPG_GTS_PARSER_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gpg/diagnostics.hpp"
#include "gpg/lexer.hpp"
#include "gpg/source.hpp"
#include "gpg/typesystem.hpp"

namespace gpg {

struct TypeSystemFile {
  std::vector<TypeSystemDesc> typesystems;
  std::vector<LanguageDesc> languages;
  std::vector<BackendProfile> profiles;

  const TypeSystemDesc* findTypesystem(std::string_view name) const {
    for (const TypeSystemDesc& t : typesystems)
      if (t.name == name) return &t;
    return nullptr;
  }
  const LanguageDesc* findLanguage(std::string_view name) const {
    for (const LanguageDesc& l : languages)
      if (l.name == name) return &l;
    return nullptr;
  }
  const BackendProfile* findProfile(std::string_view backendId) const {
    for (const BackendProfile& p : profiles)
      if (p.backendId == backendId) return &p;
    return nullptr;
  }
};

struct TypeSystemFileResult {
  std::optional<TypeSystemFile> file;
  std::vector<Diagnostic> diagnostics;
};

namespace detail {

// Dotted type names are permitted so that description files can name types
// of namespaced implementation languages.
inline std::optional<std::string> parseQualifiedName(TokenStream& ts, Span* spanOut = nullptr) {
  if (!ts.at(Tok::Ident)) return std::nullopt;
  Token first = ts.advance();
  std::string name = first.text;
  Span span = first.span;
  while (ts.at(Tok::Dot)) {
    ts.advance();
    if (!ts.at(Tok::Ident)) {
      ts.sink().error(diag::TsSyntax, ts.peek().span, "expected identifier after '.'");
      break;
    }
    Token part = ts.advance();
    name += "." + part.text;
    span = span.merge(part.span);
  }
  if (spanOut) *spanOut = span;
  return name;
}

inline void skipToTopLevelGts(TokenStream& ts) {
  int depth = 0;
  while (!ts.atEnd()) {
    if (ts.at(Tok::LBrace)) ++depth;
    if (ts.at(Tok::RBrace)) {
      ts.advance();
      if (--depth <= 0) return;
      continue;
    }
    if (depth == 0 && (ts.atKeyword("typesystem") || ts.atKeyword("language") ||
                       ts.atKeyword("backend")))
      return;
    ts.advance();
  }
}

}  // namespace detail

inline TypeSystemFileResult parseTypeSystemFile(const SourceText& source) {
  TypeSystemFileResult result;
  DiagnosticSink sink(source, result.diagnostics);
  TokenStream ts(lexSource(source, sink), sink);
  TypeSystemFile file;

  auto parseOptions = [&](std::vector<std::pair<std::string, std::string>>& out) {
    while (ts.at(Tok::Ident) || ts.at(Tok::Literal)) {
      if (!ts.at(Tok::Ident)) {
        sink.error(diag::TsSyntax, ts.peek().span, "expected option name");
        ts.advance();
        continue;
      }
      std::string key = ts.advance().text;
      if (!ts.expect(Tok::Equals, "in option")) break;
      if (!ts.at(Tok::Literal)) {
        sink.error(diag::TsSyntax, ts.peek().span, "expected quoted option value");
        break;
      }
      std::string value = ts.advance().text;
      out.emplace_back(std::move(key), std::move(value));
      ts.expect(Tok::Semi, "after option");
    }
  };

  while (!ts.atEnd()) {
    if (ts.acceptKeyword("typesystem")) {
      TypeSystemDesc desc;
      desc.span = ts.peek().span;
      if (!ts.at(Tok::Ident)) {
        sink.error(diag::TsSyntax, ts.peek().span, "expected typesystem name");
        detail::skipToTopLevelGts(ts);
        continue;
      }
      Token name = ts.advance();
      desc.name = name.text;
      desc.nameSpan = name.span;
      if (!ts.expect(Tok::LParen, "after typesystem name")) {
        detail::skipToTopLevelGts(ts);
        continue;
      }
      // Top type name, or '_' for none.
      Span topSpan;
      auto top = detail::parseQualifiedName(ts, &topSpan);
      if (!top) {
        sink.error(diag::TsSyntax, ts.peek().span, "expected top type name or '_'");
        detail::skipToTopLevelGts(ts);
        continue;
      }
      if (*top != "_") desc.topName = *top;
      if (!ts.expect(Tok::Comma, "between top and string type names")) {
        detail::skipToTopLevelGts(ts);
        continue;
      }
      auto str = detail::parseQualifiedName(ts);
      if (!str || *str == "_") {
        sink.error(diag::TsSyntax, ts.peek().span, "expected string type name");
        detail::skipToTopLevelGts(ts);
        continue;
      }
      desc.stringName = *str;
      ts.expect(Tok::RParen, "after type system parameters");
      if (!ts.expect(Tok::LBrace, "to open typesystem body")) {
        detail::skipToTopLevelGts(ts);
        continue;
      }
      bool bad = false;
      while (!ts.at(Tok::RBrace) && !ts.atEnd() && !bad) {
        if (ts.acceptKeyword("type")) {
          Span span;
          auto typeName = detail::parseQualifiedName(ts, &span);
          if (!typeName) {
            sink.error(diag::TsSyntax, ts.peek().span, "expected type name");
            bad = true;
            break;
          }
          for (const std::string& existing : desc.declaredTypes)
            if (existing == *typeName)
              sink.error(diag::TsDuplicate, span, "Duplicate type declaration: " + *typeName);
          desc.declaredTypes.push_back(*typeName);
          desc.declaredTypeSpans.push_back(span);
          ts.expect(Tok::Semi, "after type declaration");
          continue;
        }
        Span subSpan;
        auto sub = detail::parseQualifiedName(ts, &subSpan);
        if (!sub) {
          sink.error(diag::TsSyntax, ts.peek().span,
                     "expected 'type' declaration or subtyping rule");
          bad = true;
          break;
        }
        if (!ts.expect(Tok::Subtype, "in subtyping rule")) {
          bad = true;
          break;
        }
        Span superSpan;
        auto super = detail::parseQualifiedName(ts, &superSpan);
        if (!super) {
          sink.error(diag::TsSyntax, ts.peek().span, "expected supertype name");
          bad = true;
          break;
        }
        desc.declaredSubtypings.push_back(SubtypePair{*sub, *super, subSpan.merge(superSpan)});
        ts.expect(Tok::Semi, "after subtyping rule");
      }
      if (bad) {
        detail::skipToTopLevelGts(ts);
        continue;
      }
      ts.expect(Tok::RBrace, "to close typesystem body");
      if (file.findTypesystem(desc.name))
        sink.error(diag::TsDuplicate, desc.nameSpan, "Duplicate typesystem: " + desc.name);
      file.typesystems.push_back(std::move(desc));
      continue;
    }

    if (ts.acceptKeyword("language")) {
      LanguageDesc lang;
      if (!ts.at(Tok::Ident)) {
        sink.error(diag::TsSyntax, ts.peek().span, "expected language name");
        detail::skipToTopLevelGts(ts);
        continue;
      }
      Token name = ts.advance();
      lang.name = name.text;
      lang.nameSpan = name.span;
      if (!ts.acceptKeyword("for")) {
        sink.error(diag::TsSyntax, ts.peek().span, "expected 'for' after language name");
        detail::skipToTopLevelGts(ts);
        continue;
      }
      Span forSpan;
      auto target = detail::parseQualifiedName(ts, &forSpan);
      if (!target) {
        sink.error(diag::TsSyntax, ts.peek().span, "expected typesystem name after 'for'");
        detail::skipToTopLevelGts(ts);
        continue;
      }
      lang.forTypeSystem = *target;
      if (!file.findTypesystem(lang.forTypeSystem))
        sink.error(diag::TsDangling, forSpan,
                   "Language '" + lang.name + "' instantiates unknown typesystem '" +
                       lang.forTypeSystem + "'");
      if (!ts.expect(Tok::LBrace, "to open language body")) {
        detail::skipToTopLevelGts(ts);
        continue;
      }
      while (!ts.at(Tok::RBrace) && !ts.atEnd()) {
        Span keySpan;
        auto key = detail::parseQualifiedName(ts, &keySpan);
        if (!key) {
          sink.error(diag::TsSyntax, ts.peek().span, "expected type name");
          break;
        }
        if (!ts.expect(Tok::Equals, "in type realization")) break;
        if (!ts.at(Tok::Literal)) {
          sink.error(diag::TsSyntax, ts.peek().span, "expected quoted realization text");
          break;
        }
        std::string value = ts.advance().text;
        lang.realizations.emplace_back(*key, std::move(value));
        ts.expect(Tok::Semi, "after type realization");
      }
      ts.expect(Tok::RBrace, "to close language body");
      if (file.findLanguage(lang.name))
        sink.error(diag::TsDuplicate, lang.nameSpan, "Duplicate language: " + lang.name);
      file.languages.push_back(std::move(lang));
      continue;
    }

    if (ts.acceptKeyword("backend")) {
      BackendProfile profile;
      profile.span = ts.peek().span;
      if (!ts.at(Tok::Literal)) {
        sink.error(diag::TsSyntax, ts.peek().span, "expected quoted back-end id");
        detail::skipToTopLevelGts(ts);
        continue;
      }
      profile.backendId = ts.advance().text;
      if (!ts.acceptKeyword("for")) {
        sink.error(diag::TsSyntax, ts.peek().span, "expected 'for' after back-end id");
        detail::skipToTopLevelGts(ts);
        continue;
      }
      Span forSpan;
      auto langName = detail::parseQualifiedName(ts, &forSpan);
      if (!langName) {
        sink.error(diag::TsSyntax, ts.peek().span, "expected language name after 'for'");
        detail::skipToTopLevelGts(ts);
        continue;
      }
      profile.forLanguage = *langName;
      if (!file.findLanguage(profile.forLanguage))
        sink.error(diag::TsDangling, forSpan,
                   "Profile '" + profile.backendId + "' targets unknown language '" +
                       profile.forLanguage + "'");
      if (!ts.expect(Tok::LBrace, "to open profile body")) {
        detail::skipToTopLevelGts(ts);
        continue;
      }
      parseOptions(profile.options);
      ts.expect(Tok::RBrace, "to close profile body");
      file.profiles.push_back(std::move(profile));
      continue;
    }

    sink.error(diag::TsSyntax, ts.peek().span,
               "expected 'typesystem', 'language' or 'backend'");
    ts.advance();
    detail::skipToTopLevelGts(ts);
  }

  if (!hasErrors(result.diagnostics)) result.file = std::move(file);
  sortDiagnostics(result.diagnostics);
  return result;
}

}  // namespace gpg

#endif  // GPG_GTS_PARSER_HPP
