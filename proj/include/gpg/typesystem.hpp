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

// Ground type systems: a finite set of named types with a reflexive and
// transitive subtyping relation, a distinguished string type and an optional
// top type; tuple/function types over them; declarative descriptions and
// their closure.

#ifndef GPG_TYPESYSTEM_HPP
#define GPG_TYPESYSTEM_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "gpg/diagnostics.hpp"
#include "gpg/source.hpp"

namespace gpg {

struct GroundType {
  std::string displayName;
  std::optional<std::string> realization;  // implementation-language spelling, if bound

  bool operator==(const GroundType& other) const { return displayName == other.displayName; }
};

// Components are ground types only; tuples do not nest.
struct TupleType {
  std::vector<std::string> components;

  bool operator==(const TupleType& other) const { return components == other.components; }
};

struct FunctionType {
  TupleType domain;
  TupleType codomain;
};

// Ground type or tuple type, as classified by the statement checking rules.
using TypeTerm = std::variant<std::string, TupleType>;

// Immutable. The subtyping oracle answers over the reflexive-transitive
// closure; unknown names are never subtypes of anything.
class GroundTypeSystem {
public:
  GroundTypeSystem() = default;

  // `closedLe[i][j]` must already be reflexive and transitive.
  GroundTypeSystem(std::vector<std::string> types, std::vector<std::vector<bool>> closedLe,
                   std::string stringType, std::optional<std::string> topType)
      : types_(std::move(types)),
        le_(std::move(closedLe)),
        stringType_(std::move(stringType)),
        topType_(std::move(topType)) {
    for (std::size_t i = 0; i < types_.size(); ++i) index_[types_[i]] = i;
  }

  const std::vector<std::string>& types() const { return types_; }
  const std::string& stringType() const { return stringType_; }
  const std::optional<std::string>& topType() const { return topType_; }

  bool contains(std::string_view name) const {
    return index_.find(std::string(name)) != index_.end();
  }

  bool isSubtype(std::string_view sub, std::string_view super) const {
    auto a = index_.find(std::string(sub));
    auto b = index_.find(std::string(super));
    if (a == index_.end() || b == index_.end()) return false;
    return le_[a->second][b->second];
  }

private:
  std::vector<std::string> types_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::vector<bool>> le_;
  std::string stringType_;
  std::optional<std::string> topType_;
};

struct SubtypePair {
  std::string sub;
  std::string super;
  Span span;
};

struct TypeSystemDesc {
  std::string name;
  std::optional<std::string> topName;  // absent when written as '_'
  std::string stringName;
  std::vector<std::string> declaredTypes;
  std::vector<Span> declaredTypeSpans;
  std::vector<SubtypePair> declaredSubtypings;
  Span span;
  Span nameSpan;
};

struct LanguageDesc {
  std::string name;
  std::string forTypeSystem;
  std::vector<std::pair<std::string, std::string>> realizations;
  Span span;
  Span nameSpan;

  const std::string* realizationOf(std::string_view type) const {
    for (const auto& [k, v] : realizations)
      if (k == type) return &v;
    return nullptr;
  }
};

struct BackendProfile {
  std::string backendId;
  std::string forLanguage;
  std::vector<std::pair<std::string, std::string>> options;
  Span span;

  const std::string* option(std::string_view key) const {
    for (const auto& [k, v] : options)
      if (k == key) return &v;
    return nullptr;
  }
};

// Builds the ground type system denoted by a description: predefined types
// are the declared ones plus the string type plus the top type (when named),
// the relation is the reflexive-transitive closure of the declared pairs,
// and everything is a subtype of the top type. Declared cycles between
// distinct types are rejected.
inline std::optional<GroundTypeSystem> closeSubtyping(const TypeSystemDesc& desc,
                                                      DiagnosticSink& sink) {
  std::vector<std::string> types = desc.declaredTypes;
  auto ensure = [&types](const std::string& name) {
    for (const std::string& t : types)
      if (t == name) return;
    types.push_back(name);
  };
  ensure(desc.stringName);
  if (desc.topName) ensure(*desc.topName);

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < types.size(); ++i) index[types[i]] = i;

  const std::size_t n = types.size();
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) le[i][i] = true;

  bool ok = true;
  for (const SubtypePair& pair : desc.declaredSubtypings) {
    auto a = index.find(pair.sub);
    auto b = index.find(pair.super);
    if (a == index.end() || b == index.end()) {
      sink.error(diag::TsUndeclared, pair.span,
                 "Subtyping rule references undeclared type: " +
                     (a == index.end() ? pair.sub : pair.super));
      ok = false;
      continue;
    }
    le[a->second][b->second] = true;
  }
  if (desc.topName) {
    std::size_t top = index[*desc.topName];
    for (std::size_t i = 0; i < n; ++i) le[i][top] = true;
  }
  if (!ok) return std::nullopt;

  // Transitive closure by depth-first reachability from each type.
  for (std::size_t start = 0; start < n; ++start) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{start};
    seen[start] = true;
    while (!stack.empty()) {
      std::size_t cur = stack.back();
      stack.pop_back();
      for (std::size_t next = 0; next < n; ++next) {
        if (le[cur][next] && !seen[next]) {
          seen[next] = true;
          stack.push_back(next);
        }
      }
    }
    for (std::size_t j = 0; j < n; ++j)
      if (seen[j]) le[start][j] = true;
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (le[i][j] && le[j][i]) {
        sink.error(diag::TsCycle, desc.nameSpan,
                   "Cyclic subtyping between '" + types[i] + "' and '" + types[j] + "'");
        return std::nullopt;
      }
    }
  }

  return GroundTypeSystem(std::move(types), std::move(le), desc.stringName, desc.topName);
}

// The componentwise lift of the ground relation to equal-arity tuples.
// A ground type compares like a one-component tuple; any arity mismatch
// is simply false.
inline bool extendedSubtype(const GroundTypeSystem& sys, const TypeTerm& sub,
                            const TypeTerm& super) {
  auto componentsOf = [](const TypeTerm& t) -> std::vector<std::string> {
    if (const auto* g = std::get_if<std::string>(&t)) return {*g};
    return std::get<TupleType>(t).components;
  };
  std::vector<std::string> a = componentsOf(sub);
  std::vector<std::string> b = componentsOf(super);
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!sys.isSubtype(a[i], b[i])) return false;
  return true;
}

inline std::string displayType(const TypeTerm& t) {
  if (const auto* g = std::get_if<std::string>(&t)) return *g;
  const TupleType& tuple = std::get<TupleType>(t);
  std::string out = "(";
  for (std::size_t i = 0; i < tuple.components.size(); ++i) {
    if (i) out += ", ";
    out += tuple.components[i];
  }
  out += ")";
  return out;
}

// The implementation-language spelling of a type: the mapped realization
// when the language description has one, the type's own name otherwise.
inline std::string realizeType(const LanguageDesc& lang, std::string_view typeName) {
  if (const std::string* r = lang.realizationOf(typeName)) return *r;
  return std::string(typeName);
}

inline std::string realizeType(const LanguageDesc& lang, const GroundType& type) {
  return realizeType(lang, type.displayName);
}

}  // namespace gpg

#endif  // GPG_TYPESYSTEM_HPP
