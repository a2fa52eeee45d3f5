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

// Subtyping-constraint solver for local type inference. Constraints are
// inequalities lower <= upper over ground types and unknowns; ground-ground
// pairs are checked eagerly by the caller and never reach the solver.
//
// Per connected component of unknowns: bounds are tightened to a fixpoint,
// then satisfying assignments are searched. Variables with lower bounds
// take the unique minimal satisfying values (several incomparable minima
// are an ambiguity error), variables with only upper bounds take maximal
// values, and a component with no ground bounds at all gets the top type
// or, when the type system has none, an error.

#ifndef GPG_CONSTRAINT_SOLVER_HPP
#define GPG_CONSTRAINT_SOLVER_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "gpg/diagnostics.hpp"
#include "gpg/source.hpp"
#include "gpg/typesystem.hpp"

namespace gpg {

struct TypeVar {
  std::uint32_t id = 0;
  Span origin;            // the undeclared attribute or inferred-signature slot
  std::string owner;      // function being checked
  std::string name;       // attribute name or synthetic slot name
};

// Ground type name or unknown id; `lower <= upper`.
using ConstraintTerm = std::variant<std::string, std::uint32_t>;

struct Constraint {
  ConstraintTerm lower;
  ConstraintTerm upper;
  Span span;
};

using TypeAssignment = std::map<std::uint32_t, std::string>;

namespace detail {

struct ComponentSolver {
  const GroundTypeSystem& sys;
  const std::vector<const TypeVar*>& vars;            // component vars, by id
  const std::vector<const Constraint*>& constraints;  // constraints touching them
  DiagnosticSink& sink;

  std::map<std::uint32_t, std::size_t> slot;  // var id -> index in vars
  std::vector<std::vector<bool>> candidates;  // per var, over sys.types()
  std::size_t typeCount = 0;

  // Enumeration guard; realistic inputs stay far below it.
  static constexpr std::size_t kSearchLimit = 2'000'000;

  bool le(std::size_t a, std::size_t b) const {
    return sys.isSubtype(sys.types()[a], sys.types()[b]);
  }

  std::optional<std::size_t> typeIndex(const std::string& name) const {
    const auto& types = sys.types();
    for (std::size_t i = 0; i < types.size(); ++i)
      if (types[i] == name) return i;
    return std::nullopt;
  }

  bool propagate() {
    bool changed = true;
    auto narrow = [](std::vector<bool>& set, const std::vector<bool>& keep, bool& any) {
      bool shrunk = false;
      for (std::size_t i = 0; i < set.size(); ++i) {
        if (set[i] && !keep[i]) {
          set[i] = false;
          shrunk = true;
        }
        any = any || set[i];
      }
      return shrunk;
    };
    while (changed) {
      changed = false;
      for (const Constraint* c : constraints) {
        const auto* lg = std::get_if<std::string>(&c->lower);
        const auto* ug = std::get_if<std::string>(&c->upper);
        if (lg && ug) continue;  // eager path handles these
        if (lg) {
          auto li = typeIndex(*lg);
          std::size_t v = slot.at(std::get<std::uint32_t>(c->upper));
          std::vector<bool> keep(typeCount, false);
          if (li)
            for (std::size_t t = 0; t < typeCount; ++t) keep[t] = le(*li, t);
          bool any = false;
          changed |= narrow(candidates[v], keep, any);
          if (!any) return false;
        } else if (ug) {
          auto ui = typeIndex(*ug);
          std::size_t v = slot.at(std::get<std::uint32_t>(c->lower));
          std::vector<bool> keep(typeCount, false);
          if (ui)
            for (std::size_t t = 0; t < typeCount; ++t) keep[t] = le(t, *ui);
          bool any = false;
          changed |= narrow(candidates[v], keep, any);
          if (!any) return false;
        } else {
          std::size_t u = slot.at(std::get<std::uint32_t>(c->lower));
          std::size_t v = slot.at(std::get<std::uint32_t>(c->upper));
          std::vector<bool> keepU(typeCount, false), keepV(typeCount, false);
          for (std::size_t s = 0; s < typeCount; ++s) {
            if (!candidates[u][s]) continue;
            for (std::size_t t = 0; t < typeCount; ++t)
              if (candidates[v][t] && le(s, t)) {
                keepU[s] = true;
                break;
              }
          }
          for (std::size_t t = 0; t < typeCount; ++t) {
            if (!candidates[v][t]) continue;
            for (std::size_t s = 0; s < typeCount; ++s)
              if (candidates[u][s] && le(s, t)) {
                keepV[t] = true;
                break;
              }
          }
          bool anyU = false, anyV = false;
          changed |= narrow(candidates[u], keepU, anyU);
          changed |= narrow(candidates[v], keepV, anyV);
          if (!anyU || !anyV) return false;
        }
      }
    }
    return true;
  }

  bool satisfies(const std::vector<std::size_t>& assign) const {
    for (const Constraint* c : constraints) {
      const auto* lg = std::get_if<std::string>(&c->lower);
      const auto* ug = std::get_if<std::string>(&c->upper);
      if (lg && ug) continue;
      std::optional<std::size_t> lo =
          lg ? typeIndex(*lg)
             : std::optional<std::size_t>(assign[slot.at(std::get<std::uint32_t>(c->lower))]);
      std::optional<std::size_t> hi =
          ug ? typeIndex(*ug)
             : std::optional<std::size_t>(assign[slot.at(std::get<std::uint32_t>(c->upper))]);
      if (!lo || !hi || !le(*lo, *hi)) return false;
    }
    return true;
  }

  // All satisfying assignments over the tightened candidate sets.
  bool enumerate(std::vector<std::vector<std::size_t>>& out) {
    std::vector<std::size_t> assign(vars.size(), 0);
    std::size_t visited = 0;
    bool overflow = false;
    std::function<void(std::size_t)> go = [&](std::size_t i) {
      if (overflow) return;
      if (++visited > kSearchLimit) {
        overflow = true;
        return;
      }
      if (i == vars.size()) {
        if (satisfies(assign)) out.push_back(assign);
        return;
      }
      for (std::size_t t = 0; t < typeCount; ++t) {
        if (!candidates[i][t]) continue;
        assign[i] = t;
        go(i + 1);
      }
    };
    go(0);
    return !overflow;
  }

  void reportUnsatisfiable() {
    // Prefer a direct lower/upper witness pair on one variable.
    for (const TypeVar* v : vars) {
      std::vector<std::pair<std::string, Span>> lowers, uppers;
      for (const Constraint* c : constraints) {
        if (const auto* lg = std::get_if<std::string>(&c->lower)) {
          if (const auto* uv = std::get_if<std::uint32_t>(&c->upper); uv && *uv == v->id)
            lowers.emplace_back(*lg, c->span);
        }
        if (const auto* ug = std::get_if<std::string>(&c->upper)) {
          if (const auto* lv = std::get_if<std::uint32_t>(&c->lower); lv && *lv == v->id)
            uppers.emplace_back(*ug, c->span);
        }
      }
      for (const auto& [lo, loSpan] : lowers) {
        for (const auto& [hi, hiSpan] : uppers) {
          if (!sys.isSubtype(lo, hi)) {
            sink.error(diag::IncompatibleTypes, hiSpan.offset >= loSpan.offset ? hiSpan : loSpan,
                       "Incompatible types: " + lo + " and " + hi);
            return;
          }
        }
      }
    }
    sink.error(diag::IncompatibleTypes, vars.front()->origin,
               "Conflicting type constraints for attribute '" + vars.front()->name + "'");
  }

  std::optional<TypeAssignment> solve() {
    typeCount = sys.types().size();
    for (std::size_t i = 0; i < vars.size(); ++i) slot[vars[i]->id] = i;
    candidates.assign(vars.size(), std::vector<bool>(typeCount, true));

    if (typeCount == 0 || !propagate()) {
      reportUnsatisfiable();
      return std::nullopt;
    }
    std::vector<std::vector<std::size_t>> sat;
    if (!enumerate(sat)) {
      sink.error(diag::IncompatibleTypes, vars.front()->origin,
                 "Type inference exceeded the search limit for attribute '" +
                     vars.front()->name + "'");
      return std::nullopt;
    }
    if (sat.empty()) {
      reportUnsatisfiable();
      return std::nullopt;
    }

    // Variables with any lower bound prefer minimal values, the rest maximal.
    std::vector<std::size_t> lowered, free;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      bool hasLower = false;
      for (const Constraint* c : constraints) {
        const auto* uv = std::get_if<std::uint32_t>(&c->upper);
        if (uv && *uv == vars[i]->id) {
          hasLower = true;
          break;
        }
      }
      (hasLower ? lowered : free).push_back(i);
    }

    auto pointwiseLe = [&](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b,
                           const std::vector<std::size_t>& coords) {
      for (std::size_t i : coords)
        if (!le(a[i], b[i])) return false;
      return true;
    };
    auto sameOn = [&](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b,
                      const std::vector<std::size_t>& coords) {
      for (std::size_t i : coords)
        if (a[i] != b[i]) return false;
      return true;
    };
    auto reportAmbiguous = [&](const std::vector<std::size_t>& a,
                               const std::vector<std::size_t>& b,
                               const std::vector<std::size_t>& coords) {
      for (std::size_t i : coords) {
        if (a[i] != b[i]) {
          sink.error(diag::AmbiguousType, vars[i]->origin,
                     "Ambiguous type for '" + vars[i]->name + "': " + sys.types()[a[i]] +
                         " and " + sys.types()[b[i]] + " are both admissible");
          return;
        }
      }
    };

    std::vector<std::vector<std::size_t>> pool = sat;
    if (!lowered.empty()) {
      std::vector<std::vector<std::size_t>> minimal;
      for (const auto& a : pool) {
        bool isMin = true;
        for (const auto& b : pool) {
          if (pointwiseLe(b, a, lowered) && !sameOn(b, a, lowered)) {
            isMin = false;
            break;
          }
        }
        if (isMin) minimal.push_back(a);
      }
      for (const auto& a : minimal) {
        if (!sameOn(a, minimal.front(), lowered)) {
          reportAmbiguous(minimal.front(), a, lowered);
          return std::nullopt;
        }
      }
      // Keep only the assignments extending the chosen minimal projection.
      std::vector<std::vector<std::size_t>> extending;
      for (const auto& a : pool)
        if (sameOn(a, minimal.front(), lowered)) extending.push_back(a);
      pool = std::move(extending);
    }
    if (!free.empty()) {
      std::vector<std::vector<std::size_t>> maximal;
      for (const auto& a : pool) {
        bool isMax = true;
        for (const auto& b : pool) {
          if (pointwiseLe(a, b, free) && !sameOn(a, b, free)) {
            isMax = false;
            break;
          }
        }
        if (isMax) maximal.push_back(a);
      }
      for (const auto& a : maximal) {
        if (!sameOn(a, maximal.front(), free)) {
          reportAmbiguous(maximal.front(), a, free);
          return std::nullopt;
        }
      }
      pool.assign(1, maximal.front());
    }

    TypeAssignment result;
    for (std::size_t i = 0; i < vars.size(); ++i)
      result[vars[i]->id] = sys.types()[pool.front()[i]];
    return result;
  }
};

}  // namespace detail

// Solves the collected constraints for every unknown at once. On failure the
// diagnostics (IncompatibleTypes / AmbiguousType / NoConstraintsNoTop) are
// reported through the sink and nullopt is returned; other components are
// still processed so one function aggregates all its inference errors.
inline std::optional<TypeAssignment> solveConstraints(const GroundTypeSystem& sys,
                                                      const std::vector<TypeVar>& vars,
                                                      const std::vector<Constraint>& constraints,
                                                      DiagnosticSink& sink) {
  if (vars.empty()) return TypeAssignment{};

  // Connected components over shared constraints.
  std::map<std::uint32_t, std::uint32_t> parent;
  for (const TypeVar& v : vars) parent[v.id] = v.id;
  std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  auto unite = [&](std::uint32_t a, std::uint32_t b) { parent[find(a)] = find(b); };
  for (const Constraint& c : constraints) {
    const auto* lv = std::get_if<std::uint32_t>(&c.lower);
    const auto* uv = std::get_if<std::uint32_t>(&c.upper);
    if (lv && uv) unite(*lv, *uv);
  }

  std::map<std::uint32_t, std::vector<const TypeVar*>> componentVars;
  for (const TypeVar& v : vars) componentVars[find(v.id)].push_back(&v);
  std::map<std::uint32_t, std::vector<const Constraint*>> componentConstraints;
  for (const Constraint& c : constraints) {
    const auto* lv = std::get_if<std::uint32_t>(&c.lower);
    const auto* uv = std::get_if<std::uint32_t>(&c.upper);
    if (lv)
      componentConstraints[find(*lv)].push_back(&c);
    else if (uv)
      componentConstraints[find(*uv)].push_back(&c);
  }

  TypeAssignment combined;
  bool ok = true;
  for (auto& [root, members] : componentVars) {
    std::sort(members.begin(), members.end(),
              [](const TypeVar* a, const TypeVar* b) { return a->id < b->id; });
    const std::vector<const Constraint*>& cs = componentConstraints[root];

    bool grounded = false;
    for (const Constraint* c : cs)
      if (std::holds_alternative<std::string>(c->lower) ||
          std::holds_alternative<std::string>(c->upper))
        grounded = true;

    if (!grounded) {
      // No ground bounds anywhere in the component: everything connected to
      // this unknown is undeclared too.
      if (sys.topType()) {
        for (const TypeVar* v : members) combined[v->id] = *sys.topType();
      } else {
        sink.error(diag::NoConstraintsNoTop, members.front()->origin,
                   "Cannot infer a type for '" + members.front()->name +
                       "': no constraints and the type system has no top type");
        ok = false;
      }
      continue;
    }

    detail::ComponentSolver solver{sys, members, cs, sink, {}, {}, 0};
    auto solved = solver.solve();
    if (!solved) {
      ok = false;
      continue;
    }
    for (const auto& [id, type] : *solved) combined[id] = type;
  }
  if (!ok) return std::nullopt;
  return combined;
}

}  // namespace gpg

#endif  // GPG_CONSTRAINT_SOLVER_HPP
