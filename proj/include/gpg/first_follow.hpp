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

// Terminal catalog and FIRST/FOLLOW computation over rhs trees, with LL(1)
// decision sets for every alternative, iteration and option point.

#ifndef GPG_FIRST_FOLLOW_HPP
#define GPG_FIRST_FOLLOW_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "gpg/grammar.hpp"
#include "gpg/sites.hpp"

namespace gpg {

// Terminals: kind 0 is end-of-input, then non-fragment token rules in
// declaration order, then literals of syntactic rules in first-use order.
struct TokenCatalog {
  static constexpr int kEof = 0;

  std::vector<std::string> display;         // per kind
  std::map<std::string, int> tokenRules;    // rule name -> kind
  std::map<std::string, int> literals;      // literal text -> kind

  static TokenCatalog build(const GrammarModel& model) {
    TokenCatalog catalog;
    catalog.display.push_back("<EOF>");
    for (const Rule& rule : model.rules) {
      if (rule.isToken && !rule.isFragment) {
        catalog.tokenRules[rule.name] = static_cast<int>(catalog.display.size());
        catalog.display.push_back(rule.name);
      }
    }
    for (const Rule& rule : model.rules) {
      if (rule.isToken) continue;
      detail::walkRhs(rule.rhs, [&](const RhsExpr& node, const RhsPath&) {
        if (node.kind == RhsKind::SymbolRef && node.symbol.kind == SymbolKind::Literal) {
          if (!catalog.literals.count(node.symbol.name)) {
            catalog.literals[node.symbol.name] = static_cast<int>(catalog.display.size());
            catalog.display.push_back("'" + node.symbol.name + "'");
          }
        }
      });
    }
    return catalog;
  }

  int kindOf(const Symbol& symbol) const {
    if (symbol.kind == SymbolKind::Literal) {
      auto it = literals.find(symbol.name);
      return it == literals.end() ? -1 : it->second;
    }
    auto it = tokenRules.find(symbol.name);
    return it == tokenRules.end() ? -1 : it->second;
  }
};

class FirstFollow {
public:
  using NodeKey = std::pair<std::string, RhsPath>;

  FirstFollow(const GrammarModel& model, const TokenCatalog& catalog,
              const std::string& startRule)
      : model_(&model), catalog_(&catalog) {
    computeRuleFirst();
    computeFollow(startRule);
    scanConflicts();
  }

  const std::set<int>& firstOfRule(const std::string& rule) const {
    static const std::set<int> empty;
    auto it = ruleFirst_.find(rule);
    return it == ruleFirst_.end() ? empty : it->second;
  }
  bool ruleNullable(const std::string& rule) const {
    auto it = ruleNullable_.find(rule);
    return it != ruleNullable_.end() && it->second;
  }

  std::set<int> firstOfNode(const RhsExpr& node) const { return nodeFirst(node); }
  bool nodeIsNullable(const RhsExpr& node) const { return nodeNullable(node); }

  const std::set<int>& followOfNode(const std::string& rule, const RhsPath& path) const {
    static const std::set<int> empty;
    auto it = nodeFollow_.find({rule, path});
    return it == nodeFollow_.end() ? empty : it->second;
  }

  const std::vector<std::string>& conflicts() const { return conflicts_; }

private:
  std::set<int> nodeFirst(const RhsExpr& node) const {
    std::set<int> out;
    switch (node.kind) {
      case RhsKind::SymbolRef:
        if (node.symbol.kind == SymbolKind::SyntacticRule) {
          const std::set<int>& f = firstOfRule(node.symbol.name);
          out.insert(f.begin(), f.end());
        } else {
          int kind = catalog_->kindOf(node.symbol);
          if (kind >= 0) out.insert(kind);
        }
        break;
      case RhsKind::CharRange:
        break;  // confined to token rules
      case RhsKind::Labeled:
        return nodeFirst(node.children[0]);
      case RhsKind::Iteration:
      case RhsKind::Optional:
        return nodeFirst(node.children[0]);
      case RhsKind::Sequence:
        for (const RhsExpr& child : node.children) {
          std::set<int> f = nodeFirst(child);
          out.insert(f.begin(), f.end());
          if (!nodeNullable(child)) break;
        }
        break;
      case RhsKind::Alternative:
        for (const RhsExpr& child : node.children) {
          std::set<int> f = nodeFirst(child);
          out.insert(f.begin(), f.end());
        }
        break;
    }
    return out;
  }

  bool nodeNullable(const RhsExpr& node) const {
    switch (node.kind) {
      case RhsKind::SymbolRef:
        return node.symbol.kind == SymbolKind::SyntacticRule &&
               ruleNullable(node.symbol.name);
      case RhsKind::CharRange:
        return false;
      case RhsKind::Labeled:
        return nodeNullable(node.children[0]);
      case RhsKind::Optional:
        return true;
      case RhsKind::Iteration:
        return node.minCount == 0 || nodeNullable(node.children[0]);
      case RhsKind::Sequence:
        for (const RhsExpr& child : node.children)
          if (!nodeNullable(child)) return false;
        return true;
      case RhsKind::Alternative:
        for (const RhsExpr& child : node.children)
          if (nodeNullable(child)) return true;
        return false;
    }
    return false;
  }

  void computeRuleFirst() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Rule& rule : model_->rules) {
        if (rule.isToken) continue;
        std::set<int> first = nodeFirst(rule.rhs);
        bool nullable = nodeNullable(rule.rhs);
        if (first != ruleFirst_[rule.name] || nullable != ruleNullable_[rule.name]) {
          ruleFirst_[rule.name] = std::move(first);
          ruleNullable_[rule.name] = nullable;
          changed = true;
        }
      }
    }
  }

  void walkFollow(const Rule& rule, const RhsExpr& node, RhsPath& path,
                  const std::set<int>& follow, bool record, bool& changed) {
    if (record) nodeFollow_[{rule.name, path}] = follow;
    switch (node.kind) {
      case RhsKind::SymbolRef:
        if (node.symbol.kind == SymbolKind::SyntacticRule) {
          std::set<int>& target = ruleFollow_[node.symbol.name];
          std::size_t before = target.size();
          target.insert(follow.begin(), follow.end());
          if (target.size() != before) changed = true;
        }
        break;
      case RhsKind::CharRange:
        break;
      case RhsKind::Labeled:
      case RhsKind::Optional: {
        path.push_back(0);
        walkFollow(rule, node.children[0], path, follow, record, changed);
        path.pop_back();
        break;
      }
      case RhsKind::Iteration: {
        // The body may be followed by its own beginning or by the loop exit.
        std::set<int> bodyFollow = nodeFirst(node.children[0]);
        bodyFollow.insert(follow.begin(), follow.end());
        path.push_back(0);
        walkFollow(rule, node.children[0], path, bodyFollow, record, changed);
        path.pop_back();
        break;
      }
      case RhsKind::Sequence: {
        for (std::size_t i = 0; i < node.children.size(); ++i) {
          std::set<int> rest;
          bool restNullable = true;
          for (std::size_t j = i + 1; j < node.children.size(); ++j) {
            std::set<int> f = nodeFirst(node.children[j]);
            rest.insert(f.begin(), f.end());
            if (!nodeNullable(node.children[j])) {
              restNullable = false;
              break;
            }
          }
          if (restNullable) rest.insert(follow.begin(), follow.end());
          path.push_back(static_cast<std::uint32_t>(i));
          walkFollow(rule, node.children[i], path, rest, record, changed);
          path.pop_back();
        }
        break;
      }
      case RhsKind::Alternative: {
        for (std::size_t i = 0; i < node.children.size(); ++i) {
          path.push_back(static_cast<std::uint32_t>(i));
          walkFollow(rule, node.children[i], path, follow, record, changed);
          path.pop_back();
        }
        break;
      }
    }
  }

  void computeFollow(const std::string& startRule) {
    ruleFollow_[startRule].insert(TokenCatalog::kEof);
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Rule& rule : model_->rules) {
        if (rule.isToken) continue;
        RhsPath path;
        walkFollow(rule, rule.rhs, path, ruleFollow_[rule.name], /*record=*/false, changed);
      }
    }
    for (const Rule& rule : model_->rules) {
      if (rule.isToken) continue;
      RhsPath path;
      bool ignored = false;
      walkFollow(rule, rule.rhs, path, ruleFollow_[rule.name], /*record=*/true, ignored);
    }
  }

  std::string describeSet(const std::set<int>& kinds) const {
    std::string out = "{";
    bool first = true;
    for (int k : kinds) {
      if (!first) out += ", ";
      out += catalog_->display[static_cast<std::size_t>(k)];
      first = false;
    }
    return out + "}";
  }

  void scanConflicts() {
    for (const Rule& rule : model_->rules) {
      if (rule.isToken) continue;
      detail::walkRhs(rule.rhs, [&](const RhsExpr& node, const RhsPath& path) {
        if (node.kind == RhsKind::Alternative) {
          const std::set<int>& follow = followOfNode(rule.name, path);
          std::vector<std::set<int>> lookaheads;
          int nullableBranches = 0;
          for (const RhsExpr& child : node.children) {
            std::set<int> la = nodeFirst(child);
            if (nodeNullable(child)) {
              la.insert(follow.begin(), follow.end());
              ++nullableBranches;
            }
            lookaheads.push_back(std::move(la));
          }
          if (nullableBranches > 1)
            conflicts_.push_back("rule '" + rule.name +
                                 "': more than one alternative can match nothing");
          for (std::size_t i = 0; i < lookaheads.size(); ++i) {
            for (std::size_t j = i + 1; j < lookaheads.size(); ++j) {
              std::set<int> common;
              for (int k : lookaheads[i])
                if (lookaheads[j].count(k)) common.insert(k);
              if (!common.empty())
                conflicts_.push_back("rule '" + rule.name + "': alternatives share lookahead " +
                                     describeSet(common));
            }
          }
        } else if (node.kind == RhsKind::Iteration || node.kind == RhsKind::Optional) {
          const RhsExpr& body = node.children[0];
          if (nodeNullable(body)) {
            conflicts_.push_back("rule '" + rule.name + "': repeated or optional phrase can "
                                 "match nothing");
            return;
          }
          // '+' still decides continue-vs-exit after each pass.
          const std::set<int>& follow = followOfNode(rule.name, path);
          std::set<int> first = nodeFirst(body);
          std::set<int> common;
          for (int k : first)
            if (follow.count(k)) common.insert(k);
          if (!common.empty())
            conflicts_.push_back("rule '" + rule.name + "': cannot decide between repeating "
                                 "and leaving on lookahead " + describeSet(common));
        }
      });
    }
  }

  const GrammarModel* model_;
  const TokenCatalog* catalog_;
  std::map<std::string, std::set<int>> ruleFirst_;
  std::map<std::string, bool> ruleNullable_;
  std::map<std::string, std::set<int>> ruleFollow_;
  std::map<NodeKey, std::set<int>> nodeFollow_;
  std::vector<std::string> conflicts_;
};

}  // namespace gpg

#endif  // GPG_FIRST_FOLLOW_HPP
