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

// Control flow graphs of translation functions and definite-assignment
// analysis. Concatenation corresponds to sequential execution, alternatives
// to branching, '+' to a loop whose body runs at least once; '?' and '*' are
// alternatives with an empty option. Edges carry the ordered attribute
// accesses of the actions folded onto them; an 'at' call reads its arguments
// before the match and writes its results after it.

#ifndef GPG_DATAFLOW_HPP
#define GPG_DATAFLOW_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gpg/ast.hpp"
#include "gpg/diagnostics.hpp"
#include "gpg/grammar.hpp"
#include "gpg/sites.hpp"

namespace gpg {

enum class CfgNodeKind { Entry, Exit, Match, Action, Branch, Join, LoopHead };

struct CfgNode {
  std::uint32_t id = 0;
  CfgNodeKind kind = CfgNodeKind::Entry;
  std::string label;                      // match symbol or action description
  RhsPath path;                           // Match: occurrence path in the rule
  std::optional<std::uint32_t> action;    // Action: index into tf.actions
};

struct CfgEdge {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  std::vector<Access> accesses;
  bool isBack = false;
};

struct Cfg {
  std::string rule;
  std::string function;
  std::vector<CfgNode> nodes;
  std::vector<CfgEdge> edges;
  std::uint32_t entry = 0;
  std::uint32_t exit = 0;

  std::vector<std::vector<std::uint32_t>> inEdges() const {
    std::vector<std::vector<std::uint32_t>> in(nodes.size());
    for (std::uint32_t e = 0; e < edges.size(); ++e) in[edges[e].to].push_back(e);
    return in;
  }
  std::vector<std::vector<std::uint32_t>> outEdges() const {
    std::vector<std::vector<std::uint32_t>> out(nodes.size());
    for (std::uint32_t e = 0; e < edges.size(); ++e) out[edges[e].from].push_back(e);
    return out;
  }
};

namespace detail {

class CfgBuilder {
public:
  CfgBuilder(const Rule& rule, const TranslationFunction& fn, const SiteMap& sites)
      : rule_(rule), fn_(fn), sites_(sites) {}

  Cfg build() {
    cfg_.rule = rule_.name;
    cfg_.function = fn_.name;
    current_ = addNode(CfgNodeKind::Entry, "entry");
    cfg_.entry = current_;
    RhsPath path;
    visit(rule_.rhs, path);
    std::uint32_t exit = addNode(CfgNodeKind::Exit, "exit");
    closeEdge(exit);
    cfg_.exit = exit;
    return std::move(cfg_);
  }

private:
  std::uint32_t addNode(CfgNodeKind kind, std::string label, RhsPath path = {},
                        std::optional<std::uint32_t> action = std::nullopt) {
    CfgNode node;
    node.id = static_cast<std::uint32_t>(cfg_.nodes.size());
    node.kind = kind;
    node.label = std::move(label);
    node.path = std::move(path);
    node.action = action;
    cfg_.nodes.push_back(std::move(node));
    return cfg_.nodes.back().id;
  }

  // Closes the dangling edge into `to`, attaching the buffered accesses.
  void closeEdge(std::uint32_t to) {
    CfgEdge edge;
    edge.from = current_;
    edge.to = to;
    edge.accesses = std::move(buffer_);
    buffer_.clear();
    cfg_.edges.push_back(std::move(edge));
    current_ = to;
  }

  void addPlainEdge(std::uint32_t from, std::uint32_t to, bool back = false) {
    CfgEdge edge;
    edge.from = from;
    edge.to = to;
    edge.isBack = back;
    cfg_.edges.push_back(std::move(edge));
  }

  void emitAction(std::uint32_t actionIdx) {
    const PositionedAction& action = fn_.actions[actionIdx];
    std::uint32_t node = addNode(CfgNodeKind::Action, actionDescription(action), {}, actionIdx);
    closeEdge(node);
    std::vector<Access> accesses = statementAccesses(action.body);
    buffer_.insert(buffer_.end(), accesses.begin(), accesses.end());
  }

  std::string actionDescription(const PositionedAction& action) const {
    std::string pos = action.position == ActionPosition::Before  ? "before "
                      : action.position == ActionPosition::After ? "after "
                                                                 : "at ";
    std::string site = action.siteIsLabel ? "$" + action.site
                       : action.siteIsLiteral ? "'" + action.site + "'"
                                              : action.site;
    return pos + site;
  }

  void visit(const RhsExpr& node, RhsPath& path) {
    const ActionSlots* slots = sites_.slotsAt(path);
    if (slots)
      for (std::uint32_t idx : slots->before) emitAction(idx);

    switch (node.kind) {
      case RhsKind::SymbolRef:
      case RhsKind::CharRange: {
        // The 'at' call reads its arguments, the match happens, then the
        // call's results are written.
        const PositionedAction* atAction = nullptr;
        if (slots && slots->at) atAction = &fn_.actions[*slots->at];
        if (atAction) {
          std::vector<Access> reads;
          detail_collectCallReads(*atAction, reads);
          buffer_.insert(buffer_.end(), reads.begin(), reads.end());
        }
        std::string label = node.kind == RhsKind::CharRange
                                ? std::string(1, node.rangeLo) + ".." + node.rangeHi
                                : node.symbol.name;
        std::uint32_t match =
            addNode(CfgNodeKind::Match, std::move(label), path,
                    slots && slots->at ? slots->at : std::nullopt);
        closeEdge(match);
        if (atAction) {
          for (std::size_t i = 0; i < atAction->body.lhs.size(); ++i)
            buffer_.push_back(Access{atAction->body.lhs[i], true,
                                     i < atAction->body.lhsSpans.size()
                                         ? atAction->body.lhsSpans[i]
                                         : atAction->body.span});
        }
        break;
      }
      case RhsKind::Labeled: {
        path.push_back(0);
        visit(node.children[0], path);
        path.pop_back();
        break;
      }
      case RhsKind::Sequence: {
        for (std::uint32_t i = 0; i < node.children.size(); ++i) {
          path.push_back(i);
          visit(node.children[i], path);
          path.pop_back();
        }
        break;
      }
      case RhsKind::Alternative: {
        std::uint32_t branch = addNode(CfgNodeKind::Branch, "branch");
        closeEdge(branch);
        std::uint32_t join = addNode(CfgNodeKind::Join, "join");
        for (std::uint32_t i = 0; i < node.children.size(); ++i) {
          current_ = branch;
          path.push_back(i);
          visit(node.children[i], path);
          path.pop_back();
          closeEdge(join);
        }
        current_ = join;
        break;
      }
      case RhsKind::Iteration: {
        if (node.minCount == 1) {
          path.push_back(0);
          buildLoop(node.children[0], path);
          path.pop_back();
        } else {
          // '*': an alternative of nothing and a '+' loop.
          std::uint32_t branch = addNode(CfgNodeKind::Branch, "branch");
          closeEdge(branch);
          std::uint32_t join = addNode(CfgNodeKind::Join, "join");
          addPlainEdge(branch, join);  // empty option
          current_ = branch;
          path.push_back(0);
          buildLoop(node.children[0], path);
          path.pop_back();
          closeEdge(join);
          current_ = join;
        }
        break;
      }
      case RhsKind::Optional: {
        std::uint32_t branch = addNode(CfgNodeKind::Branch, "branch");
        closeEdge(branch);
        std::uint32_t join = addNode(CfgNodeKind::Join, "join");
        addPlainEdge(branch, join);  // empty option
        current_ = branch;
        path.push_back(0);
        visit(node.children[0], path);
        path.pop_back();
        closeEdge(join);
        current_ = join;
        break;
      }
    }

    if (slots)
      for (std::uint32_t idx : slots->after) emitAction(idx);
  }

  // Body, then the loop head whose back edge re-enters the body's first node.
  void buildLoop(const RhsExpr& body, RhsPath& path) {
    std::uint32_t firstBodyNode = static_cast<std::uint32_t>(cfg_.nodes.size());
    visit(body, path);
    std::uint32_t head = addNode(CfgNodeKind::LoopHead, "loop");
    closeEdge(head);
    addPlainEdge(head, firstBodyNode, /*back=*/true);
  }

  static void detail_collectCallReads(const PositionedAction& action, std::vector<Access>& out) {
    if (action.body.kind == Statement::Kind::Assignment ||
        action.body.kind == Statement::Kind::CallStatement)
      for (const Expression& arg : action.body.expr.args) collectReads(arg, out);
  }

  const Rule& rule_;
  const TranslationFunction& fn_;
  const SiteMap& sites_;
  Cfg cfg_;
  std::uint32_t current_ = 0;
  std::vector<Access> buffer_;
};

}  // namespace detail

inline Cfg buildCfg(const Rule& rule, const TranslationFunction& fn, const SiteMap& sites) {
  detail::CfgBuilder builder(rule, fn, sites);
  return builder.build();
}

// Forward must-analysis: an attribute is definitely assigned at a point iff
// it is written on every path from entry. Inputs start assigned; every
// output must be definitely assigned at exit.
struct DefiniteAssignment {
  std::vector<std::string> attributes;                // index space
  std::vector<std::vector<bool>> inAtNode;            // per node
};

inline DefiniteAssignment solveDefiniteAssignment(const Cfg& cfg,
                                                  const TranslationFunction& fn) {
  DefiniteAssignment result;
  std::map<std::string, std::size_t> index;
  auto intern = [&](const std::string& name) {
    auto it = index.find(name);
    if (it != index.end()) return it->second;
    std::size_t id = result.attributes.size();
    index.emplace(name, id);
    result.attributes.push_back(name);
    return id;
  };
  for (const AttributeDecl& d : fn.inputs) intern(d.name);
  for (const AttributeDecl& d : fn.outputs) intern(d.name);
  for (const AttributeDecl& d : fn.locals) intern(d.name);
  for (const CfgEdge& e : cfg.edges)
    for (const Access& a : e.accesses) intern(a.attribute);

  const std::size_t n = result.attributes.size();
  std::vector<bool> top(n, true);
  std::vector<bool> entry(n, false);
  for (const AttributeDecl& d : fn.inputs) entry[index[d.name]] = true;

  result.inAtNode.assign(cfg.nodes.size(), top);
  result.inAtNode[cfg.entry] = entry;

  auto inEdges = cfg.inEdges();
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::uint32_t node = 0; node < cfg.nodes.size(); ++node) {
      if (node == cfg.entry) continue;
      std::vector<bool> meet(n, true);
      if (inEdges[node].empty()) meet = entry;
      for (std::uint32_t e : inEdges[node]) {
        std::vector<bool> state = result.inAtNode[cfg.edges[e].from];
        for (const Access& a : cfg.edges[e].accesses)
          if (a.isWrite) state[index[a.attribute]] = true;
        for (std::size_t i = 0; i < n; ++i) meet[i] = meet[i] && state[i];
      }
      if (meet != result.inAtNode[node]) {
        result.inAtNode[node] = std::move(meet);
        changed = true;
      }
    }
  }
  return result;
}

inline std::vector<Diagnostic> checkDefiniteAssignment(const Cfg& cfg,
                                                       const TranslationFunction& fn,
                                                       const SourceText& source) {
  std::vector<Diagnostic> diags;
  DiagnosticSink sink(source, diags);
  DefiniteAssignment solved = solveDefiniteAssignment(cfg, fn);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < solved.attributes.size(); ++i)
    index[solved.attributes[i]] = i;

  for (const CfgEdge& edge : cfg.edges) {
    std::vector<bool> state = solved.inAtNode[edge.from];
    for (const Access& access : edge.accesses) {
      std::size_t slot = index[access.attribute];
      if (access.isWrite) {
        state[slot] = true;
      } else if (!state[slot]) {
        sink.error(diag::Uninitialized, access.span,
                   "The local attribute " + access.attribute +
                       " might have not been initialized");
      }
    }
  }
  for (const AttributeDecl& out : fn.outputs) {
    if (!solved.inAtNode[cfg.exit][index[out.name]])
      sink.error(diag::OutputUninitialized, out.span,
                 "The output attribute " + out.name +
                     " might have not been initialized");
  }
  sortDiagnostics(diags);
  return diags;
}

// DOT rendering for debugging; edge labels carry the access lists.
inline std::string cfgToDot(const Cfg& cfg) {
  std::ostringstream os;
  os << "digraph \"" << cfg.function << "\" {\n";
  os << "  rankdir=TB;\n";
  for (const CfgNode& node : cfg.nodes) {
    const char* shape = "box";
    switch (node.kind) {
      case CfgNodeKind::Entry:
      case CfgNodeKind::Exit: shape = "oval"; break;
      case CfgNodeKind::Branch:
      case CfgNodeKind::Join: shape = "diamond"; break;
      case CfgNodeKind::LoopHead: shape = "hexagon"; break;
      case CfgNodeKind::Match: shape = "box"; break;
      case CfgNodeKind::Action: shape = "note"; break;
    }
    os << "  n" << node.id << " [shape=" << shape << ", label=\"" << node.id << ": "
       << node.label << "\"];\n";
  }
  for (const CfgEdge& edge : cfg.edges) {
    os << "  n" << edge.from << " -> n" << edge.to;
    std::string label;
    for (const Access& a : edge.accesses) {
      if (!label.empty()) label += ' ';
      label += a.attribute + (a.isWrite ? "[w]" : "[r]");
    }
    os << " [";
    if (!label.empty()) os << "label=\"" << label << "\"";
    if (edge.isBack) os << (label.empty() ? "" : ", ") << "style=dashed";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace gpg

#endif  // GPG_DATAFLOW_HPP
