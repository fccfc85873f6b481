// Copyright 2026 The procgraph Authors.
//
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
//
// Data model for procedural graphs: actions, paired branch/merge gateways,
// data/action constraints and the three flow kinds, plus structural
// validation. Graphs are plain values; every operation here is pure.

#ifndef PROCGRAPH_GRAPH_HPP_
#define PROCGRAPH_GRAPH_HPP_

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace procgraph {

class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

enum class NodeKind { Start, End, Action, Gateway, DataConstraint, ActionConstraint };
enum class GatewayType { Exclusive, Inclusive, Parallel };
enum class GatewayRole { Branch, Merge };
enum class EdgeKind { SequenceFlow, ConditionFlow, ConstraintFlow };

inline std::string_view to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Start: return "Start";
    case NodeKind::End: return "End";
    case NodeKind::Action: return "Action";
    case NodeKind::Gateway: return "Gateway";
    case NodeKind::DataConstraint: return "DataConstraint";
    case NodeKind::ActionConstraint: return "ActionConstraint";
  }
  return "?";
}

inline std::string_view to_string(GatewayType t) {
  switch (t) {
    case GatewayType::Exclusive: return "Exclusive";
    case GatewayType::Inclusive: return "Inclusive";
    case GatewayType::Parallel: return "Parallel";
  }
  return "?";
}

inline std::string_view to_string(GatewayRole r) {
  return r == GatewayRole::Branch ? "Branch" : "Merge";
}

inline std::string_view to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::SequenceFlow: return "SequenceFlow";
    case EdgeKind::ConditionFlow: return "ConditionFlow";
    case EdgeKind::ConstraintFlow: return "ConstraintFlow";
  }
  return "?";
}

struct Node {
  std::string id;
  NodeKind kind = NodeKind::Action;
  std::string text;   // action/constraint text; empty for Start/End/Gateway
  std::string actor;  // Actions carry one; Start/End carry one so per-actor paths are defined
  std::optional<GatewayType> gateway_type;
  std::optional<GatewayRole> gateway_role;
  std::string pair_id;  // links a Branch gateway to its Merge gateway

  bool is_gateway(GatewayRole role) const {
    return kind == NodeKind::Gateway && gateway_role == role;
  }
  bool is_constraint() const {
    return kind == NodeKind::DataConstraint || kind == NodeKind::ActionConstraint;
  }
};

struct Edge {
  std::string source;
  std::string target;
  EdgeKind kind = EdgeKind::SequenceFlow;
  std::string condition;  // ConditionFlow only

  bool is_control() const { return kind != EdgeKind::ConstraintFlow; }
};

struct Violation {
  std::string rule;
  std::string message;
  std::vector<std::string> ids;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

struct ProceduralGraph {
  std::vector<Node> nodes;
  std::vector<Edge> edges;

  const Node* find(std::string_view id) const {
    for (const Node& n : nodes)
      if (n.id == id) return &n;
    return nullptr;
  }

  std::vector<const Edge*> out_edges(std::string_view id) const {
    std::vector<const Edge*> out;
    for (const Edge& e : edges)
      if (e.source == id) out.push_back(&e);
    return out;
  }

  std::vector<const Edge*> in_edges(std::string_view id) const {
    std::vector<const Edge*> out;
    for (const Edge& e : edges)
      if (e.target == id) out.push_back(&e);
    return out;
  }

  // Actors in order of first appearance over Start nodes, then actions.
  std::vector<std::string> actors() const {
    std::vector<std::string> out;
    auto add = [&](const std::string& a) {
      if (!a.empty() && std::find(out.begin(), out.end(), a) == out.end())
        out.push_back(a);
    };
    for (const Node& n : nodes)
      if (n.kind == NodeKind::Start) add(n.actor);
    for (const Node& n : nodes)
      if (n.kind == NodeKind::Action) add(n.actor);
    return out;
  }

  std::vector<const Node*> nodes_of_kind(NodeKind k) const {
    std::vector<const Node*> out;
    for (const Node& n : nodes)
      if (n.kind == k) out.push_back(&n);
    return out;
  }

  std::vector<const Node*> gateways(GatewayType type, GatewayRole role) const {
    std::vector<const Node*> out;
    for (const Node& n : nodes)
      if (n.kind == NodeKind::Gateway && n.gateway_type == type && n.gateway_role == role)
        out.push_back(&n);
    return out;
  }
};

namespace detail {

// DFS cycle check over control-flow edges; returns one offending id if cyclic.
inline std::optional<std::string> find_control_cycle(const ProceduralGraph& g) {
  std::map<std::string, int> state;  // 0 unseen, 1 on stack, 2 done
  std::optional<std::string> hit;
  auto dfs = [&](auto&& self, const std::string& id) -> bool {
    state[id] = 1;
    for (const Edge& e : g.edges) {
      if (!e.is_control() || e.source != id) continue;
      int s = state.count(e.target) ? state[e.target] : 0;
      if (s == 1) {
        hit = e.target;
        return true;
      }
      if (s == 0 && self(self, e.target)) return true;
    }
    state[id] = 2;
    return false;
  };
  for (const Node& n : g.nodes) {
    if (!state.count(n.id) && dfs(dfs, n.id)) return hit;
  }
  return std::nullopt;
}

}  // namespace detail

// Checks every structural invariant; violations are data, not failures.
// Output is sorted by (rule, first id) so reports are stable.
inline ValidationReport validate(const ProceduralGraph& g) {
  ValidationReport report;
  auto add = [&](std::string rule, std::string message, std::vector<std::string> ids) {
    report.violations.push_back({std::move(rule), std::move(message), std::move(ids)});
  };

  std::map<std::string, const Node*> by_id;
  for (const Node& n : g.nodes) {
    if (n.id.empty()) add("empty-id", "node with empty id", {n.id});
    if (by_id.count(n.id))
      add("duplicate-id", "node id used more than once: " + n.id, {n.id});
    else
      by_id[n.id] = &n;
  }

  for (const Node& n : g.nodes) {
    switch (n.kind) {
      case NodeKind::Action:
        if (n.text.empty()) add("action-text", "action without text: " + n.id, {n.id});
        if (n.actor.empty()) add("action-actor", "action without actor: " + n.id, {n.id});
        break;
      case NodeKind::DataConstraint:
      case NodeKind::ActionConstraint:
        if (n.text.empty()) add("constraint-text", "constraint without text: " + n.id, {n.id});
        if (!n.actor.empty())
          add("constraint-actor", "constraint must not carry an actor: " + n.id, {n.id});
        break;
      case NodeKind::Gateway:
        if (!n.gateway_type || !n.gateway_role || n.pair_id.empty())
          add("gateway-fields", "gateway missing type/role/pair_id: " + n.id, {n.id});
        break;
      default:
        break;
    }
    if (n.kind != NodeKind::Gateway &&
        (n.gateway_type || n.gateway_role || !n.pair_id.empty()))
      add("gateway-fields", "non-gateway carries gateway fields: " + n.id, {n.id});
  }

  for (const Edge& e : g.edges) {
    const Node* src = by_id.count(e.source) ? by_id[e.source] : nullptr;
    const Node* dst = by_id.count(e.target) ? by_id[e.target] : nullptr;
    if (!src || !dst) {
      add("edge-endpoint", "edge endpoint missing: " + e.source + " -> " + e.target,
          {e.source, e.target});
      continue;
    }
    if (e.kind == EdgeKind::ConditionFlow) {
      if (e.condition.empty())
        add("condition-edge", "condition flow without condition", {e.source, e.target});
      bool ok_source = src->kind == NodeKind::Gateway &&
                       src->gateway_role == GatewayRole::Branch &&
                       (src->gateway_type == GatewayType::Exclusive ||
                        src->gateway_type == GatewayType::Inclusive);
      if (!ok_source)
        add("condition-source",
            "condition flow must leave an exclusive/inclusive branch gateway: " + e.source,
            {e.source, e.target});
    } else if (!e.condition.empty()) {
      add("condition-edge", "non-condition flow carries a condition", {e.source, e.target});
    }
    if (e.kind == EdgeKind::ConstraintFlow) {
      bool data_link = (src->kind == NodeKind::Action && dst->kind == NodeKind::DataConstraint) ||
                       (src->kind == NodeKind::DataConstraint && dst->kind == NodeKind::Action);
      bool note_link = src->kind == NodeKind::Action && dst->kind == NodeKind::ActionConstraint;
      if (!data_link && !note_link)
        add("constraint-edge",
            "constraint flow must link an action with a constraint: " + e.source + " -> " + e.target,
            {e.source, e.target});
    } else if (src->is_constraint() || dst->is_constraint()) {
      add("constraint-edge", "constraint node on a non-constraint flow", {e.source, e.target});
    }
  }

  // Per-actor start/end structure. A graph with no actors has no Start at all.
  std::vector<std::string> actors = g.actors();
  if (actors.empty() && g.nodes_of_kind(NodeKind::Start).empty())
    add("missing-start", "no start node", {});
  for (const std::string& actor : actors) {
    std::vector<std::string> starts;
    for (const Node& n : g.nodes)
      if (n.kind == NodeKind::Start && n.actor == actor) starts.push_back(n.id);
    if (starts.empty()) {
      add("missing-start", "actor without start: " + actor, {});
      continue;
    }
    if (starts.size() > 1) add("missing-start", "actor with several starts: " + actor, starts);

    // Reachability over control flow from this actor's start.
    std::set<std::string> seen{starts[0]};
    std::vector<std::string> queue{starts[0]};
    while (!queue.empty()) {
      std::string id = queue.back();
      queue.pop_back();
      for (const Edge& e : g.edges)
        if (e.is_control() && e.source == id && !seen.count(e.target)) {
          seen.insert(e.target);
          queue.push_back(e.target);
        }
    }
    bool end_reached = false;
    for (const Node& n : g.nodes)
      if (n.kind == NodeKind::End && seen.count(n.id)) end_reached = true;
    if (!end_reached) add("missing-end", "no end reachable for actor: " + actor, {starts[0]});
  }

  // Unreachable control-flow nodes (from any start).
  {
    std::set<std::string> seen;
    std::vector<std::string> queue;
    for (const Node& n : g.nodes)
      if (n.kind == NodeKind::Start) {
        seen.insert(n.id);
        queue.push_back(n.id);
      }
    while (!queue.empty()) {
      std::string id = queue.back();
      queue.pop_back();
      for (const Edge& e : g.edges)
        if (e.is_control() && e.source == id && !seen.count(e.target)) {
          seen.insert(e.target);
          queue.push_back(e.target);
        }
    }
    for (const Node& n : g.nodes) {
      if (n.is_constraint()) continue;
      if (!seen.count(n.id))
        add("unreachable", "control node unreachable from any start: " + n.id, {n.id});
    }
  }

  // Gateway pairing: bijection preserving type, branch on one side, merge on the other.
  {
    std::map<std::string, std::vector<const Node*>> branches, merges;
    for (const Node& n : g.nodes) {
      if (n.kind != NodeKind::Gateway || n.pair_id.empty()) continue;
      (n.gateway_role == GatewayRole::Branch ? branches : merges)[n.pair_id].push_back(&n);
    }
    std::set<std::string> pair_ids;
    for (auto& [p, v] : branches) pair_ids.insert(p);
    for (auto& [p, v] : merges) pair_ids.insert(p);
    for (const std::string& p : pair_ids) {
      auto b = branches.find(p);
      auto m = merges.find(p);
      if (b == branches.end() || m == merges.end() || b->second.size() != 1 ||
          m->second.size() != 1) {
        std::vector<std::string> ids;
        if (b != branches.end())
          for (auto* n : b->second) ids.push_back(n->id);
        if (m != merges.end())
          for (auto* n : m->second) ids.push_back(n->id);
        add("gateway-pair", "pair id does not resolve to one branch and one merge: " + p, ids);
        continue;
      }
      if (b->second[0]->gateway_type != m->second[0]->gateway_type)
        add("gateway-pair-type", "paired gateways disagree on type: " + p,
            {b->second[0]->id, m->second[0]->id});
    }
  }

  // Branch fan-out: parallel branches need >=2 sequence flows, conditional
  // branches >=2 condition flows.
  for (const Node& n : g.nodes) {
    if (!n.is_gateway(GatewayRole::Branch) || !n.gateway_type) continue;
    int seq = 0, cond = 0;
    for (const Edge& e : g.edges) {
      if (e.source != n.id) continue;
      if (e.kind == EdgeKind::SequenceFlow) ++seq;
      if (e.kind == EdgeKind::ConditionFlow) ++cond;
    }
    if (*n.gateway_type == GatewayType::Parallel) {
      if (seq < 2)
        add("gateway-fanout", "parallel branch needs >=2 outgoing sequence flows: " + n.id,
            {n.id});
    } else if (cond < 2) {
      add("gateway-fanout", "conditional branch needs >=2 outgoing condition flows: " + n.id,
          {n.id});
    }
  }

  if (auto cyclic = detail::find_control_cycle(g))
    add("control-cycle", "control flow contains a cycle through: " + *cyclic, {*cyclic});

  std::sort(report.violations.begin(), report.violations.end(),
            [](const Violation& a, const Violation& b) {
              if (a.rule != b.rule) return a.rule < b.rule;
              std::string ia = a.ids.empty() ? "" : a.ids.front();
              std::string ib = b.ids.empty() ? "" : b.ids.front();
              if (ia != ib) return ia < ib;
              return a.message < b.message;
            });
  return report;
}

// All (branch, merge) id pairs sorted by pair_id. Throws "broken-pair" when a
// pair id does not resolve cleanly.
inline std::vector<std::pair<std::string, std::string>> gateway_pairs(
    const ProceduralGraph& g) {
  std::map<std::string, std::pair<std::vector<std::string>, std::vector<std::string>>> pairs;
  for (const Node& n : g.nodes) {
    if (n.kind != NodeKind::Gateway) continue;
    if (n.pair_id.empty()) throw Error("broken-pair", "gateway without pair id: " + n.id);
    auto& slot = pairs[n.pair_id];
    (n.gateway_role == GatewayRole::Branch ? slot.first : slot.second).push_back(n.id);
  }
  std::vector<std::pair<std::string, std::string>> out;
  for (auto& [pid, slot] : pairs) {
    if (slot.first.size() != 1 || slot.second.size() != 1)
      throw Error("broken-pair", "pair id does not resolve: " + pid);
    out.emplace_back(slot.first[0], slot.second[0]);
  }
  return out;
}

}  // namespace procgraph

#endif  // PROCGRAPH_GRAPH_HPP_
