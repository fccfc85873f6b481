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
// Line-oriented graph text exchanged with language models:
//
//   Element -> (condition) Element
//
// Gateways abbreviate to XOR/OR/AND with numeric suffixes, constraints render
// as `"text" [data]` / `"text" [note]`, and an `Actors:` block maps action
// labels to actors. The grammar is documented in docs/dotlang.md.

#ifndef PROCGRAPH_DOTLANG_HPP_
#define PROCGRAPH_DOTLANG_HPP_

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "procgraph/graph.hpp"
#include "procgraph/text.hpp"

namespace procgraph {

struct DotLine {
  std::string source_label;
  std::string condition;  // empty when absent
  std::string target_label;
};

struct ParseError {
  size_t line = 0;  // 1-based; 0 when not tied to a line
  std::string code;
  std::string message;
};

struct ParseResult {
  ProceduralGraph graph;
  std::vector<ParseError> errors;
  bool ok() const { return errors.empty(); }
};

namespace dot_detail {

inline std::string escape_condition(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '\\' || c == ')') out += '\\';
    out += c;
  }
  return out;
}

inline std::string escape_quoted(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '\\' || c == '"') out += '\\';
    out += c;
  }
  return out;
}

inline std::string_view gateway_abbrev(GatewayType t) {
  switch (t) {
    case GatewayType::Exclusive: return "XOR";
    case GatewayType::Inclusive: return "OR";
    case GatewayType::Parallel: return "AND";
  }
  return "?";
}

// Stable topological order of control-flow nodes (Kahn, ties by insertion
// order). Constraint nodes are slotted right after their first adjacent
// action. Nodes on cycles keep their insertion position at the end.
inline std::vector<std::string> serialization_order(const ProceduralGraph& g) {
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < g.nodes.size(); ++i) index[g.nodes[i].id] = i;

  std::map<std::string, int> indeg;
  for (const Node& n : g.nodes)
    if (!n.is_constraint()) indeg[n.id] = 0;
  for (const Edge& e : g.edges)
    if (e.is_control() && indeg.count(e.target) && indeg.count(e.source)) ++indeg[e.target];

  auto by_insertion = [&](const std::string& a, const std::string& b) {
    return index[a] < index[b];
  };
  std::vector<std::string> ready;
  for (const Node& n : g.nodes)
    if (!n.is_constraint() && indeg[n.id] == 0) ready.push_back(n.id);
  std::sort(ready.begin(), ready.end(), by_insertion);

  std::vector<std::string> order;
  while (!ready.empty()) {
    std::string id = ready.front();
    ready.erase(ready.begin());
    order.push_back(id);
    std::vector<std::string> released;
    for (const Edge& e : g.edges)
      if (e.is_control() && e.source == id && indeg.count(e.target) && --indeg[e.target] == 0)
        released.push_back(e.target);
    std::sort(released.begin(), released.end(), by_insertion);
    for (auto& r : released)
      ready.insert(std::upper_bound(ready.begin(), ready.end(), r, by_insertion), r);
  }
  for (const Node& n : g.nodes)  // leftovers (cycles) keep insertion order
    if (!n.is_constraint() && std::find(order.begin(), order.end(), n.id) == order.end())
      order.push_back(n.id);

  // Constraints: directly after the first adjacent action.
  std::vector<std::string> full;
  std::set<std::string> placed;
  for (const std::string& id : order) {
    full.push_back(id);
    placed.insert(id);
    for (const Edge& e : g.edges) {
      if (e.kind != EdgeKind::ConstraintFlow) continue;
      const std::string& other = e.source == id ? e.target : (e.target == id ? e.source : id);
      if (other != id && !placed.count(other)) {
        full.push_back(other);
        placed.insert(other);
      }
    }
  }
  for (const Node& n : g.nodes)
    if (!placed.count(n.id)) full.push_back(n.id);
  return full;
}

}  // namespace dot_detail

// Label assignment used by serialize(); also handy for prompt construction.
struct LabelTable {
  std::map<std::string, std::string> label_of_id;
  std::map<std::string, std::string> actor_of_label;  // action labels only

  const std::string& label(const std::string& id) const {
    static const std::string kMissing;
    auto it = label_of_id.find(id);
    return it == label_of_id.end() ? kMissing : it->second;
  }
};

// Renders a validated graph into dot text. One line per edge in topological,
// then lexical order; gateways numbered by first appearance; actor block last.
inline std::string serialize(const ProceduralGraph& g, LabelTable* table_out = nullptr) {
  if (!validate(g).ok()) throw Error("invalid-graph", "serialize requires a valid graph");

  std::vector<std::string> order = dot_detail::serialization_order(g);
  std::map<std::string, size_t> rank;
  for (size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;

  std::vector<const Edge*> edges;
  for (const Edge& e : g.edges) edges.push_back(&e);
  std::stable_sort(edges.begin(), edges.end(), [&](const Edge* a, const Edge* b) {
    auto key = [&](const Edge* e) {
      return std::tuple<size_t, size_t, int, const std::string&>(
          rank[e->source], rank[e->target], static_cast<int>(e->kind), e->condition);
    };
    return key(a) < key(b);
  });

  // Labels by first appearance in the emitted edge list.
  LabelTable table;
  std::map<GatewayType, int> gateway_seq;
  int start_seq = 0, end_seq = 0;
  auto assign = [&](const std::string& id) {
    if (table.label_of_id.count(id)) return;
    const Node* n = g.find(id);
    std::string label;
    switch (n->kind) {
      case NodeKind::Start:
        label = ++start_seq == 1 ? "Start" : "Start" + std::to_string(start_seq);
        break;
      case NodeKind::End:
        label = ++end_seq == 1 ? "End" : "End" + std::to_string(end_seq);
        break;
      case NodeKind::Gateway: {
        int ordinal = ++gateway_seq[*n->gateway_type];
        label = std::string(dot_detail::gateway_abbrev(*n->gateway_type)) +
                std::to_string(ordinal);
        break;
      }
      case NodeKind::DataConstraint:
        label = "\"" + dot_detail::escape_quoted(n->text) + "\" [data]";
        break;
      case NodeKind::ActionConstraint:
        label = "\"" + dot_detail::escape_quoted(n->text) + "\" [note]";
        break;
      case NodeKind::Action:
        label = n->text;
        if (!n->actor.empty()) table.actor_of_label[label] = n->actor;
        break;
    }
    table.label_of_id[id] = label;
  };
  for (const Edge* e : edges) {
    assign(e->source);
    assign(e->target);
  }
  for (const Node& n : g.nodes) assign(n.id);  // isolated nodes still get labels

  std::ostringstream out;
  for (const Edge* e : edges) {
    out << table.label_of_id[e->source] << " -> ";
    if (e->kind == EdgeKind::ConditionFlow)
      out << "(" << dot_detail::escape_condition(e->condition) << ") ";
    out << table.label_of_id[e->target] << "\n";
  }
  if (!table.actor_of_label.empty()) {
    out << "\nActors:\n";
    std::vector<std::pair<std::string, std::string>> entries;
    for (const Edge* e : edges) {
      for (const std::string* lbl : {&table.label_of_id[e->source], &table.label_of_id[e->target]}) {
        auto it = table.actor_of_label.find(*lbl);
        if (it != table.actor_of_label.end() &&
            std::find(entries.begin(), entries.end(),
                      std::make_pair(it->first, it->second)) == entries.end())
          entries.emplace_back(it->first, it->second);
      }
    }
    for (auto& [label, actor] : entries) out << label << " = " << actor << "\n";
  }
  if (table_out) *table_out = table;
  return out.str();
}

namespace dot_detail {

struct RawLine {
  size_t line_no;
  DotLine dot;
};

// Splits one edge line; returns false with an error code on malformed input.
inline bool split_line(std::string_view line, DotLine* out, std::string* err_code,
                       std::string* err_msg) {
  size_t arrow = line.find("->");
  if (arrow == std::string_view::npos) {
    *err_code = "malformed-line";
    *err_msg = "expected 'source -> target'";
    return false;
  }
  out->source_label = trim(line.substr(0, arrow));
  std::string rest = trim(line.substr(arrow + 2));
  if (!rest.empty() && rest.front() == '(') {
    std::string cond;
    size_t i = 1;
    bool closed = false;
    for (; i < rest.size(); ++i) {
      char c = rest[i];
      if (c == '\\' && i + 1 < rest.size()) {
        cond += rest[++i];
      } else if (c == ')') {
        closed = true;
        ++i;
        break;
      } else {
        cond += c;
      }
    }
    if (!closed) {
      *err_code = "unbalanced-condition";
      *err_msg = "condition parenthesis never closes";
      return false;
    }
    out->condition = trim(cond);
    out->target_label = trim(rest.substr(i));
  } else {
    out->target_label = rest;
  }
  if (out->source_label.empty() || out->target_label.empty()) {
    *err_code = "malformed-line";
    *err_msg = "empty element label";
    return false;
  }
  return true;
}

struct LabelClass {
  NodeKind kind = NodeKind::Action;
  std::optional<GatewayType> gateway_type;
  std::string text;  // unescaped constraint/action text
};

inline LabelClass classify_label(const std::string& label) {
  auto all_digits = [](std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
      return std::isdigit(c);
    });
  };
  auto suffix_ok = [&](std::string_view rest) { return rest.empty() || all_digits(rest); };

  if (label == "Start" || (starts_with(label, "Start") && suffix_ok(std::string_view(label).substr(5))))
    return {NodeKind::Start, std::nullopt, ""};
  if (label == "End" || (starts_with(label, "End") && suffix_ok(std::string_view(label).substr(3))))
    return {NodeKind::End, std::nullopt, ""};
  if (starts_with(label, "XOR") && all_digits(std::string_view(label).substr(3)))
    return {NodeKind::Gateway, GatewayType::Exclusive, ""};
  if (starts_with(label, "OR") && all_digits(std::string_view(label).substr(2)))
    return {NodeKind::Gateway, GatewayType::Inclusive, ""};
  if (starts_with(label, "AND") && all_digits(std::string_view(label).substr(3)))
    return {NodeKind::Gateway, GatewayType::Parallel, ""};

  for (auto [suffix, kind] : {std::pair{"[data]", NodeKind::DataConstraint},
                              std::pair{"[note]", NodeKind::ActionConstraint}}) {
    if (ends_with(label, suffix) && label.front() == '"') {
      std::string body = trim(label.substr(0, label.size() - 6));
      if (body.size() >= 2 && body.front() == '"' && body.back() == '"') {
        std::string text;
        for (size_t i = 1; i + 1 < body.size(); ++i) {
          if (body[i] == '\\' && i + 2 < body.size()) ++i;
          text += body[i];
        }
        return {kind, std::nullopt, text};
      }
    }
  }
  return {NodeKind::Action, std::nullopt, label};
}

}  // namespace dot_detail

// Parses dot text into a graph. Total over arbitrary input: malformed lines
// become errors, well-formed lines still build a graph. Branch/merge roles and
// pair ids are inferred from the flat labels.
inline ParseResult parse(std::string_view text) {
  ParseResult result;
  std::vector<dot_detail::RawLine> lines;
  std::map<std::string, std::string> actor_of_label;

  // Pass 1: split lines, collect the actor block.
  {
    std::istringstream in{std::string(text)};
    std::string line;
    size_t line_no = 0;
    bool in_actor_block = false;
    while (std::getline(in, line)) {
      ++line_no;
      std::string t = trim(line);
      if (t.empty()) continue;
      if (lowercase(t) == "actors:") {
        in_actor_block = true;
        continue;
      }
      if (in_actor_block && t.find("->") == std::string::npos) {
        size_t eq = t.find(" = ");
        if (eq == std::string::npos) {
          result.errors.push_back({line_no, "malformed-actor", "expected 'label = actor'"});
        } else {
          actor_of_label[trim(t.substr(0, eq))] = trim(t.substr(eq + 3));
        }
        continue;
      }
      DotLine dl;
      std::string code, msg;
      if (!dot_detail::split_line(t, &dl, &code, &msg)) {
        result.errors.push_back({line_no, code, msg});
        continue;
      }
      lines.push_back({line_no, dl});
    }
  }

  // Pass 2: create nodes keyed by label, in first-appearance order.
  ProceduralGraph& g = result.graph;
  std::map<std::string, std::string> id_of_label;
  std::map<std::string, size_t> first_line_of_label;
  int next_id = 0;
  auto intern = [&](const std::string& label, size_t line_no) -> std::string {
    auto it = id_of_label.find(label);
    if (it != id_of_label.end()) return it->second;
    dot_detail::LabelClass cls = dot_detail::classify_label(label);
    Node n;
    n.id = "n" + std::to_string(next_id++);
    n.kind = cls.kind;
    n.text = cls.text;
    n.gateway_type = cls.gateway_type;
    g.nodes.push_back(n);
    id_of_label[label] = n.id;
    first_line_of_label[label] = line_no;
    return n.id;
  };

  for (const auto& raw : lines) {
    std::string src = intern(raw.dot.source_label, raw.line_no);
    std::string dst = intern(raw.dot.target_label, raw.line_no);
    Edge e;
    e.source = src;
    e.target = dst;
    e.condition = raw.dot.condition;
    const Node* sn = g.find(src);
    const Node* dn = g.find(dst);
    if (sn->is_constraint() || dn->is_constraint())
      e.kind = EdgeKind::ConstraintFlow;
    else if (!e.condition.empty())
      e.kind = EdgeKind::ConditionFlow;
    else
      e.kind = EdgeKind::SequenceFlow;
    g.edges.push_back(e);
  }

  // Pass 3: gateway roles from in/out degree over control flow.
  for (Node& n : g.nodes) {
    if (n.kind != NodeKind::Gateway) continue;
    size_t out = 0, in = 0;
    for (const Edge& e : g.edges) {
      if (!e.is_control()) continue;
      if (e.source == n.id) ++out;
      if (e.target == n.id) ++in;
    }
    std::string label;
    for (auto& [lbl, id] : id_of_label)
      if (id == n.id) label = lbl;
    if (out >= 2 && in >= 2) {
      result.errors.push_back({first_line_of_label[label], "gateway-role",
                               "gateway '" + label + "' branches and merges at once"});
      n.gateway_role = GatewayRole::Branch;
    } else if (out >= 2) {
      n.gateway_role = GatewayRole::Branch;
    } else if (in >= 2) {
      n.gateway_role = GatewayRole::Merge;
    } else {
      result.errors.push_back({first_line_of_label[label], "gateway-role",
                               "gateway '" + label + "' has no branching structure"});
      bool out_cond = false;
      for (const Edge& e : g.edges)
        if (e.source == n.id && !e.condition.empty()) out_cond = true;
      n.gateway_role = out_cond ? GatewayRole::Branch : GatewayRole::Merge;
    }
  }

  // Pass 4: pair every branch with the nearest merge of the same type that
  // all of its arms reach.
  {
    std::map<std::string, std::vector<std::string>> succ;
    for (const Edge& e : g.edges)
      if (e.is_control()) succ[e.source].push_back(e.target);
    auto reachable = [&](const std::string& from) {
      std::set<std::string> seen{from};
      std::deque<std::string> q{from};
      while (!q.empty()) {
        std::string id = q.front();
        q.pop_front();
        for (const std::string& nxt : succ[id])
          if (seen.insert(nxt).second) q.push_back(nxt);
      }
      return seen;
    };

    int pair_seq = 0;
    std::set<std::string> claimed;
    for (Node& n : g.nodes) {
      if (!n.is_gateway(GatewayRole::Branch)) continue;
      std::vector<std::set<std::string>> arm_reach;
      for (const std::string& nxt : succ[n.id]) arm_reach.push_back(reachable(nxt));
      std::map<std::string, size_t> dist;  // BFS distance from the branch
      {
        std::deque<std::pair<std::string, size_t>> q{{n.id, 0}};
        dist[n.id] = 0;
        while (!q.empty()) {
          auto [id, d] = q.front();
          q.pop_front();
          for (const std::string& nxt : succ[id])
            if (!dist.count(nxt)) {
              dist[nxt] = d + 1;
              q.push_back({nxt, d + 1});
            }
        }
      }
      const Node* best = nullptr;
      for (const Node& cand : g.nodes) {
        if (!cand.is_gateway(GatewayRole::Merge) || cand.gateway_type != n.gateway_type ||
            claimed.count(cand.id))
          continue;
        bool in_all = !arm_reach.empty();
        for (const auto& r : arm_reach)
          if (!r.count(cand.id)) in_all = false;
        if (!in_all) continue;
        if (!best || dist[cand.id] < dist[best->id]) best = &cand;
      }
      if (!best) {
        result.errors.push_back({0, "unpaired-gateway",
                                 "no merge gateway closes branch '" + n.id + "'"});
        continue;
      }
      claimed.insert(best->id);
      std::string pid = "p" + std::to_string(++pair_seq);
      n.pair_id = pid;
      for (Node& m : g.nodes)
        if (m.id == best->id) m.pair_id = pid;
    }
    for (Node& n : g.nodes)
      if (n.is_gateway(GatewayRole::Merge) && n.pair_id.empty())
        result.errors.push_back(
            {0, "unpaired-gateway", "merge gateway '" + n.id + "' is never opened"});
  }

  // Pass 5: actors. Actions take theirs from the block; Start/End inherit the
  // actor of the nearest action along control flow.
  for (auto& [label, actor] : actor_of_label) {
    auto it = id_of_label.find(label);
    if (it == id_of_label.end()) {
      result.errors.push_back({0, "unknown-actor-label", "actor entry for unknown label: " + label});
      continue;
    }
    for (Node& n : g.nodes)
      if (n.id == it->second && n.kind == NodeKind::Action) n.actor = actor;
  }
  {
    auto nearest_actor = [&](const std::string& from, bool forward) -> std::string {
      std::set<std::string> seen{from};
      std::deque<std::string> q{from};
      while (!q.empty()) {
        std::string id = q.front();
        q.pop_front();
        const Node* node = g.find(id);
        if (node->kind == NodeKind::Action && !node->actor.empty()) return node->actor;
        for (const Edge& e : g.edges) {
          if (!e.is_control()) continue;
          const std::string& nxt = forward ? e.target : e.source;
          const std::string& cur = forward ? e.source : e.target;
          if (cur == id && seen.insert(nxt).second) q.push_back(nxt);
        }
      }
      return "";
    };
    for (Node& n : g.nodes) {
      if (n.kind == NodeKind::Start) n.actor = nearest_actor(n.id, true);
      if (n.kind == NodeKind::End) n.actor = nearest_actor(n.id, false);
    }
  }

  return result;
}

}  // namespace procgraph

#endif  // PROCGRAPH_DOTLANG_HPP_
