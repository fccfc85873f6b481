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
// Graph decomposition into the 19-unit vocabulary and rendering of each unit
// into a procedural fragment. The walk is a per-actor breadth-first search;
// actions bridging two patterns are walked twice so adjacent execution order
// survives in the fragments.

#ifndef PROCGRAPH_DECOMPOSE_HPP_
#define PROCGRAPH_DECOMPOSE_HPP_

#include <array>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "procgraph/graph.hpp"
#include "procgraph/text.hpp"

namespace procgraph {

enum class UnitKind {
  StartToAction,
  StartToBranch,
  ActionToAction,
  ActionToEnd,
  BranchXorConditionToAction,
  BranchXorConditionToBranch,
  BranchXorConditionToMergeToAction,
  BranchXorConditionToEnd,
  BranchOrConditionToAction,
  BranchOrConditionToBranch,
  BranchOrConditionToMergeToAction,
  BranchOrConditionToEnd,
  BranchAndTwoWay,
  BranchAndThreeWay,
  MergeToAction,
  MergeToEnd,
  ActionProducesData,
  DataRequiredByAction,
  ActionHasNote,
};

inline constexpr size_t kUnitKindCount = 19;

struct UnitTemplate {
  UnitKind kind;
  std::string_view name;
  std::string_view text;
};

// The hand-written sentence patterns, one per unit kind. tests compare this
// table byte-for-byte against data/templates.tsv.
inline const std::array<UnitTemplate, kUnitKindCount>& unit_templates() {
  static const std::array<UnitTemplate, kUnitKindCount> kTable = {{
      {UnitKind::StartToAction, "StartToAction", "In the beginning, {Action}."},
      {UnitKind::StartToBranch, "StartToBranch", "In the beginning,"},
      {UnitKind::ActionToAction, "ActionToAction", "{Action1}, then {Action2}."},
      {UnitKind::ActionToEnd, "ActionToEnd", "{Action}, and the procedure ends."},
      {UnitKind::BranchXorConditionToAction, "BranchXorConditionToAction",
       "If {condition}, then {Action}."},
      {UnitKind::BranchXorConditionToBranch, "BranchXorConditionToBranch", "If {condition},"},
      {UnitKind::BranchXorConditionToMergeToAction, "BranchXorConditionToMergeToAction",
       "If {condition}, then {Action}."},
      {UnitKind::BranchXorConditionToEnd, "BranchXorConditionToEnd",
       "If {condition}, then the procedure ends."},
      {UnitKind::BranchOrConditionToAction, "BranchOrConditionToAction",
       "If {condition}, then {Action}."},
      {UnitKind::BranchOrConditionToBranch, "BranchOrConditionToBranch", "If {condition},"},
      {UnitKind::BranchOrConditionToMergeToAction, "BranchOrConditionToMergeToAction",
       "If {condition}, then {Action}."},
      {UnitKind::BranchOrConditionToEnd, "BranchOrConditionToEnd",
       "If {condition}, then the procedure ends."},
      {UnitKind::BranchAndTwoWay, "BranchAndTwoWay", "{*1}, at the same time, {*2}."},
      {UnitKind::BranchAndThreeWay, "BranchAndThreeWay",
       "{*1}, at the same time, {*2}, meanwhile, {*3}."},
      {UnitKind::MergeToAction, "MergeToAction", "{Action}."},
      {UnitKind::MergeToEnd, "MergeToEnd", "The procedure ends."},
      {UnitKind::ActionProducesData, "ActionProducesData",
       "\"{Action}\" produce \"{DataConstraint}\"."},
      {UnitKind::DataRequiredByAction, "DataRequiredByAction",
       "\"{Action}\" require access to \"{DataConstraint}\"."},
      {UnitKind::ActionHasNote, "ActionHasNote",
       "For {Action}, pay attention to that {ActionConstraint}."},
  }};
  return kTable;
}

inline const UnitTemplate& unit_template(UnitKind k) {
  return unit_templates()[static_cast<size_t>(k)];
}

struct Unit {
  UnitKind kind;
  std::vector<std::string> slots;       // texts, in placeholder order
  std::vector<std::string> source_ids;  // node ids the unit covers
  std::string actor;                    // actor whose walk produced the unit

  bool covers(std::string_view id) const {
    for (const std::string& s : source_ids)
      if (s == id) return true;
    return false;
  }
};

struct Fragment {
  std::string text;
  size_t unit_ref = SIZE_MAX;  // index of the origin unit
  std::string actor;
  std::optional<int> group;
  std::optional<int> order_in_group;
  std::optional<int> sentence_cluster;
};

namespace decompose_detail {

inline size_t expected_slots(UnitKind k) {
  switch (k) {
    case UnitKind::StartToBranch:
    case UnitKind::MergeToEnd:
      return 0;
    case UnitKind::StartToAction:
    case UnitKind::ActionToEnd:
    case UnitKind::BranchXorConditionToBranch:
    case UnitKind::BranchXorConditionToEnd:
    case UnitKind::BranchOrConditionToBranch:
    case UnitKind::BranchOrConditionToEnd:
    case UnitKind::MergeToAction:
      return 1;
    case UnitKind::BranchAndThreeWay:
      return 3;
    default:
      return 2;
  }
}

// Substitutes {placeholders} left to right with the unit's slots.
inline std::string substitute(std::string_view tmpl, const std::vector<std::string>& slots) {
  std::string out;
  size_t slot = 0;
  for (size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] == '{') {
      size_t close = tmpl.find('}', i);
      if (close != std::string_view::npos) {
        out += slot < slots.size() ? slots[slot] : "";
        ++slot;
        i = close;
        continue;
      }
    }
    out += tmpl[i];
  }
  return out;
}

}  // namespace decompose_detail

// Renders one unit into its fragment. Parallel fan-out beyond three extends
// the three-way pattern with additional ", meanwhile," clauses.
inline Fragment render(const Unit& unit, size_t unit_ref = SIZE_MAX) {
  size_t idx = static_cast<size_t>(unit.kind);
  if (idx >= kUnitKindCount) throw Error("unknown-kind", "unit kind out of range");

  size_t want = decompose_detail::expected_slots(unit.kind);
  bool extended_and = unit.kind == UnitKind::BranchAndThreeWay && unit.slots.size() > 3;
  if (unit.slots.size() != want && !extended_and)
    throw Error("slot-arity", "unit slot count does not match its kind");
  for (const std::string& s : unit.slots)
    if (s.empty()) throw Error("slot-arity", "empty slot text");

  std::string text =
      decompose_detail::substitute(unit_template(unit.kind).text,
                                   {unit.slots.begin(),
                                    unit.slots.begin() + std::min<size_t>(unit.slots.size(), 3)});
  if (extended_and) {
    text.pop_back();  // final '.'
    for (size_t i = 3; i < unit.slots.size(); ++i) text += ", meanwhile, " + unit.slots[i];
    text += ".";
  }

  Fragment f;
  f.text = std::move(text);
  f.unit_ref = unit_ref;
  f.actor = unit.actor;
  return f;
}

namespace decompose_detail {

inline std::string first_action_text(const ProceduralGraph& g, const std::string& from) {
  std::set<std::string> seen{from};
  std::deque<std::string> q{from};
  while (!q.empty()) {
    std::string id = q.front();
    q.pop_front();
    const Node* n = g.find(id);
    if (n->kind == NodeKind::Action) return n->text;
    for (const Edge& e : g.edges)
      if (e.is_control() && e.source == id && seen.insert(e.target).second)
        q.push_back(e.target);
  }
  return "the procedure ends";
}

}  // namespace decompose_detail

// Breadth-first decomposition of a valid graph into units, one actor at a
// time. Every control-flow edge ends up covered by at least one unit.
inline std::vector<Unit> decompose(const ProceduralGraph& g) {
  if (!validate(g).ok()) throw Error("invalid-graph", "decompose requires a valid graph");

  std::vector<Unit> units;
  auto emit = [&](UnitKind kind, std::vector<std::string> slots,
                  std::vector<std::string> ids, const std::string& actor) {
    units.push_back({kind, std::move(slots), std::move(ids), actor});
  };

  std::set<std::string> visited;
  for (const std::string& actor : g.actors()) {
    const Node* start = nullptr;
    for (const Node& n : g.nodes)
      if (n.kind == NodeKind::Start && n.actor == actor && !start) start = &n;
    if (!start) continue;

    std::deque<std::string> queue{start->id};
    visited.insert(start->id);
    while (!queue.empty()) {
      const Node* u = g.find(queue.front());
      queue.pop_front();

      std::vector<const Edge*> control, constraints;
      for (const Edge& e : g.edges) {
        if (e.is_control() && e.source == u->id) control.push_back(&e);
        if (e.kind == EdgeKind::ConstraintFlow && (e.source == u->id || e.target == u->id))
          constraints.push_back(&e);
      }

      switch (u->kind) {
        case NodeKind::Start: {
          for (const Edge* e : control) {
            const Node* v = g.find(e->target);
            if (v->kind == NodeKind::Action)
              emit(UnitKind::StartToAction, {v->text}, {u->id, v->id}, actor);
            else if (v->is_gateway(GatewayRole::Branch))
              emit(UnitKind::StartToBranch, {}, {u->id, v->id}, actor);
            // other successors are bridged by the coverage pass below
          }
          break;
        }
        case NodeKind::Action: {
          for (const Edge* e : control) {
            const Node* v = g.find(e->target);
            if (v->kind == NodeKind::Action)
              emit(UnitKind::ActionToAction, {u->text, v->text}, {u->id, v->id}, actor);
            else if (v->kind == NodeKind::End)
              emit(UnitKind::ActionToEnd, {u->text}, {u->id, v->id}, actor);
          }
          for (const Edge* e : constraints) {
            const Node* other = g.find(e->source == u->id ? e->target : e->source);
            if (other->kind == NodeKind::DataConstraint && e->source == u->id)
              emit(UnitKind::ActionProducesData, {u->text, other->text}, {u->id, other->id},
                   actor);
            else if (other->kind == NodeKind::DataConstraint)
              emit(UnitKind::DataRequiredByAction, {u->text, other->text}, {other->id, u->id},
                   actor);
            else if (other->kind == NodeKind::ActionConstraint && e->source == u->id)
              emit(UnitKind::ActionHasNote, {u->text, other->text}, {u->id, other->id}, actor);
          }
          break;
        }
        case NodeKind::Gateway: {
          if (u->gateway_role == GatewayRole::Branch &&
              u->gateway_type != GatewayType::Parallel) {
            bool exclusive = u->gateway_type == GatewayType::Exclusive;
            for (const Edge* e : control) {
              const Node* v = g.find(e->target);
              const std::string& cond = e->condition;
              if (v->kind == NodeKind::Action) {
                emit(exclusive ? UnitKind::BranchXorConditionToAction
                               : UnitKind::BranchOrConditionToAction,
                     {cond, v->text}, {u->id, v->id}, actor);
              } else if (v->kind == NodeKind::End) {
                emit(exclusive ? UnitKind::BranchXorConditionToEnd
                               : UnitKind::BranchOrConditionToEnd,
                     {cond}, {u->id, v->id}, actor);
              } else if (v->is_gateway(GatewayRole::Merge) && v->pair_id == u->pair_id) {
                // Condition skips straight to the merge; voice the action after it.
                const Node* after = nullptr;
                for (const Edge& me : g.edges)
                  if (me.is_control() && me.source == v->id && !after)
                    after = g.find(me.target);
                if (after && after->kind == NodeKind::Action)
                  emit(exclusive ? UnitKind::BranchXorConditionToMergeToAction
                                 : UnitKind::BranchOrConditionToMergeToAction,
                       {cond, after->text}, {u->id, v->id, after->id}, actor);
                else
                  emit(exclusive ? UnitKind::BranchXorConditionToEnd
                                 : UnitKind::BranchOrConditionToEnd,
                       {cond}, {u->id, v->id}, actor);
              } else {
                emit(exclusive ? UnitKind::BranchXorConditionToBranch
                               : UnitKind::BranchOrConditionToBranch,
                     {cond}, {u->id, v->id}, actor);
              }
            }
          } else if (u->gateway_role == GatewayRole::Branch) {
            std::vector<std::string> slots, ids{u->id};
            for (const Edge* e : control) {
              const Node* v = g.find(e->target);
              if (v->kind == NodeKind::Action)
                slots.push_back(v->text);
              else if (v->kind == NodeKind::End)
                slots.push_back("the procedure ends");
              else
                slots.push_back(decompose_detail::first_action_text(g, v->id));
              ids.push_back(v->id);
            }
            if (slots.size() >= 2)
              emit(slots.size() == 2 ? UnitKind::BranchAndTwoWay : UnitKind::BranchAndThreeWay,
                   std::move(slots), std::move(ids), actor);
          } else {  // merge
            for (const Edge* e : control) {
              const Node* v = g.find(e->target);
              if (v->kind == NodeKind::Action)
                emit(UnitKind::MergeToAction, {v->text}, {u->id, v->id}, actor);
              else if (v->kind == NodeKind::End)
                emit(UnitKind::MergeToEnd, {}, {u->id, v->id}, actor);
            }
          }
          break;
        }
        default:
          break;
      }

      for (const Edge* e : control)
        if (visited.insert(e->target).second) queue.push_back(e->target);
    }
  }

  for (const Node& n : g.nodes)
    if (!n.is_constraint() && !visited.count(n.id))
      throw Error("unreachable", "node never walked: " + n.id);

  // Coverage pass: edges whose pattern carries no unit of its own (an action
  // feeding a gateway, paths converging into a merge, gateway chains) are
  // attached to the first unit that already mentions one endpoint.
  bool progress = true;
  while (progress) {
    progress = false;
    for (const Edge& e : g.edges) {
      if (!e.is_control()) continue;
      bool covered = false;
      for (const Unit& un : units)
        if (un.covers(e.source) && un.covers(e.target)) covered = true;
      if (covered) continue;
      for (Unit& un : units) {
        if (un.covers(e.target)) {
          un.source_ids.push_back(e.source);
          progress = true;
          break;
        }
        if (un.covers(e.source)) {
          un.source_ids.push_back(e.target);
          progress = true;
          break;
        }
      }
    }
  }
  return units;
}

// Drops units whose rendering adds nothing: the text is a duplicate of, or
// contained in, another unit's rendering over overlapping nodes for the same
// actor. Order is preserved.
inline std::vector<Unit> filter_units(const std::vector<Unit>& units) {
  std::vector<std::string> texts;
  texts.reserve(units.size());
  for (const Unit& u : units) texts.push_back(lowercase(render(u).text));

  auto overlap = [&](const Unit& a, const Unit& b) {
    for (const std::string& id : a.source_ids)
      if (b.covers(id)) return true;
    return false;
  };

  std::vector<Unit> kept;
  for (size_t i = 0; i < units.size(); ++i) {
    bool drop = false;
    for (size_t j = 0; j < units.size() && !drop; ++j) {
      if (i == j || units[i].actor != units[j].actor || !overlap(units[i], units[j])) continue;
      if (texts[i] == texts[j] ? j < i
                               : texts[j].find(texts[i]) != std::string::npos)
        drop = true;
    }
    if (!drop) kept.push_back(units[i]);
  }
  return kept;
}

// The branch gateway a unit opens, if any; used by the grouping heuristics.
inline std::optional<std::string> opened_gateway(const Unit& u, const ProceduralGraph& g) {
  switch (u.kind) {
    case UnitKind::BranchXorConditionToAction:
    case UnitKind::BranchXorConditionToBranch:
    case UnitKind::BranchXorConditionToMergeToAction:
    case UnitKind::BranchXorConditionToEnd:
    case UnitKind::BranchOrConditionToAction:
    case UnitKind::BranchOrConditionToBranch:
    case UnitKind::BranchOrConditionToMergeToAction:
    case UnitKind::BranchOrConditionToEnd:
    case UnitKind::BranchAndTwoWay:
    case UnitKind::BranchAndThreeWay:
      for (const std::string& id : u.source_ids) {
        const Node* n = g.find(id);
        if (n && n->is_gateway(GatewayRole::Branch)) return id;
      }
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

}  // namespace procgraph

#endif  // PROCGRAPH_DECOMPOSE_HPP_
