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
// Document assembly over rendered fragments: group into sub-procedures, order
// within groups, aggregate into sentence clusters, then smooth into the final
// document. The boundary and ordering models are behavioral contracts; the
// defaults are deterministic heuristics so the pipeline runs offline.

#ifndef PROCGRAPH_ASSEMBLE_HPP_
#define PROCGRAPH_ASSEMBLE_HPP_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "procgraph/backends.hpp"
#include "procgraph/decompose.hpp"
#include "procgraph/graph.hpp"
#include "procgraph/text.hpp"

namespace procgraph {

// Probability in [0,1] that a boundary precedes `right`, given the fragments
// already placed in the current segment.
class BoundaryScorer {
 public:
  virtual ~BoundaryScorer() = default;
  virtual double score(std::span<const Fragment> left, const Fragment& right) const = 0;
};

class OrderingScorer {
 public:
  virtual ~OrderingScorer() = default;
  // Returns a permutation of [0, fragments.size()).
  virtual std::vector<size_t> order(std::span<const Fragment> fragments) const = 0;
};

namespace assemble_detail {

// The action a fragment's sentence hands over from / to, for continuity
// chaining. Constraint fragments attach to their action on both sides.
inline std::optional<std::string> chain_head(const Unit& u) {
  switch (u.kind) {
    case UnitKind::ActionToAction:
    case UnitKind::ActionToEnd:
    case UnitKind::ActionProducesData:
    case UnitKind::ActionHasNote:
      return u.source_ids[0];
    case UnitKind::DataRequiredByAction:
      return u.source_ids[1];
    default:
      return std::nullopt;
  }
}

inline std::optional<std::string> chain_tail(const Unit& u) {
  switch (u.kind) {
    case UnitKind::StartToAction:
    case UnitKind::ActionToAction:
    case UnitKind::BranchXorConditionToAction:
    case UnitKind::BranchOrConditionToAction:
    case UnitKind::MergeToAction:
      return u.source_ids[1];
    case UnitKind::BranchXorConditionToMergeToAction:
    case UnitKind::BranchOrConditionToMergeToAction:
      return u.source_ids[2];
    case UnitKind::ActionProducesData:
    case UnitKind::ActionHasNote:
      return u.source_ids[0];
    case UnitKind::DataRequiredByAction:
      return u.source_ids[1];
    default:
      return std::nullopt;
  }
}

inline bool is_condition_unit(UnitKind k) {
  switch (k) {
    case UnitKind::BranchXorConditionToAction:
    case UnitKind::BranchXorConditionToMergeToAction:
    case UnitKind::BranchOrConditionToAction:
    case UnitKind::BranchOrConditionToMergeToAction:
      return true;
    default:
      return false;
  }
}

}  // namespace assemble_detail

// Sub-procedure boundaries: an actor change, or a fragment opening a gateway
// block the previous fragment knows nothing about.
class DefaultGroupScorer : public BoundaryScorer {
 public:
  DefaultGroupScorer(const std::vector<Unit>& units, const ProceduralGraph& graph)
      : units_(units), graph_(graph) {}

  double score(std::span<const Fragment> left, const Fragment& right) const override {
    if (left.empty()) return 0.0;
    const Fragment& prev = left.back();
    if (prev.actor != right.actor) return 1.0;
    if (auto g = opened_gateway(units_[right.unit_ref], graph_))
      if (!units_[prev.unit_ref].covers(*g)) return 1.0;
    return 0.0;
  }

 private:
  const std::vector<Unit>& units_;
  const ProceduralGraph& graph_;
};

// Sentence boundaries: keep a condition fragment and the continuation that
// picks up its action inside one sentence; break everywhere else.
class DefaultSentenceScorer : public BoundaryScorer {
 public:
  explicit DefaultSentenceScorer(const std::vector<Unit>& units) : units_(units) {}

  double score(std::span<const Fragment> left, const Fragment& right) const override {
    if (left.empty()) return 0.0;
    const Unit& prev = units_[left.back().unit_ref];
    const Unit& cur = units_[right.unit_ref];
    if (assemble_detail::is_condition_unit(prev.kind)) {
      auto tail = assemble_detail::chain_tail(prev);
      auto head = assemble_detail::chain_head(cur);
      if (tail && head && *tail == *head) return 0.0;
    }
    return 1.0;
  }

 private:
  const std::vector<Unit>& units_;
};

// Condition continuity: "If C, then X" is immediately followed by the
// fragments that continue from X, ahead of any sibling condition.
class ChainOrderingScorer : public OrderingScorer {
 public:
  explicit ChainOrderingScorer(const std::vector<Unit>& units) : units_(units) {}

  std::vector<size_t> order(std::span<const Fragment> fragments) const override {
    size_t n = fragments.size();
    std::vector<std::optional<std::string>> head(n), tail(n);
    for (size_t i = 0; i < n; ++i) {
      head[i] = assemble_detail::chain_head(units_[fragments[i].unit_ref]);
      tail[i] = assemble_detail::chain_tail(units_[fragments[i].unit_ref]);
    }
    std::vector<bool> has_pred(n, false), emitted(n, false);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        if (i != j && tail[i] && head[j] && *tail[i] == *head[j]) has_pred[j] = true;

    std::vector<size_t> out;
    auto follow = [&](auto&& self, size_t i) -> void {
      emitted[i] = true;
      out.push_back(i);
      if (!tail[i]) return;
      for (size_t j = 0; j < n; ++j)
        if (!emitted[j] && head[j] && *head[j] == *tail[i]) self(self, j);
    };
    for (size_t i = 0; i < n; ++i)
      if (!emitted[i] && !has_pred[i]) follow(follow, i);
    for (size_t i = 0; i < n; ++i)  // leftovers keep their position
      if (!emitted[i]) follow(follow, i);
    return out;
  }

 private:
  const std::vector<Unit>& units_;
};

// Splits fragments into groups where the scorer exceeds the threshold;
// stamps group marks.
inline std::vector<std::vector<Fragment>> group(const std::vector<Fragment>& fragments,
                                                const BoundaryScorer& scorer,
                                                double threshold = 0.5) {
  std::vector<std::vector<Fragment>> groups;
  for (const Fragment& f : fragments) {
    bool boundary =
        groups.empty() ||
        scorer.score(std::span<const Fragment>(groups.back()), f) > threshold;
    if (boundary) groups.emplace_back();
    Fragment copy = f;
    copy.group = static_cast<int>(groups.size()) - 1;
    groups.back().push_back(std::move(copy));
  }
  return groups;
}

// Reorders one group by the scorer's permutation; stamps order marks.
inline std::vector<Fragment> order(const std::vector<Fragment>& grp,
                                   const OrderingScorer& scorer) {
  std::vector<size_t> perm = scorer.order(std::span<const Fragment>(grp));
  if (perm.size() != grp.size()) throw Error("bad-permutation", "ordering scorer output size");
  std::vector<bool> seen(grp.size(), false);
  for (size_t idx : perm) {
    if (idx >= grp.size() || seen[idx])
      throw Error("bad-permutation", "ordering scorer output is not a permutation");
    seen[idx] = true;
  }
  std::vector<Fragment> out;
  out.reserve(grp.size());
  for (size_t pos = 0; pos < perm.size(); ++pos) {
    Fragment f = grp[perm[pos]];
    f.order_in_group = static_cast<int>(pos);
    out.push_back(std::move(f));
  }
  return out;
}

// Splits an ordered group into sentence clusters; stamps cluster marks.
inline std::vector<std::vector<Fragment>> aggregate(const std::vector<Fragment>& ordered,
                                                    const BoundaryScorer& scorer,
                                                    double threshold = 0.5) {
  std::vector<std::vector<Fragment>> clusters;
  for (const Fragment& f : ordered) {
    bool boundary =
        clusters.empty() ||
        scorer.score(std::span<const Fragment>(clusters.back()), f) > threshold;
    if (boundary) clusters.emplace_back();
    Fragment copy = f;
    copy.sentence_cluster = static_cast<int>(clusters.size()) - 1;
    clusters.back().push_back(std::move(copy));
  }
  return clusters;
}

struct DocumentDraft {
  std::vector<std::vector<std::vector<Fragment>>> groups;  // group -> cluster -> fragments
  std::map<std::string, std::string> actor_prefixes;       // actor -> "For the <actor>:"
};

// Runs grouping, ordering and aggregation with the given scorers.
inline DocumentDraft build_draft(const std::vector<Fragment>& fragments,
                                 const BoundaryScorer& group_scorer,
                                 const OrderingScorer& ordering,
                                 const BoundaryScorer& sentence_scorer,
                                 double threshold = 0.5) {
  DocumentDraft draft;
  for (const auto& grp : group(fragments, group_scorer, threshold)) {
    std::vector<Fragment> ordered = order(grp, ordering);
    draft.groups.push_back(aggregate(ordered, sentence_scorer, threshold));
  }
  for (const Fragment& f : fragments)
    if (!f.actor.empty() && !draft.actor_prefixes.count(f.actor))
      draft.actor_prefixes[f.actor] = "For the " + f.actor + ":";
  return draft;
}

struct SmoothResult {
  std::string document;
  std::vector<std::string> warnings;
};

namespace assemble_detail {

// One sentence per cluster: fragments joined with " and ", duplicate
// sentences dropped, actor prefixes emitted once per contiguous actor block.
inline std::string identity_document(const DocumentDraft& draft) {
  std::string out;
  std::string current_actor;
  std::vector<std::string> seen_sentences;
  for (const auto& grp : draft.groups) {
    std::string group_text;
    for (const auto& cluster : grp) {
      std::string sentence;
      for (const Fragment& f : cluster) {
        std::string piece = f.text;
        if (!sentence.empty()) {
          if (!sentence.empty() && sentence.back() == '.') sentence.pop_back();
          sentence += " and ";
        }
        sentence += piece;
      }
      if (cluster.empty() || sentence.empty()) continue;
      std::string folded = lowercase(sentence);
      bool duplicate = false;
      for (const std::string& s : seen_sentences)
        if (s == folded) duplicate = true;
      if (duplicate) continue;
      seen_sentences.push_back(folded);

      const std::string& actor = cluster.front().actor;
      if (!actor.empty() && actor != current_actor) {
        auto it = draft.actor_prefixes.find(actor);
        if (it != draft.actor_prefixes.end()) {
          if (!group_text.empty()) group_text += " ";
          group_text += it->second;
        }
        current_actor = actor;
      }
      if (!group_text.empty()) group_text += " ";
      group_text += sentence;
    }
    if (!group_text.empty()) {
      if (!out.empty()) out += "\n";
      out += group_text;
    }
  }
  return out;
}

// The <SEP>-marked concatenation sent to the rephrasing model.
inline std::string marked_concatenation(const DocumentDraft& draft) {
  std::string out;
  std::string current_actor;
  for (const auto& grp : draft.groups) {
    std::string group_text;
    for (const auto& cluster : grp) {
      std::string cluster_text;
      for (const Fragment& f : cluster) {
        if (!cluster_text.empty()) cluster_text += " ";
        const std::string& actor = f.actor;
        if (!actor.empty() && actor != current_actor) {
          auto it = draft.actor_prefixes.find(actor);
          if (it != draft.actor_prefixes.end()) cluster_text += it->second + " ";
          current_actor = actor;
        }
        cluster_text += f.text;
      }
      if (cluster_text.empty()) continue;
      if (!group_text.empty()) group_text += " <SEP> ";
      group_text += cluster_text;
    }
    if (group_text.empty()) continue;
    if (!out.empty()) out += "\n<SEP>\n";
    out += group_text;
  }
  return out;
}

}  // namespace assemble_detail

// Produces the final document. With a chat backend the marked concatenation
// is rephrased through the prompt template; without one (or when the backend
// fails) the deterministic identity rendering is returned.
inline SmoothResult smooth(const DocumentDraft& draft, ChatBackend* chat,
                           const ChatParams& params, const std::string& prompt_template) {
  SmoothResult result;
  if (!chat) {
    result.document = assemble_detail::identity_document(draft);
    return result;
  }
  std::string marked = assemble_detail::marked_concatenation(draft);
  if (marked.empty()) return result;  // empty draft, empty document
  try {
    std::vector<ChatMessage> messages{
        {"user", fill_placeholder(prompt_template, "fragments", marked)}};
    result.document = chat->chat(messages, params);
  } catch (const std::exception& e) {
    result.warnings.push_back(std::string("rephrase backend failed, using identity mode: ") +
                              e.what());
    result.document = assemble_detail::identity_document(draft);
  }
  return result;
}

}  // namespace procgraph

#endif  // PROCGRAPH_ASSEMBLE_HPP_
