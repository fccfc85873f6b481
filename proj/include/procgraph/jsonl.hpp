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
// JSONL storage: one {id, document, graph} object per line. This schema is
// shared by every command and fixture in the repository.

#ifndef PROCGRAPH_JSONL_HPP_
#define PROCGRAPH_JSONL_HPP_

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "procgraph/graph.hpp"

namespace procgraph {

using Json = nlohmann::json;

struct DatasetRecord {
  std::string id;
  std::string document;
  ProceduralGraph graph;
};

inline Json to_json(const Node& n) {
  Json j{{"id", n.id}, {"kind", std::string(to_string(n.kind))}};
  if (!n.text.empty()) j["text"] = n.text;
  if (!n.actor.empty()) j["actor"] = n.actor;
  if (n.gateway_type) j["gateway_type"] = std::string(to_string(*n.gateway_type));
  if (n.gateway_role) j["gateway_role"] = std::string(to_string(*n.gateway_role));
  if (!n.pair_id.empty()) j["pair_id"] = n.pair_id;
  return j;
}

inline Json to_json(const Edge& e) {
  Json j{{"source", e.source},
         {"target", e.target},
         {"kind", std::string(to_string(e.kind))}};
  if (!e.condition.empty()) j["condition"] = e.condition;
  return j;
}

inline Json to_json(const ProceduralGraph& g) {
  Json nodes = Json::array(), edges = Json::array();
  for (const Node& n : g.nodes) nodes.push_back(to_json(n));
  for (const Edge& e : g.edges) edges.push_back(to_json(e));
  return Json{{"nodes", nodes}, {"edges", edges}};
}

inline NodeKind node_kind_from(const std::string& s) {
  if (s == "Start") return NodeKind::Start;
  if (s == "End") return NodeKind::End;
  if (s == "Action") return NodeKind::Action;
  if (s == "Gateway") return NodeKind::Gateway;
  if (s == "DataConstraint") return NodeKind::DataConstraint;
  if (s == "ActionConstraint") return NodeKind::ActionConstraint;
  throw Error("bad-kind", "unknown node kind: " + s);
}

inline GatewayType gateway_type_from(const std::string& s) {
  if (s == "Exclusive") return GatewayType::Exclusive;
  if (s == "Inclusive") return GatewayType::Inclusive;
  if (s == "Parallel") return GatewayType::Parallel;
  throw Error("bad-kind", "unknown gateway type: " + s);
}

inline EdgeKind edge_kind_from(const std::string& s) {
  if (s == "SequenceFlow") return EdgeKind::SequenceFlow;
  if (s == "ConditionFlow") return EdgeKind::ConditionFlow;
  if (s == "ConstraintFlow") return EdgeKind::ConstraintFlow;
  throw Error("bad-kind", "unknown edge kind: " + s);
}

inline ProceduralGraph graph_from_json(const Json& j) {
  ProceduralGraph g;
  for (const Json& nj : j.value("nodes", Json::array())) {
    Node n;
    n.id = nj.at("id").get<std::string>();
    n.kind = node_kind_from(nj.at("kind").get<std::string>());
    n.text = nj.value("text", "");
    n.actor = nj.value("actor", "");
    if (nj.contains("gateway_type"))
      n.gateway_type = gateway_type_from(nj["gateway_type"].get<std::string>());
    if (nj.contains("gateway_role"))
      n.gateway_role = nj["gateway_role"].get<std::string>() == "Branch"
                           ? GatewayRole::Branch
                           : GatewayRole::Merge;
    n.pair_id = nj.value("pair_id", "");
    g.nodes.push_back(std::move(n));
  }
  for (const Json& ej : j.value("edges", Json::array())) {
    Edge e;
    e.source = ej.at("source").get<std::string>();
    e.target = ej.at("target").get<std::string>();
    e.kind = edge_kind_from(ej.at("kind").get<std::string>());
    e.condition = ej.value("condition", "");
    g.edges.push_back(std::move(e));
  }
  return g;
}

inline Json to_json(const DatasetRecord& r) {
  return Json{{"id", r.id}, {"document", r.document}, {"graph", to_json(r.graph)}};
}

inline DatasetRecord record_from_json(const Json& j) {
  DatasetRecord r;
  r.id = j.at("id").is_string() ? j.at("id").get<std::string>()
                                : j.at("id").dump();
  r.document = j.value("document", "");
  if (j.contains("graph")) r.graph = graph_from_json(j["graph"]);
  return r;
}

struct JsonlError {
  size_t line = 0;
  std::string message;
};

// Reads a whole JSONL stream; malformed lines are collected, not fatal.
inline std::vector<DatasetRecord> read_jsonl(std::istream& in,
                                             std::vector<JsonlError>* errors = nullptr) {
  std::vector<DatasetRecord> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      out.push_back(record_from_json(Json::parse(line)));
    } catch (const std::exception& e) {
      if (errors) errors->push_back({line_no, e.what()});
    }
  }
  return out;
}

inline std::vector<DatasetRecord> read_jsonl_file(const std::string& path,
                                                  std::vector<JsonlError>* errors = nullptr) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open " + path);
  return read_jsonl(in, errors);
}

inline void write_jsonl(std::ostream& out, const std::vector<DatasetRecord>& records) {
  for (const DatasetRecord& r : records) out << to_json(r).dump() << "\n";
}

}  // namespace procgraph

#endif  // PROCGRAPH_JSONL_HPP_
