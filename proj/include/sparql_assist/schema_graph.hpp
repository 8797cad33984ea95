#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sparql_assist/metadata.hpp"
#include "sparql_assist/prefix_map.hpp"

namespace sparql_assist {

struct GraphNode {
  std::string iri;
  std::uint64_t count = 0;
  friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

enum class TargetKind { kClass, kDatatype, kUnknown };
std::string_view to_string(TargetKind kind);

struct GraphEdge {
  std::string source;
  std::string predicate;
  TargetKind target_kind = TargetKind::kUnknown;
  std::string target;  // empty when the target is unknown
  std::uint64_t count = 0;
  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

// Nodes ascending by IRI; edges ascending by (source, predicate, kind, target).
struct SchemaGraph {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;
  friend bool operator==(const SchemaGraph&, const SchemaGraph&) = default;
};

// Edges with a triple count below `min_count` are dropped. Object classes with
// no profile of their own become nodes with count 0.
SchemaGraph build_graph(const VoidSchema& schema, std::uint64_t min_count = 0);

// Prefixed name when a namespace matches, otherwise the last path or fragment
// segment of the IRI.
std::string short_label(const std::string& iri, const PrefixMap& prefixes);

std::string export_dot(const SchemaGraph& graph, const PrefixMap& prefixes = PrefixMap::well_known());
std::string export_mermaid(const SchemaGraph& graph, const PrefixMap& prefixes = PrefixMap::well_known());
std::string export_json(const SchemaGraph& graph, const PrefixMap& prefixes = PrefixMap::well_known());

}  // namespace sparql_assist
