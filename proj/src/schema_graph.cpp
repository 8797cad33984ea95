#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "json.hpp"
#include "sparql_assist/schema_graph.hpp"

namespace sparql_assist {
namespace {

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  out += '"';
  return out;
}

std::string mermaid_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"')
      out += "#quot;";
    else if (c == '\n')
      out += ' ';
    else
      out += c;
  }
  out += '"';
  return out;
}

std::string with_count(const std::string& label, std::uint64_t n) {
  return label + " (" + std::to_string(n) + ")";
}

// Identifiers for leaf targets: the short label, suffixed when it is already
// taken. Class nodes own their IRIs; unknown targets own "?1", "?2", ... in
// edge order.
std::map<std::string, std::string> leaf_ids(const SchemaGraph& graph, const PrefixMap& prefixes) {
  std::set<std::string> taken;
  for (const GraphNode& n : graph.nodes) taken.insert(n.iri);
  int unknown = 0;
  for (const GraphEdge& e : graph.edges)
    if (e.target_kind == TargetKind::kUnknown) taken.insert("?" + std::to_string(++unknown));
  std::map<std::string, std::string> ids;
  for (const GraphEdge& e : graph.edges) {
    if (e.target_kind != TargetKind::kDatatype || ids.count(e.target)) continue;
    const std::string label = short_label(e.target, prefixes);
    std::string id = label;
    for (int n = 2; !taken.insert(id).second; ++n) id = label + "#" + std::to_string(n);
    ids[e.target] = id;
  }
  return ids;
}

}  // namespace

std::string_view to_string(TargetKind kind) {
  switch (kind) {
    case TargetKind::kClass: return "class";
    case TargetKind::kDatatype: return "datatype";
    case TargetKind::kUnknown: return "unknown";
  }
  return "unknown";
}

SchemaGraph build_graph(const VoidSchema& schema, std::uint64_t min_count) {
  SchemaGraph g;
  std::map<std::string, std::uint64_t> nodes;
  for (const ClassProfile& c : schema.classes) nodes[c.iri] = c.instances;
  for (const ClassProfile& c : schema.classes) {
    for (const PredicateProfile& p : c.predicates) {
      if (p.triples < min_count) continue;
      if (p.object_classes.empty() && p.object_datatypes.empty())
        g.edges.push_back(GraphEdge{c.iri, p.iri, TargetKind::kUnknown, {}, p.triples});
      for (const std::string& oc : p.object_classes) {
        g.edges.push_back(GraphEdge{c.iri, p.iri, TargetKind::kClass, oc, p.triples});
        nodes.try_emplace(oc, 0);
      }
      for (const std::string& dt : p.object_datatypes)
        g.edges.push_back(GraphEdge{c.iri, p.iri, TargetKind::kDatatype, dt, p.triples});
    }
  }
  for (const auto& [iri, n] : nodes) g.nodes.push_back(GraphNode{iri, n});
  std::sort(g.edges.begin(), g.edges.end(), [](const GraphEdge& a, const GraphEdge& b) {
    return std::tie(a.source, a.predicate, a.target_kind, a.target) <
           std::tie(b.source, b.predicate, b.target_kind, b.target);
  });
  return g;
}

std::string short_label(const std::string& iri, const PrefixMap& prefixes) {
  if (auto c = prefixes.compact(iri)) return c->text();
  std::string_view v = iri;
  while (!v.empty() && (v.back() == '/' || v.back() == '#')) v.remove_suffix(1);
  const std::size_t cut = v.find_last_of("/#");
  std::string_view tail = cut == std::string_view::npos ? v : v.substr(cut + 1);
  return tail.empty() ? iri : std::string(tail);
}

std::string export_dot(const SchemaGraph& graph, const PrefixMap& prefixes) {
  std::string out = "digraph schema {\n";
  if (graph.nodes.empty() && graph.edges.empty()) return out + "}\n";
  out += "  node [shape=ellipse];\n";
  for (const GraphNode& n : graph.nodes) {
    out += "  " + dot_quote(n.iri) + " [label=" +
           dot_quote(with_count(short_label(n.iri, prefixes), n.count)) +
           ", tooltip=" + dot_quote(n.iri) + "];\n";
  }
  std::string leaves;
  const auto ids = leaf_ids(graph, prefixes);
  std::set<std::string> declared_leaves;
  std::size_t unknown = 0;
  for (const GraphEdge& e : graph.edges) {
    const std::string attrs = " [label=" +
                              dot_quote(with_count(short_label(e.predicate, prefixes), e.count)) +
                              ", tooltip=" + dot_quote(e.predicate) + "];\n";
    switch (e.target_kind) {
      case TargetKind::kClass:
        out += "  " + dot_quote(e.source) + " -> " + dot_quote(e.target) + attrs;
        break;
      case TargetKind::kDatatype: {
        const std::string& id = ids.at(e.target);
        // Leaves named by their prefixed name need no statement; others carry
        // the full IRI as a tooltip.
        const std::string label = short_label(e.target, prefixes);
        const bool plain = id == label && prefixes.compact(e.target);
        if (!plain && declared_leaves.insert(id).second) {
          leaves += "    " + dot_quote(id) + " [";
          if (id != label) leaves += "label=" + dot_quote(label) + ", ";
          leaves += "tooltip=" + dot_quote(e.target) + "];\n";
        }
        leaves += "    " + dot_quote(e.source) + " -> " + dot_quote(id) + attrs;
        break;
      }
      case TargetKind::kUnknown: {
        const std::string id = "?" + std::to_string(++unknown);
        leaves += "    " + dot_quote(id) + " [label=\"?\"];\n";
        leaves += "    " + dot_quote(e.source) + " -> " + dot_quote(id) + attrs;
        break;
      }
    }
  }
  if (!leaves.empty()) {
    out += "  subgraph leaves {\n    node [shape=box];\n";
    out += leaves;
    out += "  }\n";
  }
  return out + "}\n";
}

std::string export_mermaid(const SchemaGraph& graph, const PrefixMap& prefixes) {
  std::string out = "flowchart LR\n";
  std::map<std::string, std::string> class_ids;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const GraphNode& n = graph.nodes[i];
    const std::string id = "c" + std::to_string(i);
    class_ids[n.iri] = id;
    out += "  %% " + id + " " + n.iri + "\n";
    out += "  " + id + "(" + mermaid_quote(with_count(short_label(n.iri, prefixes), n.count)) + ")\n";
  }
  std::map<std::string, std::string> datatype_ids;
  std::size_t unknown = 0;
  for (const GraphEdge& e : graph.edges) {
    std::string target;
    switch (e.target_kind) {
      case TargetKind::kClass:
        target = class_ids.at(e.target);
        break;
      case TargetKind::kDatatype: {
        auto [it, fresh] = datatype_ids.try_emplace(e.target, "d" + std::to_string(datatype_ids.size()));
        target = it->second;
        if (fresh) {
          out += "  %% " + target + " " + e.target + "\n";
          out += "  " + target + "[" + mermaid_quote(short_label(e.target, prefixes)) + "]\n";
        }
        break;
      }
      case TargetKind::kUnknown:
        target = "u" + std::to_string(unknown++);
        out += "  " + target + "[\"?\"]\n";
        break;
    }
    out += "  %% " + e.predicate + "\n";
    out += "  " + class_ids.at(e.source) + " -->|" +
           mermaid_quote(with_count(short_label(e.predicate, prefixes), e.count)) + "| " + target +
           "\n";
  }
  return out;
}

std::string export_json(const SchemaGraph& graph, const PrefixMap& prefixes) {
  using Json = nlohmann::ordered_json;
  Json nodes = Json::array();
  for (const GraphNode& n : graph.nodes) {
    nodes.push_back(Json{{"iri", n.iri}, {"label", short_label(n.iri, prefixes)}, {"count", n.count}});
  }
  Json edges = Json::array();
  for (const GraphEdge& e : graph.edges) {
    Json edge = Json::object();
    edge["source"] = e.source;
    edge["predicate"] = e.predicate;
    edge["target"] = e.target_kind == TargetKind::kUnknown ? Json(nullptr) : Json(e.target);
    edge["targetKind"] = std::string(to_string(e.target_kind));
    edge["count"] = e.count;
    edges.push_back(std::move(edge));
  }
  Json doc = Json::object();
  doc["nodes"] = std::move(nodes);
  doc["edges"] = std::move(edges);
  return doc.dump(-1, ' ', false, Json::error_handler_t::replace);
}

}  // namespace sparql_assist
