#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <unistd.h>

#include "fixtures.hpp"
#include "json.hpp"
#include "sparql_assist/schema_graph.hpp"

namespace sparql_assist {
namespace {

using testing::kEx;

std::size_t expected_edges(const VoidSchema& s) {
  std::size_t n = 0;
  for (const ClassProfile& c : s.classes)
    for (const PredicateProfile& p : c.predicates)
      n += std::max<std::size_t>(1, p.object_classes.size() + p.object_datatypes.size());
  return n;
}

PrefixMap with_ex() {
  PrefixMap p = PrefixMap::well_known();
  p.declare("ex", kEx);
  return p;
}

TEST(BuildGraph, PersonIsOneNodeTwoEdges) {
  const SchemaGraph g = build_graph(fold_void_rows(testing::person_void_rows()));
  ASSERT_EQ(g.nodes.size(), 1u);
  EXPECT_EQ(g.nodes[0], (GraphNode{kEx + "Person", 25}));
  ASSERT_EQ(g.edges.size(), 2u);
  EXPECT_EQ(g.edges[0], (GraphEdge{kEx + "Person", kEx + "knows", TargetKind::kClass, kEx + "Person", 40}));
  EXPECT_EQ(g.edges[1],
            (GraphEdge{kEx + "Person", kEx + "name", TargetKind::kDatatype, testing::kXsdString, 100}));
}

TEST(BuildGraph, EmptySchema) {
  const SchemaGraph g = build_graph(VoidSchema{});
  EXPECT_TRUE(g.nodes.empty());
  EXPECT_TRUE(g.edges.empty());
  EXPECT_EQ(export_dot(g), "digraph schema {\n}\n");
  EXPECT_EQ(export_json(g), R"({"nodes":[],"edges":[]})");
  EXPECT_EQ(export_mermaid(g), "flowchart LR\n");
}

TEST(BuildGraph, ProbedSchemaIsNodesOnly) {
  VoidSchema s;
  s.provenance = Provenance::kProbed;
  s.classes = {{kEx + "A", 10, {}}, {kEx + "B", 3, {}}, {kEx + "C", 0, {}}};
  s.global_predicates = {{kEx + "p", 12}};
  const SchemaGraph g = build_graph(s);
  EXPECT_EQ(g.nodes.size(), 3u);
  EXPECT_TRUE(g.edges.empty());
}

TEST(BuildGraph, UnknownTargetWhenNoObjectInfo) {
  const SchemaGraph g = build_graph(fold_void_rows({{kEx + "A", 1, kEx + "p", 2, {}, {}}}));
  ASSERT_EQ(g.edges.size(), 1u);
  EXPECT_EQ(g.edges[0].target_kind, TargetKind::kUnknown);
  EXPECT_EQ(export_json(g),
            R"({"nodes":[{"iri":"http://example.org/A","label":"A","count":1}],"edges":[{"source":)"
            R"("http://example.org/A","predicate":"http://example.org/p","target":null,)"
            R"("targetKind":"unknown","count":2}]})");
}

TEST(BuildGraph, MinCountDropsLightEdges) {
  const VoidSchema s = fold_void_rows(testing::person_void_rows());
  EXPECT_EQ(build_graph(s, 50).edges.size(), 1u);
  EXPECT_EQ(build_graph(s, 50).nodes.size(), 1u);
  EXPECT_EQ(build_graph(s, 101).edges.size(), 0u);
}

TEST(Export, GoldenDot) {
  const SchemaGraph g = build_graph(fold_void_rows(testing::person_void_rows()));
  EXPECT_EQ(export_dot(g, with_ex()), testing::read_file(std::string(DATA_DIR) + "/person.dot"));
}

TEST(Export, DotStatementsForPerson) {
  const std::string dot = export_dot(build_graph(fold_void_rows(testing::person_void_rows())), with_ex());
  std::istringstream in(dot);
  std::string line;
  int node_statements = 0, edge_statements = 0;
  while (std::getline(in, line)) {
    if (line.find("->") != std::string::npos)
      ++edge_statements;
    else if (line.find("[label=") != std::string::npos)
      ++node_statements;
  }
  EXPECT_EQ(node_statements, 1);
  EXPECT_EQ(edge_statements, 2);
  EXPECT_NE(dot.find("ex:knows (40)"), std::string::npos);
  EXPECT_NE(dot.find("\"xsd:string\""), std::string::npos);
}

TEST(Export, JsonShape) {
  const auto doc = nlohmann::json::parse(export_json(build_graph(fold_void_rows(testing::person_void_rows())), with_ex()));
  ASSERT_EQ(doc["nodes"].size(), 1u);
  EXPECT_EQ(doc["nodes"][0]["label"], "ex:Person");
  EXPECT_EQ(doc["nodes"][0]["count"], 25);
  ASSERT_EQ(doc["edges"].size(), 2u);
  EXPECT_EQ(doc["edges"][1]["targetKind"], "datatype");
  EXPECT_EQ(doc["edges"][1]["target"], testing::kXsdString);
}

TEST(Export, MermaidMarksLeaves) {
  const std::string m = export_mermaid(build_graph(fold_void_rows(testing::person_void_rows())), with_ex());
  EXPECT_NE(m.find("c0(\"ex:Person (25)\")"), std::string::npos);
  EXPECT_NE(m.find("d0[\"xsd:string\"]"), std::string::npos);
  EXPECT_NE(m.find("c0 -->|\"ex:knows (40)\"| c0"), std::string::npos);
}

TEST(Export, ShortLabels) {
  EXPECT_EQ(short_label("http://www.w3.org/2001/XMLSchema#int", PrefixMap::well_known()), "xsd:int");
  EXPECT_EQ(short_label("http://other.example/a/b/", PrefixMap{}), "b");
  EXPECT_EQ(short_label("http://other.example/t#frag", PrefixMap{}), "frag");
  EXPECT_EQ(short_label("urn:x", PrefixMap{}), "urn:x");
}

TEST(Export, DatatypeLeavesSharingALabelStayDistinct) {
  const VoidSchema s = fold_void_rows({{kEx + "A", 1, kEx + "p", 2, {}, std::string("http://one.example/date")},
                                       {kEx + "A", 1, kEx + "q", 2, {}, std::string("http://two.example/date")}});
  const std::string dot = export_dot(build_graph(s));
  EXPECT_NE(dot.find("\"date\" [tooltip=\"http://one.example/date\"]"), std::string::npos);
  EXPECT_NE(dot.find("\"date#2\" [label=\"date\", tooltip=\"http://two.example/date\"]"), std::string::npos);
}

TEST(Properties, CountsAndDeterminism) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const VoidSchema s = testing::random_schema(rng, 20, kEx);
    const SchemaGraph g = build_graph(s);
    ASSERT_EQ(g.nodes.size(), s.classes.size());
    ASSERT_EQ(g.edges.size(), expected_edges(s));
    const SchemaGraph again = build_graph(fold_void_rows(flatten_void_schema(s)));
    ASSERT_EQ(export_dot(g), export_dot(again));
    ASSERT_EQ(export_json(g), export_json(again));
    ASSERT_EQ(export_mermaid(g), export_mermaid(again));
  }
}

TEST(Properties, ExportsAreInjective) {
  std::mt19937 rng(17);
  std::map<std::string, SchemaGraph> by_dot, by_json, by_mermaid;
  for (int trial = 0; trial < 300; ++trial) {
    const SchemaGraph g = build_graph(testing::random_schema(rng, 4, kEx));
    for (auto [map, text] : {std::pair{&by_dot, export_dot(g)}, std::pair{&by_json, export_json(g)},
                             std::pair{&by_mermaid, export_mermaid(g)}}) {
      auto [it, fresh] = map->emplace(text, g);
      ASSERT_TRUE(fresh || it->second == g) << text;
    }
  }
}

TEST(Properties, DotParsesUnderPydot) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("schema_graph_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::mt19937 rng(23);
  std::vector<std::pair<fs::path, SchemaGraph>> files;
  for (int trial = 0; trial < 20; ++trial) {
    const SchemaGraph g = build_graph(testing::random_schema(rng, 20, trial % 2 ? kEx : "http://x.example/a b/"));
    const fs::path path = dir / ("g" + std::to_string(trial) + ".dot");
    std::ofstream(path, std::ios::binary) << export_dot(g);
    files.emplace_back(path, g);
  }
  std::string cmd = std::string(PYTHON_EXECUTABLE) + " " + DOT_CHECK_SCRIPT;
  for (const auto& [path, g] : files) cmd += " " + path.string();
  FILE* pipe = ::popen(cmd.c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  std::string output;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) output.append(buf, n);
  EXPECT_EQ(::pclose(pipe), 0) << output;
  std::istringstream in(output);
  for (const auto& [path, g] : files) {
    std::string name;
    std::size_t nodes = 0, edges = 0;
    ASSERT_TRUE(in >> name >> nodes >> edges) << output;
    EXPECT_EQ(name, path.string());
    EXPECT_EQ(nodes, g.nodes.size());
    EXPECT_EQ(edges, g.edges.size());
  }
  fs::remove_all(dir);
}

}  // namespace
}  // namespace sparql_assist
