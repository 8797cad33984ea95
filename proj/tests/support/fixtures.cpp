#include "fixtures.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sparql_assist::testing {

std::vector<VoidRow> taxon_void_rows() {
  return {
      {kUp + "Taxon", 1000, kUp + "scientificName", 900, std::nullopt, kXsdString},
      {kUp + "Taxon", 1000, kUp + "rank", 500, std::nullopt, std::nullopt},
      {kUp + "Protein", 2000, kUp + "mnemonic", 1900, std::nullopt, kXsdString},
  };
}

ExampleCatalog five_examples() {
  return {
      {kEx + "examples/1", "SELECT ?taxon WHERE { ?taxon a <" + kUp + "Taxon> }", QueryForm::kSelect,
       "List all taxa", {}},
      {kEx + "examples/2", "SELECT ?p WHERE { ?p a <" + kUp + "Protein> } LIMIT 10",
       QueryForm::kSelect, "First ten proteins", {}},
      {kEx + "examples/3",
       "SELECT ?name WHERE { ?t <" + kUp + "scientificName> ?name }", QueryForm::kSelect,
       "Scientific names of every Taxon", {}},
      {kEx + "examples/4", "CONSTRUCT { ?s ?p ?o } WHERE { ?s ?p ?o } LIMIT 5",
       QueryForm::kConstruct, "Copy a few triples", {}},
      {kEx + "examples/5", "ASK { ?s a <" + kUp + "Protein> }", QueryForm::kAsk,
       "Are there proteins?", {}},
  };
}

void register_taxon_fixture(FixtureEndpoint& fixture) {
  fixture.register_result(Matcher::template_id(TemplateId::kVoid), void_results(taxon_void_rows()));
  fixture.register_result(Matcher::template_id(TemplateId::kExamples), examples_results(five_examples()));
}

std::string taxon_query() {
  return "PREFIX up: <" + kUp + "> SELECT ?species WHERE { ?species a up:Taxon . ?species ";
}

std::vector<VoidRow> person_void_rows() {
  return {
      {kEx + "Person", 25, kEx + "name", 100, std::nullopt, kXsdString},
      {kEx + "Person", 25, kEx + "knows", 40, kEx + "Person", std::nullopt},
  };
}

VoidSchema random_schema(std::mt19937& rng, std::size_t max_classes, const std::string& ns) {
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  const std::size_t n_classes = pick(1, max_classes);
  std::vector<std::string> classes;
  for (std::size_t i = 0; i < n_classes; ++i) classes.push_back(ns + "C" + std::to_string(i));
  const std::vector<std::string> datatypes = {
      "http://www.w3.org/2001/XMLSchema#string", "http://www.w3.org/2001/XMLSchema#integer",
      "http://www.w3.org/2001/XMLSchema#date"};

  std::vector<VoidRow> rows;
  for (const std::string& c : classes) {
    const std::uint64_t entities = pick(0, 5000);
    const std::size_t n_preds = pick(1, 6);
    std::set<std::size_t> used;
    for (std::size_t k = 0; k < n_preds; ++k) {
      const std::size_t p = pick(0, 14);
      if (!used.insert(p).second) continue;
      const std::string predicate = ns + "p" + std::to_string(p);
      const std::uint64_t triples = pick(0, 10000);
      const std::size_t n_oc = pick(0, 2);
      const std::size_t n_dt = pick(0, 1);
      if (n_oc == 0 && n_dt == 0) {
        rows.push_back({c, entities, predicate, triples, std::nullopt, std::nullopt});
        continue;
      }
      std::set<std::string> targets;
      for (std::size_t i = 0; i < n_oc; ++i) targets.insert(classes[pick(0, classes.size() - 1)]);
      for (const std::string& oc : targets) rows.push_back({c, entities, predicate, triples, oc, std::nullopt});
      if (n_dt) rows.push_back({c, entities, predicate, triples, std::nullopt, datatypes[pick(0, 2)]});
    }
  }
  return fold_void_rows(rows);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> load_corpus(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> out;
  std::string line, current;
  while (std::getline(in, line)) {
    if (line == "---") {
      if (!current.empty()) out.push_back(current);
      current.clear();
      continue;
    }
    current += line + "\n";
  }
  if (!current.empty() && current.find_first_not_of(" \n") != std::string::npos) out.push_back(current);
  return out;
}

}  // namespace sparql_assist::testing
