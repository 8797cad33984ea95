#include <algorithm>
#include <charconv>

#include "sparql_assist/metadata.hpp"

namespace sparql_assist {
namespace {

constexpr std::string_view kVoidQuery = R"(PREFIX void: <http://rdfs.org/ns/void#>
PREFIX void-ext: <http://ldf.fi/void-ext#>
SELECT ?subjectClass ?entities ?prop ?triples ?objectClass ?objectDatatype
WHERE {
  ?cp void:class ?subjectClass ;
      void:entities ?entities ;
      void:propertyPartition ?pp .
  ?pp void:property ?prop .
  OPTIONAL { ?pp void:triples ?triples }
  OPTIONAL { ?pp void-ext:objectClassPartition [ void-ext:class ?objectClass ] }
  OPTIONAL { ?pp void-ext:datatypePartition [ void-ext:datatype ?objectDatatype ] }
}
)";

constexpr std::string_view kExamplesQuery = R"(PREFIX sh: <http://www.w3.org/ns/shacl#>
PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#>
SELECT ?ex ?q1 ?q2 ?q3 ?q4 ?c
WHERE {
  ?ex a sh:SPARQLExecutable .
  OPTIONAL { ?ex sh:select ?q1 }
  OPTIONAL { ?ex sh:construct ?q2 }
  OPTIONAL { ?ex sh:ask ?q3 }
  OPTIONAL { ?ex sh:describe ?q4 }
  OPTIONAL { ?ex rdfs:comment ?c }
}
)";

std::uint64_t count_of(const RdfTerm* term) {
  if (!term) return 0;
  std::uint64_t n = 0;
  const std::string& v = term->value;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
  return ec == std::errc() ? n : 0;
}

}  // namespace

MetadataQueries MetadataQueries::defaults(std::size_t probe_limit) {
  const std::string limit = " LIMIT " + std::to_string(probe_limit);
  MetadataQueries q;
  q.void_query = std::string(kVoidQuery);
  q.examples_query = std::string(kExamplesQuery);
  q.probe_classes = "SELECT ?class (COUNT(?s) AS ?n) WHERE { ?s a ?class } GROUP BY ?class" + limit;
  q.probe_predicates = "SELECT ?p (COUNT(*) AS ?n) WHERE { ?s ?p ?o } GROUP BY ?p" + limit;
  q.probe_classes_distinct = "SELECT DISTINCT ?class WHERE { ?s a ?class }" + limit;
  q.probe_predicates_distinct = "SELECT DISTINCT ?p WHERE { ?s ?p ?o }" + limit;
  return q;
}

std::optional<VoidSchema> fetch_void(QueryExecutor& executor, const EndpointRef& endpoint,
                                     const MetadataQueries& queries) {
  const ResultSet rs = executor.execute_select(endpoint, queries.void_query);
  std::vector<VoidRow> rows = void_rows_from_results(rs);
  if (rows.empty()) return std::nullopt;
  return fold_void_rows(rows);
}

ExampleCatalog fetch_examples(QueryExecutor& executor, const EndpointRef& endpoint,
                              const MetadataQueries& queries) {
  static constexpr std::pair<const char*, QueryForm> kForms[] = {
      {"q1", QueryForm::kSelect},
      {"q2", QueryForm::kConstruct},
      {"q3", QueryForm::kAsk},
      {"q4", QueryForm::kDescribe},
  };
  const ResultSet rs = executor.execute_select(endpoint, queries.examples_query);
  std::map<std::string, QueryExample> by_id;
  for (std::size_t i = 0; i < rs.rows.size(); ++i) {
    const RdfTerm* ex = rs.get(i, "ex");
    if (!ex) continue;
    QueryExample& e = by_id[ex->value];
    e.id = ex->value;
    if (e.query.empty()) {
      for (const auto& [var, form] : kForms) {
        if (const RdfTerm* q = rs.get(i, var); q && !q->value.empty()) {
          e.query = q->value;
          e.form = form;
          break;
        }
      }
    }
    // Several comments (e.g. per language) yield several rows; keep the
    // smallest so the choice does not depend on row order.
    if (const RdfTerm* c = rs.get(i, "c"); c && !c->value.empty()) {
      if (e.description.empty() || c->value < e.description) e.description = c->value;
    }
    if (const RdfTerm* k = rs.get(i, "keyword"); k && !k->value.empty()) {
      if (std::find(e.keywords.begin(), e.keywords.end(), k->value) == e.keywords.end())
        e.keywords.push_back(k->value);
    }
  }
  ExampleCatalog out;
  for (auto& [id, e] : by_id) {
    if (e.query.empty()) continue;
    std::sort(e.keywords.begin(), e.keywords.end());
    out.push_back(std::move(e));
  }
  return out;
}

VoidSchema probe_fallback(QueryExecutor& executor, const EndpointRef& endpoint,
                          const MetadataQueries& queries) {
  auto run = [&](const std::string& counted, const std::string& distinct) {
    try {
      return executor.execute_select(endpoint, counted);
    } catch (const EndpointError&) {
      return executor.execute_select(endpoint, distinct);
    }
  };
  VoidSchema schema;
  schema.provenance = Provenance::kProbed;

  const ResultSet classes = run(queries.probe_classes, queries.probe_classes_distinct);
  std::map<std::string, std::uint64_t> class_counts;
  for (std::size_t i = 0; i < classes.rows.size(); ++i) {
    const RdfTerm* c = classes.get(i, "class");
    if (!c || c->kind != RdfTerm::Kind::kIri) continue;
    auto& n = class_counts[c->value];
    n = std::max(n, count_of(classes.get(i, "n")));
  }
  for (auto& [iri, n] : class_counts) schema.classes.push_back(ClassProfile{iri, n, {}});

  const ResultSet preds = run(queries.probe_predicates, queries.probe_predicates_distinct);
  std::map<std::string, std::uint64_t> pred_counts;
  for (std::size_t i = 0; i < preds.rows.size(); ++i) {
    const RdfTerm* p = preds.get(i, "p");
    if (!p || p->kind != RdfTerm::Kind::kIri) continue;
    auto& n = pred_counts[p->value];
    n = std::max(n, count_of(preds.get(i, "n")));
  }
  for (auto& [iri, n] : pred_counts) schema.global_predicates.push_back(PredicateCount{iri, n});
  return schema;
}

}  // namespace sparql_assist
