#include <algorithm>
#include <cctype>
#include <charconv>

#include "sparql_assist/metadata.hpp"

namespace sparql_assist {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::kVoid: return "void";
    case Provenance::kProbed: return "probed";
    case Provenance::kNone: return "none";
  }
  return "none";
}

const PredicateProfile* ClassProfile::find_predicate(std::string_view predicate) const {
  auto it = std::lower_bound(predicates.begin(), predicates.end(), predicate,
                             [](const PredicateProfile& p, std::string_view v) { return p.iri < v; });
  return it != predicates.end() && it->iri == predicate ? &*it : nullptr;
}

const ClassProfile* VoidSchema::find_class(std::string_view iri) const {
  auto it = std::lower_bound(classes.begin(), classes.end(), iri,
                             [](const ClassProfile& c, std::string_view v) { return c.iri < v; });
  return it != classes.end() && it->iri == iri ? &*it : nullptr;
}

std::map<std::string, std::uint64_t> VoidSchema::all_predicates() const {
  std::map<std::string, std::uint64_t> out;
  for (const ClassProfile& c : classes) {
    for (const PredicateProfile& p : c.predicates) out[p.iri] += p.triples;
  }
  for (const PredicateCount& p : global_predicates) {
    auto& n = out[p.iri];
    n = std::max(n, p.triples);
  }
  return out;
}

VoidSchema fold_void_rows(const std::vector<VoidRow>& rows) {
  struct Partial {
    std::uint64_t instances = 0;
    std::map<std::string, PredicateProfile> predicates;
  };
  std::map<std::string, Partial> classes;
  for (const VoidRow& row : rows) {
    Partial& cls = classes[row.subject_class];
    cls.instances = std::max(cls.instances, row.entities);
    PredicateProfile& p = cls.predicates[row.predicate];
    p.iri = row.predicate;
    p.triples = std::max(p.triples, row.triples.value_or(0));
    if (row.object_class) p.object_classes.insert(*row.object_class);
    if (row.object_datatype) p.object_datatypes.insert(*row.object_datatype);
  }
  VoidSchema schema;
  schema.provenance = Provenance::kVoid;
  for (auto& [iri, partial] : classes) {
    ClassProfile profile{iri, partial.instances, {}};
    for (auto& [_, p] : partial.predicates) profile.predicates.push_back(std::move(p));
    schema.classes.push_back(std::move(profile));
  }
  return schema;
}

std::vector<VoidRow> flatten_void_schema(const VoidSchema& schema) {
  std::vector<VoidRow> rows;
  for (const ClassProfile& c : schema.classes) {
    for (const PredicateProfile& p : c.predicates) {
      VoidRow base{c.iri, c.instances, p.iri, p.triples, std::nullopt, std::nullopt};
      if (p.object_classes.empty() && p.object_datatypes.empty()) rows.push_back(base);
      for (const std::string& oc : p.object_classes) {
        VoidRow r = base;
        r.object_class = oc;
        rows.push_back(std::move(r));
      }
      for (const std::string& dt : p.object_datatypes) {
        VoidRow r = base;
        r.object_datatype = dt;
        rows.push_back(std::move(r));
      }
    }
  }
  return rows;
}

namespace {

std::uint64_t to_count(const RdfTerm* term) {
  if (!term) return 0;
  std::uint64_t n = 0;
  const std::string& v = term->value;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
  if (ec != std::errc()) {
    // Decimal or double renderings such as "12.0" or "1.2E1".
    try {
      const double d = std::stod(v);
      return d > 0 ? static_cast<std::uint64_t>(d) : 0;
    } catch (...) {
      return 0;
    }
  }
  return n;
}

std::optional<std::string> iri_of(const RdfTerm* term) {
  if (!term || term->kind != RdfTerm::Kind::kIri) return std::nullopt;
  return term->value;
}

}  // namespace

std::vector<VoidRow> void_rows_from_results(const ResultSet& results) {
  std::vector<VoidRow> rows;
  for (std::size_t i = 0; i < results.rows.size(); ++i) {
    auto cls = iri_of(results.get(i, "subjectClass"));
    auto prop = iri_of(results.get(i, "prop"));
    if (!cls || !prop) continue;
    VoidRow row;
    row.subject_class = std::move(*cls);
    row.predicate = std::move(*prop);
    row.entities = to_count(results.get(i, "entities"));
    if (const RdfTerm* t = results.get(i, "triples")) row.triples = to_count(t);
    row.object_class = iri_of(results.get(i, "objectClass"));
    row.object_datatype = iri_of(results.get(i, "objectDatatype"));
    rows.push_back(std::move(row));
  }
  return rows;
}

ExampleCatalog filter_examples(const ExampleCatalog& catalog, std::string_view needle) {
  auto lower = [](std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
  };
  const std::string n = lower(needle);
  ExampleCatalog out;
  for (const QueryExample& ex : catalog) {
    if (n.empty() || lower(ex.description).find(n) != std::string::npos ||
        lower(ex.query).find(n) != std::string::npos)
      out.push_back(ex);
  }
  return out;
}

}  // namespace sparql_assist
