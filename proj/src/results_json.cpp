#include <algorithm>

#include "json.hpp"
#include "sparql_assist/protocol.hpp"

namespace sparql_assist {

using Json = nlohmann::ordered_json;

const RdfTerm* ResultSet::get(std::size_t row, const std::string& var) const {
  if (row >= rows.size()) return nullptr;
  auto it = rows[row].find(var);
  return it == rows[row].end() ? nullptr : &it->second;
}

namespace {

RdfTerm decode_term(const std::string& var, const Json& j) {
  if (!j.is_object()) throw FormatError("binding for '" + var + "' is not an object");
  auto type = j.find("type");
  auto value = j.find("value");
  if (type == j.end() || !type->is_string() || value == j.end() || !value->is_string())
    throw FormatError("binding for '" + var + "' lacks a string 'type' or 'value'");
  const std::string& t = type->get_ref<const std::string&>();
  std::string v = value->get<std::string>();
  if (t == "uri") return RdfTerm::iri(std::move(v));
  if (t == "bnode") return RdfTerm::blank(std::move(v));
  if (t == "literal" || t == "typed-literal") {
    std::string datatype, lang;
    if (auto d = j.find("datatype"); d != j.end() && d->is_string()) datatype = d->get<std::string>();
    if (auto l = j.find("xml:lang"); l != j.end() && l->is_string()) lang = l->get<std::string>();
    return RdfTerm::literal(std::move(v), std::move(datatype), std::move(lang));
  }
  throw FormatError("binding for '" + var + "' has unknown term type '" + t + "'");
}

}  // namespace

ResultSet parse_results_json(std::string_view bytes, std::size_t max_bytes) {
  if (bytes.size() > max_bytes)
    throw FormatError("result document of " + std::to_string(bytes.size()) +
                      " bytes exceeds the limit of " + std::to_string(max_bytes));
  const Json doc = Json::parse(bytes, nullptr, false);
  if (doc.is_discarded()) throw FormatError("result document is not valid JSON");
  if (!doc.is_object()) throw FormatError("result document is not a JSON object");
  auto head = doc.find("head");
  auto results = doc.find("results");
  if (head == doc.end() || !head->is_object()) throw FormatError("missing 'head' object");
  if (results == doc.end() || !results->is_object()) throw FormatError("missing 'results' object");

  ResultSet rs;
  if (auto vars = head->find("vars"); vars != head->end()) {
    if (!vars->is_array()) throw FormatError("'head.vars' is not an array");
    for (const Json& v : *vars) {
      if (!v.is_string()) throw FormatError("'head.vars' holds a non-string");
      rs.variables.push_back(v.get<std::string>());
    }
  }
  auto bindings = results->find("bindings");
  if (bindings == results->end() || !bindings->is_array())
    throw FormatError("'results.bindings' is not an array");
  for (const Json& row : *bindings) {
    if (!row.is_object()) throw FormatError("binding row is not an object");
    Binding b;
    for (const auto& [var, term] : row.items()) {
      if (std::find(rs.variables.begin(), rs.variables.end(), var) == rs.variables.end())
        rs.variables.push_back(var);
      b.emplace(var, decode_term(var, term));
    }
    rs.rows.push_back(std::move(b));
  }
  return rs;
}

std::string to_results_json(const ResultSet& results) {
  Json vars = Json::array();
  for (const auto& v : results.variables) vars.push_back(v);
  Json rows = Json::array();
  for (const Binding& b : results.rows) {
    Json row = Json::object();
    for (const auto& [var, term] : b) {
      Json t = Json::object();
      switch (term.kind) {
        case RdfTerm::Kind::kIri: t["type"] = "uri"; break;
        case RdfTerm::Kind::kLiteral: t["type"] = "literal"; break;
        case RdfTerm::Kind::kBlankNode: t["type"] = "bnode"; break;
      }
      t["value"] = term.value;
      if (!term.datatype.empty()) t["datatype"] = term.datatype;
      if (!term.language.empty()) t["xml:lang"] = term.language;
      row[var] = std::move(t);
    }
    rows.push_back(std::move(row));
  }
  Json doc = Json::object();
  doc["head"] = Json{{"vars", std::move(vars)}};
  doc["results"] = Json{{"bindings", std::move(rows)}};
  return doc.dump();
}

}  // namespace sparql_assist
