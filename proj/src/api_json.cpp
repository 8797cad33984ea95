#include <ctime>

#include "json.hpp"
#include "sparql_assist/api_json.hpp"
#include "utf8.hpp"

namespace sparql_assist::api {
namespace {

using Json = nlohmann::ordered_json;

std::string dump(const Json& j) {
  return j.dump(-1, ' ', false, Json::error_handler_t::replace) + "\n";
}

}  // namespace

std::string completion_json(const CompletionList& list) {
  Json items = Json::array();
  for (const CompletionItem& item : list.items) {
    Json j = Json::object();
    j["value"] = item.value;
    j["label"] = item.label;
    j["kind"] = std::string(to_string(item.kind));
    j["score"] = item.score;
    j["insertText"] = item.insert_text;
    if (item.additional_edit) {
      j["additionalEdit"] = Json{{"line", item.additional_edit->line},
                                 {"column", item.additional_edit->column},
                                 {"text", item.additional_edit->text}};
    }
    items.push_back(std::move(j));
  }
  Json doc = Json::object();
  doc["items"] = std::move(items);
  doc["truncated"] = list.truncated;
  doc["provenance"] = std::string(to_string(list.provenance));
  return dump(doc);
}

std::string examples_json(const ExampleCatalog& catalog) {
  Json out = Json::array();
  for (const QueryExample& ex : catalog) {
    Json j = Json::object();
    j["id"] = ex.id;
    j["form"] = std::string(to_string(ex.form));
    j["description"] = ex.description;
    j["query"] = ex.query;
    j["keywords"] = ex.keywords;
    out.push_back(std::move(j));
  }
  return dump(out);
}

std::string status_json(const std::optional<CachedMetadata>& snapshot) {
  Json doc = Json::object();
  if (!snapshot) {
    doc["state"] = "absent";
    doc["provenance"] = "none";
    doc["fetchedAt"] = nullptr;
    doc["counts"] = Json{{"classes", 0}, {"predicates", 0}, {"examples", 0}};
    return dump(doc);
  }
  doc["state"] = std::string(to_string(snapshot->state));
  doc["provenance"] = std::string(to_string(snapshot->provenance()));
  doc["fetchedAt"] = iso8601_utc(snapshot->fetched_at);
  doc["counts"] = Json{{"classes", snapshot->schema.classes.size()},
                       {"predicates", snapshot->schema.all_predicates().size()},
                       {"examples", snapshot->examples.size()}};
  if (!snapshot->error.empty()) doc["error"] = snapshot->error;
  return dump(doc);
}

std::string error_json(std::string_view code, std::string_view message) {
  Json doc = Json::object();
  doc["error"] = Json{{"code", std::string(code)}, {"message", std::string(message)}};
  return dump(doc);
}

std::optional<SchemaFormat> parse_schema_format(std::string_view name) {
  if (name == "json") return SchemaFormat::kJson;
  if (name == "dot") return SchemaFormat::kDot;
  if (name == "mermaid") return SchemaFormat::kMermaid;
  return std::nullopt;
}

std::string schema_body(const SchemaGraph& graph, SchemaFormat format, const PrefixMap& prefixes) {
  switch (format) {
    case SchemaFormat::kJson: return export_json(graph, prefixes) + "\n";
    case SchemaFormat::kDot: return export_dot(graph, prefixes);
    case SchemaFormat::kMermaid: return export_mermaid(graph, prefixes);
  }
  return {};
}

std::string_view content_type(SchemaFormat format) {
  switch (format) {
    case SchemaFormat::kJson: return "application/json";
    case SchemaFormat::kDot: return "text/vnd.graphviz";
    case SchemaFormat::kMermaid: return "text/plain";
  }
  return "text/plain";
}

std::optional<std::size_t> byte_offset(std::string_view text, std::size_t line, std::size_t column) {
  if (line == 0 || column == 0) return std::nullopt;
  std::size_t pos = 0;
  for (std::size_t l = 1; l < line; ++l) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) return std::nullopt;
    pos = nl + 1;
  }
  for (std::size_t c = 1; c < column; ++c) {
    if (pos >= text.size() || text[pos] == '\n') return std::nullopt;
    const std::size_t n = utf8::sequence_length(text, pos);
    pos += n == 0 ? 1 : n;
  }
  return pos;
}

std::string iso8601_utc(std::chrono::system_clock::time_point t) {
  const std::time_t secs = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace sparql_assist::api
