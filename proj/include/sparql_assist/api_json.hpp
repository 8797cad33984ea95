#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "sparql_assist/completion.hpp"
#include "sparql_assist/metadata.hpp"
#include "sparql_assist/schema_graph.hpp"

// JSON bodies shared by the HTTP service and the CLI, so both emit the same
// bytes. Every document ends with a newline.
namespace sparql_assist::api {

std::string completion_json(const CompletionList& list);
std::string examples_json(const ExampleCatalog& catalog);
// `snapshot` is nullopt for an endpoint that was never fetched.
std::string status_json(const std::optional<CachedMetadata>& snapshot);
std::string error_json(std::string_view code, std::string_view message);

enum class SchemaFormat { kJson, kDot, kMermaid };
std::optional<SchemaFormat> parse_schema_format(std::string_view name);
std::string schema_body(const SchemaGraph& graph, SchemaFormat format, const PrefixMap& prefixes);
std::string_view content_type(SchemaFormat format);

// 1-based line and column, the column counted in Unicode scalar values, to a
// byte offset. The column may point one past the last character of its line.
// nullopt when out of range.
std::optional<std::size_t> byte_offset(std::string_view text, std::size_t line, std::size_t column);

std::string iso8601_utc(std::chrono::system_clock::time_point t);

}  // namespace sparql_assist::api
