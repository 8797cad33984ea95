#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sparql_assist/completion.hpp"
#include "sparql_assist/metadata.hpp"
#include "sparql_assist/prefix_map.hpp"

namespace sparql_assist {

// Deployment settings shared by the service and the CLI. Loaded from a JSON
// file:
//
//   {
//     "port": 8080,
//     "bind": "127.0.0.1",
//     "ttl": 3600,
//     "failureTtl": 60,
//     "timeoutMs": 10000,
//     "probeLimit": 1000,
//     "endpoints": [{"url": "https://...", "label": "UniProt"}],
//     "prefixes": "prefixes.json",
//     "corsOrigins": ["*"],
//     "queries": {"https://...": {"void": "SELECT ..."}}
//   }
//
// Every key is optional. "prefixes" is resolved against the config file's
// directory; its entries extend the built-in well-known map. Query override
// keys: void, examples, probeClasses, probePredicates, probeClassesDistinct,
// probePredicatesDistinct.
struct ServiceConfig {
  int port = 8080;
  std::string bind_address = "127.0.0.1";
  std::chrono::seconds ttl{3600};
  std::optional<std::chrono::seconds> failure_ttl;
  std::optional<std::chrono::milliseconds> request_timeout;
  std::size_t probe_limit = 1000;
  std::vector<KnownEndpoint> endpoints;
  PrefixMap well_known = PrefixMap::well_known();
  std::vector<std::string> cors_origins{"*"};
  std::map<std::string, std::map<std::string, std::string>> query_overrides;

  // Throws std::invalid_argument on an out-of-range port or TTL.
  void validate() const;

  MetadataQueries queries_for(const std::string& endpoint_url) const;
  CacheOptions cache_options() const;
  CompletionOptions completion_options() const;

  // Throws std::runtime_error when the file cannot be read and
  // std::invalid_argument when its content is malformed.
  static ServiceConfig load_file(const std::string& path);
  static ServiceConfig from_json(std::string_view json_text, const std::string& base_dir = ".");
};

}  // namespace sparql_assist
