#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sparql_assist/service_config.hpp"

namespace sparql_assist {
namespace {

using Json = nlohmann::json;

constexpr std::string_view kOverrideKeys[] = {"void",          "examples",
                                              "probeClasses",  "probePredicates",
                                              "probeClassesDistinct", "probePredicatesDistinct"};

template <typename T>
T get_or(const Json& doc, const char* key, T fallback) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const Json::exception&) {
    throw std::invalid_argument(std::string("config key '") + key + "' has the wrong type");
  }
}

}  // namespace

void ServiceConfig::validate() const {
  if (port < 1 || port > 65535)
    throw std::invalid_argument("port must be in [1, 65535], got " + std::to_string(port));
  if (ttl.count() <= 0) throw std::invalid_argument("ttl must be positive");
  if (failure_ttl && failure_ttl->count() <= 0)
    throw std::invalid_argument("failureTtl must be positive");
  if (request_timeout && request_timeout->count() <= 0)
    throw std::invalid_argument("timeoutMs must be positive");
  for (const auto& [url, overrides] : query_overrides) {
    for (const auto& [key, text] : overrides) {
      if (std::find(std::begin(kOverrideKeys), std::end(kOverrideKeys), key) == std::end(kOverrideKeys))
        throw std::invalid_argument("unknown query override '" + key + "' for " + url);
      if (text.empty()) throw std::invalid_argument("query override '" + key + "' is empty");
    }
  }
}

MetadataQueries ServiceConfig::queries_for(const std::string& endpoint_url) const {
  MetadataQueries q = MetadataQueries::defaults(probe_limit);
  auto it = query_overrides.find(endpoint_url);
  if (it == query_overrides.end()) return q;
  const std::map<std::string, std::string*> slots = {
      {"void", &q.void_query},
      {"examples", &q.examples_query},
      {"probeClasses", &q.probe_classes},
      {"probePredicates", &q.probe_predicates},
      {"probeClassesDistinct", &q.probe_classes_distinct},
      {"probePredicatesDistinct", &q.probe_predicates_distinct},
  };
  for (const auto& [key, text] : it->second) {
    if (auto slot = slots.find(key); slot != slots.end()) *slot->second = text;
  }
  return q;
}

CacheOptions ServiceConfig::cache_options() const {
  CacheOptions o;
  o.ttl = ttl;
  o.failure_ttl = failure_ttl;
  o.request_timeout = request_timeout;
  o.queries_for = [cfg = *this](const std::string& url) { return cfg.queries_for(url); };
  return o;
}

CompletionOptions ServiceConfig::completion_options() const {
  CompletionOptions o;
  o.well_known = well_known;
  o.known_endpoints = endpoints;
  return o;
}

ServiceConfig ServiceConfig::from_json(std::string_view json_text, const std::string& base_dir) {
  const Json doc = Json::parse(json_text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    throw std::invalid_argument("config must be a JSON object");

  ServiceConfig cfg;
  cfg.port = get_or<int>(doc, "port", cfg.port);
  cfg.bind_address = get_or<std::string>(doc, "bind", cfg.bind_address);
  cfg.ttl = std::chrono::seconds(get_or<long long>(doc, "ttl", cfg.ttl.count()));
  if (doc.contains("failureTtl"))
    cfg.failure_ttl = std::chrono::seconds(get_or<long long>(doc, "failureTtl", 0));
  if (doc.contains("timeoutMs"))
    cfg.request_timeout = std::chrono::milliseconds(get_or<long long>(doc, "timeoutMs", 0));
  cfg.probe_limit = get_or<std::size_t>(doc, "probeLimit", cfg.probe_limit);
  cfg.cors_origins = get_or<std::vector<std::string>>(doc, "corsOrigins", cfg.cors_origins);

  if (auto it = doc.find("endpoints"); it != doc.end()) {
    if (!it->is_array()) throw std::invalid_argument("'endpoints' must be an array");
    for (const Json& e : *it) {
      if (e.is_string()) {
        cfg.endpoints.push_back(KnownEndpoint{e.get<std::string>(), {}});
      } else if (e.is_object() && e.contains("url") && e["url"].is_string()) {
        cfg.endpoints.push_back(
            KnownEndpoint{e["url"].get<std::string>(), get_or<std::string>(e, "label", "")});
      } else {
        throw std::invalid_argument("each endpoint needs a string 'url'");
      }
    }
  }

  if (auto it = doc.find("prefixes"); it != doc.end()) {
    PrefixMap extra;
    if (it->is_string()) {
      std::filesystem::path p = it->get<std::string>();
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      extra = PrefixMap::load_file(p.string());
    } else if (it->is_object()) {
      extra = PrefixMap::from_json(it->dump());
    } else {
      throw std::invalid_argument("'prefixes' must be a file path or an object");
    }
    for (const auto& [label, ns] : extra.entries()) cfg.well_known.declare(label, ns);
  }

  if (auto it = doc.find("queries"); it != doc.end()) {
    if (!it->is_object()) throw std::invalid_argument("'queries' must be an object");
    for (const auto& [url, overrides] : it->items()) {
      if (!overrides.is_object()) throw std::invalid_argument("query overrides must be objects");
      for (const auto& [key, text] : overrides.items()) {
        if (!text.is_string()) throw std::invalid_argument("query override must be a string");
        cfg.query_overrides[url][key] = text.get<std::string>();
      }
    }
  }
  cfg.validate();
  return cfg;
}

ServiceConfig ServiceConfig::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string dir = std::filesystem::path(path).parent_path().string();
  return from_json(ss.str(), dir.empty() ? "." : dir);
}

}  // namespace sparql_assist
