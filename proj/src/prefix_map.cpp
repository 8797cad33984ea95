#include "sparql_assist/prefix_map.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sparql_assist {

void PrefixMap::declare(std::string label, std::string namespace_iri) {
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const auto& e) { return e.first == label; });
  if (it != entries_.end()) {
    it->second = std::move(namespace_iri);
  } else {
    entries_.emplace_back(std::move(label), std::move(namespace_iri));
  }
}

std::optional<std::string_view> PrefixMap::lookup(std::string_view label) const {
  for (const auto& [l, ns] : entries_) {
    if (l == label) return std::string_view(ns);
  }
  return std::nullopt;
}

std::optional<std::string> PrefixMap::expand(std::string_view prefixed_name) const {
  const auto colon = prefixed_name.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  auto ns = lookup(prefixed_name.substr(0, colon));
  if (!ns) return std::nullopt;
  return std::string(*ns) + std::string(prefixed_name.substr(colon + 1));
}

std::optional<PrefixMap::Compacted> PrefixMap::compact(std::string_view iri) const {
  const std::pair<std::string, std::string>* best = nullptr;
  for (const auto& entry : entries_) {
    const std::string& ns = entry.second;
    if (ns.empty() || iri.size() < ns.size() || iri.substr(0, ns.size()) != ns) continue;
    if (!is_plain_local_name(iri.substr(ns.size()))) continue;
    if (!best || ns.size() > best->second.size() ||
        (ns.size() == best->second.size() && entry.first < best->first))
      best = &entry;
  }
  if (!best) return std::nullopt;
  return Compacted{best->first, std::string(iri.substr(best->second.size()))};
}

bool is_plain_local_name(std::string_view local) {
  if (local.empty()) return true;
  auto ok = [](char c, bool first) {
    const auto uc = static_cast<unsigned char>(c);
    if (uc >= 0x80) return true;
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
        c == '_' || c == ':')
      return true;
    return !first && (c == '-' || c == '.');
  };
  if (!ok(local.front(), true)) return false;
  for (char c : local.substr(1)) {
    if (!ok(c, false)) return false;
  }
  return local.back() != '.';
}

PrefixMap PrefixMap::well_known() {
  PrefixMap m;
  m.declare("rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#");
  m.declare("rdfs", "http://www.w3.org/2000/01/rdf-schema#");
  m.declare("owl", "http://www.w3.org/2002/07/owl#");
  m.declare("xsd", "http://www.w3.org/2001/XMLSchema#");
  m.declare("sh", "http://www.w3.org/ns/shacl#");
  m.declare("void", "http://rdfs.org/ns/void#");
  return m;
}

PrefixMap PrefixMap::from_json(std::string_view json_text) {
  const auto doc = nlohmann::ordered_json::parse(json_text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    throw std::runtime_error("prefix map must be a JSON object of label -> namespace");
  PrefixMap m;
  for (const auto& [label, ns] : doc.items()) {
    if (!ns.is_string())
      throw std::runtime_error("namespace for prefix '" + label + "' is not a string");
    m.declare(label, ns.get<std::string>());
  }
  return m;
}

PrefixMap PrefixMap::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open prefix file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace sparql_assist
