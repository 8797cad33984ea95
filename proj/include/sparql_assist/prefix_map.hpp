#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sparql_assist {

inline constexpr std::string_view kRdfType =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

// Prefix label -> namespace IRI, plus an optional base IRI. Labels are unique;
// declaring a label again replaces the earlier namespace.
class PrefixMap {
 public:
  struct Compacted {
    std::string label;
    std::string local;
    std::string text() const { return label + ":" + local; }
  };

  void declare(std::string label, std::string namespace_iri);
  void set_base(std::string iri) { base_ = std::move(iri); }

  std::optional<std::string_view> lookup(std::string_view label) const;
  const std::optional<std::string>& base() const { return base_; }

  // Expands `label:local`; nullopt when the label is not declared.
  std::optional<std::string> expand(std::string_view prefixed_name) const;

  // Longest matching namespace whose remainder is a legal local name.
  std::optional<Compacted> compact(std::string_view iri) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  // rdf, rdfs, owl, xsd, sh and void.
  static PrefixMap well_known();

  // Reads a JSON object of label -> namespace IRI. Throws std::runtime_error
  // on malformed input.
  static PrefixMap from_json(std::string_view json_text);
  static PrefixMap load_file(const std::string& path);

  friend bool operator==(const PrefixMap&, const PrefixMap&) = default;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::optional<std::string> base_;
};

// True when `local` can be written after `label:` without escaping.
bool is_plain_local_name(std::string_view local);

}  // namespace sparql_assist
