#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sparql_assist/metadata.hpp"
#include "sparql_assist/prefix_map.hpp"
#include "sparql_assist/syntax.hpp"

namespace sparql_assist {

// Variable name (no sigil) -> explicitly asserted classes. Non-variable
// subjects are keyed by their term value.
using TypeMap = std::map<std::string, std::set<std::string>>;

// Only `?v a <C>` / `?v rdf:type <C>` patterns in the cursor's scope chain
// count, and the chain stops at the innermost SERVICE group.
TypeMap infer_types(const SyntaxTree& tree, const CursorContext& context);
std::string type_key(const Term& term);

enum class ItemKind { kClass, kPredicate, kKeyword, kVariable, kEndpoint };
std::string_view to_string(ItemKind kind);

// Text to insert at a fixed position, e.g. a PREFIX declaration at 1:1.
struct TextEdit {
  std::size_t line = 1;
  std::size_t column = 1;
  std::string text;
  friend bool operator==(const TextEdit&, const TextEdit&) = default;
};

struct CompletionItem {
  std::string value;
  std::string label;
  ItemKind kind = ItemKind::kKeyword;
  std::uint64_t score = 0;
  std::string insert_text;
  std::optional<TextEdit> additional_edit;
  friend bool operator==(const CompletionItem&, const CompletionItem&) = default;
};

struct CompletionList {
  std::vector<CompletionItem> items;
  bool truncated = false;
  Provenance provenance = Provenance::kNone;
  friend bool operator==(const CompletionList&, const CompletionList&) = default;
};

struct KnownEndpoint {
  std::string url;
  std::string label;
};

struct CompletionOptions {
  std::size_t max_items = 100;
  PrefixMap well_known = PrefixMap::well_known();
  std::vector<KnownEndpoint> known_endpoints;
};

// Score descending, then value ascending.
void rank(std::vector<CompletionItem>& items);

struct Rendering {
  std::string insert_text;
  std::optional<TextEdit> edit;
  std::string label;
};

// Declared prefix first, then a well-known one (with a PREFIX edit), else
// the bracketed IRI.
Rendering render_iri(std::string_view iri, const PrefixMap& declared, const PrefixMap& well_known);

// Whether `iri` is a candidate for the partially typed token.
bool iri_matches_partial(std::string_view iri, std::string_view partial,
                         const PrefixMap& declared, const PrefixMap& well_known);

// Completions for `text` at byte `position`. Metadata comes from the SERVICE
// endpoint around the cursor, or `endpoint_url` outside SERVICE groups.
// Throws std::out_of_range when position > text.size(); metadata problems only
// degrade the result.
CompletionList complete(std::string_view text, std::size_t position, const std::string& endpoint_url,
                        MetadataProvider* provider, const CompletionOptions& options = {});

}  // namespace sparql_assist
