#include <algorithm>
#include <cctype>
#include <set>

#include "sparql_assist/completion.hpp"

namespace sparql_assist {
namespace {

// IRIREF excludes controls, space and <>"{}|^`\; those bytes are escaped.
std::string bracket_iri(std::string_view iri) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out = "<";
  for (unsigned char c : iri) {
    if (c <= 0x20 || std::string_view("<>\"{}|^`\\").find(static_cast<char>(c)) != std::string_view::npos) {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    } else {
      out += static_cast<char>(c);
    }
  }
  out += '>';
  return out;
}

constexpr std::string_view kQueryKeywords[] = {
    "ASK",      "BASE",     "BIND",   "CONSTRUCT", "DESCRIBE", "DISTINCT", "FILTER",
    "FROM",     "GRAPH",    "GROUP",  "HAVING",    "LIMIT",    "MINUS",    "NAMED",
    "OFFSET",   "OPTIONAL", "ORDER",  "PREFIX",    "REDUCED",  "SELECT",   "SERVICE",
    "UNION",    "VALUES",   "WHERE",
};

constexpr std::string_view kGroupKeywords[] = {
    "BIND", "FILTER", "GRAPH", "MINUS", "OPTIONAL", "SERVICE", "UNION", "VALUES",
};

bool istarts_with(std::string_view s, std::string_view prefix) {
  if (prefix.size() > s.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) !=
        std::tolower(static_cast<unsigned char>(prefix[i])))
      return false;
  }
  return true;
}

std::string_view local_part(std::string_view iri) {
  const std::size_t cut = iri.find_last_of("#/:");
  return cut == std::string_view::npos ? iri : iri.substr(cut + 1);
}

bool is_type_predicate(const std::optional<Term>& predicate) {
  return predicate && predicate->is_iri() && predicate->value == kRdfType;
}

std::optional<std::string> namespace_for(std::string_view label, const PrefixMap& declared,
                                         const PrefixMap& well_known) {
  if (auto ns = declared.lookup(label)) return std::string(*ns);
  if (auto ns = well_known.lookup(label)) return std::string(*ns);
  return std::nullopt;
}

class Builder {
 public:
  Builder(std::string_view partial, const PrefixMap& declared, const PrefixMap& well_known)
      : partial_(partial), declared_(declared), well_known_(well_known) {}

  void add_iri(ItemKind kind, const std::string& iri, std::uint64_t score) {
    if (!iri_matches_partial(iri, partial_, declared_, well_known_)) return;
    Rendering r = render_iri(iri, declared_, well_known_);
    items_.push_back(CompletionItem{iri, std::move(r.label), kind, score, std::move(r.insert_text),
                                    std::move(r.edit)});
  }

  void add_keyword(std::string_view keyword) {
    if (!partial_.empty() && !istarts_with(keyword, partial_)) return;
    std::string k(keyword);
    items_.push_back(CompletionItem{k, k, ItemKind::kKeyword, 0, k, std::nullopt});
  }

  void add_variable(const std::string& name) {
    const std::string text = "?" + name;
    if (!partial_.empty()) {
      if (partial_[0] != '?' && partial_[0] != '$') return;
      if (!std::string_view(name).starts_with(partial_.substr(1))) return;
    }
    items_.push_back(CompletionItem{text, text, ItemKind::kVariable, 0, text, std::nullopt});
  }

  void add_endpoint(const KnownEndpoint& endpoint) {
    std::string_view p = partial_;
    if (!p.empty() && p.front() == '<') p.remove_prefix(1);
    if (!std::string_view(endpoint.url).starts_with(p)) return;
    items_.push_back(CompletionItem{endpoint.url,
                                    endpoint.label.empty() ? endpoint.url : endpoint.label,
                                    ItemKind::kEndpoint, 0, bracket_iri(endpoint.url),
                                    std::nullopt});
  }

  std::vector<CompletionItem> take() {
    // The same value may arrive twice, e.g. a keyword offered by two rules.
    rank(items_);
    std::vector<CompletionItem> out;
    std::set<std::pair<std::string, ItemKind>> seen;
    for (CompletionItem& item : items_) {
      if (seen.emplace(item.value, item.kind).second) out.push_back(std::move(item));
    }
    return out;
  }

 private:
  std::string_view partial_;
  const PrefixMap& declared_;
  const PrefixMap& well_known_;
  std::vector<CompletionItem> items_;
};

// Variable names used anywhere in the query, minus the one being typed.
std::set<std::string> query_variables(const SyntaxTree& tree, std::size_t position) {
  std::set<std::string> out;
  for (const Token& t : tree.tokens()) {
    if (t.kind != TokenKind::kVariable || t.text.size() < 2) continue;
    if (t.span.begin < position && position <= t.span.end) continue;
    out.insert(t.text.substr(1));
  }
  return out;
}

}  // namespace

std::string_view to_string(ItemKind kind) {
  switch (kind) {
    case ItemKind::kClass: return "class";
    case ItemKind::kPredicate: return "predicate";
    case ItemKind::kKeyword: return "keyword";
    case ItemKind::kVariable: return "variable";
    case ItemKind::kEndpoint: return "endpoint";
  }
  return "keyword";
}

std::string type_key(const Term& term) {
  return term.is_variable() ? term.value : "<" + term.value + ">";
}

TypeMap infer_types(const SyntaxTree& tree, const CursorContext& context) {
  TypeMap types;
  if (!context.scope || *context.scope >= tree.scopes().size()) return types;
  std::set<std::size_t> chain;
  for (std::size_t id : tree.scope_chain(*context.scope)) {
    chain.insert(id);
    if (tree.scopes()[id].kind == ScopeKind::kService) break;
  }
  for (const TriplePattern& t : tree.triples()) {
    if (!chain.count(t.scope) || !t.subject || !t.object) continue;
    if (!is_type_predicate(t.predicate) || !t.object->is_iri()) continue;
    const Term& s = *t.subject;
    if (s.kind == TermKind::kLiteral || s.kind == TermKind::kPath ||
        s.kind == TermKind::kCollection)
      continue;
    types[type_key(s)].insert(t.object->value);
  }
  return types;
}

void rank(std::vector<CompletionItem>& items) {
  std::stable_sort(items.begin(), items.end(),
                   [](const CompletionItem& a, const CompletionItem& b) {
                     if (a.score != b.score) return a.score > b.score;
                     return a.value < b.value;
                   });
}

Rendering render_iri(std::string_view iri, const PrefixMap& declared, const PrefixMap& well_known) {
  if (auto c = declared.compact(iri)) {
    std::string text = c->text();
    return {text, std::nullopt, text};
  }
  if (auto c = well_known.compact(iri); c && !declared.lookup(c->label)) {
    std::string text = c->text();
    const std::string ns(*well_known.lookup(c->label));
    return {text, TextEdit{1, 1, "PREFIX " + c->label + ": <" + ns + ">\n"}, text};
  }
  return {bracket_iri(iri), std::nullopt, std::string(iri)};
}

bool iri_matches_partial(std::string_view iri, std::string_view partial, const PrefixMap& declared,
                         const PrefixMap& well_known) {
  if (partial.empty()) return true;
  if (partial.front() == '<') return iri.starts_with(partial.substr(1));
  if (partial.front() == '?' || partial.front() == '$' || partial.front() == '_') return false;
  const std::size_t colon = partial.find(':');
  if (colon != std::string_view::npos) {
    auto ns = namespace_for(partial.substr(0, colon), declared, well_known);
    if (!ns || !iri.starts_with(*ns)) return false;
    return istarts_with(iri.substr(ns->size()), partial.substr(colon + 1));
  }
  // A bare word: the start of a prefix label or of the local name.
  for (const PrefixMap* map : {&declared, &well_known}) {
    if (auto c = map->compact(iri); c && std::string_view(c->label).starts_with(partial))
      return true;
  }
  return istarts_with(local_part(iri), partial);
}

CompletionList complete(std::string_view text, std::size_t position, const std::string& endpoint_url,
                        MetadataProvider* provider, const CompletionOptions& options) {
  const SyntaxTree tree = parse_partial(text);
  const CursorContext ctx = locate_context(tree, position);
  const PrefixMap declared = collect_prefixes(tree);

  CompletionList list;
  std::shared_ptr<const CachedMetadata> metadata;
  std::optional<std::string> source;
  if (ctx.service_endpoint) {
    if (ctx.service_endpoint->is_iri()) source = ctx.service_endpoint->value;
  } else if (!endpoint_url.empty()) {
    source = endpoint_url;
  }
  if (source && provider) {
    try {
      metadata = provider->get(*source);
    } catch (const std::exception&) {
      metadata.reset();
    }
  }
  if (metadata && metadata->state == MetadataState::kFailed) metadata.reset();
  list.provenance = metadata ? metadata->provenance() : Provenance::kNone;

  Builder builder(ctx.partial, declared, options.well_known);
  const VoidSchema* schema = metadata ? &metadata->schema : nullptr;
  auto add_variables = [&] {
    for (const std::string& v : query_variables(tree, position)) builder.add_variable(v);
  };

  switch (ctx.role) {
    case CursorRole::kKeyword:
      for (std::string_view k : kQueryKeywords) builder.add_keyword(k);
      break;
    case CursorRole::kSubject:
      add_variables();
      for (std::string_view k : kGroupKeywords) builder.add_keyword(k);
      break;
    case CursorRole::kPredicate: {
      if (!schema) break;
      std::set<std::string> classes;
      if (ctx.subject && schema->provenance == Provenance::kVoid) {
        const TypeMap types = infer_types(tree, ctx);
        if (auto it = types.find(type_key(*ctx.subject)); it != types.end()) classes = it->second;
      }
      if (!classes.empty()) {
        std::map<std::string, std::uint64_t> union_counts;
        for (const std::string& c : classes) {
          if (const ClassProfile* profile = schema->find_class(c)) {
            for (const PredicateProfile& p : profile->predicates) union_counts[p.iri] += p.triples;
          }
        }
        for (const auto& [iri, n] : union_counts) builder.add_iri(ItemKind::kPredicate, iri, n);
      } else {
        for (const auto& [iri, n] : schema->all_predicates())
          builder.add_iri(ItemKind::kPredicate, iri, n);
      }
      break;
    }
    case CursorRole::kObject:
      add_variables();
      if (schema && is_type_predicate(ctx.predicate)) {
        for (const ClassProfile& c : schema->classes)
          builder.add_iri(ItemKind::kClass, c.iri, c.instances);
      }
      break;
    case CursorRole::kServiceIri:
      for (const KnownEndpoint& e : options.known_endpoints) builder.add_endpoint(e);
      break;
    case CursorRole::kPrefixDeclaration:
    case CursorRole::kUnknown:
      break;
  }

  list.items = builder.take();
  if (list.items.size() > options.max_items) {
    list.items.resize(options.max_items);
    list.truncated = true;
  }
  return list;
}

}  // namespace sparql_assist
