#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sparql_assist/prefix_map.hpp"

namespace sparql_assist {

// Half-open byte range [begin, end) into the query text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool covers(const Span& other) const {
    return begin <= other.begin && other.end <= end;
  }
  friend bool operator==(const Span&, const Span&) = default;
};

enum class TokenKind {
  kKeyword,
  kIri,
  kPrefixedName,
  kVariable,
  kLiteral,
  kBlankNode,
  kPunctuation,
  kComment,
  kWhitespace,
  kTypeShorthand,  // the bare `a`
  kErrorFragment,
};

std::string_view to_string(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::kErrorFragment;
  std::string text;
  Span span;

  bool is_trivia() const {
    return kind == TokenKind::kWhitespace || kind == TokenKind::kComment;
  }
  bool is_punct(std::string_view p) const {
    return kind == TokenKind::kPunctuation && text == p;
  }
  // Case-insensitive keyword match.
  bool is_keyword(std::string_view upper) const;
  // Tokens a user can be in the middle of typing: names, IRIs, variables,
  // keywords and unknown bare words.
  bool is_name_like() const;
};

// Never fails. Concatenating the token texts reproduces `text` exactly; bytes
// that are not valid UTF-8 become error fragments.
std::vector<Token> tokenize(std::string_view text);

// True when `word` is a SPARQL 1.1 query keyword or built-in function name.
bool is_sparql_keyword(std::string_view word);

enum class TermKind {
  kVariable,
  kIri,
  kPrefixedName,
  kLiteral,
  kBlankNode,
  kPath,        // property path, kept opaque
  kCollection,  // ( ... ), kept opaque
};

struct Term {
  TermKind kind = TermKind::kIri;
  std::string text;  // exact source slice
  // Variables: name without sigil. IRIs: the IRI without brackets (`a` gives
  // rdf:type). Prefixed names: the expanded IRI when the prefix is declared,
  // otherwise the source text. Anything else: the source text.
  std::string value;
  Span span;
  bool resolved = true;  // false for prefixed names with an unknown prefix

  bool is_variable() const { return kind == TermKind::kVariable; }
  // A dereferenceable IRI: a bracketed IRI or a resolved prefixed name.
  bool is_iri() const {
    return kind == TermKind::kIri ||
           (kind == TermKind::kPrefixedName && resolved);
  }
  friend bool operator==(const Term&, const Term&) = default;
};

enum class QueryForm { kSelect, kConstruct, kAsk, kDescribe, kIncomplete };

std::string_view to_string(QueryForm form);

enum class ScopeKind {
  kGroup,
  kOptional,
  kMinus,
  kGraph,
  kService,
  kExists,
  kTemplate,  // CONSTRUCT template
  kSubquery,  // opaque
  kValues,    // opaque
};

std::string_view to_string(ScopeKind kind);

struct Scope {
  std::size_t id = 0;
  std::optional<std::size_t> parent;
  ScopeKind kind = ScopeKind::kGroup;
  Span span;  // `{` through `}`, or through end of text when unclosed
  bool closed = false;
  std::optional<Term> service_endpoint;  // kService only

  bool opaque() const {
    return kind == ScopeKind::kSubquery || kind == ScopeKind::kValues;
  }
  // Strictly inside the braces. An unclosed scope also contains the end of
  // the text.
  bool contains(std::size_t position) const {
    return span.begin < position &&
           (position < span.end || (!closed && position == span.end));
  }
};

struct TriplePattern {
  std::size_t scope = 0;
  std::optional<Term> subject;
  std::optional<Term> predicate;
  std::optional<Term> object;
  Span span;
  // All three terms are present and followed by a token that ends the triple.
  bool complete = false;
};

struct ServiceNode {
  std::size_t scope = 0;  // the SERVICE group scope
  Term endpoint;
  bool silent = false;
  Span span;  // SERVICE keyword through the end of its group
};

struct PrefixDecl {
  std::string label;
  std::string iri;
  Span span;
};

struct ErrorNode {
  Span span;
  std::string message;
};

class SyntaxTree {
 public:
  const std::string& text() const { return text_; }
  const std::vector<Token>& tokens() const { return tokens_; }
  QueryForm form() const { return form_; }
  const std::vector<PrefixDecl>& prefix_decls() const { return prefix_decls_; }
  const std::optional<std::string>& base() const { return base_; }
  const std::vector<Scope>& scopes() const { return scopes_; }
  const std::vector<TriplePattern>& triples() const { return triples_; }
  const std::vector<ServiceNode>& services() const { return services_; }
  const std::vector<ErrorNode>& errors() const { return errors_; }

  // Innermost first, ending at a root scope.
  std::vector<std::size_t> scope_chain(std::size_t scope_id) const;

 private:
  friend class Parser;

  std::string text_;
  std::vector<Token> tokens_;
  QueryForm form_ = QueryForm::kIncomplete;
  std::vector<PrefixDecl> prefix_decls_;
  std::optional<std::string> base_;
  std::vector<Scope> scopes_;
  std::vector<TriplePattern> triples_;
  std::vector<ServiceNode> services_;
  std::vector<ErrorNode> errors_;
};

// Never fails: unparseable regions become error nodes.
SyntaxTree parse_partial(std::string_view text);

// PREFIX/BASE declarations of the prologue, later labels shadowing earlier.
PrefixMap collect_prefixes(const SyntaxTree& tree);

enum class CursorRole {
  kKeyword,
  kSubject,
  kPredicate,
  kObject,
  kPrefixDeclaration,
  kServiceIri,
  kUnknown,
};

std::string_view to_string(CursorRole role);

struct CursorContext {
  std::size_t position = 0;
  CursorRole role = CursorRole::kUnknown;
  std::string partial;  // token text up to the cursor, or empty
  Span partial_span;    // [token start, position)
  std::optional<Term> subject;    // predicate and object positions
  std::optional<Term> predicate;  // object position
  std::optional<std::size_t> scope;
  std::optional<Term> service_endpoint;
};

// Throws std::out_of_range when position > text size.
CursorContext locate_context(const SyntaxTree& tree, std::size_t position);

// Endpoint term of the innermost SERVICE group strictly containing
// `position`. A variable endpoint is returned as is; check Term::is_iri()
// before dereferencing it.
std::optional<Term> enclosing_service(const SyntaxTree& tree,
                                      std::size_t position);

}  // namespace sparql_assist
