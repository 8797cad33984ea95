#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "sparql_assist/syntax.hpp"

namespace sparql_assist {

// What the parser was looking for when it ran out of tokens.
struct Expectation {
  CursorRole role = CursorRole::kKeyword;
  std::optional<Term> subject;
  std::optional<Term> predicate;
  std::vector<std::size_t> open_scopes;  // outermost first
};

class Parser {
 public:
  explicit Parser(std::string_view text);

  SyntaxTree run();
  const std::optional<Expectation>& expectation() const { return expectation_; }

 private:
  // Token cursor over significant (non-trivia) tokens.
  bool at_end() const { return cur_ >= sig_.size(); }
  const Token& peek(std::size_t ahead = 0) const;
  bool peek_is_punct(std::string_view p) const;
  bool peek_is_keyword(std::string_view kw) const;
  const Token& next();
  std::size_t last_end() const;

  // Records the expectation the first time the end of input is reached.
  bool expect_at_end(CursorRole role, const std::optional<Term>& subject = std::nullopt,
                     const std::optional<Term>& predicate = std::nullopt);
  void error_here(std::string message);

  void parse_query();
  void parse_prefix_decl();
  void parse_base_decl();
  void parse_group(ScopeKind kind, std::optional<Term> endpoint = std::nullopt);
  void parse_service();
  void parse_graph();
  void parse_filter();
  void parse_bind();
  void parse_values();
  void skip_parenthesized();
  void skip_opaque_scope(std::size_t scope_id);

  void parse_triples_same_subject();
  void parse_property_list(const Term& subject, std::size_t triple_begin,
                           bool stop_at_bracket);
  void parse_object_list(const Term& subject, const Term& verb, std::size_t triple_begin);
  std::optional<Term> parse_node(bool allow_property_list);
  std::optional<Term> parse_verb();
  bool parse_path_alternative();
  bool parse_path_element();
  bool ends_triple() const;

  Term make_term(const Token& tok) const;
  Term slice_term(TermKind kind, std::size_t begin, std::size_t end) const;
  void add_triple(const Term& subject, const std::optional<Term>& verb,
                  const std::optional<Term>& object, std::size_t begin, bool complete);

  std::size_t open_scope(ScopeKind kind, std::size_t begin);
  void close_scope(std::size_t id, std::size_t end, bool closed);

  SyntaxTree tree_;
  std::vector<std::size_t> sig_;  // indexes of significant tokens
  std::size_t cur_ = 0;
  std::vector<std::size_t> open_scopes_;
  PrefixMap prefixes_;
  std::optional<Expectation> expectation_;
  std::size_t last_error_token_ = static_cast<std::size_t>(-1);
};

}  // namespace sparql_assist
