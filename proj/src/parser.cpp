#include <algorithm>
#include <string>

#include "parser_impl.hpp"

namespace sparql_assist {
namespace {

const Token kEndToken{};

bool is_group_keyword(const Token& t) {
  return t.is_keyword("OPTIONAL") || t.is_keyword("MINUS") || t.is_keyword("GRAPH") ||
         t.is_keyword("SERVICE") || t.is_keyword("FILTER") || t.is_keyword("BIND") ||
         t.is_keyword("VALUES");
}

bool is_term_token(const Token& t) {
  return t.kind == TokenKind::kVariable || t.kind == TokenKind::kIri ||
         t.kind == TokenKind::kPrefixedName;
}

bool starts_node(const Token& t) {
  return is_term_token(t) || t.kind == TokenKind::kLiteral ||
         t.kind == TokenKind::kBlankNode || t.is_punct("[") || t.is_punct("(");
}

}  // namespace

std::string_view to_string(QueryForm form) {
  switch (form) {
    case QueryForm::kSelect: return "select";
    case QueryForm::kConstruct: return "construct";
    case QueryForm::kAsk: return "ask";
    case QueryForm::kDescribe: return "describe";
    case QueryForm::kIncomplete: return "incomplete";
  }
  return "incomplete";
}

std::string_view to_string(ScopeKind kind) {
  switch (kind) {
    case ScopeKind::kGroup: return "group";
    case ScopeKind::kOptional: return "optional";
    case ScopeKind::kMinus: return "minus";
    case ScopeKind::kGraph: return "graph";
    case ScopeKind::kService: return "service";
    case ScopeKind::kExists: return "exists";
    case ScopeKind::kTemplate: return "template";
    case ScopeKind::kSubquery: return "subquery";
    case ScopeKind::kValues: return "values";
  }
  return "group";
}

std::vector<std::size_t> SyntaxTree::scope_chain(std::size_t scope_id) const {
  std::vector<std::size_t> chain;
  std::optional<std::size_t> id = scope_id;
  while (id && *id < scopes_.size()) {
    chain.push_back(*id);
    id = scopes_[*id].parent;
  }
  return chain;
}

Parser::Parser(std::string_view text) {
  tree_.text_ = std::string(text);
  tree_.tokens_ = tokenize(text);
  for (std::size_t i = 0; i < tree_.tokens_.size(); ++i) {
    if (!tree_.tokens_[i].is_trivia()) sig_.push_back(i);
  }
}

SyntaxTree Parser::run() {
  parse_query();
  return std::move(tree_);
}

const Token& Parser::peek(std::size_t ahead) const {
  if (cur_ + ahead >= sig_.size()) return kEndToken;
  return tree_.tokens_[sig_[cur_ + ahead]];
}

bool Parser::peek_is_punct(std::string_view p) const { return !at_end() && peek().is_punct(p); }

bool Parser::peek_is_keyword(std::string_view kw) const {
  return !at_end() && peek().is_keyword(kw);
}

const Token& Parser::next() {
  const Token& t = peek();
  if (!at_end()) ++cur_;
  return t;
}

std::size_t Parser::last_end() const {
  return cur_ == 0 ? 0 : tree_.tokens_[sig_[cur_ - 1]].span.end;
}

bool Parser::expect_at_end(CursorRole role, const std::optional<Term>& subject,
                           const std::optional<Term>& predicate) {
  if (!at_end()) return false;
  if (!expectation_) expectation_ = Expectation{role, subject, predicate, open_scopes_};
  return true;
}

void Parser::error_here(std::string message) {
  if (at_end()) return;
  const Span span = peek().span;
  if (!tree_.errors_.empty() && last_error_token_ + 1 == cur_) {
    tree_.errors_.back().span.end = span.end;
  } else {
    tree_.errors_.push_back(ErrorNode{span, std::move(message)});
  }
  last_error_token_ = cur_;
  next();
}

Term Parser::make_term(const Token& tok) const {
  Term t;
  t.text = tok.text;
  t.span = tok.span;
  switch (tok.kind) {
    case TokenKind::kVariable:
      t.kind = TermKind::kVariable;
      t.value = tok.text.substr(1);
      break;
    case TokenKind::kIri: {
      t.kind = TermKind::kIri;
      std::string_view inner(tok.text);
      inner.remove_prefix(1);
      if (!inner.empty() && inner.back() == '>') inner.remove_suffix(1);
      t.value = std::string(inner);
      break;
    }
    case TokenKind::kPrefixedName:
      t.kind = TermKind::kPrefixedName;
      if (auto iri = prefixes_.expand(tok.text)) {
        t.value = std::move(*iri);
      } else {
        t.value = tok.text;
        t.resolved = false;
      }
      break;
    case TokenKind::kTypeShorthand:
      t.kind = TermKind::kIri;
      t.value = std::string(kRdfType);
      break;
    case TokenKind::kBlankNode:
      t.kind = TermKind::kBlankNode;
      t.value = tok.text;
      break;
    default:
      t.kind = TermKind::kLiteral;
      t.value = tok.text;
      break;
  }
  return t;
}

Term Parser::slice_term(TermKind kind, std::size_t begin, std::size_t end) const {
  Term t;
  t.kind = kind;
  t.text = tree_.text_.substr(begin, end - begin);
  t.value = t.text;
  t.span = Span{begin, end};
  return t;
}

void Parser::add_triple(const Term& subject, const std::optional<Term>& verb,
                        const std::optional<Term>& object, std::size_t begin, bool complete) {
  TriplePattern tp;
  tp.scope = open_scopes_.empty() ? 0 : open_scopes_.back();
  tp.subject = subject;
  tp.predicate = verb;
  tp.object = object;
  tp.span = Span{begin, std::max(begin, last_end())};
  tp.complete = complete && verb && object;
  tree_.triples_.push_back(std::move(tp));
}

std::size_t Parser::open_scope(ScopeKind kind, std::size_t begin) {
  Scope s;
  s.id = tree_.scopes_.size();
  if (!open_scopes_.empty()) s.parent = open_scopes_.back();
  s.kind = kind;
  s.span = Span{begin, begin};
  tree_.scopes_.push_back(std::move(s));
  open_scopes_.push_back(tree_.scopes_.back().id);
  return tree_.scopes_.back().id;
}

void Parser::close_scope(std::size_t id, std::size_t end, bool closed) {
  tree_.scopes_[id].span.end = end;
  tree_.scopes_[id].closed = closed;
  if (!open_scopes_.empty() && open_scopes_.back() == id) open_scopes_.pop_back();
}

void Parser::parse_query() {
  bool missing_form_reported = false;
  while (!at_end()) {
    const Token& t = peek();
    if (t.is_keyword("PREFIX") || t.is_keyword("BASE")) {
      if (tree_.form_ != QueryForm::kIncomplete)
        tree_.errors_.push_back(ErrorNode{t.span, "declaration after the query form"});
      if (t.is_keyword("PREFIX")) {
        parse_prefix_decl();
      } else {
        parse_base_decl();
      }
      continue;
    }
    const bool select = t.is_keyword("SELECT");
    const bool construct = t.is_keyword("CONSTRUCT");
    const bool ask = t.is_keyword("ASK");
    const bool describe = t.is_keyword("DESCRIBE");
    if (select || construct || ask || describe) {
      if (tree_.form_ != QueryForm::kIncomplete) {
        error_here("unexpected second query form");
        continue;
      }
      tree_.form_ = select      ? QueryForm::kSelect
                    : construct ? QueryForm::kConstruct
                    : ask       ? QueryForm::kAsk
                                : QueryForm::kDescribe;
      next();
      if (construct && peek_is_punct("{")) parse_group(ScopeKind::kTemplate);
      continue;
    }
    if (t.is_punct("{")) {
      if (tree_.form_ == QueryForm::kIncomplete && !missing_form_reported) {
        tree_.errors_.push_back(ErrorNode{t.span, "missing query form"});
        missing_form_reported = true;
      }
      parse_group(ScopeKind::kGroup);
      continue;
    }
    if (t.is_keyword("VALUES")) {
      parse_values();
      continue;
    }
    if (t.is_punct("}")) {
      error_here("unbalanced '}'");
      continue;
    }
    if (tree_.form_ != QueryForm::kIncomplete) {
      // Projection, dataset clauses and solution modifiers.
      next();
      continue;
    }
    error_here("expected a query form");
  }
  expect_at_end(CursorRole::kKeyword);
}

void Parser::parse_prefix_decl() {
  const std::size_t begin = next().span.begin;
  if (expect_at_end(CursorRole::kPrefixDeclaration)) return;
  const Token& label = peek();
  if (label.kind != TokenKind::kPrefixedName || label.text.find(':') + 1 != label.text.size()) {
    error_here("expected a prefix label");
    return;
  }
  next();
  if (expect_at_end(CursorRole::kPrefixDeclaration)) return;
  const Token& iri = peek();
  if (iri.kind != TokenKind::kIri || iri.text.back() != '>') {
    error_here("expected a namespace IRI");
    return;
  }
  next();
  PrefixDecl decl;
  decl.label = label.text.substr(0, label.text.size() - 1);
  decl.iri = iri.text.substr(1, iri.text.size() - 2);
  decl.span = Span{begin, iri.span.end};
  prefixes_.declare(decl.label, decl.iri);
  tree_.prefix_decls_.push_back(std::move(decl));
}

void Parser::parse_base_decl() {
  next();
  if (expect_at_end(CursorRole::kUnknown)) return;
  const Token& iri = peek();
  if (iri.kind != TokenKind::kIri || iri.text.back() != '>') {
    error_here("expected a base IRI");
    return;
  }
  next();
  tree_.base_ = iri.text.substr(1, iri.text.size() - 2);
  prefixes_.set_base(*tree_.base_);
}

void Parser::parse_group(ScopeKind kind, std::optional<Term> endpoint) {
  const Token& open = next();
  const std::size_t id = open_scope(kind, open.span.begin);
  tree_.scopes_[id].service_endpoint = std::move(endpoint);
  if (peek_is_keyword("SELECT")) {
    tree_.scopes_[id].kind = ScopeKind::kSubquery;
    skip_opaque_scope(id);
    return;
  }
  while (true) {
    if (at_end()) {
      expect_at_end(CursorRole::kSubject);
      close_scope(id, tree_.text_.size(), false);
      return;
    }
    const Token& t = peek();
    if (t.is_punct("}")) {
      next();
      close_scope(id, t.span.end, true);
      return;
    }
    if (t.is_punct("{")) {
      parse_group(ScopeKind::kGroup);
    } else if (t.is_punct(".") || t.is_keyword("UNION")) {
      next();
    } else if (t.is_keyword("OPTIONAL") || t.is_keyword("MINUS")) {
      const ScopeKind child = t.is_keyword("OPTIONAL") ? ScopeKind::kOptional : ScopeKind::kMinus;
      next();
      if (expect_at_end(CursorRole::kUnknown)) continue;
      if (peek_is_punct("{")) {
        parse_group(child);
      } else {
        tree_.errors_.push_back(ErrorNode{peek().span, "expected '{'"});
      }
    } else if (t.is_keyword("GRAPH")) {
      parse_graph();
    } else if (t.is_keyword("SERVICE")) {
      parse_service();
    } else if (t.is_keyword("FILTER")) {
      parse_filter();
    } else if (t.is_keyword("BIND")) {
      parse_bind();
    } else if (t.is_keyword("VALUES")) {
      parse_values();
    } else if (starts_node(t)) {
      parse_triples_same_subject();
    } else {
      error_here("unexpected token in group pattern");
    }
  }
}

void Parser::parse_service() {
  const std::size_t begin = next().span.begin;
  bool silent = false;
  if (expect_at_end(CursorRole::kServiceIri)) return;
  if (peek_is_keyword("SILENT")) {
    next();
    silent = true;
    if (expect_at_end(CursorRole::kServiceIri)) return;
  }
  const Token& t = peek();
  if (!is_term_token(t)) {
    tree_.errors_.push_back(ErrorNode{t.span, "expected a SERVICE endpoint"});
    return;
  }
  Term endpoint = make_term(t);
  next();
  if (expect_at_end(CursorRole::kUnknown)) return;
  if (!peek_is_punct("{")) {
    tree_.errors_.push_back(ErrorNode{peek().span, "expected '{' after SERVICE endpoint"});
    return;
  }
  const std::size_t node = tree_.services_.size();
  tree_.services_.push_back(ServiceNode{tree_.scopes_.size(), endpoint, silent, Span{begin, begin}});
  parse_group(ScopeKind::kService, endpoint);
  tree_.services_[node].span.end = tree_.scopes_[tree_.services_[node].scope].span.end;
}

void Parser::parse_graph() {
  next();
  if (expect_at_end(CursorRole::kUnknown)) return;
  if (!is_term_token(peek())) {
    tree_.errors_.push_back(ErrorNode{peek().span, "expected a graph name"});
    return;
  }
  next();
  if (expect_at_end(CursorRole::kUnknown)) return;
  if (peek_is_punct("{")) {
    parse_group(ScopeKind::kGraph);
  } else {
    tree_.errors_.push_back(ErrorNode{peek().span, "expected '{' after GRAPH"});
  }
}

void Parser::parse_filter() {
  next();
  if (expect_at_end(CursorRole::kUnknown)) return;
  const Token& t = peek();
  if (t.is_punct("(")) {
    skip_parenthesized();
    return;
  }
  if (t.is_keyword("NOT")) {
    next();
    if (expect_at_end(CursorRole::kUnknown)) return;
  }
  if (peek_is_keyword("EXISTS")) {
    next();
    if (expect_at_end(CursorRole::kUnknown)) return;
    if (peek_is_punct("{")) {
      parse_group(ScopeKind::kExists);
    } else {
      tree_.errors_.push_back(ErrorNode{peek().span, "expected '{' after EXISTS"});
    }
    return;
  }
  const Token& fn = peek();
  if (fn.kind == TokenKind::kKeyword || fn.kind == TokenKind::kIri ||
      fn.kind == TokenKind::kPrefixedName) {
    next();
    if (expect_at_end(CursorRole::kUnknown)) return;
    if (peek_is_punct("(")) {
      skip_parenthesized();
      return;
    }
  }
  tree_.errors_.push_back(ErrorNode{peek().span, "expected a constraint"});
}

void Parser::parse_bind() {
  next();
  if (expect_at_end(CursorRole::kUnknown)) return;
  if (peek_is_punct("(")) {
    skip_parenthesized();
  } else {
    tree_.errors_.push_back(ErrorNode{peek().span, "expected '(' after BIND"});
  }
}

void Parser::skip_parenthesized() {
  next();
  int depth = 1;
  while (depth > 0) {
    if (expect_at_end(CursorRole::kUnknown)) return;
    const Token& t = peek();
    if (t.is_punct("(")) {
      ++depth;
      next();
    } else if (t.is_punct(")")) {
      --depth;
      next();
    } else if (t.is_punct("{")) {
      parse_group(ScopeKind::kExists);
    } else if (t.is_punct("}")) {
      tree_.errors_.push_back(ErrorNode{t.span, "unbalanced parentheses"});
      return;
    } else {
      next();
    }
  }
}

void Parser::parse_values() {
  next();
  while (true) {
    if (expect_at_end(CursorRole::kUnknown)) return;
    const Token& t = peek();
    if (t.is_punct("{")) {
      const std::size_t id = open_scope(ScopeKind::kValues, t.span.begin);
      next();
      skip_opaque_scope(id);
      return;
    }
    if (t.kind == TokenKind::kVariable || t.is_punct("(") || t.is_punct(")")) {
      next();
      continue;
    }
    tree_.errors_.push_back(ErrorNode{t.span, "expected a VALUES data block"});
    return;
  }
}

void Parser::skip_opaque_scope(std::size_t scope_id) {
  int depth = 1;
  while (true) {
    if (at_end()) {
      expect_at_end(CursorRole::kUnknown);
      close_scope(scope_id, tree_.text_.size(), false);
      return;
    }
    const Token& t = next();
    if (t.is_punct("{")) ++depth;
    if (t.is_punct("}") && --depth == 0) {
      close_scope(scope_id, t.span.end, true);
      return;
    }
  }
}

void Parser::parse_triples_same_subject() {
  const std::size_t begin = peek().span.begin;
  const bool property_list = peek().is_punct("[");
  std::optional<Term> subject = parse_node(true);
  if (!subject) {
    if (!at_end()) error_here("expected a subject");
    return;
  }
  if (expect_at_end(CursorRole::kPredicate, subject)) {
    add_triple(*subject, std::nullopt, std::nullopt, begin, false);
    return;
  }
  // `[ :p :o ] .` stands on its own.
  if (property_list && subject->text.size() > 2 && (peek_is_punct(".") || peek_is_punct("}")))
    return;
  parse_property_list(*subject, begin, false);
}

void Parser::parse_property_list(const Term& subject, std::size_t triple_begin,
                                 bool stop_at_bracket) {
  while (true) {
    if (expect_at_end(CursorRole::kPredicate, subject)) {
      add_triple(subject, std::nullopt, std::nullopt, triple_begin, false);
      return;
    }
    std::optional<Term> verb = parse_verb();
    if (!verb) {
      add_triple(subject, std::nullopt, std::nullopt, triple_begin, false);
      if (at_end()) return;
      const Token& t = peek();
      if (t.is_punct(".") || t.is_punct("}") || (stop_at_bracket && t.is_punct("]"))) {
        tree_.errors_.push_back(ErrorNode{t.span, "expected a predicate"});
      } else {
        error_here("expected a predicate");
      }
      return;
    }
    parse_object_list(subject, *verb, triple_begin);
    if (at_end() || !peek_is_punct(";")) return;
    while (peek_is_punct(";")) next();
    if (at_end()) continue;
    const Token& t = peek();
    if (t.is_punct(".") || t.is_punct("}") || (stop_at_bracket && t.is_punct("]"))) return;
  }
}

void Parser::parse_object_list(const Term& subject, const Term& verb, std::size_t triple_begin) {
  while (true) {
    if (expect_at_end(CursorRole::kObject, subject, verb)) {
      add_triple(subject, verb, std::nullopt, triple_begin, false);
      return;
    }
    std::optional<Term> object = parse_node(true);
    if (!object) {
      add_triple(subject, verb, std::nullopt, triple_begin, false);
      if (at_end()) return;
      const Token& t = peek();
      if (t.is_punct(".") || t.is_punct("}") || t.is_punct(";") || t.is_punct(",") ||
          t.is_punct("]")) {
        tree_.errors_.push_back(ErrorNode{t.span, "expected an object"});
      } else {
        error_here("expected an object");
      }
      return;
    }
    add_triple(subject, verb, object, triple_begin, ends_triple());
    if (expect_at_end(CursorRole::kUnknown)) return;
    if (!peek_is_punct(",")) return;
    next();
  }
}

bool Parser::ends_triple() const {
  if (at_end()) return false;
  const Token& t = peek();
  if (t.kind == TokenKind::kPunctuation) {
    if (t.text == ".") {
      // A final '.' glued to the object may still become part of a name.
      const bool last = cur_ + 1 == sig_.size() && t.span.end == tree_.text_.size();
      return !(last && t.span.begin == last_end());
    }
    return t.text == ";" || t.text == "," || t.text == "}" || t.text == "]" || t.text == "{";
  }
  return is_group_keyword(t);
}

std::optional<Term> Parser::parse_node(bool allow_property_list) {
  if (at_end()) return std::nullopt;
  const Token& t = peek();
  if (is_term_token(t) || t.kind == TokenKind::kBlankNode) {
    next();
    return make_term(t);
  }
  if (t.kind == TokenKind::kLiteral) {
    const std::size_t begin = t.span.begin;
    next();
    if (peek_is_punct("^^")) {
      next();
      if (expect_at_end(CursorRole::kUnknown)) return std::nullopt;
      if (peek().kind == TokenKind::kIri || peek().kind == TokenKind::kPrefixedName) {
        next();
      } else {
        tree_.errors_.push_back(ErrorNode{peek().span, "expected a datatype IRI"});
      }
    }
    return slice_term(TermKind::kLiteral, begin, last_end());
  }
  if ((t.is_punct("+") || t.is_punct("-")) && peek(1).kind == TokenKind::kLiteral &&
      peek(1).span.begin == t.span.end) {
    const std::size_t begin = t.span.begin;
    next();
    next();
    return slice_term(TermKind::kLiteral, begin, last_end());
  }
  if (t.is_punct("[")) {
    const std::size_t begin = t.span.begin;
    const std::string label = "_:b" + std::to_string(begin);
    next();
    if (peek_is_punct("]")) {
      next();
      Term anon = slice_term(TermKind::kBlankNode, begin, last_end());
      anon.value = label;
      return anon;
    }
    if (!allow_property_list) return std::nullopt;
    Term inner;
    inner.kind = TermKind::kBlankNode;
    inner.text = "[";
    inner.value = label;
    inner.span = Span{begin, begin + 1};
    parse_property_list(inner, begin, true);
    if (at_end()) return std::nullopt;
    if (peek_is_punct("]")) {
      next();
    } else {
      tree_.errors_.push_back(ErrorNode{peek().span, "expected ']'"});
    }
    Term node = slice_term(TermKind::kBlankNode, begin, last_end());
    node.value = label;
    return node;
  }
  if (t.is_punct("(")) {
    const std::size_t begin = t.span.begin;
    next();
    int depth = 1;
    while (depth > 0) {
      if (expect_at_end(CursorRole::kUnknown)) return std::nullopt;
      const Token& c = peek();
      if (c.is_punct("}") || c.is_punct("{")) {
        tree_.errors_.push_back(ErrorNode{c.span, "unterminated collection"});
        break;
      }
      if (c.is_punct("(")) ++depth;
      if (c.is_punct(")")) --depth;
      next();
    }
    return slice_term(TermKind::kCollection, begin, last_end());
  }
  return std::nullopt;
}

std::optional<Term> Parser::parse_verb() {
  if (at_end()) return std::nullopt;
  const Token& t = peek();
  if (t.kind == TokenKind::kVariable) {
    next();
    return make_term(t);
  }
  const bool path_start = t.kind == TokenKind::kIri || t.kind == TokenKind::kPrefixedName ||
                          t.kind == TokenKind::kTypeShorthand || t.is_punct("^") ||
                          t.is_punct("(") || t.is_punct("!");
  if (!path_start) return std::nullopt;
  const std::size_t start = cur_;
  if (!parse_path_alternative()) return std::nullopt;
  if (cur_ == start + 1 && t.kind != TokenKind::kPunctuation) return make_term(t);
  return slice_term(TermKind::kPath, t.span.begin, last_end());
}

bool Parser::parse_path_alternative() {
  auto sequence = [this] {
    if (!parse_path_element()) return false;
    while (peek_is_punct("/")) {
      next();
      if (!parse_path_element()) return false;
    }
    return true;
  };
  if (!sequence()) return false;
  while (peek_is_punct("|")) {
    next();
    if (!sequence()) return false;
  }
  return true;
}

bool Parser::parse_path_element() {
  if (expect_at_end(CursorRole::kPredicate)) return false;
  if (peek_is_punct("^")) {
    next();
    if (expect_at_end(CursorRole::kPredicate)) return false;
  }
  const Token& t = peek();
  if (t.kind == TokenKind::kIri || t.kind == TokenKind::kPrefixedName ||
      t.kind == TokenKind::kTypeShorthand) {
    next();
  } else if (t.is_punct("!")) {
    next();
    if (expect_at_end(CursorRole::kPredicate)) return false;
    if (peek_is_punct("(")) {
      next();
      while (!peek_is_punct(")")) {
        if (expect_at_end(CursorRole::kPredicate)) return false;
        if (peek_is_punct("}") || peek_is_punct("{")) return false;
        next();
      }
      next();
    } else {
      if (peek_is_punct("^")) next();
      if (expect_at_end(CursorRole::kPredicate)) return false;
      const Token& n = peek();
      if (n.kind != TokenKind::kIri && n.kind != TokenKind::kPrefixedName &&
          n.kind != TokenKind::kTypeShorthand)
        return false;
      next();
    }
  } else if (t.is_punct("(")) {
    next();
    if (!parse_path_alternative()) return false;
    if (expect_at_end(CursorRole::kUnknown)) return false;
    if (!peek_is_punct(")")) return false;
    next();
  } else {
    return false;
  }
  while (peek_is_punct("*") || peek_is_punct("+") || peek_is_punct("?")) next();
  return true;
}

SyntaxTree parse_partial(std::string_view text) { return Parser(text).run(); }

PrefixMap collect_prefixes(const SyntaxTree& tree) {
  PrefixMap map;
  for (const PrefixDecl& decl : tree.prefix_decls()) map.declare(decl.label, decl.iri);
  if (tree.base()) map.set_base(*tree.base());
  return map;
}

}  // namespace sparql_assist
