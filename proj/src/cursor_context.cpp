#include <stdexcept>
#include <string>

#include "parser_impl.hpp"

namespace sparql_assist {

std::string_view to_string(CursorRole role) {
  switch (role) {
    case CursorRole::kKeyword: return "keyword";
    case CursorRole::kSubject: return "subject";
    case CursorRole::kPredicate: return "predicate";
    case CursorRole::kObject: return "object";
    case CursorRole::kPrefixDeclaration: return "prefix-declaration";
    case CursorRole::kServiceIri: return "service-iri";
    case CursorRole::kUnknown: return "unknown";
  }
  return "unknown";
}

// The grammatical position is whatever the parser expected when the text ran
// out just before the word under the cursor. Scope ids agree with the full tree
// because scopes are numbered in order of their opening brace.
CursorContext locate_context(const SyntaxTree& tree, std::size_t position) {
  const std::string& text = tree.text();
  if (position > text.size())
    throw std::out_of_range("cursor position " + std::to_string(position) +
                            " is past the end of the query (" + std::to_string(text.size()) +
                            " bytes)");
  CursorContext ctx;
  ctx.position = position;
  ctx.partial_span = Span{position, position};

  std::size_t cut = position;
  bool inside_opaque_token = false;
  for (const Token& t : tree.tokens()) {
    if (t.span.begin >= position) break;
    if (position > t.span.end) continue;
    if (t.is_name_like()) {
      cut = t.span.begin;
      ctx.partial = text.substr(cut, position - cut);
      ctx.partial_span = Span{cut, position};
    } else if (position < t.span.end && t.kind != TokenKind::kWhitespace) {
      // Inside a literal, comment or multi-character operator.
      cut = t.span.begin;
      inside_opaque_token = true;
    }
    break;
  }

  Parser parser(std::string_view(text).substr(0, cut));
  const SyntaxTree prefix_tree = parser.run();
  const Expectation& expected = *parser.expectation();

  ctx.role = inside_opaque_token ? CursorRole::kUnknown : expected.role;
  if (!inside_opaque_token) {
    ctx.subject = expected.subject;
    ctx.predicate = expected.predicate;
  }
  if (!expected.open_scopes.empty()) ctx.scope = expected.open_scopes.back();
  for (auto it = expected.open_scopes.rbegin(); it != expected.open_scopes.rend(); ++it) {
    const Scope& scope = prefix_tree.scopes()[*it];
    if (scope.kind == ScopeKind::kService) {
      ctx.service_endpoint = scope.service_endpoint;
      break;
    }
  }
  if (ctx.scope && prefix_tree.scopes()[*ctx.scope].opaque()) ctx.role = CursorRole::kUnknown;
  return ctx;
}

std::optional<Term> enclosing_service(const SyntaxTree& tree, std::size_t position) {
  const Scope* innermost = nullptr;
  for (const Scope& scope : tree.scopes()) {
    if (scope.kind != ScopeKind::kService || !scope.contains(position)) continue;
    if (!innermost || scope.span.begin > innermost->span.begin) innermost = &scope;
  }
  if (!innermost) return std::nullopt;
  return innermost->service_endpoint;
}

}  // namespace sparql_assist
