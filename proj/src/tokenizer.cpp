#include <algorithm>
#include <array>
#include <cctype>
#include <string>

#include "sparql_assist/syntax.hpp"
#include "utf8.hpp"

namespace sparql_assist {
namespace {

constexpr std::array kKeywords = {
    "ABS",       "AS",        "ASC",        "ASK",       "AVG",
    "BASE",      "BIND",      "BNODE",      "BOUND",     "BY",
    "CEIL",      "COALESCE",  "CONCAT",     "CONSTRUCT", "CONTAINS",
    "COUNT",     "DATATYPE",  "DAY",        "DESC",      "DESCRIBE",
    "DISTINCT",  "ENCODE_FOR_URI",          "EXISTS",    "FILTER",
    "FLOOR",     "FROM",      "GRAPH",      "GROUP",     "GROUP_CONCAT",
    "HAVING",    "HOURS",     "IF",         "IN",        "IRI",
    "ISBLANK",   "ISIRI",     "ISLITERAL",  "ISNUMERIC", "ISURI",
    "LANG",      "LANGMATCHES",             "LCASE",     "LIMIT",
    "MAX",       "MD5",       "MIN",        "MINUS",     "MINUTES",
    "MONTH",     "NAMED",     "NOT",        "NOW",       "OFFSET",
    "OPTIONAL",  "ORDER",     "PREFIX",     "RAND",      "REDUCED",
    "REGEX",     "REPLACE",   "ROUND",      "SAMETERM",  "SAMPLE",
    "SECONDS",   "SELECT",    "SEPARATOR",  "SERVICE",   "SHA1",
    "SHA256",    "SHA384",    "SHA512",     "SILENT",    "STR",
    "STRAFTER",  "STRBEFORE", "STRDT",      "STRENDS",   "STRLANG",
    "STRLEN",    "STRSTARTS", "STRUUID",    "SUBSTR",    "SUM",
    "TIMEZONE",  "TZ",        "UCASE",      "UNDEF",     "UNION",
    "URI",       "UUID",      "VALUES",     "WHERE",     "YEAR",
};

std::string to_upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

bool is_ascii_alpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ascii_alnum(char c) { return is_ascii_alpha(c) || is_ascii_digit(c); }

// Length of a name character at `i` (ASCII letter/digit/underscore/extra or a
// valid non-ASCII UTF-8 sequence), or 0.
std::size_t name_char(std::string_view s, std::size_t i, std::string_view extra) {
  if (i >= s.size()) return 0;
  const char c = s[i];
  if (static_cast<unsigned char>(c) >= 0x80) return utf8::sequence_length(s, i);
  if (is_ascii_alnum(c) || c == '_' || extra.find(c) != std::string_view::npos)
    return 1;
  return 0;
}

bool is_name_start(std::string_view s, std::size_t i) {
  if (i >= s.size()) return false;
  const char c = s[i];
  if (static_cast<unsigned char>(c) >= 0x80) return utf8::sequence_length(s, i) > 0;
  return is_ascii_alpha(c);
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : s_(text) {}

  std::vector<Token> run() {
    while (pos_ < s_.size()) step();
    return std::move(out_);
  }

 private:
  void emit(TokenKind kind, std::size_t end) {
    out_.push_back(Token{kind, std::string(s_.substr(pos_, end - pos_)), Span{pos_, end}});
    pos_ = end;
  }

  void step() {
    const char c = s_[pos_];
    const auto uc = static_cast<unsigned char>(c);
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') return whitespace();
    if (c == '#') return comment();
    if (c == '<') return iri_or_less();
    if (c == '"' || c == '\'') return string_literal();
    if (c == '?' || c == '$') return variable();
    if (c == '_' && pos_ + 1 < s_.size() && s_[pos_ + 1] == ':') return blank_node();
    if (is_ascii_digit(c) ||
        (c == '.' && pos_ + 1 < s_.size() && is_ascii_digit(s_[pos_ + 1])))
      return number();
    if (is_name_start(s_, pos_) || c == ':') return name();
    if (uc >= 0x80) return invalid_bytes();
    punctuation();
  }

  void whitespace() {
    std::size_t e = pos_;
    while (e < s_.size() && (s_[e] == ' ' || s_[e] == '\t' || s_[e] == '\r' || s_[e] == '\n'))
      ++e;
    emit(TokenKind::kWhitespace, e);
  }

  void comment() {
    std::size_t e = pos_ + 1;
    while (e < s_.size() && s_[e] != '\n' && s_[e] != '\r') {
      const std::size_t len = utf8::sequence_length(s_, e);
      if (len == 0) break;
      e += len;
    }
    emit(TokenKind::kComment, e);
  }

  void invalid_bytes() {
    std::size_t e = pos_;
    while (e < s_.size() && static_cast<unsigned char>(s_[e]) >= 0x80 &&
           utf8::sequence_length(s_, e) == 0)
      ++e;
    emit(TokenKind::kErrorFragment, e);
  }

  void iri_or_less() {
    std::size_t e = pos_ + 1;
    while (e < s_.size()) {
      const char c = s_[e];
      const auto uc = static_cast<unsigned char>(c);
      if (uc >= 0x80) {
        const std::size_t len = utf8::sequence_length(s_, e);
        if (len == 0) break;
        e += len;
        continue;
      }
      if (uc <= 0x20 || std::string_view("<>\"{}|^`\\").find(c) != std::string_view::npos)
        break;
      ++e;
    }
    if (e < s_.size() && s_[e] == '>') return emit(TokenKind::kIri, e + 1);
    // An IRI still being typed at the end of the text.
    if (e == s_.size() && e > pos_ + 1 && is_ascii_alpha(s_[pos_ + 1]))
      return emit(TokenKind::kIri, e);
    punctuation();
  }

  void string_literal() {
    const char q = s_[pos_];
    const bool long_form = s_.substr(pos_, 3) == std::string(3, q);
    std::size_t e = pos_ + (long_form ? 3 : 1);
    bool closed = false;
    while (e < s_.size()) {
      const char c = s_[e];
      if (c == '\\') {
        e += 2;
        continue;
      }
      if (long_form) {
        if (s_.substr(e, 3) == std::string(3, q)) {
          e += 3;
          // A long string may end with extra quote characters.
          while (e < s_.size() && s_[e] == q) ++e;
          closed = true;
          break;
        }
      } else {
        if (c == q) {
          ++e;
          closed = true;
          break;
        }
        if (c == '\n' || c == '\r') break;
      }
      const std::size_t len = utf8::sequence_length(s_, e);
      if (len == 0) break;
      e += len;
    }
    e = std::min(e, s_.size());
    if (!closed) return emit(TokenKind::kErrorFragment, e);
    // Language tag is kept on the literal token.
    if (e + 1 < s_.size() && s_[e] == '@' && is_ascii_alpha(s_[e + 1])) {
      ++e;
      while (e < s_.size() && is_ascii_alpha(s_[e])) ++e;
      while (e + 1 < s_.size() && s_[e] == '-' && is_ascii_alnum(s_[e + 1])) {
        ++e;
        while (e < s_.size() && is_ascii_alnum(s_[e])) ++e;
      }
    }
    emit(TokenKind::kLiteral, e);
  }

  void variable() {
    std::size_t e = pos_ + 1;
    while (std::size_t len = name_char(s_, e, "")) e += len;
    if (e > pos_ + 1) return emit(TokenKind::kVariable, e);
    // A `?` glued to a path element is a path modifier.
    if (s_[pos_] == '?' && !out_.empty() && out_.back().span.end == pos_) {
      const Token& prev = out_.back();
      if (prev.kind == TokenKind::kIri || prev.kind == TokenKind::kPrefixedName ||
          prev.kind == TokenKind::kTypeShorthand || prev.is_punct(")"))
        return emit(TokenKind::kPunctuation, pos_ + 1);
    }
    emit(TokenKind::kVariable, pos_ + 1);
  }

  void blank_node() {
    std::size_t e = pos_ + 2;
    while (std::size_t len = name_char(s_, e, "-.")) e += len;
    while (e > pos_ + 2 && s_[e - 1] == '.') --e;
    emit(TokenKind::kBlankNode, e);
  }

  void number() {
    std::size_t e = pos_;
    while (e < s_.size() && is_ascii_digit(s_[e])) ++e;
    if (e + 1 < s_.size() && s_[e] == '.' && is_ascii_digit(s_[e + 1])) {
      ++e;
      while (e < s_.size() && is_ascii_digit(s_[e])) ++e;
    }
    if (e < s_.size() && (s_[e] == 'e' || s_[e] == 'E')) {
      std::size_t x = e + 1;
      if (x < s_.size() && (s_[x] == '+' || s_[x] == '-')) ++x;
      if (x < s_.size() && is_ascii_digit(s_[x])) {
        while (x < s_.size() && is_ascii_digit(s_[x])) ++x;
        e = x;
      }
    }
    emit(TokenKind::kLiteral, e);
  }

  // Prefixed names, keywords, `a`, booleans and stray words.
  void name() {
    std::size_t e = pos_;
    while (std::size_t len = name_char(s_, e, "-.")) e += len;
    std::size_t prefix_end = e;
    while (prefix_end > pos_ && s_[prefix_end - 1] == '.') --prefix_end;
    if (prefix_end < s_.size() && s_[prefix_end] == ':' && prefix_end == e) {
      return emit(TokenKind::kPrefixedName, local_name_end(prefix_end + 1));
    }
    std::size_t w = pos_;
    while (w < s_.size() && (is_ascii_alnum(s_[w]) || s_[w] == '_')) ++w;
    if (w == pos_) {
      // Non-ASCII word that is not a prefixed name.
      while (std::size_t len = name_char(s_, w, "")) w += len;
      return emit(TokenKind::kErrorFragment, w);
    }
    const std::string_view word = s_.substr(pos_, w - pos_);
    if (word == "a") return emit(TokenKind::kTypeShorthand, w);
    const std::string upper = to_upper(word);
    if (upper == "TRUE" || upper == "FALSE") return emit(TokenKind::kLiteral, w);
    if (is_sparql_keyword(word)) return emit(TokenKind::kKeyword, w);
    emit(TokenKind::kErrorFragment, w);
  }

  std::size_t local_name_end(std::size_t start) const {
    std::size_t e = start;
    while (e < s_.size()) {
      const char c = s_[e];
      if (c == '%' && e + 2 < s_.size() && std::isxdigit(static_cast<unsigned char>(s_[e + 1])) &&
          std::isxdigit(static_cast<unsigned char>(s_[e + 2]))) {
        e += 3;
        continue;
      }
      if (c == '\\' && e + 1 < s_.size() &&
          std::string_view("_~.-!$&'()*+,;=/?#@%").find(s_[e + 1]) != std::string_view::npos) {
        e += 2;
        continue;
      }
      const std::size_t len = name_char(s_, e, "-.:");
      if (len == 0) break;
      e += len;
    }
    while (e > start && s_[e - 1] == '.') --e;
    return e;
  }

  void punctuation() {
    static constexpr std::array kTwoChar = {"^^", "&&", "||", "!=", "<=", ">="};
    const std::string_view two = s_.substr(pos_, 2);
    for (std::string_view op : kTwoChar) {
      if (two == op) return emit(TokenKind::kPunctuation, pos_ + 2);
    }
    if (std::string_view("{}()[];,.*=<>!+-/^|?").find(s_[pos_]) != std::string_view::npos)
      return emit(TokenKind::kPunctuation, pos_ + 1);
    emit(TokenKind::kErrorFragment, pos_ + 1);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::vector<Token> out_;
};

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::kKeyword: return "keyword";
    case TokenKind::kIri: return "iri";
    case TokenKind::kPrefixedName: return "prefixed-name";
    case TokenKind::kVariable: return "variable";
    case TokenKind::kLiteral: return "literal";
    case TokenKind::kBlankNode: return "blank-node";
    case TokenKind::kPunctuation: return "punctuation";
    case TokenKind::kComment: return "comment";
    case TokenKind::kWhitespace: return "whitespace";
    case TokenKind::kTypeShorthand: return "a";
    case TokenKind::kErrorFragment: return "error-fragment";
  }
  return "error-fragment";
}

bool is_sparql_keyword(std::string_view word) {
  const std::string upper = to_upper(word);
  return std::binary_search(kKeywords.begin(), kKeywords.end(), upper,
                            [](std::string_view a, std::string_view b) { return a < b; });
}

bool Token::is_keyword(std::string_view upper) const {
  return kind == TokenKind::kKeyword && to_upper(text) == upper;
}

bool Token::is_name_like() const {
  switch (kind) {
    case TokenKind::kKeyword:
    case TokenKind::kIri:
    case TokenKind::kPrefixedName:
    case TokenKind::kVariable:
    case TokenKind::kTypeShorthand:
    case TokenKind::kBlankNode:
      return true;
    case TokenKind::kErrorFragment:
      return !text.empty() && is_name_start(text, 0);
    default:
      return false;
  }
}

std::vector<Token> tokenize(std::string_view text) { return Lexer(text).run(); }

}  // namespace sparql_assist
