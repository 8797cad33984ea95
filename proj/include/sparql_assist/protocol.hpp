#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sparql_assist {

// Base for every failure talking to an endpoint. The metadata layer treats all
// of them as recoverable.
class SparqlError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Connection refused, DNS failure, timeout, dropped connection.
class TransportError : public SparqlError {
 public:
  using SparqlError::SparqlError;
};

// The endpoint answered with a non-2xx status.
class EndpointError : public SparqlError {
 public:
  EndpointError(int status, std::string body_snippet);
  int status() const { return status_; }
  const std::string& body_snippet() const { return body_snippet_; }

 private:
  int status_;
  std::string body_snippet_;
};

// The body is not a SPARQL JSON result document, or is too large.
class FormatError : public SparqlError {
 public:
  using SparqlError::SparqlError;
};

struct EndpointRef {
  std::string url;
  std::optional<std::chrono::milliseconds> timeout;
  std::vector<std::pair<std::string, std::string>> headers;

  // Throws std::invalid_argument unless `url` is absolute http(s) and the
  // timeout (when set) is positive.
  static EndpointRef parse(std::string url);
};

struct RdfTerm {
  enum class Kind { kIri, kLiteral, kBlankNode };

  Kind kind = Kind::kIri;
  std::string value;
  std::string datatype;  // literals only, may be empty
  std::string language;  // literals only, may be empty

  static RdfTerm iri(std::string v) { return {Kind::kIri, std::move(v), {}, {}}; }
  static RdfTerm literal(std::string v, std::string datatype = {}, std::string lang = {}) {
    return {Kind::kLiteral, std::move(v), std::move(datatype), std::move(lang)};
  }
  static RdfTerm blank(std::string label) { return {Kind::kBlankNode, std::move(label), {}, {}}; }

  friend bool operator==(const RdfTerm&, const RdfTerm&) = default;
};

// Unbound variables are simply absent from a row.
using Binding = std::map<std::string, RdfTerm>;

struct ResultSet {
  std::vector<std::string> variables;
  std::vector<Binding> rows;

  // Value of `var` in `row`, if bound.
  const RdfTerm* get(std::size_t row, const std::string& var) const;

  friend bool operator==(const ResultSet&, const ResultSet&) = default;
};

inline constexpr std::size_t kDefaultMaxResultBytes = 50u * 1024u * 1024u;

// Decodes the W3C SPARQL 1.1 Query Results JSON format. Extra keys are
// ignored. Throws FormatError.
ResultSet parse_results_json(std::string_view bytes,
                             std::size_t max_bytes = kDefaultMaxResultBytes);

// The inverse of parse_results_json; output is compact and deterministic.
std::string to_results_json(const ResultSet& results);

// Anything that can answer a SELECT query. The HTTP client is the production
// implementation.
class QueryExecutor {
 public:
  virtual ~QueryExecutor() = default;
  virtual ResultSet execute_select(const EndpointRef& endpoint, const std::string& query) = 0;
};

struct ClientOptions {
  std::chrono::milliseconds default_timeout{10'000};
  int transport_retries = 1;  // HTTP errors are never retried
  std::size_t max_result_bytes = kDefaultMaxResultBytes;
  std::size_t max_in_flight_per_endpoint = 2;
  std::string user_agent = "sparql-assist/1.0";
};

// SPARQL 1.1 protocol over HTTP(S). POSTs a form-encoded query and falls back
// to GET when the endpoint answers 405. Thread-safe.
class SparqlClient : public QueryExecutor {
 public:
  explicit SparqlClient(ClientOptions options = {});

  ResultSet execute_select(const EndpointRef& endpoint, const std::string& query) override;

  const ClientOptions& options() const { return options_; }

 private:
  class Gate {
   public:
    explicit Gate(std::size_t limit) : limit_(limit) {}
    void acquire();
    void release();

   private:
    std::mutex mu_;
    std::condition_variable cv_;
    std::size_t limit_;
    std::size_t in_use_ = 0;
  };

  Gate& gate_for(const std::string& url);

  ClientOptions options_;
  std::mutex gates_mu_;
  std::map<std::string, std::unique_ptr<Gate>> gates_;
};

}  // namespace sparql_assist
