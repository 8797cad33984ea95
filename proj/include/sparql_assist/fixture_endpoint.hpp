#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "sparql_assist/metadata.hpp"
#include "sparql_assist/protocol.hpp"

namespace httplib {
class Server;
}

namespace sparql_assist {

enum class TemplateId {
  kVoid,
  kExamples,
  kProbeClasses,
  kProbePredicates,
  kProbeClassesDistinct,
  kProbePredicatesDistinct,
};
std::string_view to_string(TemplateId id);

// Collapses whitespace runs to one space and trims both ends.
std::string normalize_query(std::string_view query);

// Which requests a registration applies to: one of the metadata templates, or
// an exact query text compared after whitespace normalization.
class Matcher {
 public:
  static Matcher template_id(TemplateId id);
  static Matcher text(std::string_view query);

  const std::string& key() const { return key_; }
  friend auto operator<=>(const Matcher&, const Matcher&) = default;

 private:
  explicit Matcher(std::string key) : key_(std::move(key)) {}
  std::string key_;
};

class FixtureConfigError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct FailureMode {
  int status = 0;                      // non-zero: answer with this status
  std::chrono::milliseconds delay{0};  // wait before answering
  bool drop_connection = false;        // close the connection mid-response

  static FailureMode http_status(int code) { return {code, {}, false}; }
  static FailureMode slow(std::chrono::milliseconds d) { return {0, d, false}; }
  static FailureMode drop() { return {0, {}, true}; }
};

struct LoggedRequest {
  std::string method;
  std::string query;
  std::optional<std::string> matched;  // matcher key, nullopt when unmatched
};

// A SPARQL endpoint double on 127.0.0.1 that answers registered queries with
// canned results. Unmatched queries get an empty result and are logged.
class FixtureEndpoint {
 public:
  // Template ids resolve to the texts in `templates`.
  explicit FixtureEndpoint(MetadataQueries templates = MetadataQueries::defaults());
  ~FixtureEndpoint();
  FixtureEndpoint(const FixtureEndpoint&) = delete;
  FixtureEndpoint& operator=(const FixtureEndpoint&) = delete;

  // Throws FixtureConfigError when the matcher is already registered.
  void register_result(const Matcher& matcher, ResultSet result);
  void inject_failure(const Matcher& matcher, FailureMode mode);
  void clear_failure(const Matcher& matcher);
  // Answer POST with 405 so clients must retry with GET.
  void set_reject_post(bool reject);

  std::size_t request_count(const Matcher& matcher) const;
  std::size_t total_requests() const;
  std::vector<LoggedRequest> request_log() const;
  std::vector<std::string> unmatched_queries() const;
  void reset_counters();

  // Binds an ephemeral port and serves in a background thread.
  int serve();
  void stop();
  int port() const { return port_; }
  std::string url() const;

 private:
  struct Registration {
    ResultSet result;
    bool has_result = false;
    std::optional<FailureMode> failure;
  };

  std::optional<std::string> match(const std::string& query) const;

  std::map<std::string, std::string> template_texts_;  // normalized text -> key
  mutable std::mutex mu_;
  std::map<std::string, Registration> registrations_;
  std::vector<LoggedRequest> log_;
  bool reject_post_ = false;

  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

// Result sets in the shape the metadata queries return.
ResultSet void_results(const std::vector<VoidRow>& rows);
ResultSet examples_results(const ExampleCatalog& examples);
ResultSet probe_class_results(const std::vector<std::pair<std::string, std::uint64_t>>& classes);
ResultSet probe_predicate_results(const std::vector<std::pair<std::string, std::uint64_t>>& predicates);
ResultSet distinct_results(const std::string& variable, const std::vector<std::string>& iris);

}  // namespace sparql_assist
