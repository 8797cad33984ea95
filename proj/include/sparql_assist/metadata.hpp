#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sparql_assist/protocol.hpp"
#include "sparql_assist/syntax.hpp"

namespace sparql_assist {

inline constexpr std::string_view kVoidNs = "http://rdfs.org/ns/void#";
inline constexpr std::string_view kVoidExtNs = "http://ldf.fi/void-ext#";
inline constexpr std::string_view kShaclNs = "http://www.w3.org/ns/shacl#";

enum class Provenance { kVoid, kProbed, kNone };
std::string_view to_string(Provenance p);

struct PredicateProfile {
  std::string iri;
  std::uint64_t triples = 0;
  std::set<std::string> object_classes;
  std::set<std::string> object_datatypes;

  friend bool operator==(const PredicateProfile&, const PredicateProfile&) = default;
};

struct ClassProfile {
  std::string iri;
  std::uint64_t instances = 0;
  std::vector<PredicateProfile> predicates;  // unique IRIs, ascending

  const PredicateProfile* find_predicate(std::string_view predicate) const;
  friend bool operator==(const ClassProfile&, const ClassProfile&) = default;
};

struct PredicateCount {
  std::string iri;
  std::uint64_t triples = 0;
  friend bool operator==(const PredicateCount&, const PredicateCount&) = default;
};

// Classes in the store, the predicates used on their instances, and the
// predicates known without a class (the only predicate source when probed).
struct VoidSchema {
  std::vector<ClassProfile> classes;  // unique IRIs, ascending
  std::vector<PredicateCount> global_predicates;  // unique IRIs, ascending
  Provenance provenance = Provenance::kVoid;

  const ClassProfile* find_class(std::string_view iri) const;
  bool empty() const { return classes.empty() && global_predicates.empty(); }
  // Every known predicate with its triple count summed over class profiles;
  // a global count wins when it is larger.
  std::map<std::string, std::uint64_t> all_predicates() const;

  friend bool operator==(const VoidSchema&, const VoidSchema&) = default;
};

// One row of the VoID extraction query.
struct VoidRow {
  std::string subject_class;
  std::uint64_t entities = 0;
  std::string predicate;
  std::optional<std::uint64_t> triples;
  std::optional<std::string> object_class;
  std::optional<std::string> object_datatype;

  friend auto operator<=>(const VoidRow&, const VoidRow&) = default;
};

VoidSchema fold_void_rows(const std::vector<VoidRow>& rows);
// One row per object class, one per datatype, one bare row when neither.
std::vector<VoidRow> flatten_void_schema(const VoidSchema& schema);
std::vector<VoidRow> void_rows_from_results(const ResultSet& results);

struct QueryExample {
  std::string id;
  std::string query;
  QueryForm form = QueryForm::kSelect;
  std::string description;
  std::vector<std::string> keywords;

  friend bool operator==(const QueryExample&, const QueryExample&) = default;
};

using ExampleCatalog = std::vector<QueryExample>;

// Case-insensitive substring match over description and query text.
ExampleCatalog filter_examples(const ExampleCatalog& catalog, std::string_view needle);

// The SPARQL texts used to gather metadata. Deployments may override any of
// them per endpoint.
struct MetadataQueries {
  std::string void_query;
  std::string examples_query;
  std::string probe_classes;
  std::string probe_predicates;
  std::string probe_classes_distinct;
  std::string probe_predicates_distinct;

  static MetadataQueries defaults(std::size_t probe_limit = 1000);
};

// Empty result: nullopt ("no VoID"), which is not an error.
std::optional<VoidSchema> fetch_void(QueryExecutor& executor, const EndpointRef& endpoint,
                                     const MetadataQueries& queries);
// Sorted by id. Resources without any query text are skipped.
ExampleCatalog fetch_examples(QueryExecutor& executor, const EndpointRef& endpoint,
                              const MetadataQueries& queries);
// Classes with instance counts and predicates with triple counts. Falls back
// to DISTINCT queries (counts 0) when the endpoint rejects aggregates.
VoidSchema probe_fallback(QueryExecutor& executor, const EndpointRef& endpoint,
                          const MetadataQueries& queries);

enum class MetadataState { kAbsent, kFresh, kStale, kFetching, kFailed };
std::string_view to_string(MetadataState s);

struct CachedMetadata {
  std::string endpoint;
  VoidSchema schema;
  ExampleCatalog examples;
  std::chrono::system_clock::time_point fetched_at{};
  MetadataState state = MetadataState::kAbsent;
  std::string error;           // why the schema could not be fetched
  std::string examples_error;  // why the examples could not be fetched

  Provenance provenance() const {
    return state == MetadataState::kFailed ? Provenance::kNone : schema.provenance;
  }
};

// Source of per-endpoint metadata snapshots for completion.
class MetadataProvider {
 public:
  virtual ~MetadataProvider() = default;
  virtual std::shared_ptr<const CachedMetadata> get(const std::string& endpoint_url) = 0;
};

struct CacheOptions {
  std::chrono::seconds ttl{3600};
  // How long a failed fetch is kept before retrying; defaults to `ttl`.
  std::optional<std::chrono::seconds> failure_ttl;
  std::optional<std::chrono::milliseconds> request_timeout;
  std::function<MetadataQueries(const std::string& endpoint_url)> queries_for;
  std::function<std::chrono::steady_clock::time_point()> clock;
};

// Shared, read-mostly cache of endpoint metadata. Concurrent misses for one
// endpoint share a single fetch; snapshots are immutable.
class MetadataCache : public MetadataProvider {
 public:
  MetadataCache(std::shared_ptr<QueryExecutor> executor, CacheOptions options = {});

  std::shared_ptr<const CachedMetadata> get(const std::string& endpoint_url) override;

  // The next get() refetches. A fetch in flight completes, then is marked for
  // refetch.
  void invalidate(const std::string& endpoint_url);

  // Current snapshot with its state, without fetching; nullopt when absent.
  std::optional<CachedMetadata> peek(const std::string& endpoint_url) const;

  const CacheOptions& options() const { return options_; }

 private:
  struct Entry {
    std::shared_ptr<const CachedMetadata> value;
    std::chrono::steady_clock::time_point fetched{};
    bool fetching = false;
    bool invalidated = false;
    bool refetch_after_fetch = false;
    std::shared_future<std::shared_ptr<const CachedMetadata>> inflight;
  };

  std::chrono::steady_clock::time_point now() const;
  bool expired(const Entry& e) const;
  std::shared_ptr<const CachedMetadata> fetch(const std::string& endpoint_url) const;

  std::shared_ptr<QueryExecutor> executor_;
  CacheOptions options_;
  mutable std::mutex mu_;
  std::map<std::string, Entry> entries_;
};

}  // namespace sparql_assist
