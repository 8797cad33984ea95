#include <future>

#include "sparql_assist/metadata.hpp"

namespace sparql_assist {

std::string_view to_string(MetadataState s) {
  switch (s) {
    case MetadataState::kAbsent: return "absent";
    case MetadataState::kFresh: return "fresh";
    case MetadataState::kStale: return "stale";
    case MetadataState::kFetching: return "fetching";
    case MetadataState::kFailed: return "failed";
  }
  return "absent";
}

MetadataCache::MetadataCache(std::shared_ptr<QueryExecutor> executor, CacheOptions options)
    : executor_(std::move(executor)), options_(std::move(options)) {
  if (!executor_) throw std::invalid_argument("MetadataCache needs a query executor");
}

std::chrono::steady_clock::time_point MetadataCache::now() const {
  return options_.clock ? options_.clock() : std::chrono::steady_clock::now();
}

bool MetadataCache::expired(const Entry& e) const {
  if (!e.value) return true;
  const auto ttl = e.value->state == MetadataState::kFailed
                       ? options_.failure_ttl.value_or(options_.ttl)
                       : options_.ttl;
  return now() - e.fetched >= ttl;
}

std::shared_ptr<const CachedMetadata> MetadataCache::get(const std::string& endpoint_url) {
  std::unique_lock lock(mu_);
  Entry& entry = entries_[endpoint_url];
  if (entry.fetching) {
    auto pending = entry.inflight;
    lock.unlock();
    return pending.get();
  }
  if (entry.value && !entry.invalidated && !expired(entry)) return entry.value;

  std::promise<std::shared_ptr<const CachedMetadata>> promise;
  entry.inflight = promise.get_future().share();
  entry.fetching = true;
  entry.refetch_after_fetch = false;
  lock.unlock();

  std::shared_ptr<const CachedMetadata> result = fetch(endpoint_url);

  lock.lock();
  entry.value = result;
  entry.fetched = now();
  entry.fetching = false;
  entry.invalidated = entry.refetch_after_fetch;
  entry.refetch_after_fetch = false;
  lock.unlock();
  promise.set_value(result);
  return result;
}

void MetadataCache::invalidate(const std::string& endpoint_url) {
  std::lock_guard lock(mu_);
  auto it = entries_.find(endpoint_url);
  if (it == entries_.end()) return;
  if (it->second.fetching)
    it->second.refetch_after_fetch = true;
  else
    it->second.invalidated = true;
}

std::optional<CachedMetadata> MetadataCache::peek(const std::string& endpoint_url) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(endpoint_url);
  if (it == entries_.end()) return std::nullopt;
  const Entry& e = it->second;
  if (e.fetching) {
    CachedMetadata snapshot = e.value ? *e.value : CachedMetadata{};
    snapshot.endpoint = endpoint_url;
    snapshot.state = MetadataState::kFetching;
    return snapshot;
  }
  if (!e.value) return std::nullopt;
  CachedMetadata snapshot = *e.value;
  if (snapshot.state != MetadataState::kFailed && (e.invalidated || expired(e)))
    snapshot.state = MetadataState::kStale;
  return snapshot;
}

std::shared_ptr<const CachedMetadata> MetadataCache::fetch(const std::string& endpoint_url) const {
  auto out = std::make_shared<CachedMetadata>();
  out->endpoint = endpoint_url;
  out->fetched_at = std::chrono::system_clock::now();

  EndpointRef ref;
  try {
    ref = EndpointRef::parse(endpoint_url);
  } catch (const std::exception& e) {
    out->state = MetadataState::kFailed;
    out->error = e.what();
    out->examples_error = e.what();
    return out;
  }
  ref.timeout = options_.request_timeout;
  const MetadataQueries queries =
      options_.queries_for ? options_.queries_for(endpoint_url) : MetadataQueries::defaults();

  auto examples = std::async(std::launch::async, [&]() -> std::pair<ExampleCatalog, std::string> {
    try {
      return {fetch_examples(*executor_, ref, queries), {}};
    } catch (const std::exception& e) {
      return {{}, e.what()};
    }
  });

  try {
    std::optional<VoidSchema> schema;
    try {
      schema = fetch_void(*executor_, ref, queries);
    } catch (const TransportError&) {
      throw;  // unreachable endpoint: probing would fail the same way
    } catch (const SparqlError&) {
      // VoID query rejected or malformed; the probes may still work.
    }
    out->schema = schema ? std::move(*schema) : probe_fallback(*executor_, ref, queries);
    out->state = MetadataState::kFresh;
  } catch (const std::exception& e) {
    out->schema = VoidSchema{};
    out->schema.provenance = Provenance::kNone;
    out->state = MetadataState::kFailed;
    out->error = e.what();
  }

  auto [catalog, error] = examples.get();
  out->examples = std::move(catalog);
  out->examples_error = std::move(error);
  return out;
}

}  // namespace sparql_assist
