#include <algorithm>
#include <cctype>
#include <functional>
#include <regex>

#include "httplib.h"
#include "sparql_assist/protocol.hpp"

namespace sparql_assist {
namespace {

constexpr std::size_t kSnippetBytes = 512;

std::string form_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(s.size() * 3 / 2);
  for (char c : s) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += c;
    } else {
      out += '%';
      out += kHex[uc >> 4];
      out += kHex[uc & 0xF];
    }
  }
  return out;
}

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string target;  // path and query, at least "/"
};

SplitUrl split_url(const std::string& url) {
  static const std::regex kUrl(R"(^(https?://[^/?#]+)([^#]*))", std::regex::icase);
  std::smatch m;
  if (!std::regex_search(url, m, kUrl)) throw std::invalid_argument("not an http(s) URL: " + url);
  SplitUrl out{m[1].str(), m[2].str()};
  if (out.target.empty() || out.target.front() != '/') out.target.insert(0, "/");
  return out;
}

class GateGuard {
 public:
  explicit GateGuard(auto& gate) : release_([&gate] { gate.release(); }) { gate.acquire(); }
  ~GateGuard() { release_(); }
  GateGuard(const GateGuard&) = delete;
  GateGuard& operator=(const GateGuard&) = delete;

 private:
  std::function<void()> release_;
};

}  // namespace

EndpointError::EndpointError(int status, std::string body_snippet)
    : SparqlError("endpoint answered HTTP " + std::to_string(status) +
                  (body_snippet.empty() ? "" : ": " + body_snippet)),
      status_(status),
      body_snippet_(std::move(body_snippet)) {}

EndpointRef EndpointRef::parse(std::string url) {
  static const std::regex kAbsolute(R"(^https?://[^/?#\s]+([/?][^\s]*)?$)", std::regex::icase);
  if (!std::regex_match(url, kAbsolute))
    throw std::invalid_argument("endpoint must be an absolute http(s) IRI: " + url);
  EndpointRef ref;
  ref.url = std::move(url);
  return ref;
}

void SparqlClient::Gate::acquire() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [this] { return in_use_ < limit_; });
  ++in_use_;
}

void SparqlClient::Gate::release() {
  {
    std::lock_guard lock(mu_);
    --in_use_;
  }
  cv_.notify_one();
}

SparqlClient::SparqlClient(ClientOptions options) : options_(std::move(options)) {
  if (options_.max_in_flight_per_endpoint == 0) options_.max_in_flight_per_endpoint = 1;
}

SparqlClient::Gate& SparqlClient::gate_for(const std::string& url) {
  std::lock_guard lock(gates_mu_);
  auto& gate = gates_[url];
  if (!gate) gate = std::make_unique<Gate>(options_.max_in_flight_per_endpoint);
  return *gate;
}

ResultSet SparqlClient::execute_select(const EndpointRef& endpoint, const std::string& query) {
  if (endpoint.timeout && endpoint.timeout->count() <= 0)
    throw std::invalid_argument("endpoint timeout must be positive");
  const SplitUrl url = split_url(endpoint.url);
  const auto timeout = endpoint.timeout.value_or(options_.default_timeout);
  GateGuard guard(gate_for(endpoint.url));

  auto attempt = [&](bool use_get) -> std::pair<int, std::string> {
    httplib::Client cli(url.origin);
    cli.set_connection_timeout(timeout);
    cli.set_read_timeout(timeout);
    cli.set_write_timeout(timeout);
    cli.set_follow_location(true);

    httplib::Request req;
    req.headers = {{"Accept", "application/sparql-results+json"},
                   {"User-Agent", options_.user_agent}};
    for (const auto& [k, v] : endpoint.headers) req.headers.emplace(k, v);
    if (use_get) {
      req.method = "GET";
      req.path = url.target + (url.target.find('?') == std::string::npos ? "?" : "&") +
                 "query=" + form_encode(query);
    } else {
      req.method = "POST";
      req.path = url.target;
      req.body = "query=" + form_encode(query);
      req.headers.emplace("Content-Type", "application/x-www-form-urlencoded");
    }
    std::string body;
    bool too_large = false;
    req.content_receiver = [&](const char* data, std::size_t n, uint64_t, uint64_t) {
      if (body.size() + n > options_.max_result_bytes) {
        too_large = true;
        return false;
      }
      body.append(data, n);
      return true;
    };
    httplib::Response res;
    httplib::Error err = httplib::Error::Success;
    if (!cli.send(req, res, err)) {
      if (too_large)
        throw FormatError("result document exceeds the limit of " +
                          std::to_string(options_.max_result_bytes) + " bytes");
      throw TransportError("request to " + endpoint.url + " failed: " + httplib::to_string(err));
    }
    return {res.status, std::move(body)};
  };

  const int attempts = 1 + std::max(0, options_.transport_retries);
  for (int i = 0;; ++i) {
    try {
      std::pair<int, std::string> res = attempt(false);
      if (res.first == 405) res = attempt(true);
      if (res.first < 200 || res.first >= 300)
        throw EndpointError(res.first, res.second.substr(0, std::min(res.second.size(), kSnippetBytes)));
      return parse_results_json(res.second, options_.max_result_bytes);
    } catch (const TransportError&) {
      if (i + 1 >= attempts) throw;
    }
  }
}

}  // namespace sparql_assist
