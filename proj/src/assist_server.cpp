#include <charconv>

#include "httplib.h"
#include "json.hpp"
#include "sparql_assist/api_json.hpp"
#include "sparql_assist/assist_server.hpp"
#include "sparql_assist/completion.hpp"
#include "sparql_assist/schema_graph.hpp"

namespace sparql_assist {
namespace {

constexpr const char* kJson = "application/json";

void send_error(httplib::Response& res, int status, std::string_view code, std::string_view message) {
  res.status = status;
  res.set_content(api::error_json(code, message), kJson);
}

std::optional<std::size_t> positive_integer(const nlohmann::json& j) {
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  if (j.is_number_integer() && j.get<long long>() > 0) return static_cast<std::size_t>(j.get<long long>());
  return std::nullopt;
}

}  // namespace

AssistServer::AssistServer(ServiceConfig config)
    : config_(std::move(config)), server_(std::make_unique<httplib::Server>()) {
  config_.validate();
  install_routes();
}

AssistServer::~AssistServer() { stop(); }

void AssistServer::attach_cache(std::shared_ptr<MetadataCache> cache) {
  std::lock_guard lock(cache_mu_);
  cache_ = std::move(cache);
  ready_ = cache_ != nullptr;
}

void AssistServer::attach_executor(std::shared_ptr<QueryExecutor> executor) {
  attach_cache(std::make_shared<MetadataCache>(std::move(executor), config_.cache_options()));
}

std::shared_ptr<MetadataCache> AssistServer::cache() const {
  std::lock_guard lock(cache_mu_);
  return cache_;
}

int AssistServer::bind(int port) {
  const int bound = port == 0 ? server_->bind_to_any_port(config_.bind_address)
                              : (server_->bind_to_port(config_.bind_address, port) ? port : -1);
  if (bound <= 0)
    throw std::runtime_error("cannot listen on " + config_.bind_address + ":" + std::to_string(port));
  return bound;
}

void AssistServer::listen() { server_->listen_after_bind(); }

int AssistServer::start(int port) {
  const int bound = bind(port);
  thread_ = std::thread([this] { listen(); });
  server_->wait_until_ready();
  return bound;
}

void AssistServer::stop() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

void AssistServer::install_routes() {
  server_->set_post_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
    const auto& allowed = config_.cors_origins;
    if (std::find(allowed.begin(), allowed.end(), "*") != allowed.end()) {
      res.set_header("Access-Control-Allow-Origin", "*");
    } else if (req.has_header("Origin")) {
      const std::string origin = req.get_header_value("Origin");
      if (std::find(allowed.begin(), allowed.end(), origin) != allowed.end()) {
        res.set_header("Access-Control-Allow-Origin", origin);
        res.set_header("Vary", "Origin");
      }
    }
  });

  server_->set_exception_handler([](const httplib::Request&, httplib::Response& res,
                                    std::exception_ptr ep) {
    std::string message = "internal error";
    try {
      if (ep) std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      message = e.what();
    } catch (...) {
    }
    send_error(res, 500, "internal", message);
  });

  server_->set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    if (res.status == 404)
      send_error(res, 404, "not_found", "no such route");
    else
      send_error(res, res.status, "error", httplib::status_message(res.status));
  });

  server_->Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.set_header("Access-Control-Max-Age", "600");
  });

  server_->Get("/health", [this](const httplib::Request&, httplib::Response& res) {
    if (!ready()) return send_error(res, 503, "unavailable", "metadata cache not ready");
    res.set_content("{\"status\":\"ok\"}\n", kJson);
  });

  auto require_cache = [this](httplib::Response& res) -> std::shared_ptr<MetadataCache> {
    auto c = cache();
    if (!c) send_error(res, 503, "unavailable", "metadata cache not ready");
    return c;
  };

  const CompletionOptions completion_options = config_.completion_options();
  server_->Post("/completion", [this, require_cache, completion_options](
                                   const httplib::Request& req, httplib::Response& res) {
    auto c = require_cache(res);
    if (!c) return;
    const nlohmann::json body = nlohmann::json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object())
      return send_error(res, 400, "bad_request", "body must be a JSON object");
    auto field = [&](const char* key) -> const nlohmann::json* {
      auto it = body.find(key);
      return it == body.end() ? nullptr : &*it;
    };
    const nlohmann::json* endpoint = field("endpoint");
    const nlohmann::json* query = field("query");
    const nlohmann::json* line = field("line");
    const nlohmann::json* column = field("column");
    if (!endpoint || !endpoint->is_string())
      return send_error(res, 400, "bad_request", "'endpoint' must be a string");
    if (!query || !query->is_string())
      return send_error(res, 400, "bad_request", "'query' must be a string");
    std::optional<std::size_t> l, col;
    if (line) l = positive_integer(*line);
    if (column) col = positive_integer(*column);
    if (!l || !col)
      return send_error(res, 400, "bad_request", "'line' and 'column' must be positive integers");
    const std::string& text = query->get_ref<const std::string&>();
    const auto offset = api::byte_offset(text, *l, *col);
    if (!offset)
      return send_error(res, 400, "bad_request",
                        "position " + std::to_string(*l) + ":" + std::to_string(*col) +
                            " is outside the query");
    const CompletionList list =
        complete(text, *offset, endpoint->get<std::string>(), c.get(), completion_options);
    res.set_content(api::completion_json(list), kJson);
  });

  server_->Get("/examples", [require_cache](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("endpoint"))
      return send_error(res, 400, "bad_request", "missing 'endpoint' parameter");
    auto c = require_cache(res);
    if (!c) return;
    const auto md = c->get(req.get_param_value("endpoint"));
    if (!md->examples_error.empty())
      return send_error(res, 502, "upstream_unavailable", md->examples_error);
    res.set_content(api::examples_json(filter_examples(md->examples, req.get_param_value("q"))), kJson);
  });

  server_->Get("/schema", [this, require_cache](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("endpoint"))
      return send_error(res, 400, "bad_request", "missing 'endpoint' parameter");
    const std::string format_name = req.has_param("format") ? req.get_param_value("format") : "json";
    const auto format = api::parse_schema_format(format_name);
    if (!format)
      return send_error(res, 400, "bad_request",
                        "unknown format '" + format_name + "' (expected json, dot or mermaid)");
    std::uint64_t min_count = 0;
    if (req.has_param("minCount")) {
      const std::string v = req.get_param_value("minCount");
      auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), min_count);
      if (ec != std::errc() || ptr != v.data() + v.size())
        return send_error(res, 400, "bad_request", "'minCount' must be a non-negative integer");
    }
    auto c = require_cache(res);
    if (!c) return;
    const auto md = c->get(req.get_param_value("endpoint"));
    if (md->state == MetadataState::kFailed)
      return send_error(res, 502, "upstream_unavailable", md->error);
    const SchemaGraph graph = build_graph(md->schema, min_count);
    res.set_content(api::schema_body(graph, *format, config_.well_known),
                    std::string(api::content_type(*format)));
  });

  server_->Get("/metadata/status", [require_cache](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("endpoint"))
      return send_error(res, 400, "bad_request", "missing 'endpoint' parameter");
    auto c = require_cache(res);
    if (!c) return;
    res.set_content(api::status_json(c->peek(req.get_param_value("endpoint"))), kJson);
  });
}

}  // namespace sparql_assist
