#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "sparql_assist/metadata.hpp"
#include "sparql_assist/service_config.hpp"

namespace httplib {
class Server;
}

namespace sparql_assist {

// The JSON API:
//   POST /completion        {endpoint, query, line, column}
//   GET  /examples          ?endpoint=...&q=...
//   GET  /schema            ?endpoint=...&format=json|dot|mermaid&minCount=N
//   GET  /metadata/status   ?endpoint=...
//   GET  /health
// Errors are {"error": {"code", "message"}}. Every route but /health answers
// 503 until a cache is attached.
class AssistServer {
 public:
  explicit AssistServer(ServiceConfig config);
  ~AssistServer();
  AssistServer(const AssistServer&) = delete;
  AssistServer& operator=(const AssistServer&) = delete;

  void attach_cache(std::shared_ptr<MetadataCache> cache);
  // Convenience: a cache over `executor` configured from the config.
  void attach_executor(std::shared_ptr<QueryExecutor> executor);
  bool ready() const { return ready_.load(); }

  // Binds config.bind_address. Port 0 picks an ephemeral port. Returns the
  // bound port, or throws std::runtime_error.
  int bind(int port);
  // Serves until stop(); blocking.
  void listen();
  // bind() plus listen() on a background thread.
  int start(int port);
  void stop();

 private:
  void install_routes();
  std::shared_ptr<MetadataCache> cache() const;

  ServiceConfig config_;
  std::unique_ptr<httplib::Server> server_;
  mutable std::mutex cache_mu_;
  std::shared_ptr<MetadataCache> cache_;
  std::atomic<bool> ready_{false};
  std::thread thread_;
};

}  // namespace sparql_assist
