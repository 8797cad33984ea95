#include <pthread.h>

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "sparql_assist/api_json.hpp"
#include "sparql_assist/assist_server.hpp"
#include "sparql_assist/cli.hpp"
#include "sparql_assist/completion.hpp"
#include "sparql_assist/metadata.hpp"
#include "sparql_assist/schema_graph.hpp"
#include "sparql_assist/service_config.hpp"

namespace sparql_assist {
namespace {

// Failures that map to exit code 1.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Failures that map to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config_path;
  std::string endpoint;
  std::string query_file;
  std::size_t line = 0;
  std::size_t column = 0;
  std::string format;
  std::string filter;
  std::uint64_t min_count = 0;
  std::string output_path;
  int port = 0;
  long long ttl = 0;
};

ServiceConfig load_config(const std::string& flag_path) {
  std::string path = flag_path;
  if (path.empty()) {
    if (const char* env = std::getenv("SPARQL_ASSIST_CONFIG")) path = env;
  }
  if (path.empty()) return ServiceConfig{};
  try {
    return ServiceConfig::load_file(path);
  } catch (const std::invalid_argument& e) {
    throw UsageError(path + ": " + e.what());
  } catch (const std::exception& e) {
    throw IoError(e.what());
  }
}

std::string read_query(const std::string& path, std::istream& in) {
  std::stringstream ss;
  if (path == "-") {
    ss << in.rdbuf();
    return ss.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot read query file " + path);
  ss << file.rdbuf();
  return ss.str();
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r' || c == '\t') c = ' ';
  }
  return s;
}

MetadataCache make_cache(const ServiceConfig& cfg) {
  return MetadataCache(std::make_shared<SparqlClient>(), cfg.cache_options());
}

int cmd_complete(const Options& o, std::ostream& out, std::ostream& err, std::istream& in) {
  const ServiceConfig cfg = load_config(o.config_path);
  const std::string text = read_query(o.query_file, in);
  const auto offset = api::byte_offset(text, o.line, o.column);
  if (!offset)
    throw UsageError("position " + std::to_string(o.line) + ":" + std::to_string(o.column) +
                     " is outside the query");
  MetadataCache cache = make_cache(cfg);
  const CompletionList list = complete(text, *offset, o.endpoint, &cache, cfg.completion_options());
  if (o.format == "json") {
    out << api::completion_json(list);
  } else {
    for (const CompletionItem& item : list.items) out << item.insert_text << '\n';
    if (list.truncated) err << "note: list truncated\n";
  }
  if (list.provenance == Provenance::kNone) err << "provenance: none\n";
  return kExitOk;
}

int cmd_examples(const Options& o, std::ostream& out, std::ostream&) {
  const ServiceConfig cfg = load_config(o.config_path);
  MetadataCache cache = make_cache(cfg);
  const auto md = cache.get(o.endpoint);
  if (!md->examples_error.empty()) throw IoError(md->examples_error);
  const ExampleCatalog examples = filter_examples(md->examples, o.filter);
  if (o.format == "json") {
    out << api::examples_json(examples);
  } else {
    for (const QueryExample& ex : examples)
      out << ex.id << '\t' << to_string(ex.form) << '\t' << one_line(ex.description) << '\n';
  }
  return kExitOk;
}

int cmd_schema(const Options& o, std::ostream& out, std::ostream&) {
  const auto format = api::parse_schema_format(o.format);
  if (!format) throw UsageError("unknown format '" + o.format + "'");
  const ServiceConfig cfg = load_config(o.config_path);
  MetadataCache cache = make_cache(cfg);
  const auto md = cache.get(o.endpoint);
  if (md->state == MetadataState::kFailed) throw IoError(md->error);
  const std::string body = api::schema_body(build_graph(md->schema, o.min_count), *format, cfg.well_known);
  if (o.output_path.empty()) {
    out << body;
    return kExitOk;
  }
  std::ofstream file(o.output_path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot write " + o.output_path);
  file << body;
  file.close();
  if (!file) throw IoError("cannot write " + o.output_path);
  return kExitOk;
}

std::string plural(std::size_t n, const char* one, const char* many) {
  return std::to_string(n) + " " + (n == 1 ? one : many);
}

int cmd_probe(const Options& o, std::ostream& out, std::ostream& err) {
  const ServiceConfig cfg = load_config(o.config_path);
  EndpointRef ref;
  try {
    ref = EndpointRef::parse(o.endpoint);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  ref.timeout = cfg.request_timeout;
  const MetadataQueries queries = cfg.queries_for(o.endpoint);
  SparqlClient client;

  std::optional<VoidSchema> schema;
  try {
    schema = fetch_void(client, ref, queries);
  } catch (const TransportError& e) {
    throw IoError(e.what());
  } catch (const SparqlError& e) {
    err << "warning: VoID query failed: " << e.what() << '\n';
  }
  std::optional<ExampleCatalog> examples;
  try {
    examples = fetch_examples(client, ref, queries);
  } catch (const TransportError& e) {
    throw IoError(e.what());
  } catch (const SparqlError& e) {
    err << "warning: examples query failed: " << e.what() << '\n';
  }

  out << "VoID: " << (schema ? plural(schema->classes.size(), "class", "classes") : "absent")
      << "; examples: "
      << (examples && !examples->empty() ? std::to_string(examples->size()) : "absent") << '\n';
  if (!schema) {
    try {
      const VoidSchema probed = probe_fallback(client, ref, queries);
      if (probed.empty()) {
        out << "fallback: not viable (no classes or predicates found)\n";
        err << "warning: no VoID description and the store looks empty; completion will offer "
               "keywords and variables only\n";
      } else {
        out << "fallback: " << plural(probed.classes.size(), "class", "classes") << ", "
            << plural(probed.global_predicates.size(), "predicate", "predicates") << '\n';
        err << "warning: no VoID description; predicate completion ignores subject types\n";
      }
    } catch (const TransportError& e) {
      throw IoError(e.what());
    } catch (const SparqlError& e) {
      out << "fallback: not viable\n";
      err << "warning: probe queries failed: " << e.what() << '\n';
    }
  }
  if (!examples || examples->empty()) err << "warning: no query examples published\n";
  return kExitOk;
}

int cmd_serve(const Options& o, std::ostream& out, std::ostream& err) {
  ServiceConfig cfg = load_config(o.config_path);
  if (o.port != 0) cfg.port = o.port;
  if (o.ttl != 0) cfg.ttl = std::chrono::seconds(o.ttl);
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  AssistServer server(cfg);
  int port = 0;
  try {
    port = server.bind(cfg.port);
  } catch (const std::exception& e) {
    throw IoError(e.what());
  }
  server.attach_executor(std::make_shared<SparqlClient>());
  out << "listening on http://" << cfg.bind_address << ":" << port << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.listen();
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  err << "stopped\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
            std::istream& in) {
  CLI::App app{"SPARQL query assistance: completion, examples and schema from endpoint metadata",
               "sparql-assist"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config_path,
                 "JSON config file (default: $SPARQL_ASSIST_CONFIG)");

  auto* complete_cmd = app.add_subcommand("complete", "Completions at a cursor position");
  complete_cmd->add_option("--endpoint", o.endpoint, "SPARQL endpoint URL")->required();
  complete_cmd->add_option("--query-file", o.query_file, "Query text file, '-' for stdin")->required();
  complete_cmd->add_option("--line", o.line, "1-based line")->required()->check(CLI::PositiveNumber);
  complete_cmd->add_option("--col", o.column, "1-based column in characters")
      ->required()
      ->check(CLI::PositiveNumber);
  complete_cmd->add_option("--format", o.format, "json or text")
      ->default_val("text")
      ->check(CLI::IsMember({"json", "text"}));

  auto* examples_cmd = app.add_subcommand("examples", "List the endpoint's query examples");
  examples_cmd->add_option("--endpoint", o.endpoint, "SPARQL endpoint URL")->required();
  examples_cmd->add_option("--q", o.filter, "Case-insensitive filter on description and query");
  examples_cmd->add_option("--format", o.format, "json or text")
      ->default_val("text")
      ->check(CLI::IsMember({"json", "text"}));

  auto* schema_cmd = app.add_subcommand("schema", "Export the class schema graph");
  schema_cmd->add_option("--endpoint", o.endpoint, "SPARQL endpoint URL")->required();
  schema_cmd->add_option("--format", o.format, "dot, json or mermaid")
      ->required()
      ->check(CLI::IsMember({"dot", "json", "mermaid"}));
  schema_cmd->add_option("--min-count", o.min_count, "Drop edges with fewer triples")
      ->default_val(0);
  schema_cmd->add_option("-o,--output", o.output_path, "Write to a file instead of stdout");

  auto* probe_cmd = app.add_subcommand("probe", "Report which metadata the endpoint publishes");
  probe_cmd->add_option("--endpoint", o.endpoint, "SPARQL endpoint URL")->required();

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP JSON API");
  serve_cmd->add_option("--port", o.port, "Listen port (default 8080)")->check(CLI::Range(1, 65535));
  serve_cmd->add_option("--ttl", o.ttl, "Metadata cache TTL in seconds")->check(CLI::PositiveNumber);

  for (CLI::App* sub : {complete_cmd, examples_cmd, schema_cmd, probe_cmd, serve_cmd})
    sub->add_option("--config", o.config_path, "JSON config file (default: $SPARQL_ASSIST_CONFIG)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (*complete_cmd) return cmd_complete(o, out, err, in);
    if (*examples_cmd) return cmd_examples(o, out, err);
    if (*schema_cmd) return cmd_schema(o, out, err);
    if (*probe_cmd) return cmd_probe(o, out, err);
    if (*serve_cmd) return cmd_serve(o, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace sparql_assist
