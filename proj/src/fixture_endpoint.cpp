#include <cctype>

#include "httplib.h"
#include "sparql_assist/fixture_endpoint.hpp"

namespace sparql_assist {
namespace {

constexpr std::string_view kXsdInteger = "http://www.w3.org/2001/XMLSchema#integer";

RdfTerm integer(std::uint64_t n) {
  return RdfTerm::literal(std::to_string(n), std::string(kXsdInteger));
}

std::string template_key(TemplateId id) { return "template:" + std::string(to_string(id)); }

}  // namespace

std::string_view to_string(TemplateId id) {
  switch (id) {
    case TemplateId::kVoid: return "void";
    case TemplateId::kExamples: return "examples";
    case TemplateId::kProbeClasses: return "probe-classes";
    case TemplateId::kProbePredicates: return "probe-predicates";
    case TemplateId::kProbeClassesDistinct: return "probe-classes-distinct";
    case TemplateId::kProbePredicatesDistinct: return "probe-predicates-distinct";
  }
  return "void";
}

std::string normalize_query(std::string_view query) {
  std::string out;
  bool space = false;
  for (char c : query) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

Matcher Matcher::template_id(TemplateId id) { return Matcher(template_key(id)); }
Matcher Matcher::text(std::string_view query) { return Matcher("text:" + normalize_query(query)); }

FixtureEndpoint::FixtureEndpoint(MetadataQueries templates) {
  const std::pair<TemplateId, const std::string*> ids[] = {
      {TemplateId::kVoid, &templates.void_query},
      {TemplateId::kExamples, &templates.examples_query},
      {TemplateId::kProbeClasses, &templates.probe_classes},
      {TemplateId::kProbePredicates, &templates.probe_predicates},
      {TemplateId::kProbeClassesDistinct, &templates.probe_classes_distinct},
      {TemplateId::kProbePredicatesDistinct, &templates.probe_predicates_distinct},
  };
  for (const auto& [id, text] : ids) template_texts_[normalize_query(*text)] = template_key(id);
}

FixtureEndpoint::~FixtureEndpoint() { stop(); }

void FixtureEndpoint::register_result(const Matcher& matcher, ResultSet result) {
  std::lock_guard lock(mu_);
  Registration& reg = registrations_[matcher.key()];
  if (reg.has_result) throw FixtureConfigError("matcher registered twice: " + matcher.key());
  reg.result = std::move(result);
  reg.has_result = true;
}

void FixtureEndpoint::inject_failure(const Matcher& matcher, FailureMode mode) {
  std::lock_guard lock(mu_);
  registrations_[matcher.key()].failure = mode;
}

void FixtureEndpoint::clear_failure(const Matcher& matcher) {
  std::lock_guard lock(mu_);
  if (auto it = registrations_.find(matcher.key()); it != registrations_.end())
    it->second.failure.reset();
}

void FixtureEndpoint::set_reject_post(bool reject) {
  std::lock_guard lock(mu_);
  reject_post_ = reject;
}

std::size_t FixtureEndpoint::request_count(const Matcher& matcher) const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const LoggedRequest& r : log_) n += r.matched == matcher.key();
  return n;
}

std::size_t FixtureEndpoint::total_requests() const {
  std::lock_guard lock(mu_);
  return log_.size();
}

std::vector<LoggedRequest> FixtureEndpoint::request_log() const {
  std::lock_guard lock(mu_);
  return log_;
}

std::vector<std::string> FixtureEndpoint::unmatched_queries() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const LoggedRequest& r : log_) {
    if (!r.matched) out.push_back(r.query);
  }
  return out;
}

void FixtureEndpoint::reset_counters() {
  std::lock_guard lock(mu_);
  log_.clear();
}

std::optional<std::string> FixtureEndpoint::match(const std::string& query) const {
  const std::string normalized = normalize_query(query);
  if (auto it = template_texts_.find(normalized); it != template_texts_.end()) {
    if (registrations_.count(it->second)) return it->second;
  }
  const std::string key = "text:" + normalized;
  if (registrations_.count(key)) return key;
  return std::nullopt;
}

int FixtureEndpoint::serve() {
  if (server_) return port_;
  server_ = std::make_unique<httplib::Server>();
  auto handle = [this](const httplib::Request& req, httplib::Response& res) {
    const std::string query = req.get_param_value("query");
    std::optional<FailureMode> failure;
    std::string body;
    {
      std::lock_guard lock(mu_);
      const std::optional<std::string> key = match(query);
      log_.push_back(LoggedRequest{req.method, query, key});
      if (req.method == "POST" && reject_post_) {
        res.status = 405;
        res.set_content("POST not supported", "text/plain");
        return;
      }
      if (!req.has_param("query")) {
        res.status = 400;
        res.set_content("missing query parameter", "text/plain");
        return;
      }
      if (key) {
        const Registration& reg = registrations_.at(*key);
        failure = reg.failure;
        body = to_results_json(reg.result);
      } else {
        body = to_results_json(ResultSet{});
      }
    }
    if (failure && failure->delay.count() > 0) std::this_thread::sleep_for(failure->delay);
    if (failure && failure->drop_connection) {
      res.set_content_provider(
          body.size() + 1024, "application/sparql-results+json",
          [](std::size_t, std::size_t, httplib::DataSink&) { return false; });
      return;
    }
    if (failure && failure->status != 0) {
      res.status = failure->status;
      res.set_content("injected failure", "text/plain");
      return;
    }
    res.set_content(body, "application/sparql-results+json");
  };
  server_->Get("/sparql", handle);
  server_->Post("/sparql", handle);
  port_ = server_->bind_to_any_port("127.0.0.1");
  if (port_ <= 0) {
    server_.reset();
    throw std::runtime_error("fixture endpoint could not bind a port");
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void FixtureEndpoint::stop() {
  if (!server_) return;
  server_->stop();
  if (thread_.joinable()) thread_.join();
  server_.reset();
}

std::string FixtureEndpoint::url() const {
  return "http://127.0.0.1:" + std::to_string(port_) + "/sparql";
}

ResultSet void_results(const std::vector<VoidRow>& rows) {
  ResultSet rs;
  rs.variables = {"subjectClass", "entities", "prop", "triples", "objectClass", "objectDatatype"};
  for (const VoidRow& r : rows) {
    Binding b;
    b.emplace("subjectClass", RdfTerm::iri(r.subject_class));
    b.emplace("entities", integer(r.entities));
    b.emplace("prop", RdfTerm::iri(r.predicate));
    if (r.triples) b.emplace("triples", integer(*r.triples));
    if (r.object_class) b.emplace("objectClass", RdfTerm::iri(*r.object_class));
    if (r.object_datatype) b.emplace("objectDatatype", RdfTerm::iri(*r.object_datatype));
    rs.rows.push_back(std::move(b));
  }
  return rs;
}

ResultSet examples_results(const ExampleCatalog& examples) {
  ResultSet rs;
  rs.variables = {"ex", "q1", "q2", "q3", "q4", "c"};
  for (const QueryExample& e : examples) {
    Binding b;
    b.emplace("ex", RdfTerm::iri(e.id));
    const char* var = "q1";
    switch (e.form) {
      case QueryForm::kConstruct: var = "q2"; break;
      case QueryForm::kAsk: var = "q3"; break;
      case QueryForm::kDescribe: var = "q4"; break;
      default: break;
    }
    b.emplace(var, RdfTerm::literal(e.query));
    if (!e.description.empty()) b.emplace("c", RdfTerm::literal(e.description));
    rs.rows.push_back(std::move(b));
  }
  return rs;
}

ResultSet probe_class_results(const std::vector<std::pair<std::string, std::uint64_t>>& classes) {
  ResultSet rs;
  rs.variables = {"class", "n"};
  for (const auto& [iri, n] : classes) rs.rows.push_back({{"class", RdfTerm::iri(iri)}, {"n", integer(n)}});
  return rs;
}

ResultSet probe_predicate_results(const std::vector<std::pair<std::string, std::uint64_t>>& predicates) {
  ResultSet rs;
  rs.variables = {"p", "n"};
  for (const auto& [iri, n] : predicates) rs.rows.push_back({{"p", RdfTerm::iri(iri)}, {"n", integer(n)}});
  return rs;
}

ResultSet distinct_results(const std::string& variable, const std::vector<std::string>& iris) {
  ResultSet rs;
  rs.variables = {variable};
  for (const std::string& iri : iris) rs.rows.push_back({{variable, RdfTerm::iri(iri)}});
  return rs;
}

}  // namespace sparql_assist
