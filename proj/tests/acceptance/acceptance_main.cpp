// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <unistd.h>

#include "fixtures.hpp"
#include "httplib.h"
#include "json.hpp"
#include "sparql_assist/assist_server.hpp"
#include "sparql_assist/cli.hpp"
#include "sparql_assist/completion.hpp"
#include "sparql_assist/fixture_endpoint.hpp"
#include "sparql_assist/schema_graph.hpp"

namespace sa = sparql_assist;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using namespace std::chrono_literals;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::set<std::string> values_of(const sa::CompletionList& list, sa::ItemKind kind) {
  std::set<std::string> out;
  for (const sa::CompletionItem& i : list.items)
    if (i.kind == kind) out.insert(i.value);
  return out;
}

sa::CompletionList complete_at_end(const std::string& text, const std::string& endpoint,
                                   sa::MetadataProvider* provider) {
  sa::CompletionOptions o;
  o.max_items = 10'000;
  return sa::complete(text, text.size(), endpoint, provider, o);
}

std::shared_ptr<sa::MetadataCache> new_cache() {
  return std::make_shared<sa::MetadataCache>(std::make_shared<sa::SparqlClient>());
}

// Taxon scenario, timed from fixture startup to the completion result.
Outcome taxon_scenario() {
  const auto start = Clock::now();
  sa::FixtureEndpoint fixture;
  sa::testing::register_taxon_fixture(fixture);
  fixture.serve();
  auto cache = new_cache();
  const std::string q = sa::testing::taxon_query();
  const sa::CompletionList list = sa::complete(q, q.size(), fixture.url(), cache.get());
  const double elapsed = ms_since(start);

  std::vector<std::string> got;
  for (const sa::CompletionItem& i : list.items) got.push_back(i.value);
  const std::vector<std::string> want = {sa::testing::kUp + "scientificName", sa::testing::kUp + "rank"};
  bool ordered = true;
  for (std::size_t i = 1; i < list.items.size(); ++i) ordered &= list.items[i - 1].score >= list.items[i].score;
  Outcome o;
  o.pass = got == want && ordered && list.provenance == sa::Provenance::kVoid && elapsed < 1000.0;
  std::ostringstream d;
  d << got.size() << " items";
  for (const sa::CompletionItem& i : list.items) d << " " << i.label << "=" << i.score;
  d << ", provenance " << sa::to_string(list.provenance) << ", " << elapsed << " ms (limit 1000)";
  o.detail = d.str();
  return o;
}

std::set<std::string> predicates_of(const sa::VoidSchema& s) {
  std::set<std::string> out;
  for (const auto& [iri, n] : s.all_predicates()) out.insert(iri);
  return out;
}

// Random query shapes with the cursor inside `SERVICE <inner>`, and with the
// cursor back in the outer group after a SERVICE block.
Outcome service_isolation() {
  std::mt19937 rng(20240601);
  int violations = 0, empty_lists = 0, trials = 0;
  std::size_t suggestions = 0;
  for (int trial = 0; trial < 100; ++trial, ++trials) {
    const sa::VoidSchema s1 = sa::testing::random_schema(rng, 6, "http://one.example/");
    const sa::VoidSchema s2 = sa::testing::random_schema(rng, 6, "http://two.example/");
    sa::FixtureEndpoint e1, e2;
    e1.register_result(sa::Matcher::template_id(sa::TemplateId::kVoid), sa::void_results(sa::flatten_void_schema(s1)));
    e2.register_result(sa::Matcher::template_id(sa::TemplateId::kVoid), sa::void_results(sa::flatten_void_schema(s2)));
    e1.serve();
    e2.serve();
    auto cache = new_cache();

    const bool swap = trial % 2 == 1;  // alternate which endpoint is outer
    const sa::FixtureEndpoint& outer = swap ? e2 : e1;
    const sa::FixtureEndpoint& inner = swap ? e1 : e2;
    const sa::VoidSchema& outer_schema = swap ? s2 : s1;
    const sa::VoidSchema& inner_schema = swap ? s1 : s2;

    auto pick_class = [&](const sa::VoidSchema& s) {
      return s.classes[std::uniform_int_distribution<std::size_t>(0, s.classes.size() - 1)(rng)].iri;
    };
    const int shape = std::uniform_int_distribution<int>(0, 3)(rng);
    std::string prefix = "SELECT * WHERE { ";
    // Outer patterns typing the same variable with an outer class.
    if (shape & 1) prefix += "?s a <" + pick_class(outer_schema) + "> . ?s ?p ?o . ";
    prefix += "SERVICE <" + inner.url() + "> { ";
    // Optionally type ?s inside the SERVICE block with an inner class.
    if (shape & 2) prefix += "?s a <" + pick_class(inner_schema) + "> . ";
    const std::string inside = prefix + "?s ";
    const std::string after = prefix + "?s ?q ?r } ?s ";

    const auto in_list = complete_at_end(inside, outer.url(), cache.get());
    const auto out_list = complete_at_end(after, outer.url(), cache.get());
    const auto inner_preds = predicates_of(inner_schema);
    const auto outer_preds = predicates_of(outer_schema);
    for (const std::string& v : values_of(in_list, sa::ItemKind::kPredicate)) {
      ++suggestions;
      if (!inner_preds.count(v)) ++violations;
    }
    for (const std::string& v : values_of(out_list, sa::ItemKind::kPredicate)) {
      ++suggestions;
      if (!outer_preds.count(v)) ++violations;
    }
    if (in_list.items.empty() || out_list.items.empty()) ++empty_lists;
  }
  Outcome o;
  o.pass = violations == 0 && empty_lists == 0;
  o.detail = std::to_string(trials) + " trials, " + std::to_string(suggestions) + " suggestions checked, " +
             std::to_string(violations) + " cross-endpoint, " + std::to_string(empty_lists) + " empty lists";
  return o;
}

// Empty VoID, answers only from the probe queries.
Outcome fallback() {
  const std::string ns = "http://probe.example/";
  const std::vector<std::pair<std::string, std::uint64_t>> classes = {{ns + "A", 10}, {ns + "B", 3}, {ns + "C", 1}};
  const std::vector<std::pair<std::string, std::uint64_t>> predicates = {
      {ns + "p", 12}, {std::string(sa::kRdfType), 13}, {ns + "q", 2}};
  sa::FixtureEndpoint f;
  f.register_result(sa::Matcher::template_id(sa::TemplateId::kVoid), sa::void_results({}));
  f.register_result(sa::Matcher::template_id(sa::TemplateId::kProbeClasses), sa::probe_class_results(classes));
  f.register_result(sa::Matcher::template_id(sa::TemplateId::kProbePredicates),
                    sa::probe_predicate_results(predicates));
  f.serve();
  auto cache = new_cache();

  const auto class_list = complete_at_end("SELECT * WHERE { ?x a ", f.url(), cache.get());
  // Typing the subject must not narrow a probed schema.
  const auto pred_list = complete_at_end("SELECT * WHERE { ?x a <" + ns + "A> . ?x ", f.url(), cache.get());
  std::set<std::string> want_classes, want_preds;
  for (const auto& [iri, n] : classes) want_classes.insert(iri);
  for (const auto& [iri, n] : predicates) want_preds.insert(iri);
  const auto got_classes = values_of(class_list, sa::ItemKind::kClass);
  const auto got_preds = values_of(pred_list, sa::ItemKind::kPredicate);
  const auto md = cache->get(f.url());

  Outcome o;
  o.pass = md->provenance() == sa::Provenance::kProbed && class_list.provenance == sa::Provenance::kProbed &&
           pred_list.provenance == sa::Provenance::kProbed && got_classes == want_classes &&
           got_preds == want_preds;
  o.detail = "provenance " + std::string(sa::to_string(pred_list.provenance)) + ", classes " +
             std::to_string(got_classes.size()) + "/" + std::to_string(want_classes.size()) +
             (got_classes == want_classes ? " equal" : " differ") + ", predicates " +
             std::to_string(got_preds.size()) + "/" + std::to_string(want_preds.size()) +
             (got_preds == want_preds ? " equal" : " differ");
  return o;
}

int run_cli(std::vector<std::string> args, std::string& out) {
  args.insert(args.begin(), "sparql-assist");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  std::istringstream in;
  const int code = sa::run_cli(static_cast<int>(argv.size()), argv.data(), o, e, in);
  out = o.str();
  return code;
}

// Checks a JSON examples body against the fixture catalog (optionally filtered).
bool examples_body_ok(const std::string& body, const sa::ExampleCatalog& want) {
  const auto doc = nlohmann::json::parse(body, nullptr, false);
  if (!doc.is_array() || doc.size() != want.size()) return false;
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (doc[i].value("id", "") != want[i].id) return false;
    if (doc[i].value("form", "") != std::string(sa::to_string(want[i].form))) return false;
    if (doc[i].value("description", "") != want[i].description) return false;
    if (doc[i].value("query", "") != want[i].query) return false;
  }
  return true;
}

Outcome examples() {
  sa::FixtureEndpoint f;
  sa::testing::register_taxon_fixture(f);
  f.serve();
  const sa::ExampleCatalog want = sa::testing::five_examples();
  sa::ExampleCatalog want_taxon;
  for (const sa::QueryExample& e : want) {
    std::string text = e.description + " " + e.query;
    std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) { return std::tolower(c); });
    if (text.find("taxon") != std::string::npos) want_taxon.push_back(e);
  }

  auto cache = new_cache();
  const auto md = cache->get(f.url());
  const bool engine_ok = md->examples == want && sa::filter_examples(md->examples, "taxon") == want_taxon;

  std::string all_out, taxon_out;
  const bool cli_ok = run_cli({"examples", "--endpoint", f.url(), "--format", "json"}, all_out) == 0 &&
                      run_cli({"examples", "--endpoint", f.url(), "--format", "json", "--q", "taxon"}, taxon_out) == 0 &&
                      examples_body_ok(all_out, want) && examples_body_ok(taxon_out, want_taxon);

  sa::AssistServer server(sa::ServiceConfig{});
  server.attach_executor(std::make_shared<sa::SparqlClient>());
  httplib::Client client("127.0.0.1", server.start(0));
  auto all = client.Get("/examples", httplib::Params{{"endpoint", f.url()}}, httplib::Headers{});
  auto taxon = client.Get("/examples", httplib::Params{{"endpoint", f.url()}, {"q", "taxon"}}, httplib::Headers{});
  const bool api_ok = all && taxon && all->status == 200 && taxon->status == 200 &&
                      examples_body_ok(all->body, want) && examples_body_ok(taxon->body, want_taxon);
  server.stop();

  Outcome o;
  o.pass = want.size() == 5 && want_taxon.size() == 2 && engine_ok && cli_ok && api_ok;
  o.detail = "catalog " + std::to_string(md->examples.size()) + ", filter 'taxon' " +
             std::to_string(want_taxon.size()) + "; engine " + (engine_ok ? "ok" : "FAIL") + ", cli " +
             (cli_ok ? "ok" : "FAIL") + ", api " + (api_ok ? "ok" : "FAIL");
  return o;
}

Outcome zero_network() {
  sa::FixtureEndpoint f;
  sa::testing::register_taxon_fixture(f);
  f.serve();
  auto cache = new_cache();
  const std::string q = sa::testing::taxon_query();
  sa::complete(q, q.size(), f.url(), cache.get());  // warm-up
  const std::size_t before = f.total_requests();
  double worst = 0;
  std::mt19937 rng(7);
  bool results_ok = true;
  for (int i = 0; i < 100; ++i) {
    // Keystrokes: the query grows and shrinks around the cursor.
    const std::string text = q + std::string("up:scientificName").substr(0, i % 18);
    const auto start = Clock::now();
    const sa::CompletionList list = sa::complete(text, text.size(), f.url(), cache.get());
    worst = std::max(worst, ms_since(start));
    results_ok &= list.provenance == sa::Provenance::kVoid;
  }
  const std::size_t requests = f.total_requests() - before;
  Outcome o;
  o.pass = requests == 0 && worst < 50.0 && results_ok;
  o.detail = "100 calls, " + std::to_string(requests) + " HTTP requests, slowest " + std::to_string(worst) +
             " ms (limit 50)";
  return o;
}

Outcome parser_totality() {
  const auto corpus = sa::testing::load_corpus(CORPUS_PATH);
  std::mt19937 rng(99);
  int failures = 0, mismatches = 0, cases = 0;
  auto check = [&](const std::string& text) {
    ++cases;
    try {
      std::string joined;
      for (const sa::Token& t : sa::tokenize(text)) joined += t.text;
      if (joined != text) ++mismatches;
      const sa::SyntaxTree tree = sa::parse_partial(text);
      const std::size_t pos = std::uniform_int_distribution<std::size_t>(0, text.size())(rng);
      sa::locate_context(tree, pos);
    } catch (...) {
      ++failures;
    }
  };
  std::uniform_int_distribution<int> byte(0, 255), len(0, 200);
  for (int i = 0; i < 10'000; ++i) {
    std::string s(static_cast<std::size_t>(len(rng)), '\0');
    for (char& c : s) c = static_cast<char>(byte(rng));
    check(s);
  }
  for (int i = 0; i < 10'000; ++i) {
    const std::string& q = corpus[std::uniform_int_distribution<std::size_t>(0, corpus.size() - 1)(rng)];
    check(q.substr(0, std::uniform_int_distribution<std::size_t>(0, q.size())(rng)));
  }
  Outcome o;
  o.pass = corpus.size() == 50 && failures == 0 && mismatches == 0;
  o.detail = std::to_string(cases) + " inputs (corpus of " + std::to_string(corpus.size()) + "), " +
             std::to_string(failures) + " failures, " + std::to_string(mismatches) + " round-trip mismatches";
  return o;
}

Outcome schema_graph() {
  const fs::path dir = fs::temp_directory_path() / ("acceptance_dot_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::mt19937 rng(1234);
  int count_errors = 0, nondeterministic = 0;
  std::vector<std::pair<fs::path, sa::SchemaGraph>> files;
  const int trials = 40;
  for (int t = 0; t < trials; ++t) {
    const sa::VoidSchema s = sa::testing::random_schema(rng, 20, t % 2 ? "http://g.example/" : "http://g.example/x y#");
    const sa::SchemaGraph g = sa::build_graph(s);
    std::size_t edges = 0;
    for (const sa::ClassProfile& c : s.classes)
      for (const sa::PredicateProfile& p : c.predicates)
        edges += std::max<std::size_t>(1, p.object_classes.size() + p.object_datatypes.size());
    if (g.nodes.size() != s.classes.size() || g.edges.size() != edges) ++count_errors;
    // Same schema rebuilt from shuffled rows must export the same bytes.
    auto rows = sa::flatten_void_schema(s);
    std::shuffle(rows.begin(), rows.end(), rng);
    const sa::SchemaGraph again = sa::build_graph(sa::fold_void_rows(rows));
    if (sa::export_dot(g) != sa::export_dot(again) || sa::export_json(g) != sa::export_json(again) ||
        sa::export_mermaid(g) != sa::export_mermaid(again))
      ++nondeterministic;
    const fs::path path = dir / ("g" + std::to_string(t) + ".dot");
    std::ofstream(path, std::ios::binary) << sa::export_dot(g);
    files.emplace_back(path, g);
  }
  std::string cmd = std::string(PYTHON_EXECUTABLE) + " " + DOT_CHECK_SCRIPT;
  for (const auto& [path, g] : files) cmd += " " + path.string();
  cmd += " 2>&1";
  std::string output;
  int parse_failures = trials;
  if (FILE* pipe = ::popen(cmd.c_str(), "r")) {
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) output.append(buf, n);
    const int status = ::pclose(pipe);
    parse_failures = 0;
    std::istringstream in(output);
    for (const auto& [path, g] : files) {
      std::string name;
      std::size_t nodes = 0, edges = 0;
      if (!(in >> name >> nodes >> edges) || name != path.string() || nodes != g.nodes.size() ||
          edges != g.edges.size())
        ++parse_failures;
    }
    if (status != 0 && parse_failures == 0) parse_failures = 1;
  }
  fs::remove_all(dir);
  Outcome o;
  o.pass = count_errors == 0 && nondeterministic == 0 && parse_failures == 0;
  o.detail = std::to_string(trials) + " schemas, " + std::to_string(count_errors) + " count errors, " +
             std::to_string(parse_failures) + " pydot failures, " + std::to_string(nondeterministic) +
             " nondeterministic exports";
  return o;
}

Outcome coalescing() {
  sa::FixtureEndpoint f;
  sa::testing::register_taxon_fixture(f);
  // Keep the fetch in flight long enough for every caller to arrive.
  f.inject_failure(sa::Matcher::template_id(sa::TemplateId::kVoid), sa::FailureMode::slow(300ms));
  f.serve();
  auto cache = new_cache();
  std::promise<void> go;
  std::shared_future<void> gate = go.get_future().share();
  std::vector<std::future<std::shared_ptr<const sa::CachedMetadata>>> calls;
  for (int i = 0; i < 16; ++i)
    calls.push_back(std::async(std::launch::async, [&, gate] {
      gate.wait();
      return cache->get(f.url());
    }));
  go.set_value();
  std::set<const sa::CachedMetadata*> snapshots;
  bool fresh = true;
  for (auto& c : calls) {
    const auto md = c.get();
    snapshots.insert(md.get());
    fresh &= md->state == sa::MetadataState::kFresh;
  }
  const std::size_t void_fetches = f.request_count(sa::Matcher::template_id(sa::TemplateId::kVoid));
  Outcome o;
  o.pass = void_fetches == 1 && snapshots.size() == 1 && fresh;
  o.detail = "16 callers, " + std::to_string(void_fetches) + " VoID fetch(es), " +
             std::to_string(snapshots.size()) + " distinct snapshot(s)";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"taxon scenario", taxon_scenario},
      {"SERVICE isolation", service_isolation},
      {"probe fallback", fallback},
      {"query examples", examples},
      {"zero-network keystrokes", zero_network},
      {"parser totality", parser_totality},
      {"schema graph", schema_graph},
      {"fetch coalescing", coalescing},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << "criterion " << (i + 1) << " " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first
              << ": " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
