#include <gtest/gtest.h>

#include <chrono>
#include <future>
#include <random>

#include "fixtures.hpp"
#include "sparql_assist/fixture_endpoint.hpp"
#include "sparql_assist/protocol.hpp"

namespace sparql_assist {
namespace {

using namespace std::chrono_literals;

TEST(ResultsJson, SingleIriBinding) {
  const ResultSet rs = parse_results_json(
      R"({"head":{"vars":["c"]},"results":{"bindings":[{"c":{"type":"uri","value":"http://ex/A"}}]}})");
  ASSERT_EQ(rs.rows.size(), 1u);
  EXPECT_EQ(rs.variables, std::vector<std::string>{"c"});
  EXPECT_EQ(*rs.get(0, "c"), RdfTerm::iri("http://ex/A"));
}

TEST(ResultsJson, EmptyResult) {
  const ResultSet rs = parse_results_json(R"({"head":{"vars":[]},"results":{"bindings":[]}})");
  EXPECT_TRUE(rs.variables.empty());
  EXPECT_TRUE(rs.rows.empty());
}

TEST(ResultsJson, TypedAndLanguageLiterals) {
  const ResultSet rs = parse_results_json(R"({"head":{"vars":["n","l","t"]},"results":{"bindings":[
    {"n":{"type":"literal","value":"5","datatype":"http://www.w3.org/2001/XMLSchema#integer"},
     "l":{"type":"literal","value":"chat","xml:lang":"fr"},
     "t":{"type":"typed-literal","value":"x","datatype":"http://d"}}]}})");
  EXPECT_EQ(*rs.get(0, "n"),
            RdfTerm::literal("5", "http://www.w3.org/2001/XMLSchema#integer"));
  EXPECT_EQ(*rs.get(0, "l"), RdfTerm::literal("chat", "", "fr"));
  EXPECT_EQ(rs.get(0, "t")->datatype, "http://d");
}

TEST(ResultsJson, UnboundVariablesAreAbsent) {
  const ResultSet rs = parse_results_json(
      R"({"head":{"vars":["a","b"]},"results":{"bindings":[{"a":{"type":"bnode","value":"b0"}}]}})");
  EXPECT_EQ(rs.get(0, "b"), nullptr);
  EXPECT_EQ(*rs.get(0, "a"), RdfTerm::blank("b0"));
}

TEST(ResultsJson, ExtraKeysTolerated) {
  EXPECT_NO_THROW(parse_results_json(
      R"({"head":{"vars":[],"link":[]},"results":{"bindings":[],"ordered":true},"x":1})"));
}

TEST(ResultsJson, MalformedDocumentsAreFormatErrors) {
  EXPECT_THROW(parse_results_json("not json"), FormatError);
  EXPECT_THROW(parse_results_json(R"({"results":{"bindings":[]}})"), FormatError);
  EXPECT_THROW(parse_results_json(R"({"head":{"vars":[]}})"), FormatError);
  EXPECT_THROW(parse_results_json(R"({"head":{},"results":{"bindings":[{"a":{"type":"weird","value":"1"}}]}})"),
               FormatError);
}

TEST(ResultsJson, SizeGuard) {
  const std::string doc = R"({"head":{"vars":[]},"results":{"bindings":[]}})";
  EXPECT_THROW(parse_results_json(doc, 10), FormatError);
  EXPECT_NO_THROW(parse_results_json(doc, doc.size()));
}

ResultSet random_result_set(std::mt19937& rng) {
  std::uniform_int_distribution<int> small(0, 4), kind(0, 4), ch(32, 0x7e);
  auto word = [&] {
    std::string s;
    for (int i = small(rng) + 1; i > 0; --i) s += static_cast<char>(ch(rng));
    return s;
  };
  ResultSet rs;
  const int n_vars = small(rng) + 1;
  for (int v = 0; v < n_vars; ++v) rs.variables.push_back("v" + std::to_string(v));
  for (int r = small(rng) * 2; r > 0; --r) {
    Binding b;
    for (const std::string& v : rs.variables) {
      switch (kind(rng)) {
        case 0: break;  // unbound
        case 1: b.emplace(v, RdfTerm::iri("http://x/" + word())); break;
        case 2: b.emplace(v, RdfTerm::blank(word())); break;
        case 3: b.emplace(v, RdfTerm::literal(word(), "", "en")); break;
        default: b.emplace(v, RdfTerm::literal(word() + "\n\"\xc3\xa9", "http://d/" + word())); break;
      }
    }
    rs.rows.push_back(std::move(b));
  }
  return rs;
}

TEST(ResultsJson, EncodeDecodeRoundTrip) {
  std::mt19937 rng(3);
  for (int i = 0; i < 500; ++i) {
    const ResultSet rs = random_result_set(rng);
    ASSERT_EQ(parse_results_json(to_results_json(rs)), rs);
  }
}

TEST(EndpointRefTest, Validation) {
  EXPECT_NO_THROW(EndpointRef::parse("https://sparql.uniprot.org/sparql"));
  EXPECT_NO_THROW(EndpointRef::parse("http://127.0.0.1:8890/sparql?default-graph-uri=x"));
  EXPECT_THROW(EndpointRef::parse("ftp://x/sparql"), std::invalid_argument);
  EXPECT_THROW(EndpointRef::parse("/relative"), std::invalid_argument);
  EXPECT_THROW(EndpointRef::parse("http://"), std::invalid_argument);
}

class ClientTest : public ::testing::Test {
 protected:
  void SetUp() override { fixture.serve(); }
  EndpointRef ref() const { return EndpointRef::parse(fixture.url()); }

  FixtureEndpoint fixture;
};

const char* kQuery = "SELECT ?c WHERE { ?s a ?c }";

ResultSet one_row() {
  ResultSet rs;
  rs.variables = {"c"};
  rs.rows.push_back({{"c", RdfTerm::iri("http://ex/A")}});
  return rs;
}

TEST_F(ClientTest, CannedResponseDecodesToRegisteredRows) {
  fixture.register_result(Matcher::text(kQuery), one_row());
  SparqlClient client;
  EXPECT_EQ(client.execute_select(ref(), kQuery), one_row());
  EXPECT_EQ(fixture.request_count(Matcher::text(kQuery)), 1u);
  EXPECT_EQ(fixture.request_log()[0].method, "POST");
}

TEST_F(ClientTest, MatchingIgnoresWhitespaceLayout) {
  fixture.register_result(Matcher::text(kQuery), one_row());
  SparqlClient client;
  EXPECT_EQ(client.execute_select(ref(), "SELECT ?c\n  WHERE {\t?s a ?c }\n"), one_row());
}

TEST_F(ClientTest, Http500IsEndpointError) {
  fixture.inject_failure(Matcher::text(kQuery), FailureMode::http_status(500));
  SparqlClient client;
  try {
    client.execute_select(ref(), kQuery);
    FAIL() << "expected EndpointError";
  } catch (const EndpointError& e) {
    EXPECT_EQ(e.status(), 500);
    EXPECT_EQ(e.body_snippet(), "injected failure");
  }
  // HTTP errors are never retried.
  EXPECT_EQ(fixture.request_count(Matcher::text(kQuery)), 1u);
}

TEST_F(ClientTest, FallsBackToGetOn405) {
  fixture.register_result(Matcher::text(kQuery), one_row());
  fixture.set_reject_post(true);
  SparqlClient client;
  EXPECT_EQ(client.execute_select(ref(), kQuery), one_row());
  const auto log = fixture.request_log();
  ASSERT_EQ(log.size(), 2u);
  EXPECT_EQ(log[0].method, "POST");
  EXPECT_EQ(log[1].method, "GET");
  EXPECT_EQ(log[1].query, kQuery);
}

TEST_F(ClientTest, DroppedConnectionRetriedOnce) {
  fixture.inject_failure(Matcher::text(kQuery), FailureMode::drop());
  SparqlClient client;
  EXPECT_THROW(client.execute_select(ref(), kQuery), TransportError);
  EXPECT_EQ(fixture.request_count(Matcher::text(kQuery)), 2u);

  fixture.reset_counters();
  ClientOptions no_retry;
  no_retry.transport_retries = 0;
  SparqlClient strict(no_retry);
  EXPECT_THROW(strict.execute_select(ref(), kQuery), TransportError);
  EXPECT_EQ(fixture.request_count(Matcher::text(kQuery)), 1u);
}

TEST_F(ClientTest, TimeoutIsTransportError) {
  fixture.inject_failure(Matcher::text(kQuery), FailureMode::slow(600ms));
  ClientOptions o;
  o.transport_retries = 0;
  SparqlClient client(o);
  EndpointRef r = ref();
  r.timeout = 150ms;
  const auto start = std::chrono::steady_clock::now();
  EXPECT_THROW(client.execute_select(r, kQuery), TransportError);
  EXPECT_LT(std::chrono::steady_clock::now() - start, 550ms);
}

TEST_F(ClientTest, OversizedBodyIsFormatError) {
  ResultSet big;
  big.variables = {"x"};
  for (int i = 0; i < 200; ++i) big.rows.push_back({{"x", RdfTerm::literal(std::string(100, 'a'))}});
  fixture.register_result(Matcher::text(kQuery), big);
  ClientOptions o;
  o.max_result_bytes = 4096;
  SparqlClient client(o);
  EXPECT_THROW(client.execute_select(ref(), kQuery), FormatError);
}

TEST_F(ClientTest, NonJsonBodyIsFormatError) {
  // A 2xx with a body that is not a results document.
  fixture.inject_failure(Matcher::text(kQuery), FailureMode::http_status(203));
  SparqlClient client;
  EXPECT_THROW(client.execute_select(ref(), kQuery), FormatError);
}

TEST_F(ClientTest, PerEndpointConcurrencyIsCapped) {
  fixture.inject_failure(Matcher::text(kQuery), FailureMode::slow(200ms));
  SparqlClient client;  // two in flight per endpoint
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::future<ResultSet>> calls;
  for (int i = 0; i < 4; ++i)
    calls.push_back(std::async(std::launch::async, [&] { return client.execute_select(ref(), kQuery); }));
  for (auto& c : calls) c.get();
  EXPECT_GE(std::chrono::steady_clock::now() - start, 390ms);
}

TEST(ClientUnreachable, ConnectionRefusedIsTransportError) {
  // Bind and release a port so nothing listens on it.
  int port = 0;
  {
    FixtureEndpoint f;
    port = f.serve();
  }
  ClientOptions o;
  o.default_timeout = 2000ms;
  SparqlClient client(o);
  const auto start = std::chrono::steady_clock::now();
  EXPECT_THROW(client.execute_select(EndpointRef::parse("http://127.0.0.1:" + std::to_string(port) + "/sparql"),
                                     kQuery),
               TransportError);
  EXPECT_LT(std::chrono::steady_clock::now() - start, 4500ms);
}

}  // namespace
}  // namespace sparql_assist
