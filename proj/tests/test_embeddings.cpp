// Copyright 2026 The Simforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "simforge/corpus.hpp"
#include "simforge/embeddings.hpp"
#include "simforge/errors.hpp"
#include "simforge/hash.hpp"
#include "simforge/preprocess.hpp"

using namespace simforge;
using namespace simforge::embeddings;

namespace {

/// Loopback HTTP server serving one POST handler for the lifetime of a test.
class MockServer {
public:
    explicit MockServer(httplib::Server::Handler handler, const std::string& route = "/embed")
    {
        server_.Post(route, std::move(handler));
        port_ = server_.bind_to_any_port("127.0.0.1");
        REQUIRE(port_ > 0);
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~MockServer()
    {
        server_.stop();
        thread_.join();
    }

    std::string endpoint(const std::string& prefix = "") const
    {
        return "http://127.0.0.1:" + std::to_string(port_) + prefix;
    }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

ProviderConfig remote_config(const std::string& endpoint, int timeout_ms = 2000,
                             std::size_t max_batch = 32)
{
    ProviderConfig config;
    config.kind = ProviderConfig::Kind::Remote;
    config.endpoint = endpoint;
    config.timeout_ms = timeout_ms;
    config.max_batch = max_batch;
    return config;
}

/// Deterministic 3-dim embedding of a string, for echo servers.
std::vector<double> toy_vector(const std::string& text)
{
    double len = static_cast<double>(text.size());
    double first = text.empty() ? 0.0 : static_cast<double>(static_cast<unsigned char>(text[0]));
    return {len + 1.0, first + 1.0, 2.0};
}

nlohmann::json echo_vectors(const std::string& body)
{
    nlohmann::json request = nlohmann::json::parse(body);
    nlohmann::json vectors = nlohmann::json::array();
    for (const auto& text : request.at("texts")) {
        vectors.push_back(toy_vector(text.get<std::string>()));
    }
    return nlohmann::json{{"vectors", vectors}};
}

/// Independent transliteration of the builtin feature hashing scheme.
EmbeddingVector builtin_reference(const std::string& sentence)
{
    EmbeddingVector vec;
    vec.values.assign(kBuiltinDimension, 0.0);
    auto add = [&vec](const std::string& feature) {
        std::uint64_t h1 = fnv1a64(feature);
        std::size_t bucket = static_cast<std::size_t>(h1 % kBuiltinDimension);
        vec.values[bucket] += (splitmix64(h1) & 1) != 0 ? 1.0 : -1.0;
    };
    for (std::size_t i = 0; i + 3 <= sentence.size(); ++i) {
        add(std::string("g\x1F") + sentence.substr(i, 3));
    }
    for (const Span& t : preprocess::tokenize(sentence)) {
        add(std::string("t\x1F") + sentence.substr(t.begin, t.length()));
    }
    double sum = 0.0;
    for (double v : vec.values) {
        sum += v * v;
    }
    if (sum > 0.0) {
        double norm = std::sqrt(sum);
        for (double& v : vec.values) {
            v /= norm;
        }
    }
    return vec;
}

Document text_doc(const std::string& raw)
{
    corpus::IngestOptions options;
    options.kind = DocKind::Text;
    return corpus::ingest_document(raw, options);
}

} // namespace

TEST_CASE("builtin embeddings are deterministic unit vectors")
{
    BuiltinProvider a;
    BuiltinProvider b;
    std::vector<std::string> sentences = {
        "the cat sat on the mat.",
        "a completely different sentence about embeddings.",
        "short",
        "",
    };
    auto va = a.embed(sentences);
    auto vb = b.embed(sentences);
    REQUIRE(va.size() == sentences.size());
    REQUIRE(vb.size() == sentences.size());
    for (std::size_t i = 0; i < va.size(); ++i) {
        REQUIRE(va[i].values.size() == kBuiltinDimension);
        CHECK(va[i].values == vb[i].values);
        double norm = std::sqrt(va[i].dot(va[i]));
        if (va[i].zero()) {
            CHECK(norm == 0.0);
        } else {
            CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    CHECK(a.dimension() == kBuiltinDimension);
    // Empty input has no features at all.
    CHECK(va[3].zero());
    CHECK(!va[0].zero());
}

TEST_CASE("builtin embeddings match an independent transliteration")
{
    BuiltinProvider provider;
    std::vector<std::string> sentences = {
        "the cat",
        "feature hashing with signs.",
        "ab", // shorter than one 3-gram, still has a token
    };
    auto got = provider.embed(sentences);
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        EmbeddingVector want = builtin_reference(sentences[i]);
        REQUIRE(got[i].values.size() == want.values.size());
        for (std::size_t d = 0; d < want.values.size(); ++d) {
            CHECK(got[i].values[d] == doctest::Approx(want.values[d]).epsilon(1e-12));
        }
    }
}

TEST_CASE("identical sentences embed identically, cosine one")
{
    BuiltinProvider provider;
    auto vecs = provider.embed({"winter follows autumn.", "winter follows autumn."});
    CHECK(vecs[0].dot(vecs[1]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("make_provider selects the provider kind")
{
    ProviderConfig builtin;
    CHECK(make_provider(builtin)->dimension() == kBuiltinDimension);

    ProviderConfig remote = remote_config("http://127.0.0.1:1");
    CHECK(make_provider(remote) != nullptr);

    ProviderConfig no_endpoint;
    no_endpoint.kind = ProviderConfig::Kind::Remote;
    CHECK_THROWS_AS(make_provider(no_endpoint), Error);

    ProviderConfig zero_batch = remote_config("http://127.0.0.1:1", 100, 0);
    CHECK_THROWS_AS(make_provider(zero_batch), Error);
}

TEST_CASE("remote provider round trip with batching")
{
    std::mutex mu;
    std::vector<std::size_t> batch_sizes;
    MockServer server([&](const httplib::Request& req, httplib::Response& res) {
        {
            std::lock_guard<std::mutex> lock(mu);
            batch_sizes.push_back(nlohmann::json::parse(req.body).at("texts").size());
        }
        res.set_content(echo_vectors(req.body).dump(), "application/json");
    });

    RemoteProvider provider(remote_config(server.endpoint(), 2000, 2));
    std::vector<std::string> sentences = {"one", "two", "three", "four", "five"};
    auto vectors = provider.embed(sentences);

    REQUIRE(vectors.size() == 5);
    CHECK(batch_sizes == std::vector<std::size_t>{2, 2, 1});
    CHECK(provider.dimension() == 3);
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        // Server vectors are normalized on receipt.
        std::vector<double> raw = toy_vector(sentences[i]);
        double norm = std::sqrt(raw[0] * raw[0] + raw[1] * raw[1] + raw[2] * raw[2]);
        REQUIRE(vectors[i].values.size() == 3);
        for (std::size_t d = 0; d < 3; ++d) {
            CHECK(vectors[i].values[d] == doctest::Approx(raw[d] / norm).epsilon(1e-12));
        }
    }
}

TEST_CASE("remote provider normalizes response vectors")
{
    MockServer server([](const httplib::Request&, httplib::Response& res) {
        res.set_content(R"({"vectors":[[3.0,4.0]]})", "application/json");
    });
    RemoteProvider provider(remote_config(server.endpoint()));
    auto vectors = provider.embed({"x"});
    REQUIRE(vectors.size() == 1);
    REQUIRE(vectors[0].values.size() == 2);
    CHECK(vectors[0].values[0] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(vectors[0].values[1] == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("remote provider honours an endpoint path prefix")
{
    MockServer server(
        [](const httplib::Request& req, httplib::Response& res) {
            res.set_content(echo_vectors(req.body).dump(), "application/json");
        },
        "/api/v1/embed");
    RemoteProvider provider(remote_config(server.endpoint("/api/v1")));
    CHECK(provider.embed({"hello"}).size() == 1);
}

TEST_CASE("remote provider retries transient failures")
{
    std::atomic<int> hits{0};
    MockServer server([&](const httplib::Request& req, httplib::Response& res) {
        if (hits.fetch_add(1) < 2) {
            res.status = 500;
            return;
        }
        res.set_content(echo_vectors(req.body).dump(), "application/json");
    });
    RemoteProvider provider(remote_config(server.endpoint()));
    CHECK(provider.embed({"persist"}).size() == 1);
    CHECK(hits.load() == 3);
}

TEST_CASE("remote provider gives up after three failed attempts")
{
    std::atomic<int> hits{0};
    MockServer server([&](const httplib::Request&, httplib::Response& res) {
        hits.fetch_add(1);
        res.status = 503;
    });
    RemoteProvider provider(remote_config(server.endpoint()));
    CHECK_THROWS_AS(provider.embed({"x"}), Error);
    CHECK(hits.load() == 3);
    try {
        provider.embed({"x"});
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ProviderUnavailable);
    }
}

TEST_CASE("remote provider reports unreachable endpoints")
{
    // Nothing listens on the discard port; connections fail fast.
    RemoteProvider provider(remote_config("http://127.0.0.1:9", 200));
    try {
        provider.embed({"x"});
        FAIL("expected ProviderUnavailable");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ProviderUnavailable);
    }
}

TEST_CASE("malformed response bodies fail without retry")
{
    std::atomic<int> hits{0};
    MockServer server([&](const httplib::Request&, httplib::Response& res) {
        hits.fetch_add(1);
        res.set_content("not json at all", "application/json");
    });
    RemoteProvider provider(remote_config(server.endpoint()));
    try {
        provider.embed({"x"});
        FAIL("expected ProviderUnavailable");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ProviderUnavailable);
    }
    CHECK(hits.load() == 1);
}

TEST_CASE("response with wrong vector count is malformed")
{
    MockServer server([](const httplib::Request&, httplib::Response& res) {
        res.set_content(R"({"vectors":[[1.0],[2.0]]})", "application/json");
    });
    RemoteProvider provider(remote_config(server.endpoint()));
    try {
        provider.embed({"only one"});
        FAIL("expected ProviderUnavailable");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ProviderUnavailable);
    }
}

TEST_CASE("ragged response dimensions are rejected")
{
    MockServer server([](const httplib::Request&, httplib::Response& res) {
        res.set_content(R"({"vectors":[[1.0,0.0,0.0],[1.0,0.0]]})", "application/json");
    });
    RemoteProvider provider(remote_config(server.endpoint()));
    try {
        provider.embed({"a", "b"});
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::DimensionMismatch);
    }
}

TEST_CASE("empty rows in a response are rejected")
{
    MockServer server([](const httplib::Request&, httplib::Response& res) {
        res.set_content(R"({"vectors":[[]]})", "application/json");
    });
    RemoteProvider provider(remote_config(server.endpoint()));
    try {
        provider.embed({"a"});
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::DimensionMismatch);
    }
}

TEST_CASE("embed_sentences validates the output length")
{
    class ShortProvider final : public EmbeddingProvider {
    public:
        std::size_t dimension() const override { return 1; }
        std::vector<EmbeddingVector> embed(const std::vector<std::string>&) override
        {
            return {}; // always wrong for non-empty input
        }
    };
    ShortProvider provider;
    CHECK_THROWS_AS(embed_sentences(provider, {"a"}), Error);
    CHECK(embed_sentences(provider, {}).empty());
}

TEST_CASE("sentence_texts blanks citation ranges")
{
    Document doc = text_doc("The method works [12]. A second sentence follows.");
    auto sentences = sentence_texts(doc);
    REQUIRE(sentences.size() == 2);
    CHECK(sentences[0].find("[12]") == std::string::npos);
    CHECK(sentences[0].find("method works") != std::string::npos);
    // Blanking preserves lengths, so sentence spans still line up.
    CHECK(sentences[1] == "a second sentence follows.");
}

TEST_CASE("semantic score of a document against itself is one")
{
    Document doc = text_doc("Rivers carve valleys over time. Glaciers carve them faster. "
                            "Both processes reshape the land.");
    BuiltinProvider provider;
    SemanticResult result = semantic_score(doc, doc, provider);
    CHECK(result.score == doctest::Approx(1.0).epsilon(1e-9));
    REQUIRE(result.alignments.size() == 3);
    for (const MatchEvidence& e : result.alignments) {
        CHECK(e.channel == Channel::Semantic);
        CHECK(e.strength >= 0.6);
        CHECK(e.query_span.begin < e.query_span.end);
        CHECK(e.query_span.end <= doc.token_spans.size());
    }
}

TEST_CASE("semantic score matches a recomputation from sentence embeddings")
{
    Document query = text_doc("Solar panels convert light. Batteries store the energy.");
    Document source = text_doc("Light becomes electricity in solar panels. "
                               "Wind turbines work differently. Energy is stored in batteries.");
    BuiltinProvider provider;
    SemanticResult result = semantic_score(query, source, provider);

    auto qv = provider.embed(sentence_texts(query));
    auto sv = provider.embed(sentence_texts(source));
    double expect = 0.0;
    std::size_t expect_alignments = 0;
    for (const auto& q : qv) {
        double best = -1.0;
        for (const auto& s : sv) {
            best = std::max(best, q.dot(s));
        }
        expect += std::max(0.0, best);
        if (best >= 0.6) {
            ++expect_alignments;
        }
    }
    expect /= static_cast<double>(qv.size());
    CHECK(result.score == doctest::Approx(expect).epsilon(1e-12));
    CHECK(result.alignments.size() == expect_alignments);

    SemanticResult precomputed = semantic_score(query, qv, source, sv);
    CHECK(precomputed.score == result.score);
    CHECK(precomputed.alignments.size() == result.alignments.size());
}

TEST_CASE("semantic score with no sentences is zero")
{
    Document doc = text_doc("One sentence only.");
    SemanticResult result = semantic_score(doc, {}, doc, {});
    CHECK(result.score == 0.0);
    CHECK(result.alignments.empty());
}

TEST_CASE("unrelated sentences produce a low semantic score")
{
    Document a = text_doc("Quantum chromodynamics binds quarks inside hadrons strongly.");
    Document b = text_doc("My grandmother bakes sourdough bread every Sunday morning.");
    BuiltinProvider provider;
    SemanticResult result = semantic_score(a, b, provider);
    CHECK(result.score < 0.4);
    CHECK(result.score >= 0.0);
}
