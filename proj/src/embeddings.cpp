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

#include "simforge/embeddings.hpp"

#include <algorithm>
#include <cmath>

#include <httplib.h>
#include <json.hpp>

#include "simforge/errors.hpp"
#include "simforge/hash.hpp"
#include "simforge/preprocess.hpp"

namespace simforge::embeddings {

double EmbeddingVector::dot(const EmbeddingVector& other) const
{
    std::size_t n = std::min(values.size(), other.values.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += values[i] * other.values[i];
    }
    return sum;
}

bool EmbeddingVector::zero() const
{
    for (double v : values) {
        if (v != 0.0) {
            return false;
        }
    }
    return true;
}

namespace {

void l2_normalize(EmbeddingVector& vec)
{
    double sum = 0.0;
    for (double v : vec.values) {
        sum += v * v;
    }
    if (sum <= 0.0) {
        return;
    }
    double norm = std::sqrt(sum);
    for (double& v : vec.values) {
        v /= norm;
    }
}

void hash_feature(EmbeddingVector& vec, std::string_view feature)
{
    std::uint64_t h1 = fnv1a64(feature);
    std::uint64_t h2 = splitmix64(h1);
    std::size_t bucket = static_cast<std::size_t>(h1 % kBuiltinDimension);
    vec.values[bucket] += (h2 & 1) != 0 ? 1.0 : -1.0;
}

} // namespace

std::vector<EmbeddingVector> BuiltinProvider::embed(const std::vector<std::string>& sentences)
{
    std::vector<EmbeddingVector> out;
    out.reserve(sentences.size());
    for (const std::string& sentence : sentences) {
        EmbeddingVector vec;
        vec.values.assign(kBuiltinDimension, 0.0);
        for (std::size_t i = 0; i + 3 <= sentence.size(); ++i) {
            std::string feature = "g\x1F" + sentence.substr(i, 3);
            hash_feature(vec, feature);
        }
        for (const Span& t : preprocess::tokenize(sentence)) {
            std::string feature = "t\x1F" + sentence.substr(t.begin, t.length());
            hash_feature(vec, feature);
        }
        l2_normalize(vec);
        out.push_back(std::move(vec));
    }
    return out;
}

RemoteProvider::RemoteProvider(ProviderConfig config) : config_(std::move(config))
{
    if (config_.endpoint.empty()) {
        raise(Errc::ValidationError, "remote provider needs an endpoint");
    }
    if (config_.max_batch == 0) {
        raise(Errc::ValidationError, "max_batch must be positive");
    }
}

std::vector<EmbeddingVector> RemoteProvider::embed_batch(const std::vector<std::string>& batch)
{
    std::string base = config_.endpoint;
    std::string path_prefix;
    std::size_t scheme = base.find("://");
    std::size_t slash = scheme == std::string::npos ? base.find('/') : base.find('/', scheme + 3);
    if (slash != std::string::npos) {
        path_prefix = base.substr(slash);
        base = base.substr(0, slash);
        if (path_prefix == "/") {
            path_prefix.clear();
        }
    }
    const std::string path = path_prefix + "/embed";

    nlohmann::json request;
    request["texts"] = batch;
    const std::string body = request.dump();

    std::string last_error = "no attempt made";
    int timeout_ms = config_.timeout_ms;
    for (int attempt = 0; attempt < 3; ++attempt, timeout_ms *= 2) {
        httplib::Client client(base);
        auto timeout = std::chrono::milliseconds(timeout_ms);
        client.set_connection_timeout(timeout);
        client.set_read_timeout(timeout);
        client.set_write_timeout(timeout);

        auto res = client.Post(path, body, "application/json");
        if (!res) {
            last_error = "connection failed: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "status " + std::to_string(res->status);
            continue;
        }

        nlohmann::json payload = nlohmann::json::parse(res->body, nullptr, false);
        if (payload.is_discarded() || !payload.contains("vectors")
            || !payload["vectors"].is_array() || payload["vectors"].size() != batch.size()) {
            raise(Errc::ProviderUnavailable, "malformed embedding response");
        }
        std::vector<EmbeddingVector> vectors;
        vectors.reserve(batch.size());
        for (const auto& row : payload["vectors"]) {
            if (!row.is_array() || row.empty()) {
                raise(Errc::DimensionMismatch, "empty embedding vector in response");
            }
            EmbeddingVector vec;
            vec.values.reserve(row.size());
            for (const auto& value : row) {
                if (!value.is_number()) {
                    raise(Errc::ProviderUnavailable, "malformed embedding response");
                }
                vec.values.push_back(value.get<double>());
            }
            if (dimension_ == 0) {
                dimension_ = vec.values.size();
            }
            if (vec.values.size() != dimension_) {
                raise(Errc::DimensionMismatch,
                      "provider returned dimension " + std::to_string(vec.values.size())
                          + ", expected " + std::to_string(dimension_));
            }
            l2_normalize(vec);
            vectors.push_back(std::move(vec));
        }
        return vectors;
    }
    raise(Errc::ProviderUnavailable, "embedding service unreachable: " + last_error);
}

std::vector<EmbeddingVector> RemoteProvider::embed(const std::vector<std::string>& sentences)
{
    std::vector<EmbeddingVector> out;
    out.reserve(sentences.size());
    for (std::size_t begin = 0; begin < sentences.size(); begin += config_.max_batch) {
        std::size_t end = std::min(begin + config_.max_batch, sentences.size());
        std::vector<std::string> batch(sentences.begin() + static_cast<std::ptrdiff_t>(begin),
                                       sentences.begin() + static_cast<std::ptrdiff_t>(end));
        auto vectors = embed_batch(batch);
        std::move(vectors.begin(), vectors.end(), std::back_inserter(out));
    }
    return out;
}

std::unique_ptr<EmbeddingProvider> make_provider(const ProviderConfig& config)
{
    if (config.kind == ProviderConfig::Kind::Remote) {
        return std::make_unique<RemoteProvider>(config);
    }
    return std::make_unique<BuiltinProvider>();
}

std::vector<EmbeddingVector> embed_sentences(EmbeddingProvider& provider,
                                             const std::vector<std::string>& sentences)
{
    auto vectors = provider.embed(sentences);
    if (vectors.size() != sentences.size()) {
        raise(Errc::LengthMismatch, "provider returned wrong number of vectors");
    }
    return vectors;
}

std::vector<std::string> sentence_texts(const Document& doc)
{
    std::string blanked = preprocess::blank_spans(doc.normalized, doc.citations);
    std::vector<std::string> out;
    out.reserve(doc.sentence_spans.size());
    for (const Span& s : doc.sentence_spans) {
        out.push_back(blanked.substr(s.begin, s.length()));
    }
    return out;
}

namespace {

// Token-index range of tokens overlapping the char range of a sentence.
bool sentence_token_range(const Document& doc, const Span& chars, Span& out)
{
    std::size_t first = doc.token_spans.size();
    std::size_t last = 0;
    for (std::size_t i = 0; i < doc.token_spans.size(); ++i) {
        const Span& t = doc.token_spans[i];
        if (t.end > chars.begin && t.begin < chars.end) {
            first = std::min(first, i);
            last = i;
        }
    }
    if (first >= doc.token_spans.size()) {
        return false;
    }
    out = {first, last + 1};
    return true;
}

} // namespace

SemanticResult semantic_score(const Document& query,
                              const std::vector<EmbeddingVector>& query_embeddings,
                              const Document& source,
                              const std::vector<EmbeddingVector>& source_embeddings)
{
    SemanticResult result;
    if (query_embeddings.empty() || source_embeddings.empty()) {
        return result;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < query_embeddings.size(); ++i) {
        double best = -1.0;
        std::size_t best_j = 0;
        for (std::size_t j = 0; j < source_embeddings.size(); ++j) {
            double d = query_embeddings[i].dot(source_embeddings[j]);
            if (d > best) {
                best = d;
                best_j = j;
            }
        }
        sum += std::clamp(best, 0.0, 1.0);
        if (best < 0.6 || i >= query.sentence_spans.size()
            || best_j >= source.sentence_spans.size()) {
            continue;
        }
        Span qspan;
        Span sspan;
        if (sentence_token_range(query, query.sentence_spans[i], qspan)
            && sentence_token_range(source, source.sentence_spans[best_j], sspan)) {
            result.alignments.push_back(
                {qspan, sspan, Channel::Semantic, std::min(1.0, best)});
        }
    }
    result.score = sum / static_cast<double>(query_embeddings.size());
    return result;
}

SemanticResult semantic_score(const Document& query, const Document& source,
                              EmbeddingProvider& provider)
{
    auto query_embeddings = embed_sentences(provider, sentence_texts(query));
    auto source_embeddings = embed_sentences(provider, sentence_texts(source));
    return semantic_score(query, query_embeddings, source, source_embeddings);
}

} // namespace simforge::embeddings
