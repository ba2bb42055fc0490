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

#ifndef SIMFORGE_EMBEDDINGS_HPP
#define SIMFORGE_EMBEDDINGS_HPP

#include <memory>
#include <string>
#include <vector>

#include "simforge/document.hpp"

namespace simforge::embeddings {

/// Unit-L2 vector, or all-zero for empty input.
struct EmbeddingVector {
    std::vector<double> values;

    double dot(const EmbeddingVector& other) const;
    bool zero() const;
};

struct ProviderConfig {
    enum class Kind { Builtin, Remote };

    Kind kind = Kind::Builtin;
    std::string endpoint;      // Remote only
    int timeout_ms = 5000;
    std::size_t max_batch = 32;
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;

    virtual std::size_t dimension() const = 0;

    /// Order-preserving; output length equals input length.
    virtual std::vector<EmbeddingVector> embed(const std::vector<std::string>& sentences) = 0;
};

inline constexpr std::size_t kBuiltinDimension = 256;

/// Deterministic feature-hashed embeddings: every char 3-gram and token
/// unigram of the sentence is hashed with two independent 64-bit hashes,
/// h1 picks the bucket, the parity of h2 picks the sign, and the result is
/// L2-normalized. A pure function of the sentence; reproducible everywhere.
class BuiltinProvider final : public EmbeddingProvider {
public:
    std::size_t dimension() const override { return kBuiltinDimension; }
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& sentences) override;
};

/// Client for the remote wire protocol: POST {endpoint}/embed with
/// {"texts":[...]}, expecting {"vectors":[[...],...]}. Batches of at most
/// max_batch, 2 retries with doubled timeout on failure.
class RemoteProvider final : public EmbeddingProvider {
public:
    explicit RemoteProvider(ProviderConfig config);

    std::size_t dimension() const override { return dimension_; }
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& sentences) override;

private:
    std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& batch);

    ProviderConfig config_;
    std::size_t dimension_ = 0; // fixed by the first response
};

std::unique_ptr<EmbeddingProvider> make_provider(const ProviderConfig& config);

std::vector<EmbeddingVector> embed_sentences(EmbeddingProvider& provider,
                                             const std::vector<std::string>& sentences);

struct SemanticResult {
    double score = 0.0;
    std::vector<MatchEvidence> alignments;
};

/// Align every query sentence to its best source sentence by cosine; emit
/// alignments with cosine >= 0.6 as Semantic evidence (token-range spans);
/// score = mean over query sentences of max(0, best cosine).
SemanticResult semantic_score(const Document& query, const Document& source,
                              EmbeddingProvider& provider);

/// Same, with precomputed sentence embeddings (index-backed checks).
SemanticResult semantic_score(const Document& query,
                              const std::vector<EmbeddingVector>& query_embeddings,
                              const Document& source,
                              const std::vector<EmbeddingVector>& source_embeddings);

/// Sentence substrings of a document's normalized text, with citation
/// ranges blanked.
std::vector<std::string> sentence_texts(const Document& doc);

} // namespace simforge::embeddings

#endif // SIMFORGE_EMBEDDINGS_HPP
