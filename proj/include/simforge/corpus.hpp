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

#ifndef SIMFORGE_CORPUS_HPP
#define SIMFORGE_CORPUS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "simforge/codesim.hpp"
#include "simforge/document.hpp"
#include "simforge/embeddings.hpp"
#include "simforge/stylometry.hpp"
#include "simforge/textsim.hpp"

namespace simforge::corpus {

/// Per-document feature bundle. tfidf holds final (idf-weighted,
/// normalized) weights; term_counts keeps the raw counts so queries can be
/// weighted against any idf table.
struct FeatureProfile {
    textsim::TermCounts term_counts;
    textsim::TfIdfVector tfidf;
    stylometry::StyleProfile style;
    textsim::FingerprintSet fingerprints;
    std::vector<embeddings::EmbeddingVector> sentence_embeddings;
    std::optional<codesim::CodeGraph> graph;       // Code only
    std::optional<codesim::CodeFeatureVector> code_features;
};

struct IndexedDocument {
    Document doc;
    FeatureProfile profile;
};

struct Posting {
    DocumentId doc;
    std::size_t position = 0;

    auto operator<=>(const Posting&) const = default;
};

struct CorpusIndex {
    static constexpr int kVersion = 1;

    int version = kVersion;
    std::size_t k = 5;
    std::size_t w = 4;
    std::map<DocumentId, IndexedDocument> documents;
    std::unordered_map<std::uint64_t, std::vector<Posting>> inverted;
    std::map<std::string, double> idf;

    /// idf value for a term unseen in this corpus (df = 0).
    double unknown_idf() const;
};

struct IngestOptions {
    std::optional<DocKind> kind;
    std::optional<CodeLanguage> language;
    std::string path_hint; // extension drives kind inference; kept as display name
    std::uint64_t ordinal = 0;
};

/// Decode, normalize and segment one input. Kind comes from the explicit
/// hint, else the path extension (.c/.h/.cpp/.java/.js -> CLike, .py ->
/// PythonLike), else Text. Throws EmptyDocument when no tokens survive.
Document ingest_document(std::string_view bytes, const IngestOptions& options = {});

/// Token stream a document contributes to the lexical channels: word
/// tokens for Text, canonical normalized tokens for Code.
std::vector<std::string> channel_tokens(const Document& doc);

FeatureProfile profile_document(const Document& doc, std::size_t k, std::size_t w,
                                embeddings::EmbeddingProvider& provider);

CorpusIndex build_index(const std::vector<Document>& docs, std::size_t k, std::size_t w,
                        embeddings::EmbeddingProvider& provider);

/// Documents ranked by count of distinct shared fingerprint hashes,
/// descending; ties by DocumentId ascending; zero-overlap documents
/// excluded.
std::vector<DocumentId> query_candidates(const CorpusIndex& index,
                                         const FeatureProfile& profile, std::size_t limit);

void save_index(const CorpusIndex& index, const std::string& path);
CorpusIndex load_index(const std::string& path);

std::string serialize_index(const CorpusIndex& index);
CorpusIndex deserialize_index(std::string_view payload);

} // namespace simforge::corpus

#endif // SIMFORGE_CORPUS_HPP
