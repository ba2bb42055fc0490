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

#ifndef SIMFORGE_TEXTSIM_HPP
#define SIMFORGE_TEXTSIM_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "simforge/document.hpp"

namespace simforge::textsim {

/// All contiguous character n-grams of `text`, with multiplicity.
std::map<std::string, std::size_t> char_ngrams(std::string_view text, std::size_t n);

/// Sparse L2-normalized term-weight vector. Empty for token-less documents.
struct TfIdfVector {
    std::map<std::string, double> weights;

    bool empty() const { return weights.empty(); }
};

using TermCounts = std::map<std::string, std::size_t>;

/// idf(t) = ln((1+N)/(1+df(t))) + 1 over the given corpus; weights are
/// tf*idf, L2-normalized per document.
std::vector<TfIdfVector> build_tfidf(const std::vector<TermCounts>& docs,
                                     std::map<std::string, double>* idf_out = nullptr);

/// Weight one document's raw counts against an existing idf table. Terms
/// absent from the table use `unknown_idf` (ln(1+N)+1, the df=0 value of
/// the table's corpus).
TfIdfVector weight_terms(const TermCounts& counts, const std::map<std::string, double>& idf,
                         double unknown_idf);

double cosine(const TfIdfVector& u, const TfIdfVector& v);

struct Fingerprint {
    std::uint64_t hash = 0;
    std::size_t position = 0; // index of the k-gram's first token

    auto operator<=>(const Fingerprint&) const = default;
};

struct FingerprintSet {
    std::size_t k = 5;
    std::size_t w = 4;
    std::vector<Fingerprint> prints; // positions strictly increasing

    std::unordered_set<std::uint64_t> distinct_hashes() const;
};

/// FNV-1a over tokens[first..first+k) joined by 0x1F.
std::uint64_t kgram_hash(std::span<const std::string> tokens, std::size_t first, std::size_t k);

/// Winnowing: hash every token k-gram, slide a window of w consecutive
/// hashes and keep the minimum of each window (rightmost minimum on ties).
/// Any run of >= w+k-1 shared tokens between two documents is guaranteed to
/// produce at least one shared fingerprint.
FingerprintSet winnow_fingerprints(std::span<const std::string> tokens, std::size_t k, std::size_t w);

/// Pair shared hashes by position and merge near-adjacent shared k-grams
/// (token gap <= k on both sides) into maximal spans. Strength is the
/// fraction of the query span actually covered by shared k-grams. Output is
/// sorted by query span start and non-overlapping in the query.
std::vector<MatchEvidence> match_spans(const FingerprintSet& query, const FingerprintSet& source);

/// |shared distinct hashes| / |query distinct hashes|; 0 for an empty query.
double containment(const FingerprintSet& query, const FingerprintSet& source);

} // namespace simforge::textsim

#endif // SIMFORGE_TEXTSIM_HPP
