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

#include "simforge/textsim.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "simforge/hash.hpp"

namespace simforge::textsim {

std::map<std::string, std::size_t> char_ngrams(std::string_view text, std::size_t n)
{
    std::map<std::string, std::size_t> grams;
    if (n == 0 || text.size() < n) {
        return grams;
    }
    for (std::size_t i = 0; i + n <= text.size(); ++i) {
        ++grams[std::string(text.substr(i, n))];
    }
    return grams;
}

namespace {

void l2_normalize(TfIdfVector& vec)
{
    double sum = 0.0;
    for (const auto& [term, weight] : vec.weights) {
        sum += weight * weight;
    }
    if (sum <= 0.0) {
        vec.weights.clear();
        return;
    }
    double norm = std::sqrt(sum);
    for (auto& [term, weight] : vec.weights) {
        weight /= norm;
    }
}

} // namespace

std::vector<TfIdfVector> build_tfidf(const std::vector<TermCounts>& docs,
                                     std::map<std::string, double>* idf_out)
{
    const double n = static_cast<double>(docs.size());
    std::map<std::string, double> idf;
    for (const TermCounts& doc : docs) {
        for (const auto& [term, count] : doc) {
            idf[term] += 1.0; // document frequency, first pass
        }
    }
    for (auto& [term, df] : idf) {
        df = std::log((1.0 + n) / (1.0 + df)) + 1.0;
    }

    std::vector<TfIdfVector> vectors;
    vectors.reserve(docs.size());
    for (const TermCounts& doc : docs) {
        TfIdfVector vec;
        for (const auto& [term, count] : doc) {
            vec.weights[term] = static_cast<double>(count) * idf.at(term);
        }
        l2_normalize(vec);
        vectors.push_back(std::move(vec));
    }
    if (idf_out != nullptr) {
        *idf_out = std::move(idf);
    }
    return vectors;
}

TfIdfVector weight_terms(const TermCounts& counts, const std::map<std::string, double>& idf,
                         double unknown_idf)
{
    TfIdfVector vec;
    for (const auto& [term, count] : counts) {
        auto it = idf.find(term);
        double weight = it != idf.end() ? it->second : unknown_idf;
        vec.weights[term] = static_cast<double>(count) * weight;
    }
    l2_normalize(vec);
    return vec;
}

double cosine(const TfIdfVector& u, const TfIdfVector& v)
{
    double dot = 0.0;
    double nu = 0.0;
    double nv = 0.0;
    auto iu = u.weights.begin();
    auto iv = v.weights.begin();
    while (iu != u.weights.end() && iv != v.weights.end()) {
        if (iu->first < iv->first) {
            nu += iu->second * iu->second;
            ++iu;
        } else if (iv->first < iu->first) {
            nv += iv->second * iv->second;
            ++iv;
        } else {
            dot += iu->second * iv->second;
            nu += iu->second * iu->second;
            nv += iv->second * iv->second;
            ++iu;
            ++iv;
        }
    }
    for (; iu != u.weights.end(); ++iu) {
        nu += iu->second * iu->second;
    }
    for (; iv != v.weights.end(); ++iv) {
        nv += iv->second * iv->second;
    }
    if (nu <= 0.0 || nv <= 0.0) {
        return 0.0;
    }
    // Clamped: rounding can push self-similarity one ulp past 1.
    return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), 0.0, 1.0);
}

std::unordered_set<std::uint64_t> FingerprintSet::distinct_hashes() const
{
    std::unordered_set<std::uint64_t> hashes;
    hashes.reserve(prints.size());
    for (const Fingerprint& p : prints) {
        hashes.insert(p.hash);
    }
    return hashes;
}

std::uint64_t kgram_hash(std::span<const std::string> tokens, std::size_t first, std::size_t k)
{
    std::uint64_t state = kFnvOffsetBasis;
    for (std::size_t j = 0; j < k; ++j) {
        if (j > 0) {
            state = fnv1a64_byte(0x1F, state);
        }
        state = fnv1a64(tokens[first + j], state);
    }
    return state;
}

FingerprintSet winnow_fingerprints(std::span<const std::string> tokens, std::size_t k,
                                   std::size_t w)
{
    FingerprintSet set;
    set.k = k;
    set.w = w;
    if (k == 0 || w == 0 || tokens.size() < k) {
        return set;
    }
    const std::size_t grams = tokens.size() - k + 1;
    std::vector<std::uint64_t> hashes(grams);
    for (std::size_t i = 0; i < grams; ++i) {
        hashes[i] = kgram_hash(tokens, i, k);
    }

    // Rightmost minimum per window; a window shorter than w (short input)
    // still contributes its minimum so no document with >= k tokens is left
    // without fingerprints.
    const std::size_t windows = grams > w ? grams - w + 1 : 1;
    const std::size_t width = std::min(w, grams);
    std::size_t last_selected = grams; // sentinel: nothing selected yet
    for (std::size_t s = 0; s < windows; ++s) {
        std::size_t argmin = s;
        for (std::size_t j = s; j < s + width; ++j) {
            if (hashes[j] <= hashes[argmin]) {
                argmin = j;
            }
        }
        if (argmin != last_selected) {
            set.prints.push_back({hashes[argmin], argmin});
            last_selected = argmin;
        }
    }
    return set;
}

namespace {

struct Chain {
    std::size_t q_begin = 0;
    std::size_t s_begin = 0;
    std::size_t q_last = 0;
    std::size_t s_last = 0;
    std::size_t covered = 0;     // query tokens covered by shared k-grams
    std::size_t covered_end = 0; // exclusive end of coverage so far
};

} // namespace

std::vector<MatchEvidence> match_spans(const FingerprintSet& query, const FingerprintSet& source)
{
    std::vector<MatchEvidence> evidence;
    if (query.prints.empty() || source.prints.empty()) {
        return evidence;
    }
    const std::size_t k = query.k;

    std::unordered_map<std::uint64_t, std::vector<std::size_t>> source_positions;
    for (const Fingerprint& p : source.prints) {
        source_positions[p.hash].push_back(p.position);
    }

    // Pairs of matching k-gram positions, ordered by query then source.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (const Fingerprint& p : query.prints) {
        auto it = source_positions.find(p.hash);
        if (it == source_positions.end()) {
            continue;
        }
        for (std::size_t spos : it->second) {
            pairs.emplace_back(p.position, spos);
        }
    }
    std::sort(pairs.begin(), pairs.end());

    // Greedy diagonal chaining: a pair extends the first chain whose last
    // pair precedes it on both sides with a token gap of at most k.
    std::vector<Chain> chains;
    const std::size_t max_delta = 2 * k;
    for (const auto& [q, s] : pairs) {
        bool attached = false;
        for (Chain& c : chains) {
            if (q > c.q_last && s > c.s_last && q - c.q_last <= max_delta
                && s - c.s_last <= max_delta) {
                c.q_last = q;
                c.s_last = s;
                if (q + k > c.covered_end) {
                    c.covered += q + k - std::max(c.covered_end, q);
                    c.covered_end = q + k;
                }
                attached = true;
                break;
            }
        }
        if (!attached) {
            chains.push_back({q, s, q, s, k, q + k});
        }
    }

    evidence.reserve(chains.size());
    for (const Chain& c : chains) {
        Span qspan{c.q_begin, c.q_last + k};
        Span sspan{c.s_begin, c.s_last + k};
        double strength = static_cast<double>(c.covered) / static_cast<double>(qspan.length());
        evidence.push_back({qspan, sspan, Channel::Fingerprint, strength});
    }
    std::sort(evidence.begin(), evidence.end(), [](const MatchEvidence& a, const MatchEvidence& b) {
        if (a.query_span.begin != b.query_span.begin) {
            return a.query_span.begin < b.query_span.begin;
        }
        return a.query_span.end > b.query_span.end; // longest first on ties
    });

    // Keep a non-overlapping subset in query order.
    std::vector<MatchEvidence> kept;
    std::size_t last_end = 0;
    for (MatchEvidence& e : evidence) {
        if (kept.empty() || e.query_span.begin >= last_end) {
            last_end = e.query_span.end;
            kept.push_back(std::move(e));
        }
    }
    return kept;
}

double containment(const FingerprintSet& query, const FingerprintSet& source)
{
    auto query_hashes = query.distinct_hashes();
    if (query_hashes.empty()) {
        return 0.0;
    }
    auto source_hashes = source.distinct_hashes();
    std::size_t shared = 0;
    for (std::uint64_t h : query_hashes) {
        shared += source_hashes.count(h);
    }
    return static_cast<double>(shared) / static_cast<double>(query_hashes.size());
}

} // namespace simforge::textsim
