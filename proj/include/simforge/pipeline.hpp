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

#ifndef SIMFORGE_PIPELINE_HPP
#define SIMFORGE_PIPELINE_HPP

#include <map>
#include <string>
#include <vector>

#include "simforge/corpus.hpp"
#include "simforge/decision.hpp"
#include "simforge/document.hpp"
#include "simforge/embeddings.hpp"
#include "simforge/report.hpp"
#include "simforge/rules.hpp"

namespace simforge::pipeline {

struct PipelineConfig {
    std::size_t k = 5;
    std::size_t w = 4;
    std::size_t candidate_limit = 10;
    decision::FusionWeights weights;
    decision::DecisionThresholds thresholds;
    embeddings::ProviderConfig provider;
};

struct PairOutcome {
    decision::ChannelScores channels;
    std::vector<MatchEvidence> evidence; // post-suppression
    double score = 0.0;
    decision::Verdict verdict = decision::Verdict::Original;
};

/// Channels for one (query, source) pair: lexical TF-IDF cosine,
/// fingerprint containment, plus semantic for text pairs and structural for
/// code pairs. idf carries the reference idf table (from an index or the
/// pair itself).
PairOutcome score_pair(const Document& query, const corpus::FeatureProfile& query_profile,
                       const Document& source, const corpus::FeatureProfile& source_profile,
                       const std::map<std::string, double>& idf, double unknown_idf,
                       const PipelineConfig& config, const rules::RuleSet& ruleset);

/// Full retrieval pipeline: candidates -> channels -> suppression ->
/// fusion -> report.
report::Report check_document(const Document& query, const corpus::CorpusIndex& index,
                              const PipelineConfig& config, const rules::RuleSet& ruleset,
                              embeddings::EmbeddingProvider& provider);

/// Pairwise comparison without an index; idf comes from the two documents.
report::Report compare_documents(const Document& a, const Document& b,
                                 const PipelineConfig& config, const rules::RuleSet& ruleset,
                                 embeddings::EmbeddingProvider& provider);

/// Intrinsic (reference-free) report: stylometric channel only.
report::Report intrinsic_report(const Document& doc, const PipelineConfig& config,
                                const rules::RuleSet& ruleset);

struct LabeledPairPaths {
    std::string query_path;
    std::string source_path;
    decision::PairLabel label = decision::PairLabel::Original;
};

/// Parse the calibration/eval pairs file: JSON list of
/// {"query":path,"source":path,"label":"plagiarized"|"original"}.
std::vector<LabeledPairPaths> load_labeled_pairs(const std::string& path);

/// Channel scores for labeled pairs (ingest both files, score pairwise).
/// When `index` is non-null its idf table is used.
std::vector<decision::LabeledChannelScores> score_labeled_pairs(
    const std::vector<LabeledPairPaths>& pairs, const PipelineConfig& config,
    const rules::RuleSet& ruleset, embeddings::EmbeddingProvider& provider,
    const corpus::CorpusIndex* index = nullptr);

} // namespace simforge::pipeline

#endif // SIMFORGE_PIPELINE_HPP
