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

#include "simforge/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "simforge/errors.hpp"
#include "simforge/stylometry.hpp"
#include "simforge/version.hpp"

namespace simforge::pipeline {

namespace {

constexpr std::size_t kExcerptCap = 240;

// Byte excerpt of a token-index span, truncated to the cap on a UTF-8
// boundary with an ellipsis marker.
std::string excerpt_for(const Document& doc, const Span& token_span)
{
    if (token_span.empty() || token_span.end > doc.token_spans.size()) {
        return "";
    }
    std::size_t begin = doc.token_spans[token_span.begin].begin;
    std::size_t end = doc.token_spans[token_span.end - 1].end;
    if (end <= begin || end > doc.normalized.size()) {
        return "";
    }
    std::string text = doc.normalized.substr(begin, end - begin);
    if (text.size() <= kExcerptCap) {
        return text;
    }
    std::size_t cut = kExcerptCap - 3;
    while (cut > 0 && (static_cast<unsigned char>(text[cut]) & 0xC0) == 0x80) {
        --cut;
    }
    return text.substr(0, cut) + "...";
}

std::vector<report::EvidenceRecord> to_records(const Document& query,
                                               const std::vector<MatchEvidence>& evidence)
{
    std::vector<report::EvidenceRecord> records;
    records.reserve(evidence.size());
    for (const MatchEvidence& m : evidence) {
        records.push_back({m, excerpt_for(query, m.query_span)});
    }
    return records;
}

report::ReportConfig config_echo(std::size_t k, std::size_t w, const PipelineConfig& config)
{
    report::ReportConfig echo;
    echo.k = k;
    echo.w = w;
    echo.weights = config.weights;
    echo.thresholds = config.thresholds;
    echo.tool_version = kToolVersion;
    return echo;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        raise(Errc::IoError, "cannot open " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        raise(Errc::IoError, "failed reading " + path);
    }
    return buffer.str();
}

} // namespace

PairOutcome score_pair(const Document& query, const corpus::FeatureProfile& query_profile,
                       const Document& source, const corpus::FeatureProfile& source_profile,
                       const std::map<std::string, double>& idf, double unknown_idf,
                       const PipelineConfig& config, const rules::RuleSet& ruleset)
{
    if (query.kind != source.kind) {
        raise(Errc::KindMismatch, "cannot compare text with code");
    }
    PairOutcome outcome;

    auto qvec = textsim::weight_terms(query_profile.term_counts, idf, unknown_idf);
    auto svec = textsim::weight_terms(source_profile.term_counts, idf, unknown_idf);
    outcome.channels.lexical = textsim::cosine(qvec, svec);

    outcome.channels.fingerprint =
        textsim::containment(query_profile.fingerprints, source_profile.fingerprints);
    std::vector<MatchEvidence> evidence =
        textsim::match_spans(query_profile.fingerprints, source_profile.fingerprints);

    if (query.kind == DocKind::Text) {
        auto semantic = embeddings::semantic_score(query, query_profile.sentence_embeddings,
                                                   source, source_profile.sentence_embeddings);
        outcome.channels.semantic = semantic.score;
        evidence.insert(evidence.end(), semantic.alignments.begin(), semantic.alignments.end());
    } else if (query_profile.graph.has_value() && source_profile.graph.has_value()) {
        outcome.channels.structural =
            codesim::graph_similarity(*query_profile.graph, *source_profile.graph);
    }

    outcome.evidence = rules::suppress(evidence, query, ruleset);
    outcome.score = decision::aggregate(outcome.channels, config.weights);
    outcome.verdict = decision::classify(outcome.score, outcome.channels, config.thresholds);
    return outcome;
}

report::Report check_document(const Document& query, const corpus::CorpusIndex& index,
                              const PipelineConfig& config, const rules::RuleSet& ruleset,
                              embeddings::EmbeddingProvider& provider)
{
    report::Report rep;
    rep.query = {query.id.value, query.kind, query.display_name};
    rep.config = config_echo(index.k, index.w, config);

    auto profile = corpus::profile_document(query, index.k, index.w, provider);
    auto candidates = corpus::query_candidates(index, profile, config.candidate_limit);
    for (const DocumentId& id : candidates) {
        const corpus::IndexedDocument& entry = index.documents.at(id);
        if (entry.doc.kind != query.kind) {
            continue;
        }
        PairOutcome outcome = score_pair(query, profile, entry.doc, entry.profile, index.idf,
                                         index.unknown_idf(), config, ruleset);
        report::SourceResult result;
        result.source_id = id.value;
        result.score = outcome.score;
        result.verdict = outcome.verdict;
        result.channels = outcome.channels;
        result.evidence = to_records(query, outcome.evidence);
        rep.results.push_back(std::move(result));
    }
    rep.finalize();
    return rep;
}

report::Report compare_documents(const Document& a, const Document& b,
                                 const PipelineConfig& config, const rules::RuleSet& ruleset,
                                 embeddings::EmbeddingProvider& provider)
{
    report::Report rep;
    rep.query = {a.id.value, a.kind, a.display_name};
    rep.config = config_echo(config.k, config.w, config);

    auto aprofile = corpus::profile_document(a, config.k, config.w, provider);
    auto bprofile = corpus::profile_document(b, config.k, config.w, provider);

    std::map<std::string, double> idf;
    textsim::build_tfidf({aprofile.term_counts, bprofile.term_counts}, &idf);
    const double unknown_idf = std::log(1.0 + 2.0) + 1.0;

    PairOutcome outcome = score_pair(a, aprofile, b, bprofile, idf, unknown_idf, config, ruleset);
    report::SourceResult result;
    result.source_id = b.id.value;
    result.score = outcome.score;
    result.verdict = outcome.verdict;
    result.channels = outcome.channels;
    result.evidence = to_records(a, outcome.evidence);
    rep.results.push_back(std::move(result));
    rep.finalize();
    return rep;
}

report::Report intrinsic_report(const Document& doc, const PipelineConfig& config,
                                const rules::RuleSet& ruleset)
{
    report::Report rep;
    rep.query = {doc.id.value, doc.kind, doc.display_name};
    rep.config = config_echo(config.k, config.w, config);

    auto evidence = rules::suppress(stylometry::detect_outlier_windows(doc), doc, ruleset);
    double strength = 0.0;
    for (const MatchEvidence& m : evidence) {
        strength = std::max(strength, m.strength);
    }

    report::SourceResult result;
    result.source_id = doc.id.value; // reference-free: the document vs itself
    result.channels.stylometric = strength;
    result.score = decision::aggregate(result.channels, config.weights);
    result.verdict = decision::classify(result.score, result.channels, config.thresholds);
    result.evidence = to_records(doc, evidence);
    rep.results.push_back(std::move(result));
    rep.finalize();
    return rep;
}

std::vector<LabeledPairPaths> load_labeled_pairs(const std::string& path)
{
    std::string payload = read_file(path);
    nlohmann::json root = nlohmann::json::parse(payload, nullptr, false);
    if (root.is_discarded() || !root.is_array()) {
        raise(Errc::FormatError, "pairs file is not a JSON array");
    }
    std::filesystem::path base = std::filesystem::path(path).parent_path();
    std::vector<LabeledPairPaths> pairs;
    for (const auto& item : root) {
        if (!item.is_object() || !item.contains("query") || !item.contains("source")
            || !item.contains("label") || !item["query"].is_string()
            || !item["source"].is_string() || !item["label"].is_string()) {
            raise(Errc::FormatError, "pair entries need query, source and label strings");
        }
        LabeledPairPaths pair;
        auto resolve = [&](const std::string& p) {
            std::filesystem::path fp(p);
            return fp.is_relative() && !base.empty() ? (base / fp).string() : fp.string();
        };
        pair.query_path = resolve(item["query"].get<std::string>());
        pair.source_path = resolve(item["source"].get<std::string>());
        std::string label = item["label"].get<std::string>();
        if (label == "plagiarized") {
            pair.label = decision::PairLabel::Plagiarized;
        } else if (label == "original") {
            pair.label = decision::PairLabel::Original;
        } else {
            raise(Errc::FormatError, "label must be plagiarized or original");
        }
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

std::vector<decision::LabeledChannelScores> score_labeled_pairs(
    const std::vector<LabeledPairPaths>& pairs, const PipelineConfig& config,
    const rules::RuleSet& ruleset, embeddings::EmbeddingProvider& provider,
    const corpus::CorpusIndex* index)
{
    const std::size_t k = index != nullptr ? index->k : config.k;
    const std::size_t w = index != nullptr ? index->w : config.w;

    std::vector<decision::LabeledChannelScores> scored;
    scored.reserve(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        corpus::IngestOptions query_options;
        query_options.path_hint = pairs[i].query_path;
        query_options.ordinal = 2 * i;
        Document query = corpus::ingest_document(read_file(pairs[i].query_path), query_options);

        corpus::IngestOptions source_options;
        source_options.path_hint = pairs[i].source_path;
        source_options.ordinal = 2 * i + 1;
        Document source = corpus::ingest_document(read_file(pairs[i].source_path), source_options);

        auto query_profile = corpus::profile_document(query, k, w, provider);
        auto source_profile = corpus::profile_document(source, k, w, provider);

        PairOutcome outcome;
        if (index != nullptr) {
            outcome = score_pair(query, query_profile, source, source_profile, index->idf,
                                 index->unknown_idf(), config, ruleset);
        } else {
            std::map<std::string, double> idf;
            textsim::build_tfidf({query_profile.term_counts, source_profile.term_counts}, &idf);
            outcome = score_pair(query, query_profile, source, source_profile, idf,
                                 std::log(1.0 + 2.0) + 1.0, config, ruleset);
        }
        scored.emplace_back(outcome.channels, pairs[i].label);
    }
    return scored;
}

} // namespace simforge::pipeline
