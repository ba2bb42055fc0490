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

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "simforge/corpus.hpp"
#include "simforge/errors.hpp"
#include "simforge/pipeline.hpp"
#include "simforge/preprocess.hpp"
#include "simforge/textsim.hpp"
#include "support/synthetic.hpp"

using namespace simforge;
using namespace simforge::pipeline;

namespace {

Errc code_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return Errc::ValidationError;
}

Document ingest(const std::string& bytes, const std::string& hint, std::uint64_t ordinal)
{
    corpus::IngestOptions options;
    options.path_hint = hint;
    options.ordinal = ordinal;
    return corpus::ingest_document(bytes, options);
}

PairOutcome score_text_pair(const std::string& a, const std::string& b,
                            const rules::RuleSet& ruleset = {})
{
    embeddings::BuiltinProvider provider;
    PipelineConfig config;
    Document query = ingest(a, "q.txt", 0);
    Document source = ingest(b, "s.txt", 1);
    auto qp = corpus::profile_document(query, config.k, config.w, provider);
    auto sp = corpus::profile_document(source, config.k, config.w, provider);
    std::map<std::string, double> idf;
    textsim::build_tfidf({qp.term_counts, sp.term_counts}, &idf);
    return score_pair(query, qp, source, sp, idf, std::log(3.0) + 1.0, config, ruleset);
}

struct TempDir {
    std::filesystem::path path;

    TempDir() : path(std::filesystem::temp_directory_path() / "simforge_pipeline_test")
    {
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }

    std::string write(const std::string& name, const std::string& content) const
    {
        std::filesystem::path p = path / name;
        std::ofstream out(p, std::ios::binary);
        out << content;
        return p.string();
    }
};

const std::string kEssay =
    "The river threads the valley with patient force. Sediment travels toward the delta "
    "every season. Floods rearrange the banks and carve fresh channels through clay.";

const std::string kUnrelated =
    "Compilers translate syntax trees into register allocations. Optimization passes "
    "reorder instructions while preserving observable behavior entirely.";

} // namespace

TEST_CASE("verbatim text pair saturates the text channels")
{
    PairOutcome outcome = score_text_pair(kEssay, kEssay);
    CHECK(outcome.channels.lexical == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(outcome.channels.fingerprint == 1.0);
    CHECK(outcome.channels.semantic == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(!outcome.channels.structural.has_value());
    CHECK(!outcome.channels.stylometric.has_value());
    CHECK(outcome.score > 95.0);
    CHECK(outcome.verdict == decision::Verdict::SuspectedCopy);
    CHECK(!outcome.evidence.empty());
}

TEST_CASE("unrelated text pair scores low")
{
    PairOutcome outcome = score_text_pair(kEssay, kUnrelated);
    CHECK(outcome.channels.fingerprint == 0.0);
    CHECK(*outcome.channels.lexical < 0.2);
    CHECK(outcome.score < 30.0);
    CHECK(outcome.verdict == decision::Verdict::Original);
}

TEST_CASE("code pair gets the structural channel")
{
    auto bank = testsupport::word_bank();
    testsupport::Rng rng(11);
    auto skeleton = testsupport::random_skeleton(rng);
    std::string original = testsupport::render_clike(skeleton, rng, bank);
    std::string renamed = testsupport::render_clike(skeleton, rng, bank);

    embeddings::BuiltinProvider provider;
    PipelineConfig config;
    Document query = ingest(renamed, "q.c", 0);
    Document source = ingest(original, "s.c", 1);
    auto qp = corpus::profile_document(query, config.k, config.w, provider);
    auto sp = corpus::profile_document(source, config.k, config.w, provider);
    std::map<std::string, double> idf;
    textsim::build_tfidf({qp.term_counts, sp.term_counts}, &idf);
    PairOutcome outcome =
        score_pair(query, qp, source, sp, idf, std::log(3.0) + 1.0, config, rules::RuleSet{});

    CHECK(outcome.channels.lexical == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(outcome.channels.fingerprint == 1.0);
    CHECK(outcome.channels.structural == 1.0);
    CHECK(!outcome.channels.semantic.has_value());
    CHECK(outcome.verdict == decision::Verdict::SuspectedCodePlagiarism);
}

TEST_CASE("mixed kinds cannot be scored as a pair")
{
    embeddings::BuiltinProvider provider;
    PipelineConfig config;
    Document text = ingest(kEssay, "a.txt", 0);
    Document code = ingest("function f(a) { return a; }", "b.js", 1);
    auto tp = corpus::profile_document(text, config.k, config.w, provider);
    auto cp = corpus::profile_document(code, config.k, config.w, provider);
    CHECK(code_of([&] {
        score_pair(text, tp, code, cp, {}, 1.0, config, rules::RuleSet{});
    }) == Errc::KindMismatch);
}

TEST_CASE("suppression filters evidence but never channel scores")
{
    rules::RuleSet strict;
    strict.min_match_tokens = 100000;

    PairOutcome open = score_text_pair(kEssay, kEssay);
    PairOutcome gagged = score_text_pair(kEssay, kEssay, strict);

    CHECK(gagged.evidence.empty());
    CHECK(!open.evidence.empty());
    CHECK(open.channels == gagged.channels);
    CHECK(open.score == gagged.score);
    CHECK(open.verdict == gagged.verdict);
}

TEST_CASE("check_document ranks candidates and echoes the config")
{
    embeddings::BuiltinProvider provider;
    std::vector<Document> corpus_docs = {
        ingest(kEssay, "essay.txt", 0),
        ingest(kEssay + " An extra closing thought trails the original text.", "close.txt", 1),
        ingest(kUnrelated, "unrelated.txt", 2),
        ingest("function f(a) { return a + 1; }", "prog.js", 3),
    };
    corpus::CorpusIndex index = corpus::build_index(corpus_docs, 5, 4, provider);

    PipelineConfig config;
    Document query = ingest(kEssay, "query.txt", 9);
    report::Report rep = check_document(query, index, config, rules::RuleSet{}, provider);

    CHECK(rep.query.id == query.id.value);
    CHECK(rep.query.name == "query.txt");
    CHECK(rep.query.kind == DocKind::Text);
    CHECK(rep.config.k == 5);
    CHECK(rep.config.w == 4);
    CHECK(rep.config.tool_version == "0.1.0");

    // The unrelated document shares no fingerprints; the code document is
    // kind-mismatched. Only the two related texts remain, best first.
    REQUIRE(rep.results.size() == 2);
    CHECK(rep.results[0].source_id == corpus_docs[0].id.value);
    CHECK(rep.results[0].score >= rep.results[1].score);
    CHECK(rep.results[1].source_id == corpus_docs[1].id.value);
    CHECK(rep.overall_score == rep.results[0].score);
    CHECK(rep.results[0].verdict == decision::Verdict::SuspectedCopy);

    // Evidence records carry query-side excerpts cut from the normalized
    // text (the match region, not necessarily the document start).
    REQUIRE(!rep.results[0].evidence.empty());
    CHECK(!rep.results[0].evidence[0].excerpt.empty());
    for (const auto& record : rep.results[0].evidence) {
        CHECK(query.normalized.find(record.excerpt) != std::string::npos);
    }

    // The JSON rendering survives a parse round trip.
    std::string payload = report::render(rep, report::ReportFormat::Json);
    CHECK(report::render(report::parse_report(payload), report::ReportFormat::Json) == payload);
}

TEST_CASE("check_document honours the candidate limit")
{
    embeddings::BuiltinProvider provider;
    std::vector<Document> corpus_docs = {
        ingest(kEssay, "a.txt", 0),
        ingest(kEssay, "b.txt", 1),
        ingest(kEssay, "c.txt", 2),
    };
    corpus::CorpusIndex index = corpus::build_index(corpus_docs, 5, 4, provider);

    PipelineConfig config;
    config.candidate_limit = 2;
    Document query = ingest(kEssay, "query.txt", 9);
    report::Report rep = check_document(query, index, config, rules::RuleSet{}, provider);
    CHECK(rep.results.size() == 2);
}

TEST_CASE("compare_documents works without an index")
{
    embeddings::BuiltinProvider provider;
    PipelineConfig config;
    Document a = ingest(kEssay, "a.txt", 0);
    Document b = ingest(kEssay, "b.txt", 1);

    report::Report rep = compare_documents(a, b, config, rules::RuleSet{}, provider);
    REQUIRE(rep.results.size() == 1);
    CHECK(rep.query.id == a.id.value);
    CHECK(rep.results[0].source_id == b.id.value);
    CHECK(rep.results[0].verdict == decision::Verdict::SuspectedCopy);
    CHECK(rep.overall_score == rep.results[0].score);

    // Byte-deterministic across repeated runs.
    report::Report again = compare_documents(a, b, config, rules::RuleSet{}, provider);
    CHECK(report::render(rep, report::ReportFormat::Json)
          == report::render(again, report::ReportFormat::Json));
}

TEST_CASE("excerpts are capped on a UTF-8 boundary")
{
    // Two identical long documents of multibyte tokens force a long match.
    std::string word = "caf\xc3\xa9";
    std::string text;
    for (int i = 0; i < 120; ++i) {
        text += word + "word" + std::to_string(i % 10) + " ";
    }
    text += "end.";
    PairOutcome outcome = score_text_pair(text, text);
    REQUIRE(!outcome.evidence.empty());

    embeddings::BuiltinProvider provider;
    PipelineConfig config;
    Document query = ingest(text, "q.txt", 0);
    report::Report rep =
        compare_documents(query, ingest(text, "s.txt", 1), config, rules::RuleSet{}, provider);
    bool saw_capped = false;
    for (const auto& record : rep.results[0].evidence) {
        CHECK(record.excerpt.size() <= 240);
        // Valid UTF-8: sanitize is the identity on well-formed input.
        CHECK(preprocess::sanitize_utf8(record.excerpt) == record.excerpt);
        if (record.excerpt.size() >= 238) {
            saw_capped = true;
            CHECK(record.excerpt.substr(record.excerpt.size() - 3) == "...");
        }
    }
    CHECK(saw_capped);
}

TEST_CASE("intrinsic report flags a planted style block")
{
    testsupport::IntrinsicFixture fixture = testsupport::intrinsic_fixture(42);
    Document doc = ingest(fixture.text, "essay.txt", 0);

    PipelineConfig config;
    report::Report rep = intrinsic_report(doc, config, rules::RuleSet{});
    REQUIRE(rep.results.size() == 1);
    CHECK(rep.results[0].source_id == doc.id.value);
    REQUIRE(rep.results[0].channels.stylometric.has_value());
    CHECK(*rep.results[0].channels.stylometric > 0.0);
    CHECK(!rep.results[0].evidence.empty());
    CHECK(rep.overall_score == rep.results[0].score);
}

TEST_CASE("intrinsic report on homogeneous text is quiet")
{
    std::string text;
    for (int i = 0; i < 60; ++i) {
        text += "the steady voice repeats the same cadence in every line. ";
    }
    Document doc = ingest(text, "flat.txt", 0);
    report::Report rep = intrinsic_report(doc, PipelineConfig{}, rules::RuleSet{});
    REQUIRE(rep.results.size() == 1);
    CHECK(*rep.results[0].channels.stylometric == 0.0);
    CHECK(rep.results[0].evidence.empty());
    CHECK(rep.results[0].verdict == decision::Verdict::Original);
}

TEST_CASE("load_labeled_pairs resolves paths and validates labels")
{
    TempDir dir;
    dir.write("q1.txt", kEssay);
    dir.write("s1.txt", kEssay);
    dir.write("q2.txt", kUnrelated);
    dir.write("s2.txt", kEssay);
    std::string pairs_path = dir.write("pairs.json", R"([
        {"query": "q1.txt", "source": "s1.txt", "label": "plagiarized"},
        {"query": "q2.txt", "source": "s2.txt", "label": "original"}
    ])");

    auto pairs = load_labeled_pairs(pairs_path);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].label == decision::PairLabel::Plagiarized);
    CHECK(pairs[1].label == decision::PairLabel::Original);
    CHECK(std::filesystem::path(pairs[0].query_path).filename() == "q1.txt");
    CHECK(std::filesystem::exists(pairs[0].query_path));

    CHECK(code_of([] { load_labeled_pairs("/no/such/pairs.json"); }) == Errc::IoError);
    std::string not_array = dir.write("bad1.json", R"({"query":"x"})");
    CHECK(code_of([&] { load_labeled_pairs(not_array); }) == Errc::FormatError);
    std::string missing_key = dir.write("bad2.json", R"([{"query":"a","label":"original"}])");
    CHECK(code_of([&] { load_labeled_pairs(missing_key); }) == Errc::FormatError);
    std::string bad_label = dir.write("bad3.json", R"([
        {"query":"q1.txt","source":"s1.txt","label":"meh"}
    ])");
    CHECK(code_of([&] { load_labeled_pairs(bad_label); }) == Errc::FormatError);
}

TEST_CASE("score_labeled_pairs produces channels for each pair")
{
    TempDir dir;
    dir.write("q1.txt", kEssay);
    dir.write("s1.txt", kEssay);
    dir.write("q2.txt", kUnrelated);
    dir.write("s2.txt", kEssay);
    std::string pairs_path = dir.write("pairs.json", R"([
        {"query": "q1.txt", "source": "s1.txt", "label": "plagiarized"},
        {"query": "q2.txt", "source": "s2.txt", "label": "original"}
    ])");

    embeddings::BuiltinProvider provider;
    auto scored = score_labeled_pairs(load_labeled_pairs(pairs_path), PipelineConfig{},
                                      rules::RuleSet{}, provider);
    REQUIRE(scored.size() == 2);
    CHECK(scored[0].second == decision::PairLabel::Plagiarized);
    CHECK(scored[1].second == decision::PairLabel::Original);
    CHECK(*scored[0].first.fingerprint == 1.0);
    CHECK(scored[0].first.semantic.has_value());
    CHECK(*scored[1].first.fingerprint == 0.0);
    CHECK(*scored[0].first.lexical > *scored[1].first.lexical);
}

TEST_CASE("score_labeled_pairs handles code pairs and mixed kinds")
{
    TempDir dir;
    dir.write("a.c", "function f(n) { var s = 0; while (s < n) { s = s + 1; } return s; }");
    dir.write("b.c", "function g(m) { var t = 0; while (t < m) { t = t + 1; } return t; }");
    dir.write("t.txt", kEssay);
    std::string code_pairs = dir.write("code_pairs.json", R"([
        {"query": "a.c", "source": "b.c", "label": "plagiarized"}
    ])");
    std::string mixed_pairs = dir.write("mixed_pairs.json", R"([
        {"query": "a.c", "source": "t.txt", "label": "original"}
    ])");

    embeddings::BuiltinProvider provider;
    auto scored = score_labeled_pairs(load_labeled_pairs(code_pairs), PipelineConfig{},
                                      rules::RuleSet{}, provider);
    REQUIRE(scored.size() == 1);
    CHECK(scored[0].first.structural.has_value());
    CHECK(*scored[0].first.structural == 1.0);
    CHECK(!scored[0].first.semantic.has_value());

    CHECK(code_of([&] {
        score_labeled_pairs(load_labeled_pairs(mixed_pairs), PipelineConfig{}, rules::RuleSet{},
                            provider);
    }) == Errc::KindMismatch);
}

TEST_CASE("score_labeled_pairs uses the index idf when provided")
{
    TempDir dir;
    dir.write("q1.txt", kEssay);
    // Shares some vocabulary with the essay so the cosine is nonzero and
    // idf-sensitive, but is not a copy.
    dir.write("s1.txt", "Sediment gathers where the river slows. The delta widens. "
                        "Lighthouses and ferries crowd the estuary traffic.");
    std::string pairs_path = dir.write("pairs.json", R"([
        {"query": "q1.txt", "source": "s1.txt", "label": "original"}
    ])");

    embeddings::BuiltinProvider provider;
    std::vector<Document> docs = {ingest(kEssay, "a.txt", 0), ingest(kUnrelated, "b.txt", 1),
                                  ingest("The river, the delta and the season again: repeated "
                                         "vocabulary shifts the document frequencies.",
                                         "c.txt", 2)};
    corpus::CorpusIndex index = corpus::build_index(docs, 5, 4, provider);

    auto with_index = score_labeled_pairs(load_labeled_pairs(pairs_path), PipelineConfig{},
                                          rules::RuleSet{}, provider, &index);
    auto without = score_labeled_pairs(load_labeled_pairs(pairs_path), PipelineConfig{},
                                       rules::RuleSet{}, provider);
    REQUIRE(with_index.size() == 1);
    REQUIRE(without.size() == 1);
    // Different idf tables weight the cosine differently.
    CHECK(*with_index[0].first.lexical != *without[0].first.lexical);
    // Fingerprints are idf-independent.
    CHECK(*with_index[0].first.fingerprint == *without[0].first.fingerprint);
}
