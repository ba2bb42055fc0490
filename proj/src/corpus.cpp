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

#include "simforge/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "simforge/errors.hpp"
#include "simforge/hash.hpp"
#include "simforge/preprocess.hpp"

namespace simforge::corpus {

namespace {

std::string lowercase_extension(std::string_view path)
{
    std::size_t dot = path.rfind('.');
    if (dot == std::string_view::npos) {
        return "";
    }
    std::string ext(path.substr(dot));
    for (char& c : ext) {
        if (c >= 'A' && c <= 'Z') {
            c = static_cast<char>(c - 'A' + 'a');
        }
    }
    return ext;
}

std::optional<CodeLanguage> language_from_extension(std::string_view path)
{
    std::string ext = lowercase_extension(path);
    if (ext == ".c" || ext == ".h" || ext == ".cpp" || ext == ".java" || ext == ".js") {
        return CodeLanguage::CLike;
    }
    if (ext == ".py") {
        return CodeLanguage::PythonLike;
    }
    return std::nullopt;
}

// Pure features recomputed both at profiling time and on index load.
void fill_pure_features(const Document& doc, FeatureProfile& profile)
{
    std::vector<std::string> tokens = channel_tokens(doc);
    profile.term_counts.clear();
    for (const std::string& token : tokens) {
        ++profile.term_counts[token];
    }
    profile.tfidf = textsim::weight_terms(profile.term_counts, {}, 1.0);

    if (doc.kind == DocKind::Text) {
        std::string blanked = preprocess::blank_spans(doc.normalized, doc.citations);
        profile.style = stylometry::style_profile(blanked, {0, blanked.size()});
    } else {
        profile.style = stylometry::style_profile(doc.normalized, {0, doc.normalized.size()});
        CodeLanguage lang = doc.code_language.value_or(CodeLanguage::CLike);
        auto lexed = codesim::lex_code(doc.normalized, lang);
        profile.graph = codesim::build_code_graph(lexed, lang);
        profile.code_features = codesim::code_features(doc.normalized, lexed);
    }
}

} // namespace

double CorpusIndex::unknown_idf() const
{
    return std::log(1.0 + static_cast<double>(documents.size())) + 1.0;
}

Document ingest_document(std::string_view bytes, const IngestOptions& options)
{
    Document doc;
    doc.raw.assign(bytes);
    doc.id.value = to_hex64(fnv1a64(bytes)) + "-" + std::to_string(options.ordinal);
    doc.display_name = options.path_hint.empty() ? doc.id.value : options.path_hint;

    std::optional<CodeLanguage> ext_lang = language_from_extension(options.path_hint);
    if (options.kind.has_value()) {
        doc.kind = *options.kind;
    } else {
        doc.kind = ext_lang.has_value() ? DocKind::Code : DocKind::Text;
    }
    if (doc.kind == DocKind::Code) {
        doc.code_language = options.language.has_value() ? *options.language
                                                         : ext_lang.value_or(CodeLanguage::CLike);
    }

    if (doc.kind == DocKind::Text) {
        doc.normalized = preprocess::normalize_text(doc.raw);
        doc.citations = preprocess::extract_citations(doc.normalized).citations;
        std::string blanked = preprocess::blank_spans(doc.normalized, doc.citations);
        doc.token_spans = preprocess::tokenize(blanked);
        doc.sentence_spans = preprocess::split_sentences(blanked);
    } else {
        doc.normalized = preprocess::sanitize_utf8(doc.raw);
        auto lexed = codesim::lex_code(doc.normalized, *doc.code_language);
        auto canonical = codesim::normalize_code(lexed);
        doc.token_spans.reserve(canonical.size());
        for (const codesim::CodeToken& tok : canonical) {
            doc.token_spans.push_back(tok.span);
        }
    }
    if (doc.token_spans.empty()) {
        raise(Errc::EmptyDocument, "no tokens after normalization");
    }
    return doc;
}

std::vector<std::string> channel_tokens(const Document& doc)
{
    if (doc.kind == DocKind::Code) {
        return codesim::canonical_token_strings(doc.normalized,
                                                doc.code_language.value_or(CodeLanguage::CLike));
    }
    std::vector<std::string> tokens;
    tokens.reserve(doc.token_spans.size());
    for (std::size_t i = 0; i < doc.token_spans.size(); ++i) {
        tokens.emplace_back(doc.token_text(i));
    }
    return tokens;
}

FeatureProfile profile_document(const Document& doc, std::size_t k, std::size_t w,
                                embeddings::EmbeddingProvider& provider)
{
    FeatureProfile profile;
    fill_pure_features(doc, profile);
    profile.fingerprints = textsim::winnow_fingerprints(channel_tokens(doc), k, w);
    if (doc.kind == DocKind::Text) {
        profile.sentence_embeddings =
            embeddings::embed_sentences(provider, embeddings::sentence_texts(doc));
    }
    return profile;
}

CorpusIndex build_index(const std::vector<Document>& docs, std::size_t k, std::size_t w,
                        embeddings::EmbeddingProvider& provider)
{
    if (docs.empty()) {
        raise(Errc::EmptyInput, "cannot index an empty corpus");
    }
    CorpusIndex index;
    index.k = k;
    index.w = w;
    for (const Document& doc : docs) {
        if (index.documents.contains(doc.id)) {
            raise(Errc::DuplicateId, "duplicate document id " + doc.id.value);
        }
        IndexedDocument entry;
        entry.doc = doc;
        entry.profile = profile_document(doc, k, w, provider);
        index.documents.emplace(doc.id, std::move(entry));
    }

    std::vector<textsim::TermCounts> all_counts;
    all_counts.reserve(index.documents.size());
    for (const auto& [id, entry] : index.documents) {
        all_counts.push_back(entry.profile.term_counts);
    }
    auto vectors = textsim::build_tfidf(all_counts, &index.idf);
    std::size_t i = 0;
    for (auto& [id, entry] : index.documents) {
        entry.profile.tfidf = std::move(vectors[i]);
        ++i;
    }

    for (const auto& [id, entry] : index.documents) {
        for (const textsim::Fingerprint& p : entry.profile.fingerprints.prints) {
            index.inverted[p.hash].push_back({id, p.position});
        }
    }
    for (auto& [hash, postings] : index.inverted) {
        std::sort(postings.begin(), postings.end());
    }
    return index;
}

std::vector<DocumentId> query_candidates(const CorpusIndex& index, const FeatureProfile& profile,
                                         std::size_t limit)
{
    if (limit == 0) {
        raise(Errc::ValidationError, "candidate limit must be positive");
    }
    std::map<DocumentId, std::size_t> shared;
    for (std::uint64_t hash : profile.fingerprints.distinct_hashes()) {
        auto it = index.inverted.find(hash);
        if (it == index.inverted.end()) {
            continue;
        }
        const DocumentId* last = nullptr;
        for (const Posting& posting : it->second) {
            if (last == nullptr || posting.doc != *last) {
                ++shared[posting.doc];
                last = &posting.doc;
            }
        }
    }
    std::vector<std::pair<DocumentId, std::size_t>> ranked(shared.begin(), shared.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) {
            return a.second > b.second;
        }
        return a.first < b.first;
    });
    std::vector<DocumentId> out;
    for (const auto& [id, count] : ranked) {
        if (out.size() >= limit) {
            break;
        }
        out.push_back(id);
    }
    return out;
}

namespace {

nlohmann::json span_to_json(const Span& s)
{
    return nlohmann::json::array({s.begin, s.end});
}

Span span_from_json(const nlohmann::json& j)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_unsigned()
        || !j[1].is_number_unsigned()) {
        raise(Errc::FormatError, "malformed span");
    }
    return {j[0].get<std::size_t>(), j[1].get<std::size_t>()};
}

const char* kind_name(DocKind kind)
{
    return kind == DocKind::Code ? "code" : "text";
}

const char* language_name(CodeLanguage lang)
{
    return lang == CodeLanguage::PythonLike ? "pythonlike" : "clike";
}

const char* citation_style_name(CitationStyle style)
{
    return style == CitationStyle::Bracketed ? "bracketed" : "author_year";
}

} // namespace

std::string serialize_index(const CorpusIndex& index)
{
    nlohmann::json root;
    root["version"] = index.version;

    nlohmann::json docs = nlohmann::json::array();
    for (const auto& [id, entry] : index.documents) {
        nlohmann::json d;
        d["id"] = id.value;
        d["kind"] = kind_name(entry.doc.kind);
        if (entry.doc.code_language.has_value()) {
            d["language"] = language_name(*entry.doc.code_language);
        }
        d["name"] = entry.doc.display_name;
        d["normalized"] = entry.doc.normalized;
        nlohmann::json token_spans = nlohmann::json::array();
        for (const Span& s : entry.doc.token_spans) {
            token_spans.push_back(span_to_json(s));
        }
        d["token_spans"] = std::move(token_spans);
        nlohmann::json sentence_spans = nlohmann::json::array();
        for (const Span& s : entry.doc.sentence_spans) {
            sentence_spans.push_back(span_to_json(s));
        }
        d["sentence_spans"] = std::move(sentence_spans);
        nlohmann::json citations = nlohmann::json::array();
        for (const CitationSpan& c : entry.doc.citations) {
            citations.push_back(nlohmann::json::array(
                {c.span.begin, c.span.end, citation_style_name(c.style)}));
        }
        d["citations"] = std::move(citations);
        d["fingerprint"] = {{"k", entry.profile.fingerprints.k},
                            {"w", entry.profile.fingerprints.w}};
        nlohmann::json vectors = nlohmann::json::array();
        for (const embeddings::EmbeddingVector& v : entry.profile.sentence_embeddings) {
            vectors.push_back(v.values);
        }
        d["embeddings"] = std::move(vectors);
        docs.push_back(std::move(d));
    }
    root["documents"] = std::move(docs);

    std::map<std::string, nlohmann::json> inverted;
    for (const auto& [hash, postings] : index.inverted) {
        nlohmann::json list = nlohmann::json::array();
        std::vector<Posting> sorted = postings;
        std::sort(sorted.begin(), sorted.end());
        for (const Posting& p : sorted) {
            list.push_back(nlohmann::json::array({p.doc.value, p.position}));
        }
        inverted.emplace(to_hex64(hash), std::move(list));
    }
    root["inverted"] = inverted;
    root["idf"] = index.idf;

    return root.dump();
}

namespace {

CorpusIndex deserialize_checked(std::string_view payload)
{
    nlohmann::json root = nlohmann::json::parse(payload, nullptr, false);
    if (root.is_discarded() || !root.is_object()) {
        raise(Errc::FormatError, "index payload is not valid JSON");
    }
    if (!root.contains("version") || !root["version"].is_number_integer()
        || root["version"].get<int>() != CorpusIndex::kVersion) {
        raise(Errc::FormatError, "unsupported index version");
    }
    if (!root.contains("documents") || !root["documents"].is_array()
        || !root.contains("inverted") || !root["inverted"].is_object() || !root.contains("idf")
        || !root["idf"].is_object()) {
        raise(Errc::FormatError, "index payload missing required fields");
    }
    if (root["documents"].empty()) {
        raise(Errc::FormatError, "index contains no documents");
    }

    CorpusIndex index;
    for (const auto& d : root["documents"]) {
        if (!d.is_object() || !d.contains("id") || !d["id"].is_string()) {
            raise(Errc::FormatError, "malformed document record");
        }
        IndexedDocument entry;
        entry.doc.id.value = d["id"].get<std::string>();
        std::string kind = d.value("kind", "text");
        entry.doc.kind = kind == "code" ? DocKind::Code : DocKind::Text;
        if (d.contains("language")) {
            entry.doc.code_language = d["language"].get<std::string>() == "pythonlike"
                ? CodeLanguage::PythonLike
                : CodeLanguage::CLike;
        }
        entry.doc.display_name = d.value("name", entry.doc.id.value);
        if (!d.contains("normalized") || !d["normalized"].is_string()) {
            raise(Errc::FormatError, "document record missing normalized text");
        }
        entry.doc.normalized = d["normalized"].get<std::string>();
        entry.doc.raw = entry.doc.normalized; // raw bytes are not persisted
        for (const auto& s : d.value("token_spans", nlohmann::json::array())) {
            entry.doc.token_spans.push_back(span_from_json(s));
        }
        for (const auto& s : d.value("sentence_spans", nlohmann::json::array())) {
            entry.doc.sentence_spans.push_back(span_from_json(s));
        }
        for (const auto& c : d.value("citations", nlohmann::json::array())) {
            if (!c.is_array() || c.size() != 3) {
                raise(Errc::FormatError, "malformed citation record");
            }
            CitationSpan span;
            span.span = {c[0].get<std::size_t>(), c[1].get<std::size_t>()};
            span.style = c[2].get<std::string>() == "author_year"
                ? CitationStyle::ParentheticalAuthorYear
                : CitationStyle::Bracketed;
            entry.doc.citations.push_back(span);
        }
        entry.profile.fingerprints.k = d.contains("fingerprint") ? d["fingerprint"].value("k", 5u)
                                                                 : 5;
        entry.profile.fingerprints.w = d.contains("fingerprint") ? d["fingerprint"].value("w", 4u)
                                                                 : 4;
        for (const auto& row : d.value("embeddings", nlohmann::json::array())) {
            embeddings::EmbeddingVector vec;
            for (const auto& value : row) {
                vec.values.push_back(value.get<double>());
            }
            entry.profile.sentence_embeddings.push_back(std::move(vec));
        }
        if (index.documents.contains(entry.doc.id)) {
            raise(Errc::FormatError, "duplicate document id in index payload");
        }
        DocumentId id = entry.doc.id;
        index.documents.emplace(std::move(id), std::move(entry));
    }

    index.k = index.documents.begin()->second.profile.fingerprints.k;
    index.w = index.documents.begin()->second.profile.fingerprints.w;

    for (const auto& [key, list] : root["inverted"].items()) {
        std::uint64_t hash = 0;
        if (!parse_hex64(key, hash) || !list.is_array()) {
            raise(Errc::FormatError, "malformed inverted index entry");
        }
        std::vector<Posting>& postings = index.inverted[hash];
        for (const auto& p : list) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_string()
                || !p[1].is_number_unsigned()) {
                raise(Errc::FormatError, "malformed posting");
            }
            Posting posting{{p[0].get<std::string>()}, p[1].get<std::size_t>()};
            if (!index.documents.contains(posting.doc)) {
                raise(Errc::FormatError, "posting references unknown document");
            }
            postings.push_back(std::move(posting));
        }
    }

    for (const auto& [term, weight] : root["idf"].items()) {
        if (!weight.is_number()) {
            raise(Errc::FormatError, "malformed idf entry");
        }
        index.idf.emplace(term, weight.get<double>());
    }

    // Fingerprint sets are reconstructed from the inverted index; everything
    // else derivable from the normalized text is recomputed.
    for (const auto& [hash, postings] : index.inverted) {
        for (const Posting& p : postings) {
            index.documents.at(p.doc).profile.fingerprints.prints.push_back({hash, p.position});
        }
    }
    for (auto& [id, entry] : index.documents) {
        auto& prints = entry.profile.fingerprints.prints;
        std::sort(prints.begin(), prints.end(),
                  [](const textsim::Fingerprint& a, const textsim::Fingerprint& b) {
                      return a.position < b.position;
                  });
        fill_pure_features(entry.doc, entry.profile);
        entry.profile.tfidf =
            textsim::weight_terms(entry.profile.term_counts, index.idf, index.unknown_idf());
    }
    return index;
}

} // namespace

CorpusIndex deserialize_index(std::string_view payload)
{
    try {
        return deserialize_checked(payload);
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::FormatError, std::string("malformed index payload: ") + e.what());
    }
}

void save_index(const CorpusIndex& index, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        raise(Errc::IoError, "cannot open " + path + " for writing");
    }
    std::string payload = serialize_index(index);
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) {
        raise(Errc::IoError, "failed writing " + path);
    }
}

CorpusIndex load_index(const std::string& path)
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
    return deserialize_index(buffer.str());
}

} // namespace simforge::corpus
