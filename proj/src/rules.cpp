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

#include "simforge/rules.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "simforge/corpus.hpp"
#include "simforge/errors.hpp"
#include "simforge/preprocess.hpp"

namespace simforge::rules {

namespace {

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

Channel channel_from_name(const std::string& name)
{
    if (name == "fingerprint") return Channel::Fingerprint;
    if (name == "semantic") return Channel::Semantic;
    if (name == "structural") return Channel::Structural;
    if (name == "stylometric") return Channel::Stylometric;
    raise(Errc::FormatError, "unknown channel in thresholds: " + name);
}

} // namespace

RuleSet parse_rules(std::string_view payload, const std::string& base_dir, std::size_t k)
{
    nlohmann::json root = nlohmann::json::parse(payload, nullptr, false);
    if (root.is_discarded() || !root.is_object()) {
        raise(Errc::FormatError, "rules payload is not valid JSON");
    }

    RuleSet rules;
    rules.k = k;
    try {
        for (const auto& phrase : root.value("whitelist_phrases", nlohmann::json::array())) {
            if (!phrase.is_string()) {
                raise(Errc::FormatError, "whitelist phrase is not a string");
            }
            std::string normalized = preprocess::normalize_text(phrase.get<std::string>());
            std::vector<std::string> tokens;
            for (const Span& s : preprocess::tokenize(normalized)) {
                tokens.push_back(normalized.substr(s.begin, s.length()));
            }
            if (tokens.empty()) {
                continue;
            }
            rules.whitelist_phrases.push_back(std::move(normalized));
            rules.whitelist_tokens.push_back(std::move(tokens));
        }

        for (const auto& entry : root.value("boilerplate", nlohmann::json::array())) {
            if (!entry.is_string()) {
                raise(Errc::FormatError, "boilerplate entry is not a path string");
            }
            std::filesystem::path p(entry.get<std::string>());
            if (p.is_relative() && !base_dir.empty()) {
                p = std::filesystem::path(base_dir) / p;
            }
            std::string bytes = read_file(p.string());
            Document doc;
            try {
                corpus::IngestOptions options;
                options.path_hint = p.string();
                doc = corpus::ingest_document(bytes, options);
            } catch (const Error& e) {
                if (e.code() == Errc::EmptyDocument) {
                    continue; // token-less boilerplate suppresses nothing
                }
                throw;
            }
            // w=1 keeps every k-gram, making the subset test in rule (iv)
            // exact rather than sampled.
            auto prints = textsim::winnow_fingerprints(corpus::channel_tokens(doc), k, 1);
            for (const textsim::Fingerprint& print : prints.prints) {
                rules.boilerplate_hashes.insert(print.hash);
            }
            rules.boilerplate.push_back(std::move(prints));
        }

        if (root.contains("min_match_tokens")) {
            if (!root["min_match_tokens"].is_number_integer()) {
                raise(Errc::FormatError, "min_match_tokens is not an integer");
            }
            long long value = root["min_match_tokens"].get<long long>();
            if (value < 1) {
                raise(Errc::ValidationError, "min_match_tokens must be >= 1");
            }
            rules.min_match_tokens = static_cast<std::size_t>(value);
        }

        // Bind before iterating: items() on a temporary dangles.
        nlohmann::json thresholds = root.value("thresholds", nlohmann::json::object());
        for (const auto& [name, value] : thresholds.items()) {
            if (!value.is_number()) {
                raise(Errc::FormatError, "threshold is not a number");
            }
            double threshold = value.get<double>();
            if (threshold < 0.0 || threshold > 1.0) {
                raise(Errc::ValidationError, "threshold out of [0,1]: " + name);
            }
            rules.thresholds[channel_from_name(name)] = threshold;
        }
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::FormatError, std::string("malformed rules payload: ") + e.what());
    }
    return rules;
}

RuleSet load_rules(const std::string& path, std::size_t k)
{
    std::string payload = read_file(path);
    std::string base_dir = std::filesystem::path(path).parent_path().string();
    return parse_rules(payload, base_dir, k);
}

namespace {

// Token ranges of every whitelisted-phrase occurrence in the query tokens.
std::vector<Span> phrase_occurrences(const std::vector<std::string>& tokens, const RuleSet& rules)
{
    std::vector<Span> occurrences;
    for (const std::vector<std::string>& phrase : rules.whitelist_tokens) {
        if (phrase.empty() || phrase.size() > tokens.size()) {
            continue;
        }
        for (std::size_t i = 0; i + phrase.size() <= tokens.size(); ++i) {
            bool match = true;
            for (std::size_t j = 0; j < phrase.size(); ++j) {
                if (tokens[i + j] != phrase[j]) {
                    match = false;
                    break;
                }
            }
            if (match) {
                occurrences.push_back({i, i + phrase.size()});
            }
        }
    }
    return occurrences;
}

} // namespace

std::vector<MatchEvidence> suppress(const std::vector<MatchEvidence>& matches,
                                    const Document& query, const RuleSet& rules)
{
    if (matches.empty() || rules.permissive()) {
        return matches;
    }
    std::vector<std::string> tokens = corpus::channel_tokens(query);
    std::vector<Span> whitelisted = phrase_occurrences(tokens, rules);

    std::vector<MatchEvidence> survivors;
    survivors.reserve(matches.size());
    for (const MatchEvidence& m : matches) {
        if (m.query_span.length() < rules.min_match_tokens) {
            continue;
        }
        auto threshold = rules.thresholds.find(m.channel);
        if (threshold != rules.thresholds.end() && m.strength < threshold->second) {
            continue;
        }
        bool inside_whitelist = false;
        for (const Span& occurrence : whitelisted) {
            if (occurrence.contains(m.query_span)) {
                inside_whitelist = true;
                break;
            }
        }
        if (inside_whitelist) {
            continue;
        }
        if (!rules.boilerplate_hashes.empty() && m.query_span.length() >= rules.k
            && m.query_span.end <= tokens.size()) {
            bool all_boilerplate = true;
            for (std::size_t p = m.query_span.begin; p + rules.k <= m.query_span.end; ++p) {
                if (!rules.boilerplate_hashes.contains(textsim::kgram_hash(tokens, p, rules.k))) {
                    all_boilerplate = false;
                    break;
                }
            }
            if (all_boilerplate) {
                continue;
            }
        }
        survivors.push_back(m);
    }
    return survivors;
}

} // namespace simforge::rules
