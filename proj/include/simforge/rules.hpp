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

#ifndef SIMFORGE_RULES_HPP
#define SIMFORGE_RULES_HPP

#include <cstdint>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "simforge/document.hpp"
#include "simforge/textsim.hpp"

namespace simforge::rules {

struct RuleSet {
    std::vector<std::string> whitelist_phrases;            // normalized
    std::vector<std::vector<std::string>> whitelist_tokens; // tokenized phrases
    std::vector<textsim::FingerprintSet> boilerplate;       // one set per boilerplate doc, w=1
    std::unordered_set<std::uint64_t> boilerplate_hashes;
    std::size_t min_match_tokens = 1;
    std::map<Channel, double> thresholds;
    std::size_t k = 5; // k-gram size used for boilerplate checks

    bool permissive() const
    {
        return whitelist_tokens.empty() && boilerplate_hashes.empty() && min_match_tokens <= 1
            && thresholds.empty();
    }
};

/// Parse and validate a rules file:
/// {"whitelist_phrases":[...],"boilerplate":[paths],"min_match_tokens":n,
///  "thresholds":{"fingerprint":x,...}}. Phrases are normalized with the
/// preprocess rules; boilerplate docs are ingested and fingerprinted.
RuleSet load_rules(const std::string& path, std::size_t k = 5);

RuleSet parse_rules(std::string_view payload, const std::string& base_dir, std::size_t k = 5);

/// Drop evidence that (i) lies inside a whitelisted phrase occurrence,
/// (ii) spans fewer than min_match_tokens tokens, (iii) falls below its
/// channel threshold, or (iv) consists only of k-grams present in the
/// boilerplate fingerprints. Never adds or strengthens evidence; idempotent.
std::vector<MatchEvidence> suppress(const std::vector<MatchEvidence>& matches,
                                    const Document& query, const RuleSet& rules);

} // namespace simforge::rules

#endif // SIMFORGE_RULES_HPP
