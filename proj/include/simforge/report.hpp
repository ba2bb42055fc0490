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

#ifndef SIMFORGE_REPORT_HPP
#define SIMFORGE_REPORT_HPP

#include <string>
#include <string_view>
#include <vector>

#include "simforge/decision.hpp"
#include "simforge/document.hpp"

namespace simforge::report {

struct EvidenceRecord {
    MatchEvidence match;
    std::string excerpt; // query-side excerpt, capped at 240 chars

    auto operator<=>(const EvidenceRecord&) const = default;
};

struct SourceResult {
    std::string source_id;
    double score = 0.0; // 0..100
    decision::Verdict verdict = decision::Verdict::Original;
    decision::ChannelScores channels;
    std::vector<EvidenceRecord> evidence;

    auto operator<=>(const SourceResult&) const = default;
};

struct QueryInfo {
    std::string id;
    DocKind kind = DocKind::Text;
    std::string name;

    auto operator<=>(const QueryInfo&) const = default;
};

struct ReportConfig {
    std::size_t k = 5;
    std::size_t w = 4;
    decision::FusionWeights weights;
    decision::DecisionThresholds thresholds;
    std::string tool_version;

    auto operator<=>(const ReportConfig&) const = default;
};

/// Results sorted by score descending (ties by source id);
/// overall_score = max per-source score, 0 when there are none.
struct Report {
    QueryInfo query;
    double overall_score = 0.0;
    std::vector<SourceResult> results;
    ReportConfig config;

    auto operator<=>(const Report&) const = default;

    void finalize(); // sorts results, recomputes overall_score
};

enum class ReportFormat { Json, Text, Html };

/// Byte-deterministic rendering. Json follows the published schema with
/// sorted keys; Text is a tabular summary with per-evidence excerpt lines;
/// Html is a standalone file with highlighted evidence, no external
/// resources.
std::string render(const Report& report, ReportFormat format);

/// Inverse of render(r, Json); throws FormatError on schema or range
/// violations.
Report parse_report(std::string_view bytes);

} // namespace simforge::report

#endif // SIMFORGE_REPORT_HPP
