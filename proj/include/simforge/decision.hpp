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

#ifndef SIMFORGE_DECISION_HPP
#define SIMFORGE_DECISION_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "simforge/document.hpp"

namespace simforge::decision {

/// Per-channel [0,1] scores; absent channels are simply not part of a
/// comparison (structural only for code pairs, stylometric only for
/// intrinsic reports).
struct ChannelScores {
    std::optional<double> lexical;     // TF-IDF cosine
    std::optional<double> fingerprint; // winnowed containment
    std::optional<double> semantic;
    std::optional<double> structural;
    std::optional<double> stylometric;

    auto operator<=>(const ChannelScores&) const = default;

    std::size_t present_count() const;
};

/// Fusion weights; renormalized over the channels present in a given
/// comparison so active weights sum to 1.
struct FusionWeights {
    double lexical = 0.25;
    double fingerprint = 0.35;
    double semantic = 0.25;
    double structural = 0.10;
    double stylometric = 0.05;

    auto operator<=>(const FusionWeights&) const = default;
};

struct DecisionThresholds {
    double t_low = 30.0;  // fused score below this => Original
    double t_copy = 0.6;  // fingerprint at or above this => SuspectedCopy

    auto operator<=>(const DecisionThresholds&) const = default;
};

enum class Verdict { Original, SuspectedParaphrase, SuspectedCopy, SuspectedCodePlagiarism };

const char* verdict_name(Verdict v);
std::optional<Verdict> verdict_from_name(std::string_view name);

/// 100 * sum(renormalized weight_c * score_c) over present channels.
/// Throws NoChannels if nothing is present.
double aggregate(const ChannelScores& channels, const FusionWeights& weights);

Verdict classify(double score, const ChannelScores& channels,
                 const DecisionThresholds& thresholds = {});

enum class PairLabel { Plagiarized, Original };

using LabeledChannelScores = std::pair<ChannelScores, PairLabel>;

struct CalibrationResult {
    FusionWeights weights;
    double t_low = 30.0;
    double train_f1 = 0.0;
};

/// Exhaustive grid search over the 5-channel weight simplex (step 0.05) and
/// T_low in {5,10,...,95}, maximizing training F1 with Plagiarized as the
/// positive class. Ties break by higher margin between class score means,
/// then lexicographically smallest weight vector, then smallest T_low.
/// Fully deterministic.
CalibrationResult calibrate_weights(const std::vector<LabeledChannelScores>& pairs);

} // namespace simforge::decision

#endif // SIMFORGE_DECISION_HPP
