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

#include "simforge/decision.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "simforge/errors.hpp"

namespace simforge::decision {

std::size_t ChannelScores::present_count() const
{
    std::size_t count = 0;
    count += lexical.has_value();
    count += fingerprint.has_value();
    count += semantic.has_value();
    count += structural.has_value();
    count += stylometric.has_value();
    return count;
}

const char* verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::Original: return "original";
    case Verdict::SuspectedParaphrase: return "suspected_paraphrase";
    case Verdict::SuspectedCopy: return "suspected_copy";
    case Verdict::SuspectedCodePlagiarism: return "suspected_code_plagiarism";
    }
    return "original";
}

std::optional<Verdict> verdict_from_name(std::string_view name)
{
    if (name == "original") return Verdict::Original;
    if (name == "suspected_paraphrase") return Verdict::SuspectedParaphrase;
    if (name == "suspected_copy") return Verdict::SuspectedCopy;
    if (name == "suspected_code_plagiarism") return Verdict::SuspectedCodePlagiarism;
    return std::nullopt;
}

double aggregate(const ChannelScores& channels, const FusionWeights& weights)
{
    std::array<std::pair<const std::optional<double>*, double>, 5> slots = {{
        {&channels.lexical, weights.lexical},
        {&channels.fingerprint, weights.fingerprint},
        {&channels.semantic, weights.semantic},
        {&channels.structural, weights.structural},
        {&channels.stylometric, weights.stylometric},
    }};
    double weight_sum = 0.0;
    double weighted = 0.0;
    std::size_t present = 0;
    for (const auto& [score, weight] : slots) {
        if (score->has_value()) {
            ++present;
            weight_sum += weight;
            weighted += weight * **score;
        }
    }
    if (present == 0) {
        raise(Errc::NoChannels, "no channel scores to aggregate");
    }
    if (weight_sum <= 0.0) {
        // All active weights zero: fall back to the unweighted mean so the
        // result stays defined and monotone.
        double sum = 0.0;
        for (const auto& [score, weight] : slots) {
            if (score->has_value()) {
                sum += **score;
            }
        }
        return std::clamp(100.0 * sum / static_cast<double>(present), 0.0, 100.0);
    }
    // Clamped: accumulated rounding can push the ratio one ulp past 1.
    return std::clamp(100.0 * weighted / weight_sum, 0.0, 100.0);
}

Verdict classify(double score, const ChannelScores& channels, const DecisionThresholds& thresholds)
{
    if (score < thresholds.t_low) {
        return Verdict::Original;
    }
    double fingerprint = channels.fingerprint.value_or(0.0);
    if (channels.structural.has_value() && *channels.structural >= fingerprint) {
        return Verdict::SuspectedCodePlagiarism;
    }
    if (fingerprint >= thresholds.t_copy) {
        return Verdict::SuspectedCopy;
    }
    return Verdict::SuspectedParaphrase;
}

namespace {

constexpr int kGridSteps = 20; // weight resolution 1/20 = 0.05

FusionWeights weights_from_grid(int a, int b, int c, int d, int e)
{
    FusionWeights w;
    w.lexical = a / static_cast<double>(kGridSteps);
    w.fingerprint = b / static_cast<double>(kGridSteps);
    w.semantic = c / static_cast<double>(kGridSteps);
    w.structural = d / static_cast<double>(kGridSteps);
    w.stylometric = e / static_cast<double>(kGridSteps);
    return w;
}

} // namespace

CalibrationResult calibrate_weights(const std::vector<LabeledChannelScores>& pairs)
{
    if (pairs.size() < 2) {
        raise(Errc::InsufficientPairs, "calibration needs at least 2 labeled pairs");
    }
    std::size_t positives = 0;
    for (const auto& [channels, label] : pairs) {
        if (channels.present_count() == 0) {
            raise(Errc::NoChannels, "calibration pair has no channel scores");
        }
        positives += label == PairLabel::Plagiarized;
    }
    if (positives == 0 || positives == pairs.size()) {
        raise(Errc::DegenerateLabels, "calibration needs both labels");
    }

    CalibrationResult best;
    double best_f1 = -1.0;
    double best_margin = 0.0;
    std::vector<double> fused(pairs.size());

    // Weight-major lexicographic iteration with strict-improvement
    // replacement realizes the tie-break order: F1, then margin, then
    // lexicographically smallest weights, then smallest T_low.
    for (int a = 0; a <= kGridSteps; ++a) {
        for (int b = 0; a + b <= kGridSteps; ++b) {
            for (int c = 0; a + b + c <= kGridSteps; ++c) {
                for (int d = 0; a + b + c + d <= kGridSteps; ++d) {
                    const int e = kGridSteps - a - b - c - d;
                    const FusionWeights weights = weights_from_grid(a, b, c, d, e);

                    double positive_sum = 0.0;
                    double negative_sum = 0.0;
                    for (std::size_t i = 0; i < pairs.size(); ++i) {
                        fused[i] = aggregate(pairs[i].first, weights);
                        if (pairs[i].second == PairLabel::Plagiarized) {
                            positive_sum += fused[i];
                        } else {
                            negative_sum += fused[i];
                        }
                    }
                    const double margin = positive_sum / static_cast<double>(positives)
                        - negative_sum / static_cast<double>(pairs.size() - positives);

                    for (int t = 5; t <= 95; t += 5) {
                        std::size_t tp = 0;
                        std::size_t fp = 0;
                        std::size_t fn = 0;
                        for (std::size_t i = 0; i < pairs.size(); ++i) {
                            bool predicted = fused[i] >= static_cast<double>(t);
                            bool actual = pairs[i].second == PairLabel::Plagiarized;
                            tp += predicted && actual;
                            fp += predicted && !actual;
                            fn += !predicted && actual;
                        }
                        const double denom = static_cast<double>(2 * tp + fp + fn);
                        const double f1 =
                            denom > 0.0 ? 2.0 * static_cast<double>(tp) / denom : 0.0;

                        if (f1 > best_f1 || (f1 == best_f1 && margin > best_margin)) {
                            best_f1 = f1;
                            best_margin = margin;
                            best.weights = weights;
                            best.t_low = static_cast<double>(t);
                            best.train_f1 = f1;
                        }
                    }
                }
            }
        }
    }
    return best;
}

} // namespace simforge::decision
