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

#ifndef SIMFORGE_EVAL_HPP
#define SIMFORGE_EVAL_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace simforge::eval {

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    auto operator<=>(const ConfusionCounts&) const = default;

    std::size_t total() const { return tp + fp + tn + fn; }
};

/// Standard counting with Plagiarized (true) as the positive class.
/// Throws LengthMismatch / EmptyInput.
ConfusionCounts confusion(const std::vector<bool>& predictions, const std::vector<bool>& labels);

struct Metrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// precision/recall default to 1.0 when their denominator class is absent;
/// f1 is 0 when precision + recall is 0.
Metrics metrics(const ConfusionCounts& c);

std::string metrics_json(const ConfusionCounts& c);

} // namespace simforge::eval

#endif // SIMFORGE_EVAL_HPP
