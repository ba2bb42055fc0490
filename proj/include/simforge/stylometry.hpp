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

#ifndef SIMFORGE_STYLOMETRY_HPP
#define SIMFORGE_STYLOMETRY_HPP

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "simforge/document.hpp"

namespace simforge::stylometry {

/// Relative char-3-gram frequencies over one window of normalized text.
struct StyleProfile {
    std::map<std::string, double> freq; // sums to 1 for a nonempty window
    Span window;

    bool empty() const { return freq.empty(); }
};

StyleProfile style_profile(std::string_view text, Span window);

/// 1 - cosine similarity of the two frequency vectors.
double profile_deviation(const StyleProfile& a, const StyleProfile& b);

struct OutlierParams {
    std::size_t window_chars = 400;
    std::size_t stride = 200;
    double sigma_factor = 2.0;
};

/// Intrinsic detection: slide fixed windows over the document, measure each
/// window's deviation from the whole-document profile and flag windows
/// whose deviation exceeds mean + sigma_factor * stddev. Overlapping
/// flagged windows are merged; spans are reported as token ranges.
std::vector<MatchEvidence> detect_outlier_windows(const Document& doc,
                                                  const OutlierParams& params = {});

} // namespace simforge::stylometry

#endif // SIMFORGE_STYLOMETRY_HPP
