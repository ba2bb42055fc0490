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

#include "simforge/stylometry.hpp"

#include <algorithm>
#include <cmath>

#include "simforge/textsim.hpp"

namespace simforge::stylometry {

StyleProfile style_profile(std::string_view text, Span window)
{
    StyleProfile profile;
    profile.window = window;
    if (window.end > text.size() || window.empty()) {
        return profile;
    }
    auto grams = textsim::char_ngrams(text.substr(window.begin, window.length()), 3);
    double total = 0.0;
    for (const auto& [gram, count] : grams) {
        total += static_cast<double>(count);
    }
    if (total <= 0.0) {
        return profile;
    }
    for (const auto& [gram, count] : grams) {
        profile.freq[gram] = static_cast<double>(count) / total;
    }
    return profile;
}

double profile_deviation(const StyleProfile& a, const StyleProfile& b)
{
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    auto ia = a.freq.begin();
    auto ib = b.freq.begin();
    while (ia != a.freq.end() && ib != b.freq.end()) {
        if (ia->first < ib->first) {
            na += ia->second * ia->second;
            ++ia;
        } else if (ib->first < ia->first) {
            nb += ib->second * ib->second;
            ++ib;
        } else {
            dot += ia->second * ib->second;
            na += ia->second * ia->second;
            nb += ib->second * ib->second;
            ++ia;
            ++ib;
        }
    }
    for (; ia != a.freq.end(); ++ia) {
        na += ia->second * ia->second;
    }
    for (; ib != b.freq.end(); ++ib) {
        nb += ib->second * ib->second;
    }
    if (na <= 0.0 || nb <= 0.0) {
        return 1.0;
    }
    return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

namespace {

// Token-index range of tokens overlapping the char range [begin, end).
bool char_range_to_tokens(const Document& doc, std::size_t begin, std::size_t end, Span& out)
{
    std::size_t first = doc.token_spans.size();
    std::size_t last = 0;
    for (std::size_t i = 0; i < doc.token_spans.size(); ++i) {
        const Span& t = doc.token_spans[i];
        if (t.end > begin && t.begin < end) {
            first = std::min(first, i);
            last = i;
        }
    }
    if (first >= doc.token_spans.size()) {
        return false;
    }
    out = {first, last + 1};
    return true;
}

} // namespace

std::vector<MatchEvidence> detect_outlier_windows(const Document& doc, const OutlierParams& params)
{
    std::vector<MatchEvidence> evidence;
    const std::string& text = doc.normalized;
    if (text.empty() || doc.token_spans.empty() || params.stride == 0) {
        return evidence;
    }

    std::vector<Span> windows;
    if (text.size() <= params.window_chars) {
        windows.push_back({0, text.size()});
    } else {
        std::size_t last_begin = 0;
        for (std::size_t b = 0; b + params.window_chars <= text.size(); b += params.stride) {
            windows.push_back({b, b + params.window_chars});
            last_begin = b;
        }
        // Tail window so the end of the document is always inspected.
        std::size_t tail_begin = text.size() - params.window_chars;
        if (tail_begin > last_begin) {
            windows.push_back({tail_begin, text.size()});
        }
    }

    StyleProfile whole = style_profile(text, {0, text.size()});
    std::vector<double> deviations;
    deviations.reserve(windows.size());
    for (const Span& w : windows) {
        deviations.push_back(profile_deviation(style_profile(text, w), whole));
    }

    double mean = 0.0;
    for (double d : deviations) {
        mean += d;
    }
    mean /= static_cast<double>(deviations.size());
    double var = 0.0;
    for (double d : deviations) {
        var += (d - mean) * (d - mean);
    }
    var /= static_cast<double>(deviations.size());
    const double threshold = mean + params.sigma_factor * std::sqrt(var);

    struct Flagged {
        Span chars;
        double strength;
    };
    std::vector<Flagged> flagged;
    for (std::size_t i = 0; i < windows.size(); ++i) {
        if (deviations[i] <= threshold) {
            continue;
        }
        double strength = std::min(1.0, deviations[i] / (threshold + 1e-12));
        if (!flagged.empty() && windows[i].begin < flagged.back().chars.end) {
            flagged.back().chars.end = windows[i].end;
            flagged.back().strength = std::max(flagged.back().strength, strength);
        } else {
            flagged.push_back({windows[i], strength});
        }
    }

    for (const Flagged& f : flagged) {
        Span tokens;
        if (!char_range_to_tokens(doc, f.chars.begin, f.chars.end, tokens)) {
            continue;
        }
        evidence.push_back({tokens, tokens, Channel::Stylometric, f.strength});
    }
    return evidence;
}

} // namespace simforge::stylometry
