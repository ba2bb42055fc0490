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

#include "simforge/eval.hpp"

#include <json.hpp>

#include "simforge/errors.hpp"

namespace simforge::eval {

ConfusionCounts confusion(const std::vector<bool>& predictions, const std::vector<bool>& labels)
{
    if (predictions.size() != labels.size()) {
        raise(Errc::LengthMismatch, "predictions and labels differ in length");
    }
    if (predictions.empty()) {
        raise(Errc::EmptyInput, "nothing to evaluate");
    }
    ConfusionCounts c;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (predictions[i] && labels[i]) {
            ++c.tp;
        } else if (predictions[i] && !labels[i]) {
            ++c.fp;
        } else if (!predictions[i] && labels[i]) {
            ++c.fn;
        } else {
            ++c.tn;
        }
    }
    return c;
}

Metrics metrics(const ConfusionCounts& c)
{
    Metrics m;
    std::size_t total = c.total();
    if (total == 0) {
        raise(Errc::EmptyInput, "empty confusion counts");
    }
    m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(total);
    m.precision = c.tp + c.fp == 0
        ? 1.0
        : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    m.recall =
        c.tp + c.fn == 0 ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    m.f1 = m.precision + m.recall == 0.0
        ? 0.0
        : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

std::string metrics_json(const ConfusionCounts& c)
{
    Metrics m = metrics(c);
    nlohmann::json root;
    root["accuracy"] = m.accuracy;
    root["precision"] = m.precision;
    root["recall"] = m.recall;
    root["f1"] = m.f1;
    root["counts"] = {{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
    return root.dump();
}

} // namespace simforge::eval
