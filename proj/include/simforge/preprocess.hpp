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

#ifndef SIMFORGE_PREPROCESS_HPP
#define SIMFORGE_PREPROCESS_HPP

#include <string>
#include <string_view>
#include <vector>

#include "simforge/document.hpp"

namespace simforge::preprocess {

/// Decode as UTF-8, replacing invalid sequences with U+FFFD.
std::string sanitize_utf8(std::string_view bytes);

/// NFC-normalize, lowercase, collapse every whitespace run to one space,
/// strip leading/trailing whitespace. Idempotent.
std::string normalize_text(std::string_view raw);

/// Maximal runs of alphanumeric characters; punctuation is discarded.
/// Spans are byte offsets into `normalized`.
std::vector<Span> tokenize(std::string_view normalized);

/// Sentence boundaries after '.', '!' or '?' followed by a space. A fixed
/// abbreviation set ("e.g.", "i.e.", "et al.", "fig.", "dr.", "vs.") does
/// not terminate a sentence, and a boundary is only taken once the current
/// sentence contains at least one alphanumeric character.
std::vector<Span> split_sentences(std::string_view normalized);

struct CitationExtraction {
    std::vector<CitationSpan> citations; // spans into the input text
    std::string masked;                  // each citation replaced by one space
};

/// Recognizes bracketed numeric citations ("[12]", "[1, 4-6]") and
/// parenthetical author-year citations ("(smith, 2020)").
CitationExtraction extract_citations(std::string_view normalized);

/// Length-preserving variant of masking: every byte inside the given spans
/// becomes a space. Used at ingest so token spans stay valid in the
/// original text.
std::string blank_spans(std::string_view text, const std::vector<CitationSpan>& citations);

} // namespace simforge::preprocess

#endif // SIMFORGE_PREPROCESS_HPP
