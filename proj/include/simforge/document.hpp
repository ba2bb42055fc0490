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

#ifndef SIMFORGE_DOCUMENT_HPP
#define SIMFORGE_DOCUMENT_HPP

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace simforge {

/// Half-open [begin, end) range. Units depend on context: byte offsets for
/// text spans, token indices for match evidence.
struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;

    auto operator<=>(const Span&) const = default;

    std::size_t length() const { return end - begin; }
    bool empty() const { return end <= begin; }
    bool contains(const Span& other) const { return begin <= other.begin && other.end <= end; }
    bool overlaps(const Span& other) const
    {
        return begin < other.end && other.begin < end;
    }
};

enum class DocKind { Text, Code };
enum class CodeLanguage { CLike, PythonLike };

enum class CitationStyle { Bracketed, ParentheticalAuthorYear };

struct CitationSpan {
    Span span;
    CitationStyle style = CitationStyle::Bracketed;

    auto operator<=>(const CitationSpan&) const = default;
};

struct DocumentId {
    std::string value;

    auto operator<=>(const DocumentId&) const = default;
};

/// One ingested unit. `normalized` is the text every channel works on:
/// for Text it is the lowercased, whitespace-collapsed form of `raw`;
/// for Code it is the UTF-8-sanitized source unchanged.
///
/// Token and sentence spans are byte offsets into `normalized`. For Text
/// documents, spans inside extracted citations are excluded from the token
/// list so citation content never reaches the lexical channels.
struct Document {
    DocumentId id;
    DocKind kind = DocKind::Text;
    std::optional<CodeLanguage> code_language;
    std::string raw;
    std::string normalized;
    std::vector<Span> token_spans;
    std::vector<Span> sentence_spans; // Text only
    std::vector<CitationSpan> citations;
    std::string display_name;

    std::string_view token_text(std::size_t i) const
    {
        const Span& s = token_spans[i];
        return std::string_view(normalized).substr(s.begin, s.length());
    }
};

enum class Channel { Fingerprint, Semantic, Structural, Stylometric };

const char* channel_name(Channel c);

/// One localized similarity finding. Spans are token-index ranges into the
/// respective document's token list; byte ranges are recovered through
/// Document::token_spans when an excerpt is needed.
struct MatchEvidence {
    Span query_span;
    Span source_span;
    Channel channel = Channel::Fingerprint;
    double strength = 0.0;

    auto operator<=>(const MatchEvidence&) const = default;
};

} // namespace simforge

#endif // SIMFORGE_DOCUMENT_HPP
