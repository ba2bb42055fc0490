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

#ifndef SIMFORGE_CODESIM_HPP
#define SIMFORGE_CODESIM_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "simforge/document.hpp"

namespace simforge::codesim {

enum class TokenCategory {
    Operator,
    Operand, // reserved; lexers emit Identifier/Literal
    Keyword,
    Identifier,
    Literal,
    Comment,
    Whitespace,
    Punct,
};

/// One lexed token. `canonical` is the shared intermediate-alphabet symbol:
/// control keywords map to FUNC/LOOP/BRANCH/TYPE/RET/ELSE across both
/// language frontends, operators to shared spellings, identifiers and
/// literals keep their source text until normalize_code rewrites them.
struct CodeToken {
    TokenCategory category = TokenCategory::Punct;
    std::string canonical;
    Span span;
};

struct HalsteadCounts {
    std::size_t n1 = 0; // distinct operators
    std::size_t n2 = 0; // distinct operands
    std::size_t total_operators = 0;
    std::size_t total_operands = 0;

    auto operator<=>(const HalsteadCounts&) const = default;
};

enum class NodeLabel { File, Function, TypeDef, Block, Call, Loop, Branch };

const char* node_label_name(NodeLabel label);

/// Structure graph: containment edges form a tree rooted at node 0 (File);
/// call edges link Call nodes to same-file Function nodes. Node labels
/// carry no identifier names.
struct CodeGraph {
    std::vector<NodeLabel> labels;
    std::vector<std::pair<std::size_t, std::size_t>> containment; // parent -> child
    std::vector<std::pair<std::size_t, std::size_t>> calls;       // call node -> function node
};

struct CodeFeatureVector {
    double comment_density = 0.0;     // comment bytes / total bytes
    double avg_identifier_length = 0.0;
    double whitespace_ratio = 0.0;    // whitespace bytes / total bytes
    HalsteadCounts halstead;
};

/// Total, deterministic lexing to the shared token alphabet. Token spans
/// cover the input without overlap.
std::vector<CodeToken> lex_code(std::string_view source, CodeLanguage lang);

/// Operators = Operator + Keyword categories; operands = Identifier + Literal.
HalsteadCounts halstead_counts(std::span<const CodeToken> tokens);

/// Drop Comment/Whitespace tokens, alpha-rename identifiers to ID1, ID2, ...
/// in first-occurrence order, replace literals with LIT.
std::vector<CodeToken> normalize_code(std::span<const CodeToken> tokens);

/// Nesting from braces (CLike) or indentation (PythonLike); Function nodes
/// per function header, Call nodes per identifier followed by '(', Loop and
/// Branch nodes per canonical keyword.
CodeGraph build_code_graph(std::span<const CodeToken> tokens, CodeLanguage lang);

/// Weisfeiler-Leman label refinement (2 iterations) followed by multiset
/// Jaccard of the refined label multisets.
double graph_similarity(const CodeGraph& g1, const CodeGraph& g2);

CodeFeatureVector code_features(std::string_view source, std::span<const CodeToken> tokens);

struct CodeChannelResult {
    double structural = 0.0;
    double lexical = 0.0; // containment of winnowed canonical-token fingerprints
    CodeFeatureVector query_features;
    CodeFeatureVector source_features;
    std::vector<MatchEvidence> evidence;
};

CodeChannelResult code_channel_score(const Document& query, const Document& source,
                                     std::size_t k = 5, std::size_t w = 4);

/// Canonical token strings after normalization; the code-side token stream
/// fed to the fingerprint machinery.
std::vector<std::string> canonical_token_strings(std::string_view source, CodeLanguage lang);

} // namespace simforge::codesim

#endif // SIMFORGE_CODESIM_HPP
