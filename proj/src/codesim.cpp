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

#include "simforge/codesim.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "simforge/errors.hpp"
#include "simforge/hash.hpp"
#include "simforge/textsim.hpp"

namespace simforge::codesim {

const char* node_label_name(NodeLabel label)
{
    switch (label) {
    case NodeLabel::File: return "file";
    case NodeLabel::Function: return "function";
    case NodeLabel::TypeDef: return "typedef";
    case NodeLabel::Block: return "block";
    case NodeLabel::Call: return "call";
    case NodeLabel::Loop: return "loop";
    case NodeLabel::Branch: return "branch";
    }
    return "unknown";
}

namespace {

bool is_space_byte(unsigned char c)
{
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

bool is_digit_byte(unsigned char c)
{
    return c >= '0' && c <= '9';
}

bool is_ident_start(unsigned char c)
{
    return c == '_' || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

bool is_ident_cont(unsigned char c)
{
    return is_ident_start(c) || is_digit_byte(c);
}

const char* keyword_canonical(CodeLanguage lang, std::string_view word)
{
    if (lang == CodeLanguage::CLike) {
        if (word == "function") return "FUNC";
        if (word == "for" || word == "while" || word == "do") return "LOOP";
        if (word == "if" || word == "switch" || word == "case") return "BRANCH";
        if (word == "else") return "ELSE";
        if (word == "class" || word == "struct" || word == "enum" || word == "typedef"
            || word == "union") {
            return "TYPE";
        }
        if (word == "return") return "RET";
        return nullptr;
    }
    if (word == "def" || word == "lambda") return "FUNC";
    if (word == "for" || word == "while") return "LOOP";
    if (word == "if" || word == "elif") return "BRANCH";
    if (word == "else") return "ELSE";
    if (word == "class") return "TYPE";
    if (word == "return") return "RET";
    return nullptr;
}

const char* word_operator(CodeLanguage lang, std::string_view word)
{
    if (lang != CodeLanguage::PythonLike) {
        return nullptr;
    }
    if (word == "and") return "&&";
    if (word == "or") return "||";
    if (word == "not") return "!";
    if (word == "in") return "in";
    if (word == "is") return "is";
    return nullptr;
}

struct OpRule {
    std::string_view spelling;
    std::string_view canonical;
};

// Longest spelling first within each table.
constexpr OpRule kClikeOps[] = {
    {"<<=", "<<="}, {">>=", ">>="}, {"===", "=="}, {"!==", "!="},
    {"==", "=="},   {"!=", "!="},   {"<=", "<="},  {">=", ">="},  {"&&", "&&"}, {"||", "||"},
    {"+=", "+="},   {"-=", "-="},   {"*=", "*="},  {"/=", "/="},  {"%=", "%="}, {"&=", "&="},
    {"|=", "|="},   {"^=", "^="},   {"->", "->"},  {"<<", "<<"},  {">>", ">>"}, {"++", "++"},
    {"--", "--"},   {"**", "**"},
    {"=", "="},     {"+", "+"},     {"-", "-"},    {"*", "*"},    {"/", "/"},   {"%", "%"},
    {"<", "<"},     {">", ">"},     {"!", "!"},    {"&", "&"},    {"|", "|"},   {"^", "^"},
    {"~", "~"},     {"?", "?"},     {".", "."},
};

constexpr OpRule kPythonOps[] = {
    {"**=", "**="}, {"//=", "/="},  {"<<=", "<<="}, {">>=", ">>="},
    {"==", "=="},   {"!=", "!="},   {"<=", "<="},   {">=", ">="},  {"+=", "+="}, {"-=", "-="},
    {"*=", "*="},   {"/=", "/="},   {"%=", "%="},   {"&=", "&="},  {"|=", "|="}, {"^=", "^="},
    {"<<", "<<"},   {">>", ">>"},   {"**", "**"},   {"//", "/"},   {"->", "->"}, {":=", "="},
    {"=", "="},     {"+", "+"},     {"-", "-"},     {"*", "*"},    {"/", "/"},   {"%", "%"},
    {"<", "<"},     {">", ">"},     {"&", "&"},     {"|", "|"},    {"^", "^"},   {"~", "~"},
    {"@", "@"},     {".", "."},
};

const OpRule* match_operator(CodeLanguage lang, std::string_view rest)
{
    auto table = lang == CodeLanguage::CLike ? std::span<const OpRule>(kClikeOps)
                                             : std::span<const OpRule>(kPythonOps);
    for (const OpRule& rule : table) {
        if (rest.substr(0, rule.spelling.size()) == rule.spelling) {
            return &rule;
        }
    }
    return nullptr;
}

bool is_punct_byte(char c)
{
    return c == '(' || c == ')' || c == '[' || c == ']' || c == '{' || c == '}' || c == ','
        || c == ';' || c == ':';
}

} // namespace

std::vector<CodeToken> lex_code(std::string_view source, CodeLanguage lang)
{
    if (lang != CodeLanguage::CLike && lang != CodeLanguage::PythonLike) {
        raise(Errc::UnknownLanguage, "unsupported code language");
    }
    std::vector<CodeToken> tokens;
    const std::size_t n = source.size();
    std::size_t i = 0;
    auto push = [&](TokenCategory cat, std::size_t begin, std::size_t end, std::string canonical) {
        tokens.push_back({cat, std::move(canonical), {begin, end}});
    };
    auto line_end = [&](std::size_t from) {
        std::size_t e = from;
        while (e < n && source[e] != '\n') {
            ++e;
        }
        return e;
    };

    while (i < n) {
        const char c = source[i];
        const std::size_t start = i;

        if (is_space_byte(static_cast<unsigned char>(c))) {
            while (i < n && is_space_byte(static_cast<unsigned char>(source[i]))) {
                ++i;
            }
            push(TokenCategory::Whitespace, start, i, std::string(source.substr(start, i - start)));
            continue;
        }

        if (lang == CodeLanguage::CLike) {
            if (c == '/' && i + 1 < n && source[i + 1] == '/') {
                i = line_end(i);
                push(TokenCategory::Comment, start, i, "");
                continue;
            }
            if (c == '/' && i + 1 < n && source[i + 1] == '*') {
                std::size_t close = source.find("*/", i + 2);
                i = close == std::string_view::npos ? n : close + 2;
                push(TokenCategory::Comment, start, i, "");
                continue;
            }
            if (c == '#') {
                // Preprocessor-style directive lines are ignored as comments.
                i = line_end(i);
                push(TokenCategory::Comment, start, i, "");
                continue;
            }
        } else {
            if (c == '#') {
                i = line_end(i);
                push(TokenCategory::Comment, start, i, "");
                continue;
            }
            if ((c == '"' || c == '\'') && i + 2 < n && source[i + 1] == c && source[i + 2] == c) {
                std::string quote(3, c);
                std::size_t close = source.find(quote, i + 3);
                i = close == std::string_view::npos ? n : close + 3;
                push(TokenCategory::Literal, start, i, std::string(source.substr(start, i - start)));
                continue;
            }
        }

        if (c == '"' || c == '\'') {
            ++i;
            while (i < n) {
                if (source[i] == '\\' && i + 1 < n) {
                    i += 2;
                    continue;
                }
                if (source[i] == c) {
                    ++i;
                    break;
                }
                if (lang == CodeLanguage::CLike && source[i] == '\n') {
                    break; // unterminated on this line; stay total
                }
                ++i;
            }
            push(TokenCategory::Literal, start, i, std::string(source.substr(start, i - start)));
            continue;
        }

        if (is_digit_byte(static_cast<unsigned char>(c))) {
            while (i < n
                   && (is_ident_cont(static_cast<unsigned char>(source[i])) || source[i] == '.')) {
                ++i;
            }
            push(TokenCategory::Literal, start, i, std::string(source.substr(start, i - start)));
            continue;
        }

        if (is_ident_start(static_cast<unsigned char>(c))) {
            while (i < n && is_ident_cont(static_cast<unsigned char>(source[i]))) {
                ++i;
            }
            std::string word(source.substr(start, i - start));
            if (const char* kw = keyword_canonical(lang, word)) {
                push(TokenCategory::Keyword, start, i, kw);
            } else if (const char* op = word_operator(lang, word)) {
                push(TokenCategory::Operator, start, i, op);
            } else {
                push(TokenCategory::Identifier, start, i, std::move(word));
            }
            continue;
        }

        if (const OpRule* rule = match_operator(lang, source.substr(i))) {
            i += rule->spelling.size();
            push(TokenCategory::Operator, start, i, std::string(rule->canonical));
            continue;
        }

        if (is_punct_byte(c)) {
            ++i;
            push(TokenCategory::Punct, start, i, std::string(1, c));
            continue;
        }

        ++i;
        push(TokenCategory::Punct, start, i, std::string(1, c));
    }
    return tokens;
}

HalsteadCounts halstead_counts(std::span<const CodeToken> tokens)
{
    HalsteadCounts counts;
    std::set<std::string_view> operators;
    std::set<std::string_view> operands;
    for (const CodeToken& tok : tokens) {
        switch (tok.category) {
        case TokenCategory::Operator:
        case TokenCategory::Keyword:
            ++counts.total_operators;
            operators.insert(tok.canonical);
            break;
        case TokenCategory::Identifier:
        case TokenCategory::Literal:
            ++counts.total_operands;
            operands.insert(tok.canonical);
            break;
        default:
            break;
        }
    }
    counts.n1 = operators.size();
    counts.n2 = operands.size();
    return counts;
}

std::vector<CodeToken> normalize_code(std::span<const CodeToken> tokens)
{
    std::vector<CodeToken> out;
    out.reserve(tokens.size());
    std::map<std::string, std::string> rename;
    for (const CodeToken& tok : tokens) {
        switch (tok.category) {
        case TokenCategory::Comment:
        case TokenCategory::Whitespace:
            break;
        case TokenCategory::Identifier: {
            auto [it, inserted] = rename.try_emplace(tok.canonical);
            if (inserted) {
                it->second = "ID" + std::to_string(rename.size());
            }
            out.push_back({tok.category, it->second, tok.span});
            break;
        }
        case TokenCategory::Literal:
            out.push_back({tok.category, "LIT", tok.span});
            break;
        default:
            out.push_back(tok);
            break;
        }
    }
    return out;
}

namespace {

constexpr std::size_t kNoNode = static_cast<std::size_t>(-1);

std::size_t add_node(CodeGraph& g, NodeLabel label, std::size_t parent)
{
    g.labels.push_back(label);
    std::size_t id = g.labels.size() - 1;
    g.containment.emplace_back(parent, id);
    return id;
}

struct SigToken {
    std::size_t index = 0;      // into the raw token stream
    std::size_t indent = 0;     // PythonLike: leading columns of its line
    bool first_of_line = false; // PythonLike: first significant token on the line
};

std::vector<SigToken> significant_tokens(std::span<const CodeToken> tokens)
{
    std::vector<SigToken> sigs;
    bool at_line_start = true;
    std::size_t indent = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const CodeToken& tok = tokens[i];
        if (tok.category == TokenCategory::Whitespace) {
            std::size_t nl = tok.canonical.rfind('\n');
            if (nl != std::string::npos) {
                at_line_start = true;
                indent = tok.canonical.size() - nl - 1;
            } else if (at_line_start) {
                indent += tok.canonical.size();
            }
            continue;
        }
        if (tok.category == TokenCategory::Comment) {
            continue;
        }
        sigs.push_back({i, at_line_start ? indent : 0, at_line_start});
        at_line_start = false;
    }
    return sigs;
}

bool is_definition_keyword(const CodeToken& tok)
{
    return tok.category == TokenCategory::Keyword
        && (tok.canonical == "FUNC" || tok.canonical == "TYPE");
}

} // namespace

CodeGraph build_code_graph(std::span<const CodeToken> tokens, CodeLanguage lang)
{
    CodeGraph g;
    g.labels.push_back(NodeLabel::File);

    struct Level {
        std::size_t indent;
        std::size_t node;
    };
    std::vector<Level> stack{{0, 0}};
    std::size_t pending = kNoNode;
    bool expect_name = false;
    std::size_t name_owner = kNoNode;
    std::map<std::string, std::size_t> functions; // first definition wins
    std::vector<std::pair<std::size_t, std::string>> calls;

    std::vector<SigToken> sigs = significant_tokens(tokens);
    for (std::size_t si = 0; si < sigs.size(); ++si) {
        const CodeToken& tok = tokens[sigs[si].index];

        if (lang == CodeLanguage::PythonLike && sigs[si].first_of_line) {
            std::size_t indent = sigs[si].indent;
            if (indent > stack.back().indent) {
                std::size_t container =
                    pending != kNoNode ? pending : add_node(g, NodeLabel::Block, stack.back().node);
                stack.push_back({indent, container});
            } else {
                while (stack.size() > 1 && stack.back().indent > indent) {
                    stack.pop_back();
                }
                if (stack.back().indent != indent) {
                    raise(Errc::MalformedNesting, "inconsistent dedent");
                }
            }
            pending = kNoNode;
        }

        switch (tok.category) {
        case TokenCategory::Keyword: {
            NodeLabel label;
            bool makes_node = true;
            if (tok.canonical == "FUNC") {
                label = NodeLabel::Function;
            } else if (tok.canonical == "TYPE") {
                label = NodeLabel::TypeDef;
            } else if (tok.canonical == "LOOP") {
                label = NodeLabel::Loop;
            } else if (tok.canonical == "BRANCH" || tok.canonical == "ELSE") {
                label = NodeLabel::Branch;
            } else {
                makes_node = false;
                label = NodeLabel::Block;
            }
            if (makes_node) {
                std::size_t node = add_node(g, label, stack.back().node);
                pending = node;
                if (is_definition_keyword(tok)) {
                    expect_name = true;
                    name_owner = node;
                }
            }
            break;
        }
        case TokenCategory::Identifier:
            if (expect_name) {
                if (name_owner != kNoNode && g.labels[name_owner] == NodeLabel::Function) {
                    functions.try_emplace(tok.canonical, name_owner);
                }
                expect_name = false;
            } else if (si + 1 < sigs.size()) {
                const CodeToken& next = tokens[sigs[si + 1].index];
                bool after_definition = si > 0 && is_definition_keyword(tokens[sigs[si - 1].index]);
                if (next.category == TokenCategory::Punct && next.canonical == "("
                    && !after_definition) {
                    std::size_t node = add_node(g, NodeLabel::Call, stack.back().node);
                    calls.emplace_back(node, tok.canonical);
                }
            }
            break;
        case TokenCategory::Punct:
            if (lang == CodeLanguage::CLike) {
                if (tok.canonical == "{") {
                    std::size_t container = pending != kNoNode
                        ? pending
                        : add_node(g, NodeLabel::Block, stack.back().node);
                    stack.push_back({0, container});
                    pending = kNoNode;
                } else if (tok.canonical == "}") {
                    if (stack.size() == 1) {
                        raise(Errc::MalformedNesting, "unbalanced closing brace");
                    }
                    stack.pop_back();
                } else if (tok.canonical == ";") {
                    pending = kNoNode;
                }
            }
            break;
        default:
            break;
        }
    }
    if (lang == CodeLanguage::CLike && stack.size() != 1) {
        raise(Errc::MalformedNesting, "unbalanced opening brace");
    }

    for (const auto& [node, name] : calls) {
        auto it = functions.find(name);
        if (it != functions.end()) {
            g.calls.emplace_back(node, it->second);
        }
    }
    return g;
}

namespace {

std::map<std::string, std::size_t> refined_label_multiset(const CodeGraph& g)
{
    const std::size_t n = g.labels.size();
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = node_label_name(g.labels[i]);
    }
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& [p, c] : g.containment) {
        adj[p].push_back(c);
        adj[c].push_back(p);
    }
    for (const auto& [a, b] : g.calls) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }

    for (int iter = 0; iter < 2; ++iter) {
        std::vector<std::string> next(n);
        for (std::size_t v = 0; v < n; ++v) {
            std::vector<std::string> neighborhood;
            neighborhood.reserve(adj[v].size());
            for (std::size_t u : adj[v]) {
                neighborhood.push_back(labels[u]);
            }
            std::sort(neighborhood.begin(), neighborhood.end());
            std::uint64_t h = fnv1a64(labels[v]);
            h = fnv1a64_byte(0x1E, h);
            for (const std::string& s : neighborhood) {
                h = fnv1a64(s, h);
                h = fnv1a64_byte(0x1F, h);
            }
            next[v] = to_hex64(h);
        }
        labels = std::move(next);
    }

    std::map<std::string, std::size_t> counts;
    for (const std::string& l : labels) {
        ++counts[l];
    }
    return counts;
}

} // namespace

double graph_similarity(const CodeGraph& g1, const CodeGraph& g2)
{
    auto c1 = refined_label_multiset(g1);
    auto c2 = refined_label_multiset(g2);
    std::size_t total1 = 0;
    std::size_t total2 = 0;
    for (const auto& [label, count] : c1) {
        total1 += count;
    }
    for (const auto& [label, count] : c2) {
        total2 += count;
    }
    if (total1 + total2 == 0) {
        return 1.0;
    }
    std::size_t shared = 0;
    for (const auto& [label, count] : c1) {
        auto it = c2.find(label);
        if (it != c2.end()) {
            shared += std::min(count, it->second);
        }
    }
    return static_cast<double>(shared) / static_cast<double>(total1 + total2 - shared);
}

CodeFeatureVector code_features(std::string_view source, std::span<const CodeToken> tokens)
{
    CodeFeatureVector features;
    features.halstead = halstead_counts(tokens);
    if (source.empty()) {
        return features;
    }
    std::size_t comment_bytes = 0;
    std::size_t whitespace_bytes = 0;
    std::size_t ident_bytes = 0;
    std::size_t ident_count = 0;
    for (const CodeToken& tok : tokens) {
        switch (tok.category) {
        case TokenCategory::Comment:
            comment_bytes += tok.span.length();
            break;
        case TokenCategory::Whitespace:
            whitespace_bytes += tok.span.length();
            break;
        case TokenCategory::Identifier:
            ident_bytes += tok.canonical.size();
            ++ident_count;
            break;
        default:
            break;
        }
    }
    features.comment_density = static_cast<double>(comment_bytes) / static_cast<double>(source.size());
    features.whitespace_ratio =
        static_cast<double>(whitespace_bytes) / static_cast<double>(source.size());
    if (ident_count > 0) {
        features.avg_identifier_length =
            static_cast<double>(ident_bytes) / static_cast<double>(ident_count);
    }
    return features;
}

std::vector<std::string> canonical_token_strings(std::string_view source, CodeLanguage lang)
{
    auto tokens = lex_code(source, lang);
    auto normalized = normalize_code(tokens);
    std::vector<std::string> out;
    out.reserve(normalized.size());
    for (CodeToken& tok : normalized) {
        out.push_back(std::move(tok.canonical));
    }
    return out;
}

CodeChannelResult code_channel_score(const Document& query, const Document& source, std::size_t k,
                                     std::size_t w)
{
    if (query.kind != DocKind::Code || source.kind != DocKind::Code) {
        raise(Errc::KindMismatch, "code channels need two code documents");
    }
    CodeChannelResult result;
    const CodeLanguage qlang = query.code_language.value_or(CodeLanguage::CLike);
    const CodeLanguage slang = source.code_language.value_or(CodeLanguage::CLike);

    auto qtokens = lex_code(query.normalized, qlang);
    auto stokens = lex_code(source.normalized, slang);
    result.query_features = code_features(query.normalized, qtokens);
    result.source_features = code_features(source.normalized, stokens);

    auto qnorm = normalize_code(qtokens);
    auto snorm = normalize_code(stokens);
    std::vector<std::string> qstrings;
    qstrings.reserve(qnorm.size());
    for (const CodeToken& tok : qnorm) {
        qstrings.push_back(tok.canonical);
    }
    std::vector<std::string> sstrings;
    sstrings.reserve(snorm.size());
    for (const CodeToken& tok : snorm) {
        sstrings.push_back(tok.canonical);
    }
    auto qfp = textsim::winnow_fingerprints(qstrings, k, w);
    auto sfp = textsim::winnow_fingerprints(sstrings, k, w);
    result.lexical = textsim::containment(qfp, sfp);
    result.evidence = textsim::match_spans(qfp, sfp);

    result.structural =
        graph_similarity(build_code_graph(qtokens, qlang), build_code_graph(stokens, slang));
    return result;
}

} // namespace simforge::codesim
