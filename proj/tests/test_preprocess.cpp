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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "simforge/preprocess.hpp"

using namespace simforge;
using namespace simforge::preprocess;

namespace {

std::vector<std::string> token_strings(std::string_view text)
{
    std::vector<std::string> out;
    for (const Span& s : tokenize(text)) {
        out.emplace_back(text.substr(s.begin, s.length()));
    }
    return out;
}

std::vector<std::string> sentence_strings(std::string_view text)
{
    std::vector<std::string> out;
    for (const Span& s : split_sentences(text)) {
        out.emplace_back(text.substr(s.begin, s.length()));
    }
    return out;
}

} // namespace

TEST_CASE("sanitize passes valid utf8 through unchanged")
{
    CHECK(sanitize_utf8("plain ascii") == "plain ascii");
    CHECK(sanitize_utf8("caf\xc3\xa9 \xe2\x82\xac") == "caf\xc3\xa9 \xe2\x82\xac");
    CHECK(sanitize_utf8("") == "");
}

TEST_CASE("sanitize replaces invalid sequences with U+FFFD")
{
    // Lone continuation byte.
    CHECK(sanitize_utf8("a\x80z") == "a\xef\xbf\xbdz");
    // Truncated two-byte sequence at end of input.
    CHECK(sanitize_utf8("ab\xc3") == "ab\xef\xbf\xbd");
    // Overlong / invalid lead byte.
    std::string out = sanitize_utf8("x\xff\xfe y");
    CHECK(out.find('x') == 0);
    CHECK(out.find(" y") != std::string::npos);
    CHECK(out.find("\xef\xbf\xbd") != std::string::npos);
}

TEST_CASE("normalize lowercases and collapses whitespace")
{
    CHECK(normalize_text("The  Cat\n sat.") == "the cat sat.");
    CHECK(normalize_text("  leading and trailing\t ") == "leading and trailing");
    CHECK(normalize_text("A\tB\r\nC") == "a b c");
    CHECK(normalize_text("") == "");
    CHECK(normalize_text(" \n\t ") == "");
}

TEST_CASE("normalize applies NFC composition")
{
    // "e" + combining acute (U+0301) composes to U+00E9.
    CHECK(normalize_text("caf\x65\xcc\x81") == "caf\xc3\xa9");
    // Uppercase E with combining acute lowercases and composes the same way.
    CHECK(normalize_text("CAF\x45\xcc\x81") == "caf\xc3\xa9");
    CHECK(normalize_text("\xc3\x89") == "\xc3\xa9"); // precomposed É
}

TEST_CASE("normalize is idempotent")
{
    const std::vector<std::string> samples = {
        "The  Cat sat.",
        "CAF\x45\xcc\x81 mix\xc3\x89d",
        "  spaced\tout\nlines  ",
        "\xce\xa3\xce\xbf\xcf\x86\xcf\x8c\xcf\x82", // greek with final sigma
        "ß sharp",
    };
    for (const std::string& s : samples) {
        std::string once = normalize_text(s);
        CHECK(normalize_text(once) == once);
    }
}

TEST_CASE("normalize idempotent on fuzzed bytes")
{
    std::mt19937_64 rng(42);
    for (int i = 0; i < 200; ++i) {
        std::string bytes;
        std::size_t len = rng() % 64;
        for (std::size_t j = 0; j < len; ++j) {
            bytes.push_back(static_cast<char>(rng() % 256));
        }
        std::string once = normalize_text(sanitize_utf8(bytes));
        CHECK(normalize_text(once) == once);
    }
}

TEST_CASE("tokenize finds alnum runs with byte spans")
{
    auto spans = tokenize("the cat, sat!");
    REQUIRE(spans.size() == 3);
    CHECK(spans[0] == Span{0, 3});
    CHECK(spans[1] == Span{4, 7});
    CHECK(spans[2] == Span{9, 12});
    CHECK(token_strings("abc123 x9 42") == std::vector<std::string>{"abc123", "x9", "42"});
    CHECK(tokenize("").empty());
    CHECK(tokenize("... --- !!!").empty());
}

TEST_CASE("tokenize handles multibyte letters")
{
    // "héllo wörld": é and ö are two bytes each.
    std::string text = "h\xc3\xa9llo w\xc3\xb6rld";
    auto words = token_strings(text);
    REQUIRE(words.size() == 2);
    CHECK(words[0] == "h\xc3\xa9llo");
    CHECK(words[1] == "w\xc3\xb6rld");
}

TEST_CASE("sentence splitting on terminators")
{
    auto sentences = sentence_strings("a b. c d! e f? g h");
    REQUIRE(sentences.size() == 4);
    CHECK(sentences[0] == "a b.");
    CHECK(sentences[1] == "c d!");
    CHECK(sentences[2] == "e f?");
    CHECK(sentences[3] == "g h");
}

TEST_CASE("sentence splitting ignores abbreviations")
{
    CHECK(sentence_strings("see e.g. the appendix. done.").size() == 2);
    CHECK(sentence_strings("smith et al. showed this. done.").size() == 2);
    CHECK(sentence_strings("fig. 3 shows it. done.").size() == 2);
    CHECK(sentence_strings("i.e. this one thing. done.").size() == 2);
    CHECK(sentence_strings("dr. jones agrees. done.").size() == 2);
    CHECK(sentence_strings("a vs. b compared. done.").size() == 2);
}

TEST_CASE("sentence boundary needs alnum content")
{
    auto sentences = sentence_strings("?! actual words here.");
    REQUIRE(sentences.size() == 1);
    CHECK(sentences[0] == "?! actual words here.");
    CHECK(sentence_strings("one two three").size() == 1);
    CHECK(split_sentences("").empty());
}

TEST_CASE("sentence spans cover the text in order")
{
    std::string text = "first one. second one! third? tail";
    auto spans = split_sentences(text);
    REQUIRE(!spans.empty());
    CHECK(spans.front().begin == 0);
    CHECK(spans.back().end == text.size());
    for (std::size_t i = 1; i < spans.size(); ++i) {
        CHECK(spans[i - 1].end <= spans[i].begin);
    }
}

TEST_CASE("bracketed citations")
{
    auto extraction = extract_citations("as shown in [12] and [1, 4-6] we see");
    REQUIRE(extraction.citations.size() == 2);
    CHECK(extraction.citations[0].style == CitationStyle::Bracketed);
    std::string text = "as shown in [12] and [1, 4-6] we see";
    const Span& s0 = extraction.citations[0].span;
    CHECK(text.substr(s0.begin, s0.length()) == "[12]");
    const Span& s1 = extraction.citations[1].span;
    CHECK(text.substr(s1.begin, s1.length()) == "[1, 4-6]");
}

TEST_CASE("author year citations")
{
    std::string text = "earlier work (smith, 2020) found similar effects";
    auto extraction = extract_citations(text);
    REQUIRE(extraction.citations.size() == 1);
    CHECK(extraction.citations[0].style == CitationStyle::ParentheticalAuthorYear);
    const Span& s = extraction.citations[0].span;
    CHECK(text.substr(s.begin, s.length()) == "(smith, 2020)");
}

TEST_CASE("non citations are left alone")
{
    CHECK(extract_citations("array[i] access and f(x, y) calls").citations.empty());
    CHECK(extract_citations("not [a] citation").citations.empty());
    CHECK(extract_citations("(see 2020)").citations.empty());
    CHECK(extract_citations("(smith 2020)").citations.empty()); // missing comma
    CHECK(extract_citations("[]").citations.empty());
}

TEST_CASE("masking replaces each citation with one space")
{
    auto extraction = extract_citations("before [1] after");
    CHECK(extraction.masked == "before   after");
    auto multi = extract_citations("x [1] y (smith, 2020) z");
    CHECK(multi.masked == "x   y   z");
}

TEST_CASE("blank_spans preserves length")
{
    std::string text = "keep [12] keep";
    auto extraction = extract_citations(text);
    std::string blanked = blank_spans(text, extraction.citations);
    CHECK(blanked.size() == text.size());
    CHECK(blanked == "keep      keep");
    CHECK(blank_spans("none here", {}) == "none here");
}

TEST_CASE("citation content is excluded from tokens after blanking")
{
    std::string text = "quoted in [12] by (smith, 2020) indeed";
    auto extraction = extract_citations(text);
    std::string blanked = blank_spans(text, extraction.citations);
    auto words = token_strings(blanked);
    CHECK(words == std::vector<std::string>{"quoted", "in", "by", "indeed"});
}
