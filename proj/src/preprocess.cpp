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

#include "simforge/preprocess.hpp"

#include <array>
#include <cstring>

#include <unicode/uchar.h>
#include <unicode/unorm2.h>
#include <unicode/ustring.h>
#include <unicode/utf16.h>
#include <unicode/utf8.h>

#include "simforge/errors.hpp"

namespace simforge::preprocess {

namespace {

std::u16string utf8_to_utf16_substituting(std::string_view bytes)
{
    std::u16string out;
    out.resize(bytes.size() + 1);
    UErrorCode status = U_ZERO_ERROR;
    int32_t written = 0;
    u_strFromUTF8WithSub(out.data(), static_cast<int32_t>(out.size()), &written, bytes.data(),
                         static_cast<int32_t>(bytes.size()), 0xFFFD, nullptr, &status);
    if (status == U_BUFFER_OVERFLOW_ERROR) {
        // Substitutions can expand; retry with the reported length.
        status = U_ZERO_ERROR;
        out.resize(static_cast<std::size_t>(written));
        u_strFromUTF8WithSub(out.data(), written, &written, bytes.data(),
                             static_cast<int32_t>(bytes.size()), 0xFFFD, nullptr, &status);
    }
    if (U_FAILURE(status)) {
        raise(Errc::FormatError, "utf-8 decode failed");
    }
    out.resize(static_cast<std::size_t>(written));
    return out;
}

std::string utf16_to_utf8(const std::u16string& text)
{
    std::string out;
    out.resize(text.size() * 4 + 1);
    UErrorCode status = U_ZERO_ERROR;
    int32_t written = 0;
    u_strToUTF8(out.data(), static_cast<int32_t>(out.size()), &written, text.data(),
                static_cast<int32_t>(text.size()), &status);
    if (U_FAILURE(status)) {
        raise(Errc::FormatError, "utf-8 encode failed");
    }
    out.resize(static_cast<std::size_t>(written));
    return out;
}

std::u16string nfc(const std::u16string& text)
{
    UErrorCode status = U_ZERO_ERROR;
    const UNormalizer2* norm = unorm2_getNFCInstance(&status);
    if (U_FAILURE(status)) {
        raise(Errc::FormatError, "NFC normalizer unavailable");
    }
    std::u16string out;
    out.resize(text.size() + 16);
    int32_t written = unorm2_normalize(norm, text.data(), static_cast<int32_t>(text.size()),
                                       out.data(), static_cast<int32_t>(out.size()), &status);
    if (status == U_BUFFER_OVERFLOW_ERROR) {
        status = U_ZERO_ERROR;
        out.resize(static_cast<std::size_t>(written));
        written = unorm2_normalize(norm, text.data(), static_cast<int32_t>(text.size()),
                                   out.data(), static_cast<int32_t>(out.size()), &status);
    }
    if (U_FAILURE(status)) {
        raise(Errc::FormatError, "NFC normalization failed");
    }
    out.resize(static_cast<std::size_t>(written));
    return out;
}

void append_utf8(std::string& out, UChar32 cp)
{
    char buf[U8_MAX_LENGTH];
    int32_t len = 0;
    U8_APPEND_UNSAFE(buf, len, cp);
    out.append(buf, static_cast<std::size_t>(len));
}

bool is_token_char(UChar32 cp)
{
    return cp >= 0 && u_isalnum(cp);
}

// Abbreviations that do not end a sentence. Checked against the chunk of
// non-space characters ending at the candidate '.' (and, for "et al.", the
// previous chunk as well).
constexpr std::array<std::string_view, 5> kAbbrevOneWord = {"e.g.", "i.e.", "fig.", "dr.", "vs."};

bool ends_with(std::string_view text, std::string_view suffix)
{
    return text.size() >= suffix.size()
        && text.substr(text.size() - suffix.size()) == suffix;
}

bool is_abbreviation_at(std::string_view text, std::size_t dot_pos)
{
    // Chunk of non-space bytes ending at dot_pos inclusive.
    std::size_t start = dot_pos;
    while (start > 0 && text[start - 1] != ' ') {
        --start;
    }
    std::string_view chunk = text.substr(start, dot_pos - start + 1);
    for (std::string_view abbrev : kAbbrevOneWord) {
        if (chunk == abbrev) {
            return true;
        }
    }
    // Two-word abbreviation "et al.".
    if (chunk == "al." && start >= 3 && ends_with(text.substr(0, start), "et ")) {
        return true;
    }
    return false;
}

bool is_ascii_digit(char c)
{
    return c >= '0' && c <= '9';
}

bool is_word_byte(unsigned char c)
{
    return (c >= 'a' && c <= 'z') || c >= 0x80;
}

// "[" digits (optionally comma/dash-separated digit groups) "]"
bool match_bracketed(std::string_view text, std::size_t pos, std::size_t& end)
{
    std::size_t i = pos;
    if (i >= text.size() || text[i] != '[') {
        return false;
    }
    ++i;
    std::size_t digits = 0;
    while (i < text.size() && is_ascii_digit(text[i])) {
        ++i;
        ++digits;
    }
    if (digits == 0) {
        return false;
    }
    while (i < text.size() && (text[i] == ',' || text[i] == '-')) {
        ++i;
        if (i < text.size() && text[i] == ' ') {
            ++i;
        }
        digits = 0;
        while (i < text.size() && is_ascii_digit(text[i])) {
            ++i;
            ++digits;
        }
        if (digits == 0) {
            return false;
        }
    }
    if (i >= text.size() || text[i] != ']') {
        return false;
    }
    end = i + 1;
    return true;
}

// "(" word(s) "," space? 4-digit year ")"
bool match_author_year(std::string_view text, std::size_t pos, std::size_t& end)
{
    std::size_t i = pos;
    if (i >= text.size() || text[i] != '(') {
        return false;
    }
    ++i;
    auto word = [&]() -> bool {
        if (i >= text.size() || !is_word_byte(static_cast<unsigned char>(text[i]))) {
            return false;
        }
        ++i;
        while (i < text.size()
               && (is_word_byte(static_cast<unsigned char>(text[i])) || text[i] == '.')) {
            ++i;
        }
        return true;
    };
    if (!word()) {
        return false;
    }
    while (i < text.size() && text[i] == ' ') {
        std::size_t before = i;
        ++i;
        if (!word()) {
            i = before;
            break;
        }
    }
    if (i >= text.size() || text[i] != ',') {
        return false;
    }
    ++i;
    if (i < text.size() && text[i] == ' ') {
        ++i;
    }
    for (int d = 0; d < 4; ++d) {
        if (i >= text.size() || !is_ascii_digit(text[i])) {
            return false;
        }
        ++i;
    }
    if (i >= text.size() || text[i] != ')') {
        return false;
    }
    end = i + 1;
    return true;
}

} // namespace

std::string sanitize_utf8(std::string_view bytes)
{
    return utf16_to_utf8(utf8_to_utf16_substituting(bytes));
}

std::string normalize_text(std::string_view raw)
{
    std::u16string wide = nfc(utf8_to_utf16_substituting(raw));

    // Simple per-codepoint lowercase, then NFC again so casing cannot leave
    // the result denormalized.
    std::u16string lowered;
    lowered.reserve(wide.size());
    for (int32_t i = 0; i < static_cast<int32_t>(wide.size());) {
        UChar32 cp;
        U16_NEXT(wide.data(), i, static_cast<int32_t>(wide.size()), cp);
        cp = u_tolower(cp);
        char16_t buf[U16_MAX_LENGTH];
        int32_t len = 0;
        U16_APPEND_UNSAFE(buf, len, cp);
        lowered.append(buf, static_cast<std::size_t>(len));
    }
    lowered = nfc(lowered);

    std::string out;
    out.reserve(lowered.size());
    bool pending_space = false;
    for (int32_t i = 0; i < static_cast<int32_t>(lowered.size());) {
        UChar32 cp;
        U16_NEXT(lowered.data(), i, static_cast<int32_t>(lowered.size()), cp);
        if (u_isUWhiteSpace(cp)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        append_utf8(out, cp);
    }
    return out;
}

std::vector<Span> tokenize(std::string_view normalized)
{
    std::vector<Span> spans;
    const auto* data = reinterpret_cast<const std::uint8_t*>(normalized.data());
    const auto size = static_cast<int32_t>(normalized.size());
    int32_t i = 0;
    int32_t token_start = -1;
    while (i < size) {
        int32_t cp_start = i;
        UChar32 cp;
        U8_NEXT(data, i, size, cp);
        if (is_token_char(cp)) {
            if (token_start < 0) {
                token_start = cp_start;
            }
        } else if (token_start >= 0) {
            spans.push_back({static_cast<std::size_t>(token_start),
                             static_cast<std::size_t>(cp_start)});
            token_start = -1;
        }
    }
    if (token_start >= 0) {
        spans.push_back({static_cast<std::size_t>(token_start), static_cast<std::size_t>(size)});
    }
    return spans;
}

std::vector<Span> split_sentences(std::string_view normalized)
{
    std::vector<Span> spans;
    if (normalized.empty()) {
        return spans;
    }
    const auto* data = reinterpret_cast<const std::uint8_t*>(normalized.data());
    const auto size = static_cast<int32_t>(normalized.size());
    std::size_t sentence_start = 0;
    bool has_content = false;
    int32_t i = 0;
    while (i < size) {
        int32_t cp_start = i;
        UChar32 cp;
        U8_NEXT(data, i, size, cp);
        if (is_token_char(cp)) {
            has_content = true;
            continue;
        }
        bool terminator = (cp == '.' || cp == '!' || cp == '?');
        bool followed_by_space = i < size && normalized[static_cast<std::size_t>(i)] == ' ';
        if (!terminator || !followed_by_space || !has_content) {
            continue;
        }
        if (cp == '.' && is_abbreviation_at(normalized, static_cast<std::size_t>(cp_start))) {
            continue;
        }
        spans.push_back({sentence_start, static_cast<std::size_t>(i)});
        sentence_start = static_cast<std::size_t>(i) + 1; // skip the single space
        has_content = false;
    }
    if (sentence_start < normalized.size()) {
        spans.push_back({sentence_start, normalized.size()});
    }
    return spans;
}

CitationExtraction extract_citations(std::string_view normalized)
{
    CitationExtraction result;
    std::size_t i = 0;
    std::size_t copied_from = 0;
    while (i < normalized.size()) {
        std::size_t end = 0;
        if (match_bracketed(normalized, i, end)) {
            result.citations.push_back({{i, end}, CitationStyle::Bracketed});
        } else if (match_author_year(normalized, i, end)) {
            result.citations.push_back({{i, end}, CitationStyle::ParentheticalAuthorYear});
        } else {
            ++i;
            continue;
        }
        result.masked.append(normalized.substr(copied_from, i - copied_from));
        result.masked.push_back(' ');
        copied_from = end;
        i = end;
    }
    result.masked.append(normalized.substr(copied_from));
    return result;
}

std::string blank_spans(std::string_view text, const std::vector<CitationSpan>& citations)
{
    std::string out(text);
    for (const CitationSpan& c : citations) {
        for (std::size_t i = c.span.begin; i < c.span.end && i < out.size(); ++i) {
            out[i] = ' ';
        }
    }
    return out;
}

} // namespace simforge::preprocess
