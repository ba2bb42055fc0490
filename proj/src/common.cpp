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

#include <array>
#include <cstdio>

#include "simforge/document.hpp"
#include "simforge/errors.hpp"
#include "simforge/hash.hpp"

namespace simforge {

const char* errc_name(Errc code)
{
    switch (code) {
    case Errc::EmptyDocument: return "EmptyDocument";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::IoError: return "IoError";
    case Errc::FormatError: return "FormatError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::ParameterMismatch: return "ParameterMismatch";
    case Errc::WindowTooShort: return "WindowTooShort";
    case Errc::DocumentTooShort: return "DocumentTooShort";
    case Errc::UnknownLanguage: return "UnknownLanguage";
    case Errc::MalformedNesting: return "MalformedNesting";
    case Errc::KindMismatch: return "KindMismatch";
    case Errc::ProviderUnavailable: return "ProviderUnavailable";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NoChannels: return "NoChannels";
    case Errc::DegenerateLabels: return "DegenerateLabels";
    case Errc::InsufficientPairs: return "InsufficientPairs";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::EmptyInput: return "EmptyInput";
    }
    return "UnknownError";
}

const char* channel_name(Channel c)
{
    switch (c) {
    case Channel::Fingerprint: return "fingerprint";
    case Channel::Semantic: return "semantic";
    case Channel::Structural: return "structural";
    case Channel::Stylometric: return "stylometric";
    }
    return "unknown";
}

std::string to_hex64(std::uint64_t value)
{
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
    return std::string(buf, 16);
}

bool parse_hex64(std::string_view text, std::uint64_t& out)
{
    if (text.size() != 16) {
        return false;
    }
    std::uint64_t value = 0;
    for (char c : text) {
        value <<= 4;
        if (c >= '0' && c <= '9') {
            value |= static_cast<std::uint64_t>(c - '0');
        } else if (c >= 'a' && c <= 'f') {
            value |= static_cast<std::uint64_t>(c - 'a' + 10);
        } else {
            return false;
        }
    }
    out = value;
    return true;
}

} // namespace simforge
