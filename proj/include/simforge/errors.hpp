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

#ifndef SIMFORGE_ERRORS_HPP
#define SIMFORGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace simforge {

enum class Errc {
    EmptyDocument,
    DuplicateId,
    IoError,
    FormatError,
    ValidationError,
    ParameterMismatch,
    WindowTooShort,
    DocumentTooShort,
    UnknownLanguage,
    MalformedNesting,
    KindMismatch,
    ProviderUnavailable,
    DimensionMismatch,
    NoChannels,
    DegenerateLabels,
    InsufficientPairs,
    LengthMismatch,
    EmptyInput,
};

const char* errc_name(Errc code);

/// Single exception type for all domain errors; tests and the CLI
/// dispatch on code().
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message)
{
    throw Error(code, message);
}

} // namespace simforge

#endif // SIMFORGE_ERRORS_HPP
