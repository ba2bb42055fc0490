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

#ifndef SIMFORGE_HASH_HPP
#define SIMFORGE_HASH_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace simforge {

inline constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x00000100000001b3ULL;

/// 64-bit FNV-1a. Deterministic across platforms; every fingerprint and
/// graph label in the engine goes through this.
constexpr std::uint64_t fnv1a64(std::string_view data, std::uint64_t state = kFnvOffsetBasis)
{
    for (unsigned char c : data) {
        state ^= c;
        state *= kFnvPrime;
    }
    return state;
}

constexpr std::uint64_t fnv1a64_byte(unsigned char c, std::uint64_t state)
{
    state ^= c;
    state *= kFnvPrime;
    return state;
}

/// splitmix64 finalizer; used as the second, independent hash where two
/// uncorrelated values are needed (feature-hashing sign bits).
constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::string to_hex64(std::uint64_t value);
bool parse_hex64(std::string_view text, std::uint64_t& out);

} // namespace simforge

#endif // SIMFORGE_HASH_HPP
