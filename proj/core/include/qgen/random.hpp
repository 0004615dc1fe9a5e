// Copyright 2026 The qgen Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Seeded random streams.
 *
 * A master seed is split into independent named streams so that adding a new
 * consumer never perturbs the draws seen by existing ones. The derivation is
 * counter based:
 *
 *     key    = FNV-1a-64(stream name)
 *     seed_k = splitmix64(master ^ splitmix64(key + k))
 *
 * where k is an optional sub-stream counter (e.g. a training step index).
 */
#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qgen {

using Rng = std::mt19937_64;

[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31U);
}

[[nodiscard]] constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t master,
                                                  std::string_view stream,
                                                  std::uint64_t counter = 0) noexcept {
    return splitmix64(master ^ splitmix64(fnv1a64(stream) + counter));
}

[[nodiscard]] inline Rng make_stream(std::uint64_t master, std::string_view stream,
                                     std::uint64_t counter = 0) {
    return Rng{derive_seed(master, stream, counter)};
}

/// Uniform double in [0, 1) built from the top 53 bits; identical on every
/// standard library, unlike std::uniform_real_distribution.
[[nodiscard]] inline double uniform01(Rng &rng) {
    return static_cast<double>(rng() >> 11U) * 0x1.0p-53;
}

[[nodiscard]] inline double uniform(Rng &rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

} // namespace qgen
