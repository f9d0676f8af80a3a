// Copyright 2026 The CENAS Authors.
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

#ifndef CENAS_RANDOM_HPP
#define CENAS_RANDOM_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace cenas {

// Explicit rng-state threaded through every stochastic operation. The
// distributions are implemented here instead of using <random>'s so that a
// seed reproduces the same stream on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    auto next() -> std::uint64_t { return engine_(); }

    // Uniform integer in [0, n); n must be positive.
    auto uniform_index(std::size_t n) -> std::size_t
    {
        auto const bound = static_cast<std::uint64_t>(n);
        auto const threshold = (0 - bound) % bound;
        for (;;) {
            auto const r = engine_();
            if (r >= threshold) {
                return static_cast<std::size_t>(r % bound);
            }
        }
    }

    // Uniform real in [0, 1) with 53 random bits.
    auto uniform01() -> double { return static_cast<double>(engine_() >> 11U) * 0x1.0p-53; }

    auto bernoulli(double p) -> bool { return uniform01() < p; }

    // Independent child stream, e.g. one per ensemble member.
    auto split() -> Rng { return Rng(engine_() ^ 0x9E3779B97F4A7C15ULL); }

    template <typename T>
    void shuffle(std::span<T> values)
    {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::swap(values[i - 1], values[uniform_index(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace cenas

#endif
