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

#ifndef CENAS_TRADEOFF_HPP
#define CENAS_TRADEOFF_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cenas/pareto.hpp"

namespace cenas {

struct TradeoffReport {
    std::vector<double> values;
    double mu { 0.0 };
    double sigma { 0.0 }; // population standard deviation of values
    std::vector<std::size_t> preferred;
    bool fallback { false }; // preferred holds the argmax because none exceeded mu + 1.5 sigma
    std::size_t m_neighbors { 0 };
};

// Indices of the m_neighbors members nearest to front[i] by Euclidean
// distance after min-max normalization over the front. Copies of front[i]
// are skipped and only the first copy of any other point is considered;
// distance ties go to the lexicographically smaller vector.
[[nodiscard]] auto tradeoff_neighbors(std::size_t i, std::span<ObjectiveVector const> front, std::size_t m_neighbors)
    -> std::vector<std::size_t>;

// Largest average loss per unit average gain over the neighbors, with loss
// and gain taken on the raw (minimized) values when moving from i to j.
// Throws InvalidArgument unless front.size() > m_neighbors >= 1, and
// ZeroGain when a neighbor is no better than i in any objective.
[[nodiscard]] auto tradeoff_value(std::size_t i, std::span<ObjectiveVector const> front, std::size_t m_neighbors) -> double;

// Values for every member and the members above mu + 1.5 sigma. m_neighbors
// defaults to the objective count, capped at front.size() - 1. Throws
// FrontTooSmall below three members.
[[nodiscard]] auto select_preferred(std::span<ObjectiveVector const> front, std::optional<std::size_t> m_neighbors = std::nullopt)
    -> TradeoffReport;

} // namespace cenas

#endif
