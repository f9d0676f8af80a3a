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

#include "cenas/tradeoff.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "cenas/error.hpp"
#include "cenas/refpoints.hpp"

namespace cenas {

namespace {

void check_dimensions(std::span<ObjectiveVector const> front)
{
    for (auto const& x : front) {
        if (x.size() != front.front().size()) {
            throw Error(ErrorCode::DimensionMismatch, "front members differ in objective count");
        }
    }
}

auto squared_distance(ObjectiveVector const& a, ObjectiveVector const& b) -> double
{
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        d += (a[k] - b[k]) * (a[k] - b[k]);
    }
    return d;
}

} // namespace

auto tradeoff_neighbors(std::size_t i, std::span<ObjectiveVector const> front, std::size_t m_neighbors)
    -> std::vector<std::size_t>
{
    if (i >= front.size()) {
        throw Error(ErrorCode::InvalidArgument, fmt::format("index {} outside a front of {}", i, front.size()));
    }
    if (m_neighbors < 1 || front.size() <= m_neighbors) {
        throw Error(ErrorCode::InvalidArgument,
            fmt::format("need front size > m_neighbors >= 1, got {} and {}", front.size(), m_neighbors));
    }
    check_dimensions(front);
    auto const normalized = normalize(front);

    std::vector<std::size_t> candidates;
    for (std::size_t j = 0; j < front.size(); ++j) {
        if (front[j] == front[i]) {
            continue;
        }
        auto const seen = std::any_of(candidates.begin(), candidates.end(), [&](std::size_t c) { return front[c] == front[j]; });
        if (!seen) {
            candidates.push_back(j);
        }
    }
    std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
        auto const da = squared_distance(normalized[i], normalized[a]);
        auto const db = squared_distance(normalized[i], normalized[b]);
        if (da != db) {
            return da < db;
        }
        return front[a] < front[b];
    });
    if (candidates.size() > m_neighbors) {
        candidates.resize(m_neighbors);
    }
    return candidates;
}

auto tradeoff_value(std::size_t i, std::span<ObjectiveVector const> front, std::size_t m_neighbors) -> double
{
    auto const neighbors = tradeoff_neighbors(i, front, m_neighbors);
    double best = 0.0;
    for (auto const j : neighbors) {
        double loss = 0.0;
        double gain = 0.0;
        std::size_t worse = 0;
        std::size_t better = 0;
        for (std::size_t k = 0; k < front[i].size(); ++k) {
            auto const d = front[j][k] - front[i][k];
            if (d > 0.0) {
                loss += d;
                ++worse;
            } else if (d < 0.0) {
                gain -= d;
                ++better;
            }
        }
        if (better == 0) {
            throw Error(ErrorCode::ZeroGain, fmt::format("member {} gains nothing over member {}", j, i));
        }
        auto const avg_loss = worse == 0 ? 0.0 : loss / static_cast<double>(worse);
        auto const avg_gain = gain / static_cast<double>(better);
        best = std::max(best, avg_loss / avg_gain);
    }
    return best;
}

auto select_preferred(std::span<ObjectiveVector const> front, std::optional<std::size_t> m_neighbors) -> TradeoffReport
{
    if (front.size() < 3) {
        throw Error(ErrorCode::FrontTooSmall, fmt::format("need at least 3 members, got {}", front.size()));
    }
    TradeoffReport report;
    report.m_neighbors = m_neighbors.value_or(std::min(front.front().size(), front.size() - 1));
    for (std::size_t i = 0; i < front.size(); ++i) {
        report.values.push_back(tradeoff_value(i, front, report.m_neighbors));
    }
    auto const n = static_cast<double>(front.size());
    for (auto const v : report.values) {
        report.mu += v;
    }
    report.mu /= n;
    double var = 0.0;
    for (auto const v : report.values) {
        var += (v - report.mu) * (v - report.mu);
    }
    report.sigma = std::sqrt(var / n);
    auto const threshold = report.mu + 1.5 * report.sigma;
    for (std::size_t i = 0; i < front.size(); ++i) {
        if (report.values[i] > threshold) {
            report.preferred.push_back(i);
        }
    }
    if (report.preferred.empty()) {
        auto const it = std::max_element(report.values.begin(), report.values.end());
        report.preferred.push_back(static_cast<std::size_t>(it - report.values.begin()));
        report.fallback = true;
    }
    return report;
}

} // namespace cenas
