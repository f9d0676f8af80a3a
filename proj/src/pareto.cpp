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

#include "cenas/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "cenas/error.hpp"

namespace cenas {

namespace {

void require_same_size(ObjectiveVector const& a, ObjectiveVector const& b)
{
    if (a.size() != b.size()) {
        throw Error(ErrorCode::DimensionMismatch, fmt::format("objective vectors of size {} and {}", a.size(), b.size()));
    }
}

void require_uniform(std::span<ObjectiveVector const> population)
{
    for (auto const& p : population) {
        require_same_size(p, population.front());
    }
}

} // namespace

auto ObjectiveVector::ingest(std::span<double const> raw, std::span<Direction const> directions) -> ObjectiveVector
{
    if (raw.size() != directions.size()) {
        throw Error(ErrorCode::DimensionMismatch, fmt::format("{} values for {} directions", raw.size(), directions.size()));
    }
    if (raw.size() < 2) {
        throw Error(ErrorCode::InvalidObjective, "at least two objectives are required");
    }
    std::vector<double> values(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (!std::isfinite(raw[i])) {
            throw Error(ErrorCode::InvalidObjective, fmt::format("objective {} is not finite", i));
        }
        values[i] = directions[i] == Direction::Maximize ? -raw[i] : raw[i];
    }
    return ObjectiveVector(std::move(values));
}

auto ObjectiveVector::to_raw(std::span<Direction const> directions) const -> std::vector<double>
{
    std::vector<double> raw(values_);
    for (std::size_t i = 0; i < raw.size() && i < directions.size(); ++i) {
        if (directions[i] == Direction::Maximize) {
            raw[i] = -raw[i];
        }
    }
    return raw;
}

AlphaMatrix::AlphaMatrix(std::size_t m, double off_diagonal)
    : rows_(m, std::vector<double>(m, off_diagonal))
{
    for (std::size_t i = 0; i < m; ++i) {
        rows_[i][i] = 1.0;
    }
}

AlphaMatrix::AlphaMatrix(std::vector<std::vector<double>> rows) : rows_(std::move(rows))
{
    for (auto const& row : rows_) {
        if (row.size() != rows_.size()) {
            throw Error(ErrorCode::DimensionMismatch, "alpha matrix must be square");
        }
    }
}

auto FrontPartition::ranks(std::size_t population_size) const -> std::vector<std::size_t>
{
    std::vector<std::size_t> rank(population_size, 0);
    for (std::size_t f = 0; f < fronts.size(); ++f) {
        for (auto i : fronts[f]) {
            rank[i] = f;
        }
    }
    return rank;
}

auto dominates(ObjectiveVector const& a, ObjectiveVector const& b) -> bool
{
    require_same_size(a, b);
    bool strictly_better = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) {
            return false;
        }
        strictly_better = strictly_better || a[i] < b[i];
    }
    return strictly_better;
}

auto alpha_dominates(ObjectiveVector const& a, ObjectiveVector const& b, AlphaMatrix const& alpha) -> bool
{
    require_same_size(a, b);
    if (alpha.size() != a.size()) {
        throw Error(ErrorCode::DimensionMismatch, fmt::format("alpha matrix of size {} for {} objectives", alpha.size(), a.size()));
    }
    auto const m = a.size();
    bool strictly_better = false;
    for (std::size_t i = 0; i < m; ++i) {
        double h = a[i] - b[i];
        for (std::size_t j = 0; j < m; ++j) {
            if (j != i) {
                h += alpha(i, j) * (a[j] - b[j]);
            }
        }
        if (h > 0.0) {
            return false;
        }
        strictly_better = strictly_better || h < 0.0;
    }
    return strictly_better;
}

auto alpha_dominates(ObjectiveVector const& a, ObjectiveVector const& b, double alpha) -> bool
{
    require_same_size(a, b);
    // With a scalar alpha, h_i = (1 - alpha) d_i + alpha * sum(d).
    auto const m = a.size();
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        total += a[j] - b[j];
    }
    bool strictly_better = false;
    for (std::size_t i = 0; i < m; ++i) {
        auto const d = a[i] - b[i];
        auto const h = d + alpha * (total - d);
        if (h > 0.0) {
            return false;
        }
        strictly_better = strictly_better || h < 0.0;
    }
    return strictly_better;
}

auto fast_nondominated_sort(std::span<ObjectiveVector const> population) -> FrontPartition
{
    if (population.empty()) {
        throw Error(ErrorCode::EmptyPopulation, "cannot sort an empty population");
    }
    require_uniform(population);
    auto const n = population.size();
    std::vector<std::size_t> dominated_by_count(n, 0);          // n_i
    std::vector<std::vector<std::size_t>> dominated_set(n);     // S_i
    FrontPartition partition;
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dominates(population[i], population[j])) {
                dominated_set[i].push_back(j);
                ++dominated_by_count[j];
            } else if (dominates(population[j], population[i])) {
                dominated_set[j].push_back(i);
                ++dominated_by_count[i];
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (dominated_by_count[i] == 0) {
            current.push_back(i);
        }
    }
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (auto i : current) {
            for (auto j : dominated_set[i]) {
                if (--dominated_by_count[j] == 0) {
                    next.push_back(j);
                }
            }
        }
        std::sort(next.begin(), next.end());
        partition.fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return partition;
}

auto crowding_distance(std::span<ObjectiveVector const> front) -> std::vector<double>
{
    auto const n = front.size();
    constexpr auto inf = std::numeric_limits<double>::infinity();
    std::vector<double> distance(n, 0.0);
    if (n == 0) {
        return distance;
    }
    require_uniform(front);
    if (n <= 2) {
        std::fill(distance.begin(), distance.end(), inf);
        return distance;
    }
    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < front.front().size(); ++k) {
        std::iota(order.begin(), order.end(), std::size_t { 0 });
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return front[a][k] < front[b][k]; });
        auto const lo = front[order.front()][k];
        auto const hi = front[order.back()][k];
        auto const range = hi - lo;
        if (!(range > 0.0)) {
            continue;
        }
        // Walk blocks of equal values; every member of a block gets the gap
        // between the previous and the next distinct value.
        std::size_t begin = 0;
        while (begin < n) {
            auto end = begin;
            auto const value = front[order[begin]][k];
            while (end < n && front[order[end]][k] == value) {
                ++end;
            }
            double gap = inf;
            if (begin > 0 && end < n) {
                gap = (front[order[end]][k] - front[order[begin - 1]][k]) / range;
            }
            for (auto p = begin; p < end; ++p) {
                distance[order[p]] += gap;
            }
            begin = end;
        }
    }
    return distance;
}

auto imbalance_rate(std::span<bool const> labels) -> double
{
    auto const good = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
    auto const poor = labels.size() - good;
    if (good == 0 || poor == 0) {
        throw Error(ErrorCode::SingleClass, fmt::format("{} good and {} poor labels", good, poor));
    }
    return static_cast<double>(std::max(good, poor)) / static_cast<double>(std::min(good, poor));
}

namespace {

// Area dominated by 2-D points (x, y) below (ref_x, ref_y).
auto sweep_area(std::vector<std::pair<double, double>> points, double ref_x, double ref_y) -> double
{
    std::sort(points.begin(), points.end());
    double area = 0.0;
    double best_y = ref_y;
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto const [x, y] = points[i];
        if (y < best_y) {
            // Strip from x to the next point's x is bounded by the running minimum.
            best_y = y;
        }
        auto const next_x = i + 1 < points.size() ? points[i + 1].first : ref_x;
        area += (next_x - x) * (ref_y - best_y);
    }
    return area;
}

} // namespace

auto hypervolume(std::span<ObjectiveVector const> points, ObjectiveVector const& reference) -> double
{
    auto const m = reference.size();
    if (m != 2 && m != 3) {
        throw Error(ErrorCode::UnsupportedDimension, fmt::format("hypervolume supports 2 or 3 objectives, got {}", m));
    }
    for (auto const& p : points) {
        require_same_size(p, reference);
        for (std::size_t k = 0; k < m; ++k) {
            if (p[k] > reference[k]) {
                throw Error(ErrorCode::PointBeyondReference, fmt::format("objective {} value {} exceeds reference {}", k, p[k], reference[k]));
            }
        }
    }
    if (points.empty()) {
        return 0.0;
    }
    if (m == 2) {
        std::vector<std::pair<double, double>> xy;
        xy.reserve(points.size());
        for (auto const& p : points) {
            xy.emplace_back(p[0], p[1]);
        }
        return sweep_area(std::move(xy), reference[0], reference[1]);
    }
    // Slice along the third objective: between consecutive z levels the
    // cross-section is the 2-D area of every point at or below the slab.
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t { 0 });
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return points[a][2] < points[b][2]; });
    double volume = 0.0;
    std::vector<std::pair<double, double>> active;
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto const& p = points[order[i]];
        active.emplace_back(p[0], p[1]);
        auto const z_next = i + 1 < order.size() ? points[order[i + 1]][2] : reference[2];
        auto const height = z_next - p[2];
        if (height > 0.0) {
            volume += height * sweep_area(active, reference[0], reference[1]);
        }
    }
    return volume;
}

auto nsga2_select(std::span<ObjectiveVector const> population, std::size_t count) -> std::vector<std::size_t>
{
    std::vector<std::size_t> selected;
    if (population.empty() || count == 0) {
        return selected;
    }
    auto const partition = fast_nondominated_sort(population);
    for (auto const& front : partition.fronts) {
        if (selected.size() >= count) {
            break;
        }
        std::vector<ObjectiveVector> members;
        members.reserve(front.size());
        for (auto i : front) {
            members.push_back(population[i]);
        }
        auto const distance = crowding_distance(members);
        std::vector<std::size_t> order(front.size());
        std::iota(order.begin(), order.end(), std::size_t { 0 });
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
            if (distance[a] != distance[b]) {
                return distance[a] > distance[b];
            }
            return front[a] < front[b];
        });
        for (auto o : order) {
            if (selected.size() == count) {
                break;
            }
            selected.push_back(front[o]);
        }
    }
    return selected;
}

} // namespace cenas
