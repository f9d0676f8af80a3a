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

#ifndef CENAS_PARETO_HPP
#define CENAS_PARETO_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace cenas {

enum class Direction { Minimize, Maximize };

// Objective values in the internal all-minimize convention.
class ObjectiveVector {
public:
    ObjectiveVector() = default;
    explicit ObjectiveVector(std::vector<double> values) : values_(std::move(values)) {}
    ObjectiveVector(std::initializer_list<double> values) : values_(values) {}

    // Converts raw measurements to the internal convention by negating the
    // maximized objectives. Throws InvalidObjective for m < 2 or non-finite
    // values and DimensionMismatch if the two spans differ in length.
    [[nodiscard]] static auto ingest(std::span<double const> raw, std::span<Direction const> directions) -> ObjectiveVector;

    // Inverse of ingest.
    [[nodiscard]] auto to_raw(std::span<Direction const> directions) const -> std::vector<double>;

    [[nodiscard]] auto size() const noexcept -> std::size_t { return values_.size(); }
    [[nodiscard]] auto operator[](std::size_t i) const -> double { return values_[i]; }
    [[nodiscard]] auto operator[](std::size_t i) -> double& { return values_[i]; }
    [[nodiscard]] auto values() const noexcept -> std::span<double const> { return values_; }
    [[nodiscard]] auto begin() const noexcept { return values_.begin(); }
    [[nodiscard]] auto end() const noexcept { return values_.end(); }

    friend auto operator==(ObjectiveVector const&, ObjectiveVector const&) -> bool = default;
    friend auto operator<=>(ObjectiveVector const&, ObjectiveVector const&) = default;

private:
    std::vector<double> values_;
};

// Trade-off coefficients of the relaxed dominance relation. Only the
// off-diagonal entries are read; the diagonal always acts as 1.
class AlphaMatrix {
public:
    AlphaMatrix(std::size_t m, double off_diagonal);
    explicit AlphaMatrix(std::vector<std::vector<double>> rows);

    [[nodiscard]] auto size() const noexcept -> std::size_t { return rows_.size(); }
    [[nodiscard]] auto operator()(std::size_t i, std::size_t j) const -> double { return rows_[i][j]; }

private:
    std::vector<std::vector<double>> rows_;
};

struct FrontPartition {
    std::vector<std::vector<std::size_t>> fronts;

    // Front index of every population member.
    [[nodiscard]] auto ranks(std::size_t population_size) const -> std::vector<std::size_t>;
};

[[nodiscard]] auto dominates(ObjectiveVector const& a, ObjectiveVector const& b) -> bool;

// a alpha-dominates b iff h_i(a,b) <= 0 for all i and < 0 for some i, where
// h_i(a,b) = (a_i - b_i) + sum_{j != i} alpha_ij (a_j - b_j).
[[nodiscard]] auto alpha_dominates(ObjectiveVector const& a, ObjectiveVector const& b, AlphaMatrix const& alpha) -> bool;
[[nodiscard]] auto alpha_dominates(ObjectiveVector const& a, ObjectiveVector const& b, double alpha) -> bool;

// Dominance-count / dominated-set sorting; O(m N^2).
[[nodiscard]] auto fast_nondominated_sort(std::span<ObjectiveVector const> population) -> FrontPartition;

// Crowding distance of each member of one front. Members attaining the
// minimum or maximum of an objective get +inf; objectives with zero range
// contribute nothing. Tied values share the gap between the neighbouring
// distinct values, so the result does not depend on input order.
[[nodiscard]] auto crowding_distance(std::span<ObjectiveVector const> front) -> std::vector<double>;

// Majority over minority class count. Throws SingleClass when a class is empty.
[[nodiscard]] auto imbalance_rate(std::span<bool const> labels) -> double;

// Exact dominated volume for m = 2 (sweep) and m = 3 (slicing). Throws
// PointBeyondReference if a point exceeds the reference in any objective and
// UnsupportedDimension for other m.
[[nodiscard]] auto hypervolume(std::span<ObjectiveVector const> points, ObjectiveVector const& reference) -> double;

// NSGA-II environmental selection: whole fronts in rank order, the last
// partially admitted front by descending crowding distance (ties by index).
// Returns the selected indices in rank-then-crowding order.
[[nodiscard]] auto nsga2_select(std::span<ObjectiveVector const> population, std::size_t count) -> std::vector<std::size_t>;

} // namespace cenas

#endif
