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

#ifndef CENAS_GENOTYPE_HPP
#define CENAS_GENOTYPE_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cenas/random.hpp"

namespace cenas {

// Default operation set for the cell search space.
[[nodiscard]] auto default_operation_set() -> std::vector<std::string>;

// Macro template of the searched network. Cell contents are searched; the
// skip wiring between cells (Skip1 without pooling, Skip2 with average
// pooling across reduction cells) is fixed metadata of the template.
struct SearchSpaceSpec {
    std::size_t num_normal_cells { 4 };
    std::size_t num_reduction_cells { 2 };
    std::size_t nodes_per_cell { 5 };
    std::vector<std::string> operation_set { default_operation_set() };
    bool skip_patterns_enabled { true };

    // Throws Error(InvalidSpace) when an invariant does not hold.
    void check() const;

    [[nodiscard]] auto num_cells() const noexcept -> std::size_t { return num_normal_cells + num_reduction_cells; }
    [[nodiscard]] auto columns_per_cell() const noexcept -> std::size_t { return 2 * nodes_per_cell; }
    [[nodiscard]] auto num_operations() const noexcept -> std::size_t { return operation_set.size(); }

    friend auto operator==(SearchSpaceSpec const&, SearchSpaceSpec const&) -> bool = default;
};

// Number of legal input indices for a column: the node fed by column c is
// c/2 + 2, and it may read any source node or earlier computation node.
[[nodiscard]] constexpr auto input_range(std::size_t column) noexcept -> std::size_t { return column / 2 + 2; }

// 2 x R encoding of one cell. Column pair k describes computation node k+2:
// inputs[2k], inputs[2k+1] are the two predecessors, ops[2k], ops[2k+1] the
// operations applied to them before the sum.
struct CellMatrix {
    std::vector<int> inputs;
    std::vector<int> ops;

    friend auto operator==(CellMatrix const&, CellMatrix const&) -> bool = default;
};

enum class CellKind { Normal, Reduction };

struct Genotype {
    std::vector<CellMatrix> normal_cells;
    std::vector<CellMatrix> reduction_cells;

    // Cell positions enumerate normal cells first, then reduction cells.
    [[nodiscard]] auto num_cells() const noexcept -> std::size_t { return normal_cells.size() + reduction_cells.size(); }
    [[nodiscard]] auto cell(std::size_t position) const -> CellMatrix const&;
    [[nodiscard]] auto cell(std::size_t position) -> CellMatrix&;

    friend auto operator==(Genotype const&, Genotype const&) -> bool = default;
};

struct Violation {
    CellKind kind;
    std::size_t cell_index;
    std::size_t column; // meaningless for shape violations
    std::string message;
};

struct ValidityReport {
    std::vector<Violation> violations;

    [[nodiscard]] auto ok() const noexcept -> bool { return violations.empty(); }
};

[[nodiscard]] auto random_genotype(SearchSpaceSpec const& space, Rng& rng) -> Genotype;

[[nodiscard]] auto validate(Genotype const& g, SearchSpaceSpec const& space) -> ValidityReport;

// Uniformly draws a legal value different from `current` out of [0, range).
// Throws Error(NoAlternative) when range < 2.
[[nodiscard]] auto draw_alternative(int current, std::size_t range, Rng& rng) -> int;

[[nodiscard]] auto mutate_hidden_state(Genotype const& g, SearchSpaceSpec const& space, Rng& rng) -> Genotype;
[[nodiscard]] auto mutate_operation(Genotype const& g, SearchSpaceSpec const& space, Rng& rng) -> Genotype;

enum class MutationKind { HiddenState, Operation };

// Applies exactly one of the two mutation kinds, each with probability 1/2.
[[nodiscard]] auto mutate(Genotype const& g, SearchSpaceSpec const& space, Rng& rng) -> Genotype;

// Whole-cell uniform exchange. Throws Error(SpecMismatch) for parents of
// different shapes.
[[nodiscard]] auto crossover(Genotype const& a, Genotype const& b, Rng& rng) -> Genotype;

// Canonical text: cells separated by ';' (normal cells first), the two rows
// of a cell by '|', entries by ','. Example for one single-node cell:
// "0,1|3,5".
[[nodiscard]] auto encode_text(Genotype const& g) -> std::string;
[[nodiscard]] auto decode_text(std::string_view text, SearchSpaceSpec const& space) -> Genotype;

// Fixed-length numeric description of a genotype used as classifier input:
// per cell kind, the operation frequencies, the mean normalized input depth,
// the mean longest path over non-"none" edges and the mean longest chain of
// convolutions, both divided by the node count.
[[nodiscard]] auto genotype_features(Genotype const& g, SearchSpaceSpec const& space) -> std::vector<double>;

} // namespace cenas

#endif
