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

#include "cenas/genotype.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include <fmt/format.h>

#include "cenas/error.hpp"

namespace cenas {

auto default_operation_set() -> std::vector<std::string>
{
    return { "none", "max_pool_3x3", "avg_pool_3x3", "skip_connect",
        "sep_conv_5x5", "sep_conv_3x3", "dil_conv_3x3", "dil_conv_5x5" };
}

void SearchSpaceSpec::check() const
{
    if (nodes_per_cell < 1) {
        throw Error(ErrorCode::InvalidSpace, "nodes_per_cell must be at least 1");
    }
    if (num_cells() == 0) {
        throw Error(ErrorCode::InvalidSpace, "search space has no cells");
    }
    if (operation_set.size() < 2) {
        throw Error(ErrorCode::InvalidSpace, "operation_set needs at least 2 entries");
    }
    std::set<std::string> const distinct(operation_set.begin(), operation_set.end());
    if (distinct.size() != operation_set.size()) {
        throw Error(ErrorCode::InvalidSpace, "operation_set entries must be distinct");
    }
}

auto Genotype::cell(std::size_t position) const -> CellMatrix const&
{
    return position < normal_cells.size() ? normal_cells.at(position) : reduction_cells.at(position - normal_cells.size());
}

auto Genotype::cell(std::size_t position) -> CellMatrix&
{
    return position < normal_cells.size() ? normal_cells.at(position) : reduction_cells.at(position - normal_cells.size());
}

namespace {

auto random_cell(SearchSpaceSpec const& space, Rng& rng) -> CellMatrix
{
    auto const columns = space.columns_per_cell();
    CellMatrix cell;
    cell.inputs.resize(columns);
    cell.ops.resize(columns);
    for (std::size_t c = 0; c < columns; ++c) {
        cell.inputs[c] = static_cast<int>(rng.uniform_index(input_range(c)));
        cell.ops[c] = static_cast<int>(rng.uniform_index(space.num_operations()));
    }
    return cell;
}

void check_cell(CellMatrix const& cell, CellKind kind, std::size_t index, SearchSpaceSpec const& space, ValidityReport& report)
{
    auto const columns = space.columns_per_cell();
    if (cell.inputs.size() != columns || cell.ops.size() != columns) {
        report.violations.push_back({ kind, index, 0,
            fmt::format("cell has {} inputs and {} ops, expected {} each", cell.inputs.size(), cell.ops.size(), columns) });
        return;
    }
    for (std::size_t c = 0; c < columns; ++c) {
        auto const range = input_range(c);
        if (cell.inputs[c] < 0 || static_cast<std::size_t>(cell.inputs[c]) >= range) {
            report.violations.push_back({ kind, index, c,
                fmt::format("input index {} out of range [0,{})", cell.inputs[c], range) });
        }
        if (cell.ops[c] < 0 || static_cast<std::size_t>(cell.ops[c]) >= space.num_operations()) {
            report.violations.push_back({ kind, index, c,
                fmt::format("op index {} out of range [0,{})", cell.ops[c], space.num_operations()) });
        }
    }
}

enum class Row { Inputs, Ops };

auto mutate_row(Genotype const& g, SearchSpaceSpec const& space, Rng& rng, Row row) -> Genotype
{
    // A slot with a single legal value is skipped and another slot drawn.
    // With a valid space every slot has at least two legal values, so the
    // loop bound is only reached for degenerate inputs.
    constexpr int max_attempts = 64;
    auto child = g;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        auto& cell = child.cell(rng.uniform_index(child.num_cells()));
        auto const pair = rng.uniform_index(space.nodes_per_cell);
        auto const column = 2 * pair + rng.uniform_index(2);
        auto& slot = row == Row::Inputs ? cell.inputs[column] : cell.ops[column];
        auto const range = row == Row::Inputs ? input_range(column) : space.num_operations();
        if (range < 2) {
            continue;
        }
        slot = draw_alternative(slot, range, rng);
        return child;
    }
    throw Error(ErrorCode::NoAlternative, "no mutable slot found");
}

} // namespace

auto random_genotype(SearchSpaceSpec const& space, Rng& rng) -> Genotype
{
    Genotype g;
    g.normal_cells.reserve(space.num_normal_cells);
    g.reduction_cells.reserve(space.num_reduction_cells);
    for (std::size_t i = 0; i < space.num_normal_cells; ++i) {
        g.normal_cells.push_back(random_cell(space, rng));
    }
    for (std::size_t i = 0; i < space.num_reduction_cells; ++i) {
        g.reduction_cells.push_back(random_cell(space, rng));
    }
    return g;
}

auto validate(Genotype const& g, SearchSpaceSpec const& space) -> ValidityReport
{
    ValidityReport report;
    if (g.normal_cells.size() != space.num_normal_cells) {
        report.violations.push_back({ CellKind::Normal, 0, 0,
            fmt::format("{} normal cells, expected {}", g.normal_cells.size(), space.num_normal_cells) });
    }
    if (g.reduction_cells.size() != space.num_reduction_cells) {
        report.violations.push_back({ CellKind::Reduction, 0, 0,
            fmt::format("{} reduction cells, expected {}", g.reduction_cells.size(), space.num_reduction_cells) });
    }
    for (std::size_t i = 0; i < g.normal_cells.size(); ++i) {
        check_cell(g.normal_cells[i], CellKind::Normal, i, space, report);
    }
    for (std::size_t i = 0; i < g.reduction_cells.size(); ++i) {
        check_cell(g.reduction_cells[i], CellKind::Reduction, i, space, report);
    }
    return report;
}

auto draw_alternative(int current, std::size_t range, Rng& rng) -> int
{
    if (range < 2) {
        throw Error(ErrorCode::NoAlternative, fmt::format("slot range {} has no alternative to {}", range, current));
    }
    auto value = static_cast<int>(rng.uniform_index(range - 1));
    if (value >= current) {
        ++value;
    }
    return value;
}

auto mutate_hidden_state(Genotype const& g, SearchSpaceSpec const& space, Rng& rng) -> Genotype
{
    return mutate_row(g, space, rng, Row::Inputs);
}

auto mutate_operation(Genotype const& g, SearchSpaceSpec const& space, Rng& rng) -> Genotype
{
    return mutate_row(g, space, rng, Row::Ops);
}

auto mutate(Genotype const& g, SearchSpaceSpec const& space, Rng& rng) -> Genotype
{
    return rng.bernoulli(0.5) ? mutate_hidden_state(g, space, rng) : mutate_operation(g, space, rng);
}

auto crossover(Genotype const& a, Genotype const& b, Rng& rng) -> Genotype
{
    auto same_shape = [](std::vector<CellMatrix> const& x, std::vector<CellMatrix> const& y) {
        if (x.size() != y.size()) {
            return false;
        }
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i].inputs.size() != y[i].inputs.size() || x[i].ops.size() != y[i].ops.size()) {
                return false;
            }
        }
        return true;
    };
    if (!same_shape(a.normal_cells, b.normal_cells) || !same_shape(a.reduction_cells, b.reduction_cells)) {
        throw Error(ErrorCode::SpecMismatch, "crossover parents come from different search spaces");
    }
    auto child = a;
    for (std::size_t p = 0; p < child.num_cells(); ++p) {
        if (rng.bernoulli(0.5)) {
            child.cell(p) = b.cell(p);
        }
    }
    return child;
}

auto encode_text(Genotype const& g) -> std::string
{
    std::string out;
    auto append_row = [&out](std::vector<int> const& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) {
                out += ',';
            }
            out += std::to_string(row[i]);
        }
    };
    for (std::size_t p = 0; p < g.num_cells(); ++p) {
        if (p > 0) {
            out += ';';
        }
        append_row(g.cell(p).inputs);
        out += '|';
        append_row(g.cell(p).ops);
    }
    return out;
}

namespace {

// Recursive-descent reader over the canonical grammar:
//   genotype := cell (';' cell)*   cell := row '|' row   row := int (',' int)*
class TextReader {
public:
    explicit TextReader(std::string_view text) : text_(text) {}

    auto read_int() -> int
    {
        auto const* first = text_.data() + pos_;
        auto const* last = text_.data() + text_.size();
        int value = 0;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc {} || ptr == first || (*first == '-')) {
            throw ParseError(pos_, "expected a non-negative integer");
        }
        pos_ += static_cast<std::size_t>(ptr - first);
        return value;
    }

    auto read_row(std::size_t expected) -> std::vector<int>
    {
        std::vector<int> row;
        row.push_back(read_int());
        while (peek() == ',') {
            ++pos_;
            row.push_back(read_int());
        }
        if (row.size() != expected) {
            throw ParseError(pos_, fmt::format("row has {} entries, expected {}", row.size(), expected));
        }
        return row;
    }

    void expect(char c)
    {
        if (peek() != c) {
            throw ParseError(pos_, fmt::format("expected '{}'", c));
        }
        ++pos_;
    }

    [[nodiscard]] auto peek() const -> char { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    [[nodiscard]] auto at_end() const -> bool { return pos_ >= text_.size(); }
    [[nodiscard]] auto position() const -> std::size_t { return pos_; }

private:
    std::string_view text_;
    std::size_t pos_ { 0 };
};

} // namespace

auto decode_text(std::string_view text, SearchSpaceSpec const& space) -> Genotype
{
    if (text.empty()) {
        throw ParseError(0, "empty genotype text");
    }
    TextReader reader(text);
    std::vector<CellMatrix> cells;
    auto const columns = space.columns_per_cell();
    for (;;) {
        auto const cell_start = reader.position();
        CellMatrix cell;
        cell.inputs = reader.read_row(columns);
        reader.expect('|');
        cell.ops = reader.read_row(columns);
        for (std::size_t c = 0; c < columns; ++c) {
            if (static_cast<std::size_t>(cell.inputs[c]) >= input_range(c)) {
                throw ParseError(cell_start, fmt::format("input index {} out of range [0,{}) in column {}", cell.inputs[c], input_range(c), c));
            }
            if (static_cast<std::size_t>(cell.ops[c]) >= space.num_operations()) {
                throw ParseError(cell_start, fmt::format("op index {} out of range [0,{}) in column {}", cell.ops[c], space.num_operations(), c));
            }
        }
        cells.push_back(std::move(cell));
        if (reader.at_end()) {
            break;
        }
        reader.expect(';');
    }
    if (cells.size() != space.num_cells()) {
        throw ParseError(text.size(), fmt::format("{} cells, expected {}", cells.size(), space.num_cells()));
    }
    Genotype g;
    auto const split = static_cast<std::ptrdiff_t>(space.num_normal_cells);
    g.normal_cells.assign(cells.begin(), cells.begin() + split);
    g.reduction_cells.assign(cells.begin() + split, cells.end());
    return g;
}

auto genotype_features(Genotype const& g, SearchSpaceSpec const& space) -> std::vector<double>
{
    auto const n_ops = space.num_operations();
    std::vector<bool> is_zero(n_ops);
    std::vector<bool> is_conv(n_ops);
    for (std::size_t o = 0; o < n_ops; ++o) {
        is_zero[o] = space.operation_set[o] == "none";
        is_conv[o] = space.operation_set[o].find("conv") != std::string::npos;
    }
    std::vector<double> features;
    features.reserve(2 * (n_ops + 3));
    auto const nodes = static_cast<double>(space.nodes_per_cell);
    auto describe = [&](std::vector<CellMatrix> const& cells) {
        std::vector<double> histogram(n_ops, 0.0);
        double depth = 0.0;
        double longest = 0.0;
        double conv_depth = 0.0;
        std::size_t slots = 0;
        for (auto const& cell : cells) {
            // Longest path over non-zero edges, and the most conv edges on any path.
            std::vector<std::size_t> hops(space.nodes_per_cell + 2, 0);
            std::vector<std::size_t> convs(space.nodes_per_cell + 2, 0);
            for (std::size_t c = 0; c < cell.ops.size(); ++c) {
                auto const input = static_cast<std::size_t>(cell.inputs[c]);
                auto const op = static_cast<std::size_t>(cell.ops[c]);
                histogram[op] += 1.0;
                depth += static_cast<double>(input) / static_cast<double>(input_range(c) - 1);
                ++slots;
                if (is_zero[op]) {
                    continue;
                }
                auto const to = c / 2 + 2;
                hops[to] = std::max(hops[to], hops[input] + 1);
                convs[to] = std::max(convs[to], convs[input] + (is_conv[op] ? 1U : 0U));
            }
            longest += static_cast<double>(*std::max_element(hops.begin(), hops.end())) / nodes;
            conv_depth += static_cast<double>(*std::max_element(convs.begin(), convs.end())) / nodes;
        }
        auto const scale = slots > 0 ? 1.0 / static_cast<double>(slots) : 0.0;
        for (auto h : histogram) {
            features.push_back(h * scale);
        }
        auto const per_cell = cells.empty() ? 0.0 : 1.0 / static_cast<double>(cells.size());
        features.push_back(depth * scale);
        features.push_back(longest * per_cell);
        features.push_back(conv_depth * per_cell);
    };
    describe(g.normal_cells);
    describe(g.reduction_cells);
    return features;
}

} // namespace cenas
