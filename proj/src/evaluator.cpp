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

#include "cenas/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "cenas/csv.hpp"
#include "cenas/error.hpp"
#include "cenas/json_io.hpp"

namespace cenas {

auto ProxySupernet::weight(WeightKey const& key) const -> double
{
    auto const it = edge_weights.find(key);
    return it == edge_weights.end() ? 0.0 : it->second;
}

namespace {

template <typename Visit>
void for_each_connection(Genotype const& g, Visit&& visit)
{
    for (std::size_t position = 0; position < g.num_cells(); ++position) {
        auto const& cell = g.cell(position);
        for (std::size_t column = 0; column < cell.inputs.size(); ++column) {
            visit(ConnectionKey { position, column, static_cast<std::size_t>(cell.inputs[column]) },
                static_cast<std::size_t>(cell.ops[column]));
        }
    }
}

auto total_connections(std::span<Genotype const> archive) -> std::size_t
{
    std::size_t total = 0;
    for (auto const& g : archive) {
        for (std::size_t position = 0; position < g.num_cells(); ++position) {
            total += g.cell(position).inputs.size();
        }
    }
    return total;
}

} // namespace

auto connection_probability(std::span<Genotype const> good_archive, ConnectionKey const& key) -> double
{
    if (good_archive.empty()) {
        throw Error(ErrorCode::EmptyArchive, "connection probability of an empty archive");
    }
    std::size_t hits = 0;
    for (auto const& g : good_archive) {
        if (key.position < g.num_cells()) {
            auto const& cell = g.cell(key.position);
            if (key.column < cell.inputs.size() && static_cast<std::size_t>(cell.inputs[key.column]) == key.input) {
                ++hits;
            }
        }
    }
    return static_cast<double>(hits) / static_cast<double>(total_connections(good_archive));
}

auto connection_probabilities(std::span<Genotype const> good_archive) -> std::map<ConnectionKey, double>
{
    if (good_archive.empty()) {
        throw Error(ErrorCode::EmptyArchive, "connection probability of an empty archive");
    }
    std::map<ConnectionKey, std::size_t> counts;
    for (auto const& g : good_archive) {
        for_each_connection(g, [&](ConnectionKey const& key, std::size_t) { ++counts[key]; });
    }
    auto const total = static_cast<double>(total_connections(good_archive));
    std::map<ConnectionKey, double> out;
    for (auto const& [key, count] : counts) {
        out.emplace(key, static_cast<double>(count) / total);
    }
    return out;
}

auto supernet_adapt(ProxySupernet& supernet, std::span<Individual const> archive, AdaptSettings const& settings, Rng& rng) -> AdaptReport
{
    std::vector<Genotype> good;
    for (auto const& ind : archive) {
        if (ind.label.value_or(false)) {
            good.push_back(ind.genotype);
        }
    }
    if (good.empty()) {
        throw Error(ErrorCode::NoGoodSolutions, fmt::format("none of {} archive members is labeled good", archive.size()));
    }
    AdaptReport report;
    if (settings.epochs == 0 || settings.steps_per_epoch == 0) {
        supernet.epoch_counter += settings.epochs;
        return report;
    }

    // The good archive does not change during adaption, so neither do the
    // probabilities or their argmax.
    auto const probabilities = connection_probabilities(good);
    auto best = probabilities.begin();
    for (auto it = probabilities.begin(); it != probabilities.end(); ++it) {
        if (it->second > best->second) {
            best = it;
        }
    }
    auto const w_max = best->first;

    std::map<std::size_t, std::size_t> op_counts;
    for (auto const& g : good) {
        auto const& cell = g.cell(w_max.position);
        if (static_cast<std::size_t>(cell.inputs[w_max.column]) == w_max.input) {
            ++op_counts[static_cast<std::size_t>(cell.ops[w_max.column])];
        }
    }
    auto modal_op = op_counts.begin()->first;
    std::size_t modal_count = 0;
    for (auto const& [op, count] : op_counts) {
        if (count > modal_count) {
            modal_op = op;
            modal_count = count;
        }
    }

    report.commits.reserve(settings.epochs * settings.steps_per_epoch);
    for (std::size_t epoch = 0; epoch < settings.epochs; ++epoch) {
        for (std::size_t step = 0; step < settings.steps_per_epoch; ++step) {
            auto const& subnet = good[rng.uniform_index(good.size())];
            auto const& cell = subnet.cell(w_max.position);
            auto const op = static_cast<std::size_t>(cell.inputs[w_max.column]) == w_max.input
                ? static_cast<std::size_t>(cell.ops[w_max.column])
                : modal_op;
            WeightKey const key { w_max, op };
            auto& w = supernet.edge_weights[key];
            w += settings.learning_rate * (1.0 - w);
            report.commits.push_back(key);
            ++supernet.step_counter;
        }
    }
    supernet.epoch_counter += settings.epochs;
    return report;
}

namespace {

struct OpProfile {
    double quality;
    double cost;
    double latency;
};

auto op_profile(std::string const& name, std::size_t index, std::size_t count) -> OpProfile
{
    if (name == "none") {
        return { 0.0, 0.0, 0.0 };
    }
    if (name == "max_pool_3x3") {
        return { 0.30, 0.05, 0.10 };
    }
    if (name == "avg_pool_3x3") {
        return { 0.22, 0.08, 0.10 };
    }
    if (name == "skip_connect") {
        return { 0.20, 0.0, 0.0 };
    }
    if (name == "sep_conv_5x5") {
        return { 1.0, 1.0, 0.9 };
    }
    if (name == "sep_conv_3x3") {
        return { 0.8, 0.55, 0.6 };
    }
    if (name == "dil_conv_3x3") {
        return { 0.5, 0.6, 0.7 };
    }
    if (name == "dil_conv_5x5") {
        return { 0.7, 1.0, 1.0 };
    }
    auto const t = count > 1 ? static_cast<double>(index) / static_cast<double>(count - 1) : 0.0;
    return { std::sqrt(t), t, t };
}

constexpr double reduction_weight = 1.5;
constexpr double path_share = 0.7;
constexpr double steepness = 3.0;

} // namespace

SyntheticEvaluator::SyntheticEvaluator(SyntheticProblem problem)
    : problem_(std::move(problem))
{
    problem_.space.check();
    if (problem_.objectives != 2 && problem_.objectives != 3) {
        throw Error(ErrorCode::InvalidArgument, fmt::format("synthetic problem supports 2 or 3 objectives, got {}", problem_.objectives));
    }
    directions_.assign(problem_.objectives, Direction::Minimize);
    auto const n = problem_.space.num_operations();
    for (std::size_t o = 0; o < n; ++o) {
        auto const p = op_profile(problem_.space.operation_set[o], o, n);
        quality_.push_back(p.quality);
        cost_.push_back(p.cost);
    }
}

auto SyntheticEvaluator::evaluate(Genotype const& g) const -> ObjectiveVector
{
    auto const& space = problem_.space;
    auto const report = validate(g, space);
    if (!report.ok()) {
        throw Error(ErrorCode::SpecMismatch, fmt::format("genotype invalid for the evaluator's space: {}", report.violations.front().message));
    }
    double quality = 0.0;
    double cost = 0.0;
    double latency_ops = 0.0;
    double weight_sum = 0.0;
    double path = 0.0;
    auto const n = space.num_operations();
    auto const nodes = static_cast<double>(space.nodes_per_cell);
    for (std::size_t position = 0; position < g.num_cells(); ++position) {
        auto const& cell = g.cell(position);
        auto const w = position < g.normal_cells.size() ? 1.0 : reduction_weight;
        std::vector<std::size_t> hops(space.nodes_per_cell + 2, 0);
        std::vector<double> strength(space.nodes_per_cell + 2, 0.0);
        double edge_quality = 0.0;
        for (std::size_t column = 0; column < cell.inputs.size(); ++column) {
            auto const input = static_cast<std::size_t>(cell.inputs[column]);
            auto const op = static_cast<std::size_t>(cell.ops[column]);
            edge_quality += quality_[op];
            cost += w * cost_[op];
            latency_ops += op_profile(space.operation_set[op], op, n).latency;
            auto const to = column / 2 + 2;
            hops[to] = std::max(hops[to], hops[input] + 1);
            // Quality-weighted longest path; a zero-quality edge carries nothing.
            if (quality_[op] > 0.0) {
                strength[to] = std::max(strength[to], strength[input] + quality_[op]);
            }
        }
        auto const chain = *std::max_element(strength.begin(), strength.end()) / nodes;
        auto const width = edge_quality / static_cast<double>(cell.inputs.size());
        quality += w * (path_share * chain + (1.0 - path_share) * width);
        weight_sum += w;
        path += static_cast<double>(*std::max_element(hops.begin(), hops.end())) / nodes;
    }
    auto const columns = static_cast<double>(space.columns_per_cell());
    cost /= weight_sum * columns;
    auto const edges = static_cast<double>(g.num_cells() * space.columns_per_cell());
    std::vector<double> values { std::exp(-steepness * quality / weight_sum), cost };
    if (problem_.objectives == 3) {
        values.push_back(0.5 * path / static_cast<double>(g.num_cells()) + 0.5 * latency_ops / edges);
    }
    return ObjectiveVector(std::move(values));
}

auto SyntheticEvaluator::hypervolume_reference() const -> std::optional<ObjectiveVector>
{
    return ObjectiveVector(std::vector<double>(problem_.objectives, 1.1));
}

SupernetEvaluator::SupernetEvaluator(SyntheticProblem problem)
    : base_(std::move(problem))
{
}

auto SupernetEvaluator::evaluate(Genotype const& g) const -> ObjectiveVector
{
    auto values = base_.evaluate(g);
    double sum = 0.0;
    std::size_t edges = 0;
    for_each_connection(g, [&](ConnectionKey const& key, std::size_t op) {
        sum += supernet_.weight({ key, op });
        ++edges;
    });
    values[0] *= 1.0 - 0.5 * sum / static_cast<double>(edges);
    return values;
}

TabularEvaluator::TabularEvaluator(SearchSpaceSpec space, std::vector<Direction> directions,
    std::unordered_map<std::string, std::vector<double>> rows)
    : space_(std::move(space))
    , directions_(std::move(directions))
{
    space_.check();
    for (auto& [key, raw] : rows) {
        // Normalizes the key to canonical text and checks it against the space.
        auto const canonical = encode_text(decode_text(key, space_));
        rows_.emplace(canonical, ObjectiveVector::ingest(raw, directions_));
    }
}

namespace {

auto read_file(std::filesystem::path const& path) -> std::string
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, fmt::format("cannot open {}", path.string()));
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace

auto direction_from_string(std::string const& text) -> Direction
{
    if (text == "minimize" || text == "min") {
        return Direction::Minimize;
    }
    if (text == "maximize" || text == "max") {
        return Direction::Maximize;
    }
    throw Error(ErrorCode::ConfigError, fmt::format("unknown direction '{}'", text));
}

auto to_string(Direction d) -> std::string
{
    return d == Direction::Minimize ? "minimize" : "maximize";
}

auto TabularEvaluator::from_files(std::filesystem::path const& csv_path, std::filesystem::path const& sidecar) -> TabularEvaluator
{
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(read_file(sidecar));
    } catch (nlohmann::json::exception const& e) {
        throw Error(ErrorCode::ConfigError, fmt::format("{}: {}", sidecar.string(), e.what()));
    }
    if (!meta.is_object() || !meta.contains("directions") || !meta["directions"].is_array()) {
        throw Error(ErrorCode::ConfigError, fmt::format("{}: 'directions' array required", sidecar.string()));
    }
    std::vector<Direction> directions;
    for (auto const& d : meta["directions"]) {
        if (!d.is_string()) {
            throw Error(ErrorCode::ConfigError, fmt::format("{}: directions must be strings", sidecar.string()));
        }
        directions.push_back(direction_from_string(d.get<std::string>()));
    }
    auto const space = meta.contains("space") ? space_from_json(meta["space"], "space") : SearchSpaceSpec {};

    auto const records = csv::parse(read_file(csv_path));
    if (records.empty()) {
        throw Error(ErrorCode::ParseError, fmt::format("{}: missing header", csv_path.string()));
    }
    auto const& header = records.front();
    if (header.size() != directions.size() + 1 || header.front() != "genotype") {
        throw Error(ErrorCode::DimensionMismatch,
            fmt::format("{}: header has {} columns, sidecar declares {} objectives", csv_path.string(), header.size(), directions.size()));
    }
    std::unordered_map<std::string, std::vector<double>> rows;
    for (std::size_t r = 1; r < records.size(); ++r) {
        auto const& record = records[r];
        if (record.size() == 1 && record.front().empty()) {
            continue;
        }
        if (record.size() != header.size()) {
            throw Error(ErrorCode::ParseError, fmt::format("{}: row {} has {} fields", csv_path.string(), r + 1, record.size()));
        }
        std::vector<double> raw;
        for (std::size_t k = 1; k < record.size(); ++k) {
            try {
                std::size_t used = 0;
                raw.push_back(std::stod(record[k], &used));
                if (used != record[k].size()) {
                    throw std::invalid_argument(record[k]);
                }
            } catch (std::logic_error const&) {
                throw Error(ErrorCode::ParseError, fmt::format("{}: row {} field {} is not a number", csv_path.string(), r + 1, k + 1));
            }
        }
        rows.emplace(record.front(), std::move(raw));
    }
    return TabularEvaluator(space, std::move(directions), std::move(rows));
}

auto TabularEvaluator::evaluate(Genotype const& g) const -> ObjectiveVector
{
    auto const key = encode_text(g);
    auto const it = rows_.find(key);
    if (it == rows_.end()) {
        throw Error(ErrorCode::MissingEntry, fmt::format("no table row for genotype {}", key));
    }
    return it->second;
}

auto TabularEvaluator::hypervolume_reference() const -> std::optional<ObjectiveVector>
{
    if (rows_.empty() || (directions_.size() != 2 && directions_.size() != 3)) {
        return std::nullopt;
    }
    auto const m = directions_.size();
    std::vector<double> lo(m, std::numeric_limits<double>::infinity());
    std::vector<double> hi(m, -std::numeric_limits<double>::infinity());
    for (auto const& [key, v] : rows_) {
        for (std::size_t k = 0; k < m; ++k) {
            lo[k] = std::min(lo[k], v[k]);
            hi[k] = std::max(hi[k], v[k]);
        }
    }
    std::vector<double> ref(m);
    for (std::size_t k = 0; k < m; ++k) {
        auto const range = hi[k] - lo[k];
        ref[k] = hi[k] + (range > 0.0 ? 0.1 * range : 1.0);
    }
    return ObjectiveVector(std::move(ref));
}

auto TabularEvaluator::keys() const -> std::vector<std::string>
{
    std::vector<std::string> out;
    out.reserve(rows_.size());
    for (auto const& [key, v] : rows_) {
        out.push_back(key);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace cenas
