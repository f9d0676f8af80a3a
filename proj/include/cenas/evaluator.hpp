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

#ifndef CENAS_EVALUATOR_HPP
#define CENAS_EVALUATOR_HPP

#include <compare>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cenas/genotype.hpp"
#include "cenas/pareto.hpp"
#include "cenas/random.hpp"

namespace cenas {

enum class Origin { Initial, Offspring };

struct Provenance {
    std::size_t birth_iteration { 0 };
    Origin origin { Origin::Initial };
};

struct Individual {
    Genotype genotype;
    ObjectiveVector objectives; // all-minimize convention
    std::optional<bool> label;
    Provenance provenance;
};

// A connection is identified by its cell position, the column slot inside
// the cell (which fixes the receiving node column/2 + 2) and the input node.
struct ConnectionKey {
    std::size_t position { 0 };
    std::size_t column { 0 };
    std::size_t input { 0 };

    [[nodiscard]] auto to_node() const noexcept -> std::size_t { return column / 2 + 2; }

    friend auto operator==(ConnectionKey const&, ConnectionKey const&) -> bool = default;
    // Lexicographic in (position, from node, to node, slot).
    friend auto operator<=>(ConnectionKey const& a, ConnectionKey const& b) -> std::strong_ordering
    {
        if (auto c = a.position <=> b.position; c != 0) {
            return c;
        }
        if (auto c = a.input <=> b.input; c != 0) {
            return c;
        }
        return a.column <=> b.column;
    }
};

struct WeightKey {
    ConnectionKey connection;
    std::size_t op { 0 };

    friend auto operator<=>(WeightKey const&, WeightKey const&) = default;
};

// Stand-in for the shared-weight supernet: one scalar per (connection, op).
struct ProxySupernet {
    std::map<WeightKey, double> edge_weights; // absent entries are 0
    std::size_t epoch_counter { 0 };
    std::size_t step_counter { 0 };

    [[nodiscard]] auto weight(WeightKey const& key) const -> double;
};

// Share of all connections in the archive that equal `key`. Every genotype
// contributes one connection per column of every cell. Throws EmptyArchive.
[[nodiscard]] auto connection_probability(std::span<Genotype const> good_archive, ConnectionKey const& key) -> double;

// The same ratio for every connection that occurs at least once.
[[nodiscard]] auto connection_probabilities(std::span<Genotype const> good_archive) -> std::map<ConnectionKey, double>;

struct AdaptSettings {
    std::size_t epochs { 10 };
    std::size_t steps_per_epoch { 8 };
    double learning_rate { 0.1 };
};

struct AdaptReport {
    std::vector<WeightKey> commits; // one per step, in order
};

// Elitist adaption over the good-labeled archive members. Each step samples
// a good subnet, trains it with the proxy update w <- w + lr (1 - w), and
// commits only the weight of the most probable connection (ties resolved by
// the lowest (position, from, to, slot)). The committed op is the subnet's
// op on that connection when it has it, otherwise the connection's most
// frequent op among the good archive. Throws NoGoodSolutions.
auto supernet_adapt(ProxySupernet& supernet, std::span<Individual const> archive, AdaptSettings const& settings, Rng& rng) -> AdaptReport;

class Evaluator {
public:
    virtual ~Evaluator() = default;

    // Objective vector in the all-minimize convention. Must be safe to call
    // concurrently for distinct genotypes.
    [[nodiscard]] virtual auto evaluate(Genotype const& g) const -> ObjectiveVector = 0;
    [[nodiscard]] virtual auto space() const -> SearchSpaceSpec const& = 0;
    [[nodiscard]] virtual auto directions() const -> std::span<Direction const> = 0;
    // Reference point for hypervolume tracking, in the internal convention.
    [[nodiscard]] virtual auto hypervolume_reference() const -> std::optional<ObjectiveVector> = 0;
    [[nodiscard]] virtual auto kind() const -> std::string = 0;

    // Called by the engine after every adaption; only the supernet-backed
    // evaluator reacts.
    virtual void on_supernet_update(ProxySupernet const& /*supernet*/) {}

    [[nodiscard]] auto objective_count() const -> std::size_t { return directions().size(); }
};

struct SyntheticProblem {
    SearchSpaceSpec space;
    std::size_t objectives { 2 }; // 2: (error, size); 3: adds latency
};

// Deterministic landscape over genotype statistics. Each operation has a
// quality, a cost and a latency; several are dominated on purpose.
//   error   = exp(-3 Q), Q per cell mixes the quality-weighted longest path
//             (0.7) with the mean edge quality (0.3); reduction cells weigh 1.5
//   size    = weighted mean of cost
//   latency = mean normalized longest path mixed with mean op latency
// All objectives are minimized and lie in [0, 1].
class SyntheticEvaluator : public Evaluator {
public:
    explicit SyntheticEvaluator(SyntheticProblem problem);

    [[nodiscard]] auto evaluate(Genotype const& g) const -> ObjectiveVector override;
    [[nodiscard]] auto space() const -> SearchSpaceSpec const& override { return problem_.space; }
    [[nodiscard]] auto directions() const -> std::span<Direction const> override { return directions_; }
    [[nodiscard]] auto hypervolume_reference() const -> std::optional<ObjectiveVector> override;
    [[nodiscard]] auto kind() const -> std::string override { return "synthetic"; }

    [[nodiscard]] auto op_cost(std::size_t op) const -> double { return cost_[op]; }
    [[nodiscard]] auto op_quality(std::size_t op) const -> double { return quality_[op]; }

private:
    SyntheticProblem problem_;
    std::vector<Direction> directions_;
    std::vector<double> cost_;
    std::vector<double> quality_;
};

// Synthetic landscape whose error objective improves with the proxy
// supernet weights of the genotype's edges: error * (1 - 0.5 * mean weight).
class SupernetEvaluator : public Evaluator {
public:
    explicit SupernetEvaluator(SyntheticProblem problem);

    [[nodiscard]] auto evaluate(Genotype const& g) const -> ObjectiveVector override;
    [[nodiscard]] auto space() const -> SearchSpaceSpec const& override { return base_.space(); }
    [[nodiscard]] auto directions() const -> std::span<Direction const> override { return base_.directions(); }
    [[nodiscard]] auto hypervolume_reference() const -> std::optional<ObjectiveVector> override { return base_.hypervolume_reference(); }
    [[nodiscard]] auto kind() const -> std::string override { return "proxy_supernet"; }
    void on_supernet_update(ProxySupernet const& supernet) override { supernet_ = supernet; }

    [[nodiscard]] auto supernet() const -> ProxySupernet const& { return supernet_; }

private:
    SyntheticEvaluator base_;
    ProxySupernet supernet_;
};

// Lookup table keyed by canonical genotype text.
class TabularEvaluator : public Evaluator {
public:
    TabularEvaluator(SearchSpaceSpec space, std::vector<Direction> directions,
        std::unordered_map<std::string, std::vector<double>> rows);

    // CSV with header `genotype,obj_1,...,obj_m` and a JSON sidecar holding
    // {"directions": [...], "space": {...}}.
    [[nodiscard]] static auto from_files(std::filesystem::path const& csv, std::filesystem::path const& sidecar) -> TabularEvaluator;

    // Throws MissingEntry for genotypes absent from the table.
    [[nodiscard]] auto evaluate(Genotype const& g) const -> ObjectiveVector override;
    [[nodiscard]] auto space() const -> SearchSpaceSpec const& override { return space_; }
    [[nodiscard]] auto directions() const -> std::span<Direction const> override { return directions_; }
    [[nodiscard]] auto hypervolume_reference() const -> std::optional<ObjectiveVector> override;
    [[nodiscard]] auto kind() const -> std::string override { return "tabular"; }

    [[nodiscard]] auto size() const noexcept -> std::size_t { return rows_.size(); }
    [[nodiscard]] auto keys() const -> std::vector<std::string>;

private:
    SearchSpaceSpec space_;
    std::vector<Direction> directions_;
    std::unordered_map<std::string, ObjectiveVector> rows_;
};

[[nodiscard]] auto direction_from_string(std::string const& text) -> Direction;
[[nodiscard]] auto to_string(Direction d) -> std::string;

} // namespace cenas

#endif
