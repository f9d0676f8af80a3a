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

#ifndef CENAS_ENGINE_HPP
#define CENAS_ENGINE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cenas/classifier.hpp"
#include "cenas/evaluator.hpp"
#include "cenas/labeling.hpp"
#include "cenas/random.hpp"

namespace cenas {

// What the dominance classifier sees for each individual.
enum class FeatureMode {
    Genotype,   // genotype_features; offspring are classified before evaluation
    Objectives, // normalized objectives; offspring must be evaluated to be classified
};

// Class-balanced bounds with a stiff margin; labeled sets are small and
// skewed toward good.
[[nodiscard]] inline auto default_run_svm() -> SvmHyper
{
    SvmHyper h;
    h.c = 100.0;
    h.balanced = true;
    return h;
}

struct RunConfig {
    std::size_t population_size { 32 };
    std::size_t iterations { 50 };
    std::size_t archive_size { 16 };
    std::size_t n_c { 3 };
    std::size_t ensemble_size { 20 };
    double crossover_prob { 0.5 };
    double mutation_prob { 0.5 };
    double ir_threshold { default_ir_threshold };
    double th_auc { 0.7 };
    std::size_t supernet_epochs { 10 };
    std::size_t steps_per_epoch { 8 };
    // Labeled set size: the archive topped up with the most recently
    // evaluated individuals. 0 labels the archive alone.
    std::size_t training_size { 50 };
    std::uint64_t seed { 0 };
    // false: every iteration takes the unreliable branch (plain NSGA-II step)
    bool classifier_gating { true };
    FeatureMode features { FeatureMode::Genotype };
    SvmHyper svm { default_run_svm() };
    std::vector<double> alpha_ladder { default_alpha_ladder() };

    // Throws Error(ConfigError).
    void check() const;
};

struct IterationRecord {
    std::size_t iteration { 0 };
    std::size_t good { 0 };
    std::size_t poor { 0 };
    std::size_t predicted_good { 0 };
    std::size_t predicted_poor { 0 };
    std::optional<double> auc;
    bool classifier_used { false };
    double alpha_used { 0.0 };
    bool ladder_exhausted { false };
    std::string fallback; // why the unreliable branch was forced, if it was
    std::size_t evaluations { 0 };
    std::size_t cumulative_evaluations { 0 };
    std::optional<double> hypervolume; // of the archive after this iteration
    std::vector<ObjectiveVector> population;
};

struct RunResult {
    std::vector<Individual> final_archive; // first front of the last archive
    std::vector<IterationRecord> history;
    std::optional<double> initial_hypervolume;
    std::size_t total_evaluations { 0 };
    ProxySupernet supernet;
};

// Counts true evaluations.
class EvaluationCounter {
public:
    explicit EvaluationCounter(Evaluator const& ev) : ev_(&ev) {}

    auto operator()(Genotype const& g) -> ObjectiveVector
    {
        ++count_;
        return ev_->evaluate(g);
    }
    [[nodiscard]] auto count() const noexcept -> std::size_t { return count_; }
    [[nodiscard]] auto evaluator() const noexcept -> Evaluator const& { return *ev_; }

private:
    Evaluator const* ev_;
    std::size_t count_ { 0 };
};

// `count` offspring. Each draws two distinct parents uniformly (one when the
// pool has a single member), applies crossover with crossover_prob and then
// with mutation_prob one mutation of a uniformly chosen kind. A child that
// left both steps untouched and equals a parent is mutated once more.
[[nodiscard]] auto reproduce(std::span<Genotype const> parents, std::size_t count, RunConfig const& config,
    SearchSpaceSpec const& space, Rng& rng) -> std::vector<Genotype>;

// NSGA-II environmental selection of `count` individuals, in selection order.
[[nodiscard]] auto select_individuals(std::span<Individual const> pool, std::size_t count) -> std::vector<Individual>;

// Top archive_size of P by rank then crowding distance; insertion order
// breaks ties.
[[nodiscard]] auto update_archive(std::span<Individual const> population, std::size_t archive_size) -> std::vector<Individual>;

struct SelectionOutcome {
    std::vector<Individual> population;
    std::vector<Individual> evaluated; // offspring evaluated here, in order
    std::size_t evaluations { 0 };
    std::size_t predicted_good { 0 };
    std::size_t predicted_poor { 0 };
    bool classifier_used { false };
};

// Classifier-assisted environmental selection. With a missing ensemble or
// auc < th_auc all of P and Q are evaluated; otherwise only predicted-good
// offspring are, and P keeps its stored objectives.
struct OffspringFeatures {
    FeatureMode mode { FeatureMode::Genotype };
    SearchSpaceSpec const* space { nullptr };
    std::optional<NormalizationFrame> frame; // objective mode only
};

[[nodiscard]] auto ce_selection(DominanceEnsemble const* ensemble, std::span<Genotype const> offspring,
    std::span<Individual const> population, std::optional<double> auc, RunConfig const& config,
    OffspringFeatures const& features, EvaluationCounter& evaluate, std::size_t iteration) -> SelectionOutcome;

// Mutually non-dominated members, in input order.
[[nodiscard]] auto first_front(std::span<Individual const> individuals) -> std::vector<Individual>;

[[nodiscard]] auto objectives_of(std::span<Individual const> individuals) -> std::vector<ObjectiveVector>;

// Hypervolume of the first front against the evaluator's reference, clipping
// points beyond it; nullopt when the evaluator declares no reference.
[[nodiscard]] auto archive_hypervolume(std::span<Individual const> individuals, Evaluator const& ev) -> std::optional<double>;

// Archive members first, then the most recent distinct evaluated
// individuals (newest first) until training_size is reached.
[[nodiscard]] auto training_pool(std::span<Individual const> archive, std::span<Individual const> evaluated,
    std::size_t training_size) -> std::vector<Individual>;

[[nodiscard]] auto run(RunConfig const& config, Evaluator& ev) -> RunResult;

struct RandomSearchResult {
    std::vector<Individual> final_archive;
    std::optional<double> hypervolume;
};

// Uniform sampling baseline: `budget` random genotypes, evaluated, with the
// best archive_size kept by NSGA-II selection.
[[nodiscard]] auto random_search(Evaluator const& ev, std::size_t budget, std::size_t archive_size, std::uint64_t seed) -> RandomSearchResult;

} // namespace cenas

#endif
