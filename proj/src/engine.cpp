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

#include "cenas/engine.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "cenas/error.hpp"
#include "cenas/refpoints.hpp"

namespace cenas {

void RunConfig::check() const
{
    auto fail = [](std::string const& message) { throw Error(ErrorCode::ConfigError, message); };
    if (population_size < 4) {
        fail("population_size below minimum 4");
    }
    if (archive_size < 1 || archive_size > population_size) {
        fail(fmt::format("archive_size {} outside [1, population_size = {}]", archive_size, population_size));
    }
    if (n_c < 1) {
        fail("n_c must be at least 1");
    }
    if (ensemble_size < 1) {
        fail("ensemble_size must be at least 1");
    }
    if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0)) {
        fail(fmt::format("crossover_prob {} outside [0, 1]", crossover_prob));
    }
    if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0)) {
        fail(fmt::format("mutation_prob {} outside [0, 1]", mutation_prob));
    }
    if (!(ir_threshold > 1.0)) {
        fail(fmt::format("ir_threshold {} must exceed 1", ir_threshold));
    }
    if (!(th_auc > 0.5 && th_auc <= 1.0)) {
        fail(fmt::format("th_auc {} outside (0.5, 1]", th_auc));
    }
    if (!(svm.c > 0.0)) {
        fail("svm c must be positive");
    }
    if (svm.gamma && !(*svm.gamma > 0.0)) {
        fail("svm gamma must be positive");
    }
    if (!(svm.tolerance > 0.0)) {
        fail("svm tolerance must be positive");
    }
    for (auto a : alpha_ladder) {
        if (!(a > 0.0 && a < 1.0)) {
            fail(fmt::format("alpha ladder entry {} outside (0, 1)", a));
        }
    }
}

auto reproduce(std::span<Genotype const> parents, std::size_t count, RunConfig const& config,
    SearchSpaceSpec const& space, Rng& rng) -> std::vector<Genotype>
{
    if (parents.empty()) {
        throw Error(ErrorCode::EmptyPopulation, "reproduction needs at least one parent");
    }
    auto const n = parents.size();
    std::vector<Genotype> offspring;
    offspring.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        auto const a = rng.uniform_index(n);
        auto b = a;
        if (n > 1) {
            b = rng.uniform_index(n - 1);
            b += b >= a ? 1 : 0;
        }
        auto child = parents[a];
        if (rng.bernoulli(config.crossover_prob)) {
            child = crossover(parents[a], parents[b], rng);
        }
        bool mutated = false;
        if (rng.bernoulli(config.mutation_prob)) {
            child = mutate(child, space, rng);
            mutated = true;
        }
        if (!mutated && (child == parents[a] || child == parents[b])) {
            child = mutate(child, space, rng);
        }
        offspring.push_back(std::move(child));
    }
    return offspring;
}

auto objectives_of(std::span<Individual const> individuals) -> std::vector<ObjectiveVector>
{
    std::vector<ObjectiveVector> out;
    out.reserve(individuals.size());
    for (auto const& ind : individuals) {
        out.push_back(ind.objectives);
    }
    return out;
}

auto select_individuals(std::span<Individual const> pool, std::size_t count) -> std::vector<Individual>
{
    auto const objectives = objectives_of(pool);
    std::vector<Individual> out;
    for (auto i : nsga2_select(objectives, std::min(count, pool.size()))) {
        out.push_back(pool[i]);
    }
    return out;
}

auto update_archive(std::span<Individual const> population, std::size_t archive_size) -> std::vector<Individual>
{
    return select_individuals(population, archive_size);
}

auto first_front(std::span<Individual const> individuals) -> std::vector<Individual>
{
    if (individuals.empty()) {
        return {};
    }
    auto const objectives = objectives_of(individuals);
    auto front = fast_nondominated_sort(objectives).fronts.front();
    std::sort(front.begin(), front.end());
    std::vector<Individual> out;
    out.reserve(front.size());
    for (auto i : front) {
        out.push_back(individuals[i]);
    }
    return out;
}

auto archive_hypervolume(std::span<Individual const> individuals, Evaluator const& ev) -> std::optional<double>
{
    auto const reference = ev.hypervolume_reference();
    if (!reference || individuals.empty()) {
        return std::nullopt;
    }
    std::vector<ObjectiveVector> inside;
    for (auto const& ind : first_front(individuals)) {
        bool within = true;
        for (std::size_t k = 0; k < reference->size(); ++k) {
            within = within && ind.objectives[k] <= (*reference)[k];
        }
        if (within) {
            inside.push_back(ind.objectives);
        }
    }
    return inside.empty() ? 0.0 : hypervolume(inside, *reference);
}

auto ce_selection(DominanceEnsemble const* ensemble, std::span<Genotype const> offspring,
    std::span<Individual const> population, std::optional<double> auc, RunConfig const& config,
    OffspringFeatures const& features, EvaluationCounter& evaluate, std::size_t iteration) -> SelectionOutcome
{
    SelectionOutcome out;
    auto const before = evaluate.count();
    std::vector<Individual> pool(population.begin(), population.end());
    out.classifier_used = ensemble != nullptr && auc && *auc >= config.th_auc;
    Provenance const born { iteration, Origin::Offspring };
    if (!out.classifier_used) {
        // The unreliable branch evaluates the whole of P and Q afresh.
        for (auto& p : pool) {
            p.objectives = evaluate(p.genotype);
        }
    }

    for (auto const& q : offspring) {
        if (!out.classifier_used) {
            pool.push_back({ q, evaluate(q), std::nullopt, born });
            out.evaluated.push_back(pool.back());
            continue;
        }
        Prediction prediction {};
        std::optional<ObjectiveVector> objectives;
        if (features.mode == FeatureMode::Genotype) {
            prediction = ensemble->predict(genotype_features(q, *features.space));
        } else {
            // Objective features are only known after evaluation.
            objectives = evaluate(q);
            auto const x = features.frame->apply(*objectives);
            prediction = ensemble->predict(x.values());
        }
        if (!prediction.good) {
            ++out.predicted_poor;
            continue;
        }
        ++out.predicted_good;
        pool.push_back({ q, objectives ? *objectives : evaluate(q), std::nullopt, born });
        out.evaluated.push_back(pool.back());
    }
    out.population = select_individuals(pool, config.population_size);
    out.evaluations = evaluate.count() - before;
    return out;
}

namespace {

auto is_degenerate(ErrorCode code) -> bool
{
    switch (code) {
    case ErrorCode::SingleClass:
    case ErrorCode::ClassTooSmall:
    case ErrorCode::SingleClassTrainingSet:
    case ErrorCode::SingleClassValidation:
    case ErrorCode::BootstrapExhausted:
        return true;
    default:
        return false;
    }
}

auto to_examples(std::span<LabeledSample const> samples, std::span<Individual const> archive, RunConfig const& config,
    SearchSpaceSpec const& space) -> std::vector<Example>
{
    std::vector<Example> out;
    out.reserve(samples.size());
    for (auto const& s : samples) {
        if (config.features == FeatureMode::Genotype) {
            out.push_back({ genotype_features(archive[s.source_index].genotype, space), s.good });
        } else {
            out.push_back({ std::vector<double>(s.features.begin(), s.features.end()), s.good });
        }
    }
    return out;
}

} // namespace

auto training_pool(std::span<Individual const> archive, std::span<Individual const> evaluated, std::size_t training_size)
    -> std::vector<Individual>
{
    std::vector<Individual> pool(archive.begin(), archive.end());
    for (auto it = evaluated.rbegin(); it != evaluated.rend() && pool.size() < training_size; ++it) {
        auto const seen = std::any_of(pool.begin(), pool.end(), [&](auto const& p) { return p.genotype == it->genotype; });
        if (!seen) {
            pool.push_back(*it);
        }
    }
    return pool;
}

auto run(RunConfig const& config, Evaluator& ev) -> RunResult
{
    config.check();
    auto const& space = ev.space();
    space.check();
    Rng rng(config.seed);
    EvaluationCounter evaluate(ev);
    RunResult result;

    std::vector<Individual> population;
    population.reserve(config.population_size);
    for (std::size_t i = 0; i < config.population_size; ++i) {
        auto g = random_genotype(space, rng);
        auto objectives = evaluate(g);
        population.push_back({ std::move(g), std::move(objectives), std::nullopt, { 0, Origin::Initial } });
    }
    auto archive = population;
    std::vector<Individual> evaluated_log = population;
    result.initial_hypervolume = archive_hypervolume(population, ev);

    for (std::size_t t = 0; t < config.iterations; ++t) {
        IterationRecord record;
        record.iteration = t + 1;
        auto const before = evaluate.count();

        // Reference points come from the population, labels go to the archive,
        // both in the population's normalization frame.
        auto const population_objectives = objectives_of(population);
        NormalizationFrame const frame(population_objectives);
        auto const refs = select_reference(frame.apply(std::span<ObjectiveVector const>(population_objectives)), config.n_c);
        auto const labeled = training_pool(archive, evaluated_log, config.training_size);
        auto const labeled_objectives = objectives_of(labeled);
        auto const labeled_normalized = frame.apply(std::span<ObjectiveVector const>(labeled_objectives));

        std::optional<Regulated> regulated;
        std::optional<DominanceEnsemble> ensemble;
        std::optional<double> auc_value;
        try {
            regulated = regulate_imbalance(refs, labeled_normalized, config.ir_threshold, config.alpha_ladder);
            record.alpha_used = regulated->alpha_used;
            record.ladder_exhausted = regulated->exhausted;
            for (auto const& s : regulated->samples) {
                (s.good ? record.good : record.poor) += 1;
            }
            if (config.classifier_gating) {
                auto const split = split_train_val(regulated->samples, rng);
                auto const train = to_examples(split.train, labeled, config, space);
                auto const validation = to_examples(split.validation, labeled, config, space);
                ensemble = train_ensemble(train, config.ensemble_size, config.svm, rng);
                auc_value = auc(*ensemble, validation);
                ensemble->auc = auc_value;
            }
        } catch (Error const& e) {
            if (!is_degenerate(e.code())) {
                throw;
            }
            record.fallback = std::string(to_string(e.code()));
            ensemble.reset();
            auc_value.reset();
        }
        if (!regulated) {
            record.good = 0;
            record.poor = 0;
        }
        record.auc = auc_value;

        std::vector<Genotype> parents;
        parents.reserve(population.size() + refs.size());
        for (auto const& ind : population) {
            parents.push_back(ind.genotype);
        }
        for (auto const& member : refs.member) {
            if (member) {
                parents.push_back(population[*member].genotype);
            }
        }
        auto const offspring = reproduce(parents, config.population_size, config, space, rng);

        OffspringFeatures features { config.features, &space, std::nullopt };
        if (config.features == FeatureMode::Objectives) {
            features.frame = frame;
        }
        auto selection = ce_selection(ensemble ? &*ensemble : nullptr, offspring, population, auc_value, config, features,
            evaluate, t + 1);
        population = std::move(selection.population);
        evaluated_log.insert(evaluated_log.end(), selection.evaluated.begin(), selection.evaluated.end());
        record.classifier_used = selection.classifier_used;
        record.predicted_good = selection.predicted_good;
        record.predicted_poor = selection.predicted_poor;

        archive = update_archive(population, config.archive_size);
        if (regulated) {
            auto const current = objectives_of(archive);
            auto const labels = label_samples(refs, frame.apply(std::span<ObjectiveVector const>(current)), regulated->alpha_used);
            for (std::size_t i = 0; i < archive.size(); ++i) {
                archive[i].label = labels[i].good;
            }
            try {
                AdaptSettings const settings { config.supernet_epochs, config.steps_per_epoch, 0.1 };
                (void)supernet_adapt(result.supernet, archive, settings, rng);
                ev.on_supernet_update(result.supernet);
            } catch (Error const& e) {
                if (e.code() != ErrorCode::NoGoodSolutions) {
                    throw;
                }
            }
        }

        record.evaluations = evaluate.count() - before;
        record.cumulative_evaluations = evaluate.count();
        record.hypervolume = archive_hypervolume(archive, ev);
        record.population = objectives_of(population);
        result.history.push_back(std::move(record));
    }

    result.final_archive = first_front(archive);
    result.total_evaluations = evaluate.count();
    return result;
}

auto random_search(Evaluator const& ev, std::size_t budget, std::size_t archive_size, std::uint64_t seed) -> RandomSearchResult
{
    Rng rng(seed);
    std::vector<Individual> sampled;
    sampled.reserve(budget);
    for (std::size_t i = 0; i < budget; ++i) {
        auto g = random_genotype(ev.space(), rng);
        auto objectives = ev.evaluate(g);
        sampled.push_back({ std::move(g), std::move(objectives), std::nullopt, { 0, Origin::Initial } });
    }
    RandomSearchResult out;
    out.final_archive = first_front(update_archive(sampled, archive_size));
    out.hypervolume = archive_hypervolume(out.final_archive, ev);
    return out;
}

} // namespace cenas
