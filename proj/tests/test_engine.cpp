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

#include <doctest.h>

#include <algorithm>
#include <limits>
#include <set>

#include "cenas/engine.hpp"
#include "cenas/error.hpp"
#include "oracles.hpp"

using namespace cenas;

namespace {

auto entry_distance(Genotype const& a, Genotype const& b) -> std::size_t
{
    std::size_t d = 0;
    for (std::size_t p = 0; p < a.num_cells(); ++p) {
        for (std::size_t c = 0; c < a.cell(p).inputs.size(); ++c) {
            d += a.cell(p).inputs[c] != b.cell(p).inputs[c];
            d += a.cell(p).ops[c] != b.cell(p).ops[c];
        }
    }
    return d;
}

auto individuals(std::vector<ObjectiveVector> const& objectives, std::uint64_t seed = 0) -> std::vector<Individual>
{
    Rng rng(seed);
    std::vector<Individual> out;
    for (auto const& o : objectives) {
        out.push_back({ random_genotype(SearchSpaceSpec {}, rng), o, std::nullopt, {} });
    }
    return out;
}

auto as_set(std::vector<Individual> const& xs) -> std::multiset<ObjectiveVector>
{
    std::multiset<ObjectiveVector> s;
    for (auto const& x : xs) {
        s.insert(x.objectives);
    }
    return s;
}

// Whole fronts in order, then the last front by the textbook crowding
// distance, largest first.
auto oracle_selection(std::vector<ObjectiveVector> const& pool, std::size_t count) -> std::multiset<ObjectiveVector>
{
    std::vector<oracle::Point> raw;
    for (auto const& p : pool) {
        raw.emplace_back(p.begin(), p.end());
    }
    std::multiset<ObjectiveVector> chosen;
    for (auto const& front : oracle::iterated_removal(raw)) {
        std::vector<std::size_t> members(front.begin(), front.end());
        if (chosen.size() + members.size() <= count) {
            for (auto i : members) {
                chosen.insert(pool[i]);
            }
            continue;
        }
        std::vector<double> crowd(pool.size(), 0.0);
        for (std::size_t k = 0; k < raw.front().size(); ++k) {
            std::sort(members.begin(), members.end(), [&](auto a, auto b) { return raw[a][k] < raw[b][k]; });
            auto const range = raw[members.back()][k] - raw[members.front()][k];
            crowd[members.front()] = crowd[members.back()] = std::numeric_limits<double>::infinity();
            for (std::size_t j = 1; j + 1 < members.size(); ++j) {
                crowd[members[j]] += (raw[members[j + 1]][k] - raw[members[j - 1]][k]) / range;
            }
        }
        // Equal distances keep pool order.
        std::sort(members.begin(), members.end());
        std::stable_sort(members.begin(), members.end(), [&](auto a, auto b) { return crowd[a] > crowd[b]; });
        for (std::size_t j = 0; chosen.size() < count; ++j) {
            chosen.insert(pool[members[j]]);
        }
        break;
    }
    return chosen;
}

struct AllPoor {
    DominanceEnsemble ensemble;
    AllPoor()
    {
        MarginClassifier m;
        m.bias = -1.0;
        ensemble.members.assign(3, m);
    }
};

auto small_config() -> RunConfig
{
    RunConfig c;
    c.population_size = 12;
    c.archive_size = 6;
    c.iterations = 8;
    c.ensemble_size = 5;
    c.training_size = 20;
    return c;
}

} // namespace

TEST_CASE("config checks")
{
    RunConfig c;
    CHECK_NOTHROW(c.check());
    c.population_size = 3;
    CHECK_THROWS_WITH_AS(c.check(), doctest::Contains("population_size below minimum 4"), Error);
    c = RunConfig {};
    c.th_auc = 0.4;
    CHECK_THROWS_AS(c.check(), Error);
    c.th_auc = 0.5;
    CHECK_THROWS_AS(c.check(), Error);
    c.th_auc = 1.0;
    CHECK_NOTHROW(c.check());
    c.archive_size = 40;
    CHECK_THROWS_AS(c.check(), Error);
}

TEST_CASE("reproduce")
{
    SearchSpaceSpec const space;
    Rng rng(1);
    auto const parent = random_genotype(space, rng);
    std::vector<Genotype> const one { parent };

    RunConfig mutate_only;
    mutate_only.crossover_prob = 0.0;
    mutate_only.mutation_prob = 1.0;
    for (auto const& child : reproduce(one, 50, mutate_only, space, rng)) {
        CHECK(entry_distance(parent, child) == 1);
    }

    RunConfig cross_only;
    cross_only.crossover_prob = 1.0;
    cross_only.mutation_prob = 0.0;
    std::vector<Genotype> const same { parent, parent };
    for (auto const& child : reproduce(same, 50, cross_only, space, rng)) {
        CHECK(child != parent);
        CHECK(entry_distance(parent, child) == 1);
    }

    std::vector<Genotype> parents;
    for (int i = 0; i < 5; ++i) {
        parents.push_back(random_genotype(space, rng));
    }
    for (int t = 0; t < 100; ++t) {
        RunConfig c;
        c.population_size = 4 + rng.uniform_index(60);
        c.crossover_prob = rng.uniform01();
        c.mutation_prob = rng.uniform01();
        auto const kids = reproduce(parents, c.population_size, c, space, rng);
        CHECK(kids.size() == c.population_size);
        for (auto const& k : kids) {
            CHECK(validate(k, space).ok());
        }
    }
    std::vector<Genotype> none;
    CHECK_THROWS_AS((void)reproduce(none, 1, RunConfig {}, space, rng), Error);
}

TEST_CASE("archive update")
{
    Rng rng(2);
    std::vector<ObjectiveVector> pts;
    for (int i = 0; i < 32; ++i) {
        pts.push_back({ rng.uniform01(), rng.uniform01() });
    }
    CHECK(update_archive(individuals(pts), 16).size() == 16);

    std::vector<ObjectiveVector> front;
    for (int i = 0; i < 10; ++i) {
        auto const x = rng.uniform01();
        front.push_back({ x, 1.0 - x });
    }
    CHECK(as_set(update_archive(individuals(front), 5)) == oracle_selection(front, 5));

    std::vector<ObjectiveVector> chain;
    for (int i = 0; i < 8; ++i) {
        chain.push_back({ double(7 - i), double(7 - i) });
    }
    auto const best = update_archive(individuals(chain), 4);
    CHECK(as_set(best) == std::multiset<ObjectiveVector> { { 0, 0 }, { 1, 1 }, { 2, 2 }, { 3, 3 } });
}

TEST_CASE("selection with all offspring predicted poor")
{
    SyntheticEvaluator const ev({ SearchSpaceSpec {}, 2 });
    Rng rng(3);
    std::vector<Individual> pop;
    for (int i = 0; i < 8; ++i) {
        auto g = random_genotype(ev.space(), rng);
        auto o = ev.evaluate(g);
        pop.push_back({ std::move(g), std::move(o), std::nullopt, {} });
    }
    std::vector<Genotype> offspring;
    for (int i = 0; i < 8; ++i) {
        offspring.push_back(random_genotype(ev.space(), rng));
    }
    RunConfig config;
    config.population_size = 8;
    AllPoor const poor;
    EvaluationCounter counter(ev);
    OffspringFeatures const features { FeatureMode::Genotype, &ev.space(), std::nullopt };
    auto const out = ce_selection(&poor.ensemble, offspring, pop, 1.0, config, features, counter, 1);
    CHECK(out.classifier_used);
    CHECK(out.evaluations == 0);
    CHECK(out.predicted_poor == 8);
    CHECK(as_set(out.population) == as_set(pop));
}

TEST_CASE("unreliable selection is a plain NSGA-II step")
{
    SyntheticEvaluator const ev({ SearchSpaceSpec {}, 2 });
    Rng rng(4);
    for (int t = 0; t < 10; ++t) {
        std::vector<Individual> pop;
        for (int i = 0; i < 10; ++i) {
            auto g = random_genotype(ev.space(), rng);
            auto o = ev.evaluate(g);
            pop.push_back({ std::move(g), std::move(o), std::nullopt, {} });
        }
        std::vector<Genotype> offspring;
        std::vector<ObjectiveVector> merged = objectives_of(pop);
        for (int i = 0; i < 10; ++i) {
            offspring.push_back(random_genotype(ev.space(), rng));
            merged.push_back(ev.evaluate(offspring.back()));
        }
        RunConfig config;
        config.population_size = 10;
        AllPoor const poor;
        EvaluationCounter counter(ev);
        OffspringFeatures const features { FeatureMode::Genotype, &ev.space(), std::nullopt };
        auto const out = ce_selection(&poor.ensemble, offspring, pop, 0.0, config, features, counter, 1);
        CHECK_FALSE(out.classifier_used);
        CHECK(out.evaluations == 20);
        CHECK(out.evaluated.size() == 10);
        CHECK(as_set(out.population) == oracle_selection(merged, 10));

        EvaluationCounter counter2(ev);
        auto const no_model = ce_selection(nullptr, offspring, pop, std::nullopt, config, features, counter2, 1);
        CHECK(as_set(no_model.population) == as_set(out.population));
    }
}

TEST_CASE("training pool")
{
    auto const arc = individuals({ { 0, 1 }, { 1, 0 } });
    auto evaluated = individuals({ { 2, 2 }, { 3, 3 }, { 4, 4 } }, 1);
    evaluated.push_back(arc[0]);
    auto const pool = training_pool(arc, evaluated, 4);
    REQUIRE(pool.size() == 4);
    CHECK(pool[0].objectives == arc[0].objectives);
    CHECK(pool[2].objectives == ObjectiveVector { 4, 4 });
    CHECK(pool[3].objectives == ObjectiveVector { 3, 3 });
    CHECK(training_pool(arc, evaluated, 0).size() == 2);
}

TEST_CASE("run with no iterations")
{
    SyntheticEvaluator ev({ SearchSpaceSpec {}, 2 });
    auto config = small_config();
    config.iterations = 0;
    auto const result = run(config, ev);
    CHECK(result.history.empty());
    CHECK(result.total_evaluations == config.population_size);
    CHECK_FALSE(result.final_archive.empty());
    CHECK(result.final_archive.size() <= config.archive_size);
    for (auto const& ind : result.final_archive) {
        CHECK(ind.provenance.origin == Origin::Initial);
    }
}

TEST_CASE("run is deterministic and elitist")
{
    SyntheticEvaluator ev({ SearchSpaceSpec {}, 2 });
    auto const config = small_config();
    auto const a = run(config, ev);
    auto const b = run(config, ev);
    REQUIRE(a.final_archive.size() == b.final_archive.size());
    for (std::size_t i = 0; i < a.final_archive.size(); ++i) {
        CHECK(a.final_archive[i].genotype == b.final_archive[i].genotype);
        CHECK(a.final_archive[i].objectives == b.final_archive[i].objectives);
    }
    REQUIRE(a.history.size() == config.iterations);
    for (std::size_t t = 0; t < a.history.size(); ++t) {
        CHECK(a.history[t].good == b.history[t].good);
        CHECK(a.history[t].auc == b.history[t].auc);
        CHECK(a.history[t].cumulative_evaluations == b.history[t].cumulative_evaluations);
    }
    CHECK(a.total_evaluations == b.total_evaluations);

    auto const full = run(RunConfig {}, ev);
    REQUIRE(full.initial_hypervolume);
    CHECK(*archive_hypervolume(full.final_archive, ev) >= *full.initial_hypervolume);
}

TEST_CASE("evaluation accounting")
{
    SyntheticEvaluator ev({ SearchSpaceSpec {}, 2 });
    auto config = small_config();
    auto const gated = run(config, ev);
    std::size_t admitted = 0;
    std::size_t sum = config.population_size;
    for (auto const& r : gated.history) {
        sum += r.evaluations;
        CHECK(r.cumulative_evaluations == sum);
        if (r.classifier_used) {
            CHECK(r.evaluations == r.predicted_good);
            admitted += r.predicted_good;
        } else {
            CHECK(r.evaluations == 2 * config.population_size);
            admitted += config.population_size;
        }
        CHECK(r.population.size() == config.population_size);
    }
    CHECK(gated.total_evaluations == sum);
    CHECK(gated.total_evaluations <= config.population_size * (config.iterations + 1) + admitted);

    config.classifier_gating = false;
    auto const always = run(config, ev);
    CHECK(always.total_evaluations == config.population_size * (1 + 2 * config.iterations));
    for (auto const& r : always.history) {
        CHECK_FALSE(r.classifier_used);
    }
}

TEST_CASE("objective features and proxy supernet")
{
    SupernetEvaluator ev({ SearchSpaceSpec {}, 2 });
    auto config = small_config();
    config.features = FeatureMode::Objectives;
    auto const result = run(config, ev);
    CHECK(result.history.size() == config.iterations);
    CHECK(result.supernet.epoch_counter > 0);
    CHECK(result.supernet.step_counter > 0);
}

TEST_CASE("random search")
{
    SyntheticEvaluator const ev({ SearchSpaceSpec {}, 2 });
    auto const a = random_search(ev, 100, 16, 5);
    auto const b = random_search(ev, 100, 16, 5);
    CHECK(a.hypervolume == b.hypervolume);
    CHECK(a.final_archive.size() <= 16);
    CHECK(*a.hypervolume > 0.0);
}
