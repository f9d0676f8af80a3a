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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "cenas/classifier.hpp"
#include "cenas/cli.hpp"
#include "cenas/engine.hpp"
#include "cenas/error.hpp"
#include "cenas/evaluator.hpp"
#include "cenas/labeling.hpp"
#include "cenas/pareto.hpp"
#include "cenas/refpoints.hpp"
#include "cenas/tradeoff.hpp"
#include "oracles.hpp"

using namespace cenas;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

auto seconds_since(Clock::time_point start) -> double
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

auto random_point(Rng& rng, std::size_t m, bool grid) -> ObjectiveVector
{
    std::vector<double> v(m);
    for (auto& x : v) {
        x = grid ? static_cast<double>(rng.uniform_index(4)) : rng.uniform01();
    }
    return ObjectiveVector(v);
}

auto to_point(ObjectiveVector const& x) -> oracle::Point
{
    return { x.begin(), x.end() };
}

auto median(std::vector<double> v) -> double
{
    std::sort(v.begin(), v.end());
    auto const n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

auto sorting_oracle() -> Outcome
{
    auto const start = Clock::now();
    Rng rng(101);
    std::size_t mismatches = 0;
    for (int t = 0; t < 200; ++t) {
        std::size_t const ms[] = { 2, 3, 5 };
        auto const m = ms[t % 3];
        auto const n = 1 + rng.uniform_index(40);
        std::vector<ObjectiveVector> pop;
        std::vector<oracle::Point> raw;
        for (std::size_t i = 0; i < n; ++i) {
            pop.push_back(random_point(rng, m, t % 2 == 0));
            raw.push_back(to_point(pop.back()));
        }
        auto const got = fast_nondominated_sort(pop);
        auto const want = oracle::iterated_removal(raw);
        bool same = got.fronts.size() == want.size();
        for (std::size_t f = 0; same && f < want.size(); ++f) {
            same = std::set<std::size_t>(got.fronts[f].begin(), got.fronts[f].end()) == want[f];
        }
        mismatches += same ? 0 : 1;
    }
    auto const elapsed = seconds_since(start);
    return { mismatches == 0 && elapsed < 5.0, fmt::format("{} mismatches in 200 populations, {:.3f} s", mismatches, elapsed) };
}

auto alpha_reduction() -> Outcome
{
    Rng rng(102);
    std::size_t disagreements = 0;
    for (std::size_t m : { 2U, 3U, 5U }) {
        for (int n = 0; n < 10000; ++n) {
            auto const grid = n % 2 == 0;
            auto const a = random_point(rng, m, grid);
            auto const b = random_point(rng, m, grid);
            disagreements += alpha_dominates(a, b, 0.0) != dominates(a, b) ? 1 : 0;
        }
    }
    // Growing alpha only grows the dominated region.
    std::size_t violations = 0;
    std::size_t witnessed = 0;
    for (int n = 0; n < 1000; ++n) {
        auto const m = std::size_t { 2 } + rng.uniform_index(2);
        auto const x = random_point(rng, m, false);
        auto const y = random_point(rng, m, false);
        auto a = rng.uniform01();
        auto b = rng.uniform01();
        if (a > b) {
            std::swap(a, b);
        }
        if (alpha_dominates(x, y, a)) {
            ++witnessed;
            violations += alpha_dominates(x, y, b) ? 0 : 1;
        }
    }
    return { disagreements == 0 && violations == 0,
        fmt::format("{} disagreements on 3x10^4 pairs; {} containment violations over {} dominated triples", disagreements, violations, witnessed) };
}

auto imbalance_regulation() -> Outcome
{
    Rng rng(103);
    std::size_t archives = 0;
    std::size_t violations = 0;
    std::size_t exhausted = 0;
    std::size_t attempts = 0;
    while (archives < 50 && attempts < 100000) {
        ++attempts;
        auto const m = std::size_t { 2 } + rng.uniform_index(2);
        ReferenceSet refs;
        auto const n_refs = 1 + rng.uniform_index(3);
        for (std::size_t r = 0; r < n_refs; ++r) {
            refs.points.push_back(random_point(rng, m, false));
            refs.source.push_back(ReferenceSource::Center);
            refs.member.push_back(std::nullopt);
        }
        std::vector<ObjectiveVector> archive;
        auto const n = 10 + rng.uniform_index(30);
        for (std::size_t i = 0; i < n; ++i) {
            archive.push_back(random_point(rng, m, false));
        }
        auto const base = label_samples(refs, archive, 0.0);
        auto const good = static_cast<std::size_t>(std::count_if(base.begin(), base.end(), [](auto const& s) { return s.good; }));
        auto const poor = n - good;
        if (good == 0 || poor == 0) {
            continue;
        }
        auto const ir = static_cast<double>(std::max(good, poor)) / static_cast<double>(std::min(good, poor));
        if (ir <= default_ir_threshold) {
            continue;
        }
        ++archives;
        auto const r = regulate_imbalance(refs, archive, default_ir_threshold, default_alpha_ladder());
        if (!(r.imbalance <= default_ir_threshold || r.exhausted)) {
            ++violations;
        }
        exhausted += r.exhausted ? 1 : 0;
        // Minority good: the good count may only grow along the schedule.
        auto const growing = good < poor;
        for (std::size_t s = 1; s < r.trace.size(); ++s) {
            auto const up = r.trace[s].good >= r.trace[s - 1].good;
            auto const down = r.trace[s].good <= r.trace[s - 1].good;
            if (growing ? !up : !down) {
                ++violations;
            }
        }
    }
    return { archives == 50 && violations == 0,
        fmt::format("{} archives, {} violations, {} flagged exhausted", archives, violations, exhausted) };
}

auto auc_oracle() -> Outcome
{
    Rng rng(104);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        // Ensemble of threshold members on one feature: the vote score of x
        // is the share of thresholds below it, which produces ties.
        DominanceEnsemble ens;
        auto const k = 1 + rng.uniform_index(20);
        for (std::size_t i = 0; i < k; ++i) {
            MarginClassifier m;
            m.kernel = KernelKind::Linear;
            m.support_vectors = { { 1.0 } };
            m.alphas = { 1.0 };
            m.labels = { 1.0 };
            m.bias = -static_cast<double>(rng.uniform_index(5));
            ens.members.push_back(m);
        }
        std::vector<Example> validation;
        std::vector<double> scores;
        std::vector<bool> labels;
        auto const n = 4 + rng.uniform_index(40);
        for (std::size_t i = 0; i < n; ++i) {
            auto const x = static_cast<double>(rng.uniform_index(6)) + 0.5;
            auto const good = i == 0 || (i != 1 && rng.bernoulli(0.5));
            validation.push_back({ { x }, good });
            scores.push_back(ens.predict(validation.back().features).score);
            labels.push_back(good);
        }
        worst = std::max(worst, std::abs(auc(ens, validation) - oracle::pairwise_auc(scores, labels)));
    }
    std::vector<double> const hi { 0.9, 0.8, 0.7 };
    std::vector<double> const lo { 0.3, 0.2 };
    std::vector<double> const flat { 0.4, 0.4, 0.4 };
    auto const perfect = auc_from_scores(hi, lo);
    auto const equal = auc_from_scores(flat, flat);
    return { worst <= 1e-12 && perfect == 1.0 && equal == 0.5,
        fmt::format("max |auc - oracle| = {:.3g} over 100 sets; perfect = {}, all-equal = {}", worst, perfect, equal) };
}

auto centroid_example() -> Outcome
{
    std::vector<ObjectiveVector> const members { { 8, 4, 5 }, { 10, 2, 3 } };
    auto const c = cluster_centroid(members);
    return { c == ObjectiveVector { 9, 3, 4 }, fmt::format("centroid = ({}, {}, {})", c[0], c[1], c[2]) };
}

auto connection_oracle() -> Outcome
{
    SearchSpaceSpec const space;
    Rng rng(106);
    double worst = 0.0;
    double worst_sum = 0.0;
    for (int t = 0; t < 100; ++t) {
        std::vector<Genotype> archive;
        auto const n = 1 + rng.uniform_index(10);
        for (std::size_t i = 0; i < n; ++i) {
            archive.push_back(i > 0 && rng.bernoulli(0.5) ? mutate(archive[rng.uniform_index(i)], space, rng) : random_genotype(space, rng));
        }
        auto const want = oracle::connection_share(archive);
        double sum = 0.0;
        for (auto const& [k, p] : want) {
            auto const [position, column, input] = k;
            auto const got = connection_probability(archive, ConnectionKey { position, column, input });
            worst = std::max(worst, std::abs(got - p));
        }
        for (auto const& [k, p] : connection_probabilities(archive)) {
            sum += p;
        }
        worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    }
    return { worst <= 1e-12 && worst_sum <= 1e-9,
        fmt::format("max |p - count| = {:.3g}, max |sum - 1| = {:.3g} over 100 archives", worst, worst_sum) };
}

auto genotype_safety() -> Outcome
{
    SearchSpaceSpec const space;
    Rng rng(107);
    std::vector<Genotype> pool;
    for (int i = 0; i < 8; ++i) {
        pool.push_back(random_genotype(space, rng));
    }
    std::size_t violations = 0;
    for (int n = 0; n < 10000; ++n) {
        auto const a = rng.uniform_index(pool.size());
        Genotype child;
        switch (n % 3) {
        case 0: child = mutate_hidden_state(pool[a], space, rng); break;
        case 1: child = mutate_operation(pool[a], space, rng); break;
        default: child = crossover(pool[a], pool[rng.uniform_index(pool.size())], rng); break;
        }
        violations += validate(child, space).violations.size();
        pool[rng.uniform_index(pool.size())] = child;
    }
    std::size_t round_trip_failures = 0;
    for (int n = 0; n < 1000; ++n) {
        auto const g = random_genotype(space, rng);
        round_trip_failures += decode_text(encode_text(g), space) == g ? 0 : 1;
    }
    return { violations == 0 && round_trip_failures == 0,
        fmt::format("{} violations over 10^4 operators, {} round-trip failures over 10^3", violations, round_trip_failures) };
}

auto classifier_competence() -> Outcome
{
    auto const start = Clock::now();
    Rng rng(108);
    std::vector<Example> clouds;
    while (clouds.size() < 100) {
        auto const x = rng.uniform01() * 2.0 - 0.5;
        auto const y = rng.uniform01() * 2.0 - 0.5;
        auto const side = (x + y - 1.0) / std::sqrt(2.0);
        if (std::abs(side) >= 0.25) {
            clouds.push_back({ { x, y }, side < 0.0 });
        }
    }
    auto train_accuracy = [](MarginClassifier const& clf, std::vector<Example> const& data) {
        double right = 0.0;
        for (auto const& e : data) {
            right += clf.predict(e.features) == e.good ? 1.0 : 0.0;
        }
        return right / static_cast<double>(data.size());
    };
    SvmHyper linear;
    linear.kernel = KernelKind::Linear;
    auto const clouds_acc = train_accuracy(train_base(clouds, linear), clouds);

    std::vector<Example> const xor_data {
        { { 0.0, 0.0 }, false }, { { 1.0, 1.0 }, false }, { { 0.0, 1.0 }, true }, { { 1.0, 0.0 }, true } };
    SvmHyper rbf;
    rbf.gamma = 2.0;
    rbf.c = 10.0;
    auto const xor_acc = train_accuracy(train_base(xor_data, rbf), xor_data);

    // Dominance labels against three reference points on a front.
    std::vector<oracle::Point> const refs { { 0.2, 0.6 }, { 0.4, 0.4 }, { 0.6, 0.2 } };
    std::vector<LabeledSample> samples;
    for (std::size_t i = 0; i < 200; ++i) {
        oracle::Point const x { rng.uniform01(), rng.uniform01() };
        bool good = true;
        for (auto const& r : refs) {
            good = good && !oracle::dominates(r, x);
        }
        samples.push_back({ ObjectiveVector(x), good, 0.0, i });
    }
    auto const split = split_train_val(samples, rng);
    auto const ens = train_ensemble(examples_from(split.train), 20, SvmHyper {}, rng);
    auto const held_out = auc(ens, examples_from(split.validation));
    auto const elapsed = seconds_since(start);
    return { clouds_acc == 1.0 && xor_acc == 1.0 && held_out >= 0.9 && elapsed < 10.0,
        fmt::format("clouds acc {}, xor acc {}, ensemble held-out auc {:.4f}, {:.3f} s", clouds_acc, xor_acc, held_out, elapsed) };
}

auto end_to_end() -> Outcome
{
    auto const start = Clock::now();
    SyntheticEvaluator ev({ SearchSpaceSpec {}, 2 });
    std::vector<double> gated_hv;
    std::vector<double> always_hv;
    std::vector<double> random_hv;
    std::size_t gated_evals = 0;
    std::size_t always_evals = 0;
    for (std::uint64_t seed = 0; seed < 11; ++seed) {
        RunConfig config;
        config.seed = seed;
        auto const gated = run(config, ev);
        config.classifier_gating = false;
        auto const always = run(config, ev);
        auto const random = random_search(ev, gated.total_evaluations, config.archive_size, seed + 1000);
        gated_hv.push_back(*archive_hypervolume(gated.final_archive, ev));
        always_hv.push_back(*archive_hypervolume(always.final_archive, ev));
        random_hv.push_back(*random.hypervolume);
        gated_evals += gated.total_evaluations;
        always_evals += always.total_evaluations;
    }
    auto const g = median(gated_hv);
    auto const a = median(always_hv);
    auto const r = median(random_hv);
    auto const ratio = static_cast<double>(gated_evals) / static_cast<double>(always_evals);
    auto const elapsed = seconds_since(start);
    auto const beats_random = g >= 1.05 * r;
    auto const saves = ratio <= 0.70;
    auto const keeps_quality = g >= a;
    return { beats_random && saves && keeps_quality && elapsed < 120.0,
        fmt::format("median HV gated {:.4f} vs random {:.4f} ({:+.1f}%) [{}]; evaluations {} vs {} (ratio {:.3f}) [{}]; "
                    "median HV vs always-evaluate {:.4f} ({:+.2f}%) [{}]; {:.1f} s",
            g, r, 100.0 * (g / r - 1.0), beats_random ? "ok" : "short", gated_evals, always_evals, ratio, saves ? "ok" : "over",
            a, 100.0 * (g / a - 1.0), keeps_quality ? "ok" : "below", elapsed) };
}

auto tradeoff_knee() -> Outcome
{
    std::vector<ObjectiveVector> const front { { 0.3, 2.1 }, { 0.6, 1.8 }, { 0.9, 1.5 }, { 1.0, 1.0 }, { 1.5, 0.9 }, { 1.8, 0.6 },
        { 2.1, 0.3 } };
    std::vector<oracle::Point> raw;
    for (auto const& p : front) {
        raw.push_back(to_point(p));
    }
    auto const report = select_preferred(front);
    auto const want = oracle::tradeoff_values(raw, report.m_neighbors);
    double worst = 0.0;
    for (std::size_t i = 0; i < front.size(); ++i) {
        worst = std::max(worst, std::abs(report.values[i] - want[i]));
    }
    auto const exact = report.preferred == std::vector<std::size_t> { 3 } && !report.fallback;
    return { exact && worst <= 1e-9, fmt::format("preferred = {{{}}}{}, max |value - oracle| = {:.3g}", fmt::join(report.preferred, ","),
                                         report.fallback ? " (fallback)" : "", worst) };
}

auto slurp(fs::path const& p) -> std::string
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

auto determinism() -> Outcome
{
    auto const dir = fs::temp_directory_path() / "cenas_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "config.json") << R"({"seed": 7})";
    (void)cli::command_search(dir / "config.json", dir / "a", std::nullopt);
    (void)cli::command_search(dir / "config.json", dir / "b", std::nullopt);
    auto const front = slurp(dir / "a" / "front.csv") == slurp(dir / "b" / "front.csv");
    auto const history = slurp(dir / "a" / "history.jsonl") == slurp(dir / "b" / "history.jsonl");
    auto const digest = cli::sha256_hex(slurp(dir / "a" / "front.csv"));
    fs::remove_all(dir);
    return { front && history,
        fmt::format("front.csv {}, history.jsonl {} (front sha256 {}...)", front ? "identical" : "differs", history ? "identical" : "differs",
            digest.substr(0, 12)) };
}

} // namespace

int main()
{
    struct Criterion {
        int id;
        char const* name;
        std::function<Outcome()> check;
    };
    std::vector<Criterion> const criteria {
        { 1, "sorting matches iterated-removal oracle", sorting_oracle },
        { 2, "alpha = 0 reduces to dominance; alpha monotonicity", alpha_reduction },
        { 3, "imbalance regulation", imbalance_regulation },
        { 4, "auc matches pairwise enumeration", auc_oracle },
        { 5, "centroid worked example", centroid_example },
        { 6, "connection probability matches counting", connection_oracle },
        { 7, "genotype safety and round trip", genotype_safety },
        { 8, "classifier competence", classifier_competence },
        { 9, "end-to-end efficiency on the synthetic problem", end_to_end },
        { 10, "trade-off knee", tradeoff_knee },
        { 11, "determinism of run artifacts", determinism },
    };
    int failed = 0;
    for (auto const& c : criteria) {
        Outcome outcome { false, "" };
        try {
            outcome = c.check();
        } catch (std::exception const& e) {
            outcome = { false, fmt::format("threw: {}", e.what()) };
        }
        failed += outcome.pass ? 0 : 1;
        fmt::print("{} [{}] {}: {}\n", outcome.pass ? "PASS" : "FAIL", c.id, c.name, outcome.detail);
    }
    fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}
