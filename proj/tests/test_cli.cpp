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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cenas/cli.hpp"
#include "cenas/csv.hpp"
#include "cenas/error.hpp"

using namespace cenas;
namespace fs = std::filesystem;

namespace {

auto temp_dir(std::string const& name) -> fs::path
{
    auto const dir = fs::temp_directory_path() / ("cenas_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

auto slurp(fs::path const& p) -> std::string
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write(fs::path const& p, std::string const& text)
{
    std::ofstream(p, std::ios::binary) << text;
}

auto lines(std::string const& text) -> std::vector<std::string>
{
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        out.push_back(line);
    }
    return out;
}

auto code_of(auto&& f) -> ErrorCode
{
    try {
        f();
    } catch (Error const& e) {
        return e.code();
    }
    return ErrorCode::InvalidArgument;
}

} // namespace

TEST_CASE("empty config gives the defaults")
{
    auto const parsed = cli::parse_config_json(nlohmann::json::object());
    auto const& c = parsed.run;
    CHECK(c.population_size == 32);
    CHECK(c.iterations == 50);
    CHECK(c.ensemble_size == 20);
    CHECK(c.n_c == 3);
    CHECK(c.archive_size == 16);
    CHECK(c.crossover_prob == 0.5);
    CHECK(c.mutation_prob == 0.5);
    CHECK(c.supernet_epochs == 10);
    CHECK(c.training_size == 50);
    CHECK(parsed.evaluator.kind == cli::EvaluatorKind::Synthetic);
    CHECK(parsed.evaluator.problem.objectives == 2);
}

TEST_CASE("config errors")
{
    auto parse = [](char const* text) { return cli::parse_config_json(nlohmann::json::parse(text)); };
    CHECK_THROWS_WITH_AS(parse(R"({"population_size": 3})"), doctest::Contains("population_size below minimum 4"), Error);
    CHECK_THROWS_WITH_AS(parse(R"({"th_auc": 0.4})"), doctest::Contains("(0.5, 1]"), Error);
    CHECK_THROWS_WITH_AS(parse(R"({"populaton_size": 8})"), doctest::Contains("populaton_size: unknown key"), Error);
    CHECK_THROWS_WITH_AS(parse(R"({"svm": {"gama": 1}})"), doctest::Contains("svm.gama"), Error);
    CHECK_THROWS_WITH_AS(parse(R"({"evaluator": {"space": {"nodes": 2}}})"), doctest::Contains("evaluator.space.nodes"), Error);
    CHECK_THROWS_WITH_AS(parse(R"({"iterations": -1})"), doctest::Contains("iterations"), Error);
    CHECK_THROWS_WITH_AS(parse(R"({"evaluator": {"kind": "tabular"}})"), doctest::Contains("table"), Error);
    CHECK(code_of([&] { (void)parse(R"({"features": "pixels"})"); }) == ErrorCode::ConfigError);
    CHECK(code_of([&] { (void)parse(R"([])"); }) == ErrorCode::ConfigError);

    auto const dir = temp_dir("bad");
    write(dir / "c.json", "{ not json");
    CHECK(code_of([&] { (void)cli::parse_config(dir / "c.json"); }) == ErrorCode::ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("config overrides")
{
    auto const parsed = cli::parse_config_json(nlohmann::json::parse(R"({
        "population_size": 8, "iterations": 3, "archive_size": 4, "th_auc": 0.8,
        "features": "objectives", "classifier_gating": false, "alpha_ladder": [0.1, 0.3],
        "svm": {"kernel": "linear", "c": 2.5, "gamma": 0.5, "balanced": false},
        "evaluator": {"kind": "proxy_supernet", "objectives": 3, "space": {"nodes_per_cell": 3}}
    })"));
    CHECK(parsed.run.population_size == 8);
    CHECK(parsed.run.features == FeatureMode::Objectives);
    CHECK_FALSE(parsed.run.classifier_gating);
    CHECK(parsed.run.alpha_ladder == std::vector<double> { 0.1, 0.3 });
    CHECK(parsed.run.svm.kernel == KernelKind::Linear);
    CHECK(parsed.run.svm.c == 2.5);
    CHECK(*parsed.run.svm.gamma == 0.5);
    CHECK(parsed.evaluator.kind == cli::EvaluatorKind::ProxySupernet);
    CHECK(parsed.evaluator.problem.objectives == 3);
    CHECK(parsed.evaluator.problem.space.nodes_per_cell == 3);
    auto const ev = cli::make_evaluator(parsed.evaluator);
    CHECK(ev->kind() == "proxy_supernet");
    CHECK(ev->objective_count() == 3);
}

TEST_CASE("search writes every artifact")
{
    auto const dir = temp_dir("search");
    write(dir / "config.json", "{}");
    auto const manifest = cli::command_search(dir / "config.json", dir / "run", std::nullopt);
    for (auto const* name : { "front.csv", "history.jsonl", "metrics.json", "tradeoff.json", "front.svg", "manifest.json" }) {
        CHECK(fs::is_regular_file(dir / "run" / name));
    }
    REQUIRE(manifest.artifacts.size() == 5);
    for (auto const& a : manifest.artifacts) {
        CHECK(a.sha256 == cli::sha256_hex(slurp(dir / "run" / a.name)));
    }
    auto const history = lines(slurp(dir / "run" / "history.jsonl"));
    CHECK(history.size() == 50);

    // Rows of front.csv are mutually non-dominated in the raw minimized space.
    auto const rows = csv::parse(slurp(dir / "run" / "front.csv"));
    REQUIRE(rows.size() >= 2);
    CHECK(rows[0] == std::vector<std::string> { "genotype", "obj_1", "obj_2" });
    std::vector<ObjectiveVector> points;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        points.push_back({ std::stod(rows[r][1]), std::stod(rows[r][2]) });
    }
    for (auto const& a : points) {
        for (auto const& b : points) {
            CHECK_FALSE(dominates(a, b));
        }
    }

    auto const metrics = nlohmann::json::parse(slurp(dir / "run" / "metrics.json"));
    CHECK(metrics.at("timing").size() == 1);
    CHECK(metrics.at("total_evaluations").get<std::size_t>() == nlohmann::json::parse(history.back()).at("cumulative_evaluations").get<std::size_t>());

    auto const svg = slurp(dir / "run" / "front.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<circle") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("search is reproducible")
{
    auto const dir = temp_dir("repro");
    write(dir / "config.json", R"({"iterations": 5, "seed": 3})");
    (void)cli::command_search(dir / "config.json", dir / "a", std::nullopt);
    (void)cli::command_search(dir / "config.json", dir / "b", std::nullopt);
    (void)cli::command_search(dir / "config.json", dir / "c", 4);
    for (auto const* name : { "front.csv", "history.jsonl", "tradeoff.json", "front.svg" }) {
        CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));
    }
    CHECK(slurp(dir / "a" / "history.jsonl") != slurp(dir / "c" / "history.jsonl"));
    fs::remove_all(dir);
}

TEST_CASE("one iteration, three objectives")
{
    auto const dir = temp_dir("one");
    write(dir / "config.json", R"({"iterations": 1, "evaluator": {"objectives": 3}})");
    (void)cli::command_search(dir / "config.json", dir / "run", std::nullopt);
    CHECK(lines(slurp(dir / "run" / "history.jsonl")).size() == 1);
    auto const svg = slurp(dir / "run" / "front.svg");
    // One panel per objective pair.
    std::size_t panels = 0;
    for (auto at = svg.find("<g "); at != std::string::npos; at = svg.find("<g ", at + 1)) {
        ++panels;
    }
    CHECK(panels == 3);
    fs::remove_all(dir);
}

TEST_CASE("tabular search")
{
    auto const dir = temp_dir("tabular");
    // Every genotype of a one-node, two-op, one-cell space.
    std::string table = "genotype,obj_1,obj_2\r\n";
    for (int bits = 0; bits < 16; ++bits) {
        auto bit = [&](int i) { return (bits >> i) & 1; };
        auto const text = std::to_string(bit(0)) + "," + std::to_string(bit(1)) + "|" + std::to_string(bit(2)) + "," + std::to_string(bit(3));
        auto const accuracy = 0.5 + 0.1 * (bit(2) + bit(3)) + 0.01 * bits;
        auto const size = 1.0 + bit(2) + bit(3) + 0.1 * bit(0);
        table += csv::format_row({ text, std::to_string(accuracy), std::to_string(size) });
    }
    write(dir / "table.csv", table);
    write(dir / "meta.json", R"({"directions": ["maximize", "minimize"],
        "space": {"num_normal_cells": 1, "num_reduction_cells": 0, "nodes_per_cell": 1, "operation_set": ["a", "b"]}})");
    write(dir / "config.json", R"({"population_size": 8, "archive_size": 4, "iterations": 3,
        "evaluator": {"kind": "tabular", "table": "table.csv", "sidecar": "meta.json"}})");
    (void)cli::command_search(dir / "config.json", dir / "run", std::nullopt);
    auto const rows = csv::parse(slurp(dir / "run" / "front.csv"));
    REQUIRE(rows.size() >= 2);
    // Raw maximized accuracy is written back as measured.
    CHECK(std::stod(rows[1][1]) >= 0.5);
    fs::remove_all(dir);
}

TEST_CASE("report")
{
    auto const dir = temp_dir("report");
    write(dir / "config.json", R"({"iterations": 6})");
    (void)cli::command_search(dir / "config.json", dir / "run", std::nullopt);
    auto const text = cli::command_report(dir / "run");
    auto const out = lines(text);
    auto const history = lines(slurp(dir / "run" / "history.jsonl"));
    // Header, one line per iteration, then the preferred solutions.
    REQUIRE(out.size() >= 1 + history.size() + 1);
    for (std::size_t t = 0; t < history.size(); ++t) {
        auto const r = nlohmann::json::parse(history[t]);
        std::istringstream row(out[t + 1]);
        std::size_t iteration = 0;
        std::size_t good = 0;
        std::size_t poor = 0;
        std::size_t total = 0;
        row >> iteration >> good >> poor >> total;
        CHECK(iteration == r.at("iteration").get<std::size_t>());
        CHECK(good == r.at("good").get<std::size_t>());
        CHECK(poor == r.at("poor").get<std::size_t>());
        CHECK(total == good + poor);
    }
    CHECK(text.find("preferred") != std::string::npos);

    fs::remove(dir / "run" / "history.jsonl");
    CHECK(code_of([&] { (void)cli::command_report(dir / "run"); }) == ErrorCode::MissingArtifact);
    fs::remove_all(dir);
}
