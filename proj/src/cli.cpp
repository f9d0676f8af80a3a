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

#include "cenas/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "cenas/csv.hpp"
#include "cenas/error.hpp"
#include "cenas/json_io.hpp"

namespace cenas::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void config_error(std::string const& key_path, std::string const& reason)
{
    throw Error(ErrorCode::ConfigError, fmt::format("{}: {}", key_path, reason));
}

auto as_count(json const& v, std::string const& key) -> std::size_t
{
    if (!v.is_number_unsigned()) {
        config_error(key, "expected a non-negative integer");
    }
    return v.get<std::size_t>();
}

auto as_real(json const& v, std::string const& key) -> double
{
    if (!v.is_number()) {
        config_error(key, "expected a number");
    }
    return v.get<double>();
}

auto as_bool(json const& v, std::string const& key) -> bool
{
    if (!v.is_boolean()) {
        config_error(key, "expected a boolean");
    }
    return v.get<bool>();
}

auto as_string(json const& v, std::string const& key) -> std::string
{
    if (!v.is_string()) {
        config_error(key, "expected a string");
    }
    return v.get<std::string>();
}

void require_object(json const& v, std::string const& key)
{
    if (!v.is_object()) {
        config_error(key, "expected an object");
    }
}

auto parse_svm(json const& j, SvmHyper svm) -> SvmHyper
{
    require_object(j, "svm");
    for (auto const& [key, v] : j.items()) {
        auto const path = "svm." + key;
        if (key == "kernel") {
            auto const name = as_string(v, path);
            if (name == "rbf") {
                svm.kernel = KernelKind::Rbf;
            } else if (name == "linear") {
                svm.kernel = KernelKind::Linear;
            } else {
                config_error(path, fmt::format("unknown kernel '{}'", name));
            }
        } else if (key == "gamma") {
            if (v.is_null()) {
                svm.gamma.reset();
            } else {
                svm.gamma = as_real(v, path);
            }
        } else if (key == "c") {
            svm.c = as_real(v, path);
        } else if (key == "balanced") {
            svm.balanced = as_bool(v, path);
        } else if (key == "standardize") {
            svm.standardize = as_bool(v, path);
        } else if (key == "tolerance") {
            svm.tolerance = as_real(v, path);
        } else if (key == "max_iterations") {
            svm.max_iterations = as_count(v, path);
        } else {
            config_error(path, "unknown key");
        }
    }
    return svm;
}

auto parse_evaluator(json const& j, fs::path const& base_dir) -> EvaluatorDecl
{
    require_object(j, "evaluator");
    EvaluatorDecl decl;
    if (j.contains("kind")) {
        auto const kind = as_string(j["kind"], "evaluator.kind");
        if (kind == "synthetic") {
            decl.kind = EvaluatorKind::Synthetic;
        } else if (kind == "tabular") {
            decl.kind = EvaluatorKind::Tabular;
        } else if (kind == "proxy_supernet") {
            decl.kind = EvaluatorKind::ProxySupernet;
        } else {
            config_error("evaluator.kind", fmt::format("unknown evaluator '{}'", kind));
        }
    }
    auto const tabular = decl.kind == EvaluatorKind::Tabular;
    for (auto const& [key, v] : j.items()) {
        auto const path = "evaluator." + key;
        if (key == "kind") {
            continue;
        }
        if (!tabular && key == "objectives") {
            decl.problem.objectives = as_count(v, path);
            if (decl.problem.objectives != 2 && decl.problem.objectives != 3) {
                config_error(path, "must be 2 or 3");
            }
        } else if (!tabular && key == "space") {
            decl.problem.space = space_from_json(v, path);
        } else if (tabular && key == "table") {
            decl.table = base_dir / as_string(v, path);
        } else if (tabular && key == "sidecar") {
            decl.sidecar = base_dir / as_string(v, path);
        } else {
            config_error(path, "unknown key");
        }
    }
    if (tabular && (decl.table.empty() || decl.sidecar.empty())) {
        config_error("evaluator", "tabular evaluator needs 'table' and 'sidecar'");
    }
    return decl;
}

auto read_file(fs::path const& path) -> std::string
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, fmt::format("cannot read {}", path.string()));
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(fs::path const& path, std::string const& bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << bytes;
    if (!out) {
        throw Error(ErrorCode::IoError, fmt::format("cannot write {}", path.string()));
    }
}

auto kind_name(EvaluatorKind kind) -> std::string
{
    switch (kind) {
    case EvaluatorKind::Synthetic: return "synthetic";
    case EvaluatorKind::Tabular: return "tabular";
    case EvaluatorKind::ProxySupernet: return "proxy_supernet";
    }
    return "synthetic";
}

auto optional_json(std::optional<double> const& v) -> json
{
    return v ? json(*v) : json(nullptr);
}

} // namespace

auto EvaluatorDecl::to_json() const -> json
{
    json j { { "kind", kind_name(kind) } };
    if (kind == EvaluatorKind::Tabular) {
        j["table"] = table.generic_string();
        j["sidecar"] = sidecar.generic_string();
    } else {
        j["objectives"] = problem.objectives;
        j["space"] = space_to_json(problem.space);
    }
    return j;
}

auto parse_config_json(json const& j, fs::path const& base_dir) -> ParsedConfig
{
    require_object(j, "config");
    ParsedConfig parsed;
    auto& run = parsed.run;
    for (auto const& [key, v] : j.items()) {
        if (key == "population_size") {
            run.population_size = as_count(v, key);
        } else if (key == "iterations") {
            run.iterations = as_count(v, key);
        } else if (key == "archive_size") {
            run.archive_size = as_count(v, key);
        } else if (key == "n_c") {
            run.n_c = as_count(v, key);
        } else if (key == "ensemble_size") {
            run.ensemble_size = as_count(v, key);
        } else if (key == "crossover_prob") {
            run.crossover_prob = as_real(v, key);
        } else if (key == "mutation_prob") {
            run.mutation_prob = as_real(v, key);
        } else if (key == "ir_threshold") {
            run.ir_threshold = as_real(v, key);
        } else if (key == "th_auc") {
            run.th_auc = as_real(v, key);
        } else if (key == "supernet_epochs") {
            run.supernet_epochs = as_count(v, key);
        } else if (key == "steps_per_epoch") {
            run.steps_per_epoch = as_count(v, key);
        } else if (key == "training_size") {
            run.training_size = as_count(v, key);
        } else if (key == "seed") {
            run.seed = as_count(v, key);
        } else if (key == "classifier_gating") {
            run.classifier_gating = as_bool(v, key);
        } else if (key == "features") {
            auto const mode = as_string(v, key);
            if (mode == "genotype") {
                run.features = FeatureMode::Genotype;
            } else if (mode == "objectives") {
                run.features = FeatureMode::Objectives;
            } else {
                config_error(key, fmt::format("unknown feature mode '{}'", mode));
            }
        } else if (key == "alpha_ladder") {
            if (!v.is_array()) {
                config_error(key, "expected an array of numbers");
            }
            run.alpha_ladder.clear();
            for (std::size_t i = 0; i < v.size(); ++i) {
                run.alpha_ladder.push_back(as_real(v[i], fmt::format("{}[{}]", key, i)));
            }
        } else if (key == "svm") {
            run.svm = parse_svm(v, run.svm);
        } else if (key == "evaluator") {
            parsed.evaluator = parse_evaluator(v, base_dir);
        } else {
            config_error(key, "unknown key");
        }
    }
    run.check();
    return parsed;
}

auto parse_config(fs::path const& path) -> ParsedConfig
{
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (json::exception const& e) {
        throw Error(ErrorCode::ConfigError, fmt::format("{}: {}", path.string(), e.what()));
    }
    return parse_config_json(j, path.parent_path());
}

auto make_evaluator(EvaluatorDecl const& decl) -> std::unique_ptr<Evaluator>
{
    switch (decl.kind) {
    case EvaluatorKind::Tabular:
        return std::make_unique<TabularEvaluator>(TabularEvaluator::from_files(decl.table, decl.sidecar));
    case EvaluatorKind::ProxySupernet:
        return std::make_unique<SupernetEvaluator>(decl.problem);
    case EvaluatorKind::Synthetic:
        break;
    }
    return std::make_unique<SyntheticEvaluator>(decl.problem);
}

auto RunManifest::to_json() const -> json
{
    json files = json::array();
    for (auto const& a : artifacts) {
        files.push_back({ { "name", a.name }, { "sha256", a.sha256 } });
    }
    return {
        { "config", config_path.generic_string() },
        { "evaluator", evaluator },
        { "output_directory", output_directory.generic_string() },
        { "artifacts", files },
    };
}

auto sha256_hex(std::string const& bytes) -> std::string
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::IoError, "sha256 failed");
    }
    std::string hex;
    for (unsigned int i = 0; i < length; ++i) {
        hex += fmt::format("{:02x}", digest[i]);
    }
    return hex;
}

auto render_front_csv(std::vector<Individual> const& front, Evaluator const& ev) -> std::string
{
    std::vector<std::string> header { "genotype" };
    for (std::size_t k = 1; k <= ev.objective_count(); ++k) {
        header.push_back(fmt::format("obj_{}", k));
    }
    auto text = csv::format_row(header);
    for (auto const& ind : front) {
        std::vector<std::string> row { encode_text(ind.genotype) };
        for (auto const v : ind.objectives.to_raw(ev.directions())) {
            row.push_back(fmt::format("{}", v));
        }
        text += csv::format_row(row);
    }
    return text;
}

auto render_history(std::vector<IterationRecord> const& history) -> std::string
{
    std::string text;
    for (auto const& r : history) {
        json const j {
            { "iteration", r.iteration },
            { "good", r.good },
            { "poor", r.poor },
            { "predicted_good", r.predicted_good },
            { "predicted_poor", r.predicted_poor },
            { "auc", optional_json(r.auc) },
            { "classifier_used", r.classifier_used },
            { "alpha_used", r.alpha_used },
            { "ladder_exhausted", r.ladder_exhausted },
            { "fallback", r.fallback.empty() ? json(nullptr) : json(r.fallback) },
            { "evaluations", r.evaluations },
            { "cumulative_evaluations", r.cumulative_evaluations },
            { "hypervolume", optional_json(r.hypervolume) },
        };
        text += j.dump() + "\n";
    }
    return text;
}

auto render_tradeoff(std::vector<Individual> const& front) -> std::string
{
    auto const points = objectives_of(front);
    json j;
    try {
        auto const report = select_preferred(points);
        j = {
            { "values", report.values },
            { "mu", report.mu },
            { "sigma", report.sigma },
            { "preferred", report.preferred },
            { "fallback", report.fallback },
            { "m_neighbors", report.m_neighbors },
        };
    } catch (Error const& e) {
        if (e.code() != ErrorCode::FrontTooSmall) {
            throw;
        }
        j = { { "error", std::string(to_string(e.code())) }, { "front_size", points.size() } };
    }
    return j.dump(2) + "\n";
}

auto render_front_svg(std::vector<Individual> const& front, Evaluator const& ev,
    std::vector<std::size_t> const& highlighted) -> std::string
{
    constexpr double panel = 320.0;
    constexpr double margin = 40.0;
    auto const m = ev.objective_count();
    std::vector<std::vector<double>> raw;
    for (auto const& ind : front) {
        raw.push_back(ind.objectives.to_raw(ev.directions()));
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            pairs.emplace_back(a, b);
        }
    }
    auto const columns = std::min<std::size_t>(pairs.size(), 3);
    auto const rows = (pairs.size() + columns - 1) / columns;
    auto const width = static_cast<double>(columns) * panel;
    auto const height = static_cast<double>(rows) * panel;

    std::string svg = fmt::format(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
        "<rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n",
        width, height);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        auto const [a, b] = pairs[p];
        auto const ox = static_cast<double>(p % columns) * panel;
        auto const oy = static_cast<double>(p / columns) * panel;
        auto const inner = panel - 2.0 * margin;
        auto bounds = [&](std::size_t k) {
            double lo = 0.0;
            double hi = 1.0;
            if (!raw.empty()) {
                lo = hi = raw.front()[k];
                for (auto const& r : raw) {
                    lo = std::min(lo, r[k]);
                    hi = std::max(hi, r[k]);
                }
            }
            if (hi == lo) {
                lo -= 0.5;
                hi += 0.5;
            }
            return std::pair { lo, hi };
        };
        auto const [xlo, xhi] = bounds(a);
        auto const [ylo, yhi] = bounds(b);
        svg += fmt::format("<g transform=\"translate({},{})\">\n", ox, oy);
        svg += fmt::format("<rect x=\"{0}\" y=\"{0}\" width=\"{1}\" height=\"{1}\" fill=\"none\" stroke=\"black\"/>\n", margin, inner);
        svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">obj_{}</text>\n",
            panel / 2.0, panel - 12.0, a + 1);
        svg += fmt::format("<text x=\"14\" y=\"{0}\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 {0})\">obj_{1}</text>\n",
            panel / 2.0, b + 1);
        svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"10\">{:.4g}</text>\n", margin, panel - margin + 14.0, xlo);
        svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"end\">{:.4g}</text>\n", panel - margin, panel - margin + 14.0, xhi);
        svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"end\">{:.4g}</text>\n", margin - 4.0, panel - margin, ylo);
        svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"end\">{:.4g}</text>\n", margin - 4.0, margin + 10.0, yhi);
        for (std::size_t i = 0; i < raw.size(); ++i) {
            auto const x = margin + (raw[i][a] - xlo) / (xhi - xlo) * inner;
            auto const y = panel - margin - (raw[i][b] - ylo) / (yhi - ylo) * inner;
            auto const hot = std::find(highlighted.begin(), highlighted.end(), i) != highlighted.end();
            svg += fmt::format("<circle cx=\"{:.3f}\" cy=\"{:.3f}\" r=\"{}\" fill=\"{}\"/>\n", x, y, hot ? 5 : 3, hot ? "red" : "steelblue");
        }
        svg += "</g>\n";
    }
    svg += "</svg>\n";
    return svg;
}

auto command_search(fs::path const& config_path, fs::path const& out_dir, std::optional<std::uint64_t> seed) -> RunManifest
{
    auto parsed = parse_config(config_path);
    if (seed) {
        parsed.run.seed = *seed;
    }
    auto evaluator = make_evaluator(parsed.evaluator);

    auto const start = std::chrono::steady_clock::now();
    auto const result = run(parsed.run, *evaluator);
    auto const wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::vector<std::size_t> preferred;
    try {
        preferred = select_preferred(objectives_of(result.final_archive)).preferred;
    } catch (Error const& e) {
        if (e.code() != ErrorCode::FrontTooSmall) {
            throw;
        }
    }

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw Error(ErrorCode::IoError, fmt::format("cannot create {}: {}", out_dir.string(), ec.message()));
    }

    json const metrics {
        { "seed", parsed.run.seed },
        { "iterations", result.history.size() },
        { "population_size", parsed.run.population_size },
        { "total_evaluations", result.total_evaluations },
        { "always_evaluate_budget", parsed.run.population_size * (1 + 2 * parsed.run.iterations) },
        { "initial_hypervolume", optional_json(result.initial_hypervolume) },
        { "final_hypervolume", optional_json(archive_hypervolume(result.final_archive, *evaluator)) },
        { "final_archive_size", result.final_archive.size() },
        { "timing", { { "wall_seconds", wall } } },
    };

    std::vector<std::pair<std::string, std::string>> const artifacts {
        { "front.csv", render_front_csv(result.final_archive, *evaluator) },
        { "history.jsonl", render_history(result.history) },
        { "metrics.json", metrics.dump(2) + "\n" },
        { "tradeoff.json", render_tradeoff(result.final_archive) },
        { "front.svg", render_front_svg(result.final_archive, *evaluator, preferred) },
    };

    RunManifest manifest;
    manifest.config_path = config_path;
    manifest.evaluator = parsed.evaluator.to_json();
    manifest.output_directory = out_dir;
    for (auto const& [name, bytes] : artifacts) {
        write_file(out_dir / name, bytes);
        manifest.artifacts.push_back({ name, sha256_hex(bytes) });
    }
    write_file(out_dir / "manifest.json", manifest.to_json().dump(2) + "\n");
    return manifest;
}

auto command_report(fs::path const& run_dir) -> std::string
{
    for (auto const* name : { "history.jsonl", "tradeoff.json", "front.csv" }) {
        if (!fs::is_regular_file(run_dir / name)) {
            throw Error(ErrorCode::MissingArtifact, fmt::format("{} not found in {}", name, run_dir.string()));
        }
    }
    std::string out = fmt::format("{:>9} {:>6} {:>6} {:>6} {:>11} {:>12}\n", "iteration", "good", "poor", "total", "evaluations", "hypervolume");
    std::istringstream history(read_file(run_dir / "history.jsonl"));
    std::string line;
    while (std::getline(history, line)) {
        if (line.empty()) {
            continue;
        }
        json r;
        try {
            r = json::parse(line);
        } catch (json::exception const& e) {
            throw Error(ErrorCode::ParseError, fmt::format("history.jsonl: {}", e.what()));
        }
        auto const good = r.at("good").get<std::size_t>();
        auto const poor = r.at("poor").get<std::size_t>();
        auto const hv = r.at("hypervolume").is_null() ? std::string("-") : fmt::format("{:.6f}", r.at("hypervolume").get<double>());
        out += fmt::format("{:>9} {:>6} {:>6} {:>6} {:>11} {:>12}\n", r.at("iteration").get<std::size_t>(), good, poor, good + poor,
            r.at("evaluations").get<std::size_t>(), hv);
    }

    auto const front = csv::parse(read_file(run_dir / "front.csv"));
    auto const tradeoff = json::parse(read_file(run_dir / "tradeoff.json"));
    if (tradeoff.contains("error")) {
        out += fmt::format("preferred: none ({})\n", tradeoff["error"].get<std::string>());
        return out;
    }
    auto const fallback = tradeoff.at("fallback").get<bool>();
    for (auto const& i : tradeoff.at("preferred")) {
        auto const row = i.get<std::size_t>() + 1;
        if (row >= front.size()) {
            throw Error(ErrorCode::ParseError, "tradeoff.json refers past the end of front.csv");
        }
        std::string objectives;
        for (std::size_t k = 1; k < front[row].size(); ++k) {
            objectives += (k > 1 ? ", " : "") + front[row][k];
        }
        out += fmt::format("preferred{}: {} ({}) trade-off {:.6g}\n", fallback ? " (highest value)" : "", front[row][0], objectives,
            tradeoff.at("values").at(i.get<std::size_t>()).get<double>());
    }
    return out;
}

} // namespace cenas::cli
