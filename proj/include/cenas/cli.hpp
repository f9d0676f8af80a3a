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

#ifndef CENAS_CLI_HPP
#define CENAS_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cenas/engine.hpp"
#include "cenas/evaluator.hpp"
#include "cenas/tradeoff.hpp"

namespace cenas::cli {

enum class EvaluatorKind { Synthetic, Tabular, ProxySupernet };

struct EvaluatorDecl {
    EvaluatorKind kind { EvaluatorKind::Synthetic };
    SyntheticProblem problem;           // synthetic and proxy_supernet
    std::filesystem::path table;        // tabular; relative to the config file
    std::filesystem::path sidecar;

    [[nodiscard]] auto to_json() const -> nlohmann::json;
};

struct ParsedConfig {
    RunConfig run;
    EvaluatorDecl evaluator;
};

// Absent fields keep their defaults. Unknown keys, ill-typed values and
// out-of-range settings throw Error(ConfigError) naming the key path.
[[nodiscard]] auto parse_config(std::filesystem::path const& path) -> ParsedConfig;
[[nodiscard]] auto parse_config_json(nlohmann::json const& j, std::filesystem::path const& base_dir = {}) -> ParsedConfig;

[[nodiscard]] auto make_evaluator(EvaluatorDecl const& decl) -> std::unique_ptr<Evaluator>;

struct ArtifactDigest {
    std::string name;
    std::string sha256; // lowercase hex
};

struct RunManifest {
    std::filesystem::path config_path;
    nlohmann::json evaluator;
    std::filesystem::path output_directory;
    std::vector<ArtifactDigest> artifacts;

    [[nodiscard]] auto to_json() const -> nlohmann::json;
};

[[nodiscard]] auto sha256_hex(std::string const& bytes) -> std::string;

// Artifact renderers; all are deterministic functions of their inputs.
[[nodiscard]] auto render_front_csv(std::vector<Individual> const& front, Evaluator const& ev) -> std::string;
[[nodiscard]] auto render_history(std::vector<IterationRecord> const& history) -> std::string;
[[nodiscard]] auto render_tradeoff(std::vector<Individual> const& front) -> std::string;
[[nodiscard]] auto render_front_svg(std::vector<Individual> const& front, Evaluator const& ev,
    std::vector<std::size_t> const& highlighted) -> std::string;

// Runs the search and writes front.csv, history.jsonl, metrics.json,
// tradeoff.json, front.svg and manifest.json into out_dir.
auto command_search(std::filesystem::path const& config_path, std::filesystem::path const& out_dir,
    std::optional<std::uint64_t> seed) -> RunManifest;

// Per-iteration counts and the preferred solution. Throws MissingArtifact.
[[nodiscard]] auto command_report(std::filesystem::path const& run_dir) -> std::string;

} // namespace cenas::cli

#endif
