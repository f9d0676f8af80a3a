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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cenas/cli.hpp"
#include "cenas/error.hpp"

int main(int argc, char** argv)
{
    CLI::App app { "Classification-assisted multi-objective architecture search" };
    app.require_subcommand(1);

    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    auto* search = app.add_subcommand("search", "run a search and write its artifacts");
    search->add_option("--config", config, "JSON run configuration")->required();
    search->add_option("--out", out, "output directory")->required();
    search->add_option("--seed", seed, "overrides the configured seed");

    std::string run_dir;
    auto* report = app.add_subcommand("report", "summarize a finished run");
    report->add_option("--run", run_dir, "run directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (search->parsed()) {
            auto const manifest = cenas::cli::command_search(config, out, seed);
            for (auto const& a : manifest.artifacts) {
                std::cout << a.sha256 << "  " << a.name << "\n";
            }
        } else if (report->parsed()) {
            std::cout << cenas::cli::command_report(run_dir);
        }
    } catch (cenas::Error const& e) {
        std::cerr << "cenas: " << e.what() << "\n";
        return 2;
    } catch (std::exception const& e) {
        std::cerr << "cenas: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
