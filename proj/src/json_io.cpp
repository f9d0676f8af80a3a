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

#include "cenas/json_io.hpp"

#include <fmt/format.h>

#include "cenas/error.hpp"

namespace cenas {

namespace {

auto count_field(nlohmann::json const& value, std::string const& key_path) -> std::size_t
{
    if (!value.is_number_unsigned()) {
        throw Error(ErrorCode::ConfigError, fmt::format("{}: expected a non-negative integer", key_path));
    }
    return value.get<std::size_t>();
}

} // namespace

auto space_from_json(nlohmann::json const& j, std::string const& path) -> SearchSpaceSpec
{
    if (!j.is_object()) {
        throw Error(ErrorCode::ConfigError, fmt::format("{}: expected an object", path));
    }
    SearchSpaceSpec space;
    for (auto const& [key, value] : j.items()) {
        auto const key_path = path + "." + key;
        if (key == "num_normal_cells") {
            space.num_normal_cells = count_field(value, key_path);
        } else if (key == "num_reduction_cells") {
            space.num_reduction_cells = count_field(value, key_path);
        } else if (key == "nodes_per_cell") {
            space.nodes_per_cell = count_field(value, key_path);
        } else if (key == "skip_patterns_enabled") {
            if (!value.is_boolean()) {
                throw Error(ErrorCode::ConfigError, fmt::format("{}: expected a boolean", key_path));
            }
            space.skip_patterns_enabled = value.get<bool>();
        } else if (key == "operation_set") {
            if (!value.is_array()) {
                throw Error(ErrorCode::ConfigError, fmt::format("{}: expected an array of names", key_path));
            }
            space.operation_set.clear();
            for (auto const& op : value) {
                if (!op.is_string()) {
                    throw Error(ErrorCode::ConfigError, fmt::format("{}: expected an array of names", key_path));
                }
                space.operation_set.push_back(op.get<std::string>());
            }
        } else {
            throw Error(ErrorCode::ConfigError, fmt::format("{}: unknown key", key_path));
        }
    }
    try {
        space.check();
    } catch (Error const& e) {
        throw Error(ErrorCode::ConfigError, fmt::format("{}: {}", path, e.what()));
    }
    return space;
}

auto space_to_json(SearchSpaceSpec const& space) -> nlohmann::json
{
    return {
        { "num_normal_cells", space.num_normal_cells },
        { "num_reduction_cells", space.num_reduction_cells },
        { "nodes_per_cell", space.nodes_per_cell },
        { "operation_set", space.operation_set },
        { "skip_patterns_enabled", space.skip_patterns_enabled },
    };
}

} // namespace cenas
