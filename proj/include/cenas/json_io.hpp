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

#ifndef CENAS_JSON_IO_HPP
#define CENAS_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "cenas/genotype.hpp"

namespace cenas {

// Reads a SearchSpaceSpec object; absent fields keep their defaults. Unknown
// keys and ill-typed values throw Error(ConfigError) naming `path`.
[[nodiscard]] auto space_from_json(nlohmann::json const& j, std::string const& path) -> SearchSpaceSpec;
[[nodiscard]] auto space_to_json(SearchSpaceSpec const& space) -> nlohmann::json;

} // namespace cenas

#endif
