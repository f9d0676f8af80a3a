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

#ifndef CENAS_CSV_HPP
#define CENAS_CSV_HPP

#include <string>
#include <string_view>
#include <vector>

namespace cenas::csv {

// RFC-4180 records: fields containing ',', '"', CR or LF are quoted and
// embedded quotes doubled. Rows end with CRLF on output; LF or CRLF is
// accepted on input. Throws Error(ParseError) on an unterminated quote.
[[nodiscard]] auto parse(std::string_view text) -> std::vector<std::vector<std::string>>;

[[nodiscard]] auto quote(std::string_view field) -> std::string;
[[nodiscard]] auto format_row(std::vector<std::string> const& fields) -> std::string;

} // namespace cenas::csv

#endif
