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

#ifndef CENAS_ERROR_HPP
#define CENAS_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace cenas {

enum class ErrorCode {
    InvalidSpace,
    NoAlternative,
    SpecMismatch,
    ParseError,
    DimensionMismatch,
    InvalidObjective,
    EmptyPopulation,
    SingleClass,
    PointBeyondReference,
    UnsupportedDimension,
    ClassTooSmall,
    SingleClassTrainingSet,
    SingleClassValidation,
    BootstrapExhausted,
    MissingEntry,
    EmptyArchive,
    NoGoodSolutions,
    ZeroGain,
    FrontTooSmall,
    InvalidArgument,
    ConfigError,
    MissingArtifact,
    IoError,
};

[[nodiscard]] auto to_string(ErrorCode code) -> std::string_view;

// All recoverable failures in the library are reported through this type;
// callers branch on code() rather than on the message text.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string const& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message)
        , code_(code)
    {
    }

    [[nodiscard]] auto code() const noexcept -> ErrorCode { return code_; }

private:
    ErrorCode code_;
};

// decode_text failures carry the byte offset of the offending character.
class ParseError : public Error {
public:
    ParseError(std::size_t position, std::string const& message)
        : Error(ErrorCode::ParseError, "at position " + std::to_string(position) + ": " + message)
        , position_(position)
    {
    }

    [[nodiscard]] auto position() const noexcept -> std::size_t { return position_; }

private:
    std::size_t position_;
};

} // namespace cenas

#endif
