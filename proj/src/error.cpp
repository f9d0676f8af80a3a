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

#include "cenas/error.hpp"

namespace cenas {

auto to_string(ErrorCode code) -> std::string_view
{
    switch (code) {
    case ErrorCode::InvalidSpace: return "InvalidSpace";
    case ErrorCode::NoAlternative: return "NoAlternative";
    case ErrorCode::SpecMismatch: return "SpecMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidObjective: return "InvalidObjective";
    case ErrorCode::EmptyPopulation: return "EmptyPopulation";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::PointBeyondReference: return "PointBeyondReference";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::ClassTooSmall: return "ClassTooSmall";
    case ErrorCode::SingleClassTrainingSet: return "SingleClassTrainingSet";
    case ErrorCode::SingleClassValidation: return "SingleClassValidation";
    case ErrorCode::BootstrapExhausted: return "BootstrapExhausted";
    case ErrorCode::MissingEntry: return "MissingEntry";
    case ErrorCode::EmptyArchive: return "EmptyArchive";
    case ErrorCode::NoGoodSolutions: return "NoGoodSolutions";
    case ErrorCode::ZeroGain: return "ZeroGain";
    case ErrorCode::FrontTooSmall: return "FrontTooSmall";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::MissingArtifact: return "MissingArtifact";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

} // namespace cenas
