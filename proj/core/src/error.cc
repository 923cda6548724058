// Copyright 2026 The qwalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qwalk/error.h"

namespace qwalk {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument:
            return "InvalidArgument";
        case ErrorCode::OverflowPolicyViolation:
            return "OverflowPolicyViolation";
        case ErrorCode::ModeCollision:
            return "ModeCollision";
        case ErrorCode::DimensionMismatch:
            return "DimensionMismatch";
        case ErrorCode::NonUnitary:
            return "NonUnitary";
        case ErrorCode::EtaOutOfRange:
            return "EtaOutOfRange";
        case ErrorCode::IndexOutOfRange:
            return "IndexOutOfRange";
        case ErrorCode::UnsupportedSource:
            return "UnsupportedSource";
        case ErrorCode::DuplicateGateBin:
            return "DuplicateGateBin";
        case ErrorCode::SingularMatrix:
            return "SingularMatrix";
        case ErrorCode::NumericalInstability:
            return "NumericalInstability";
        case ErrorCode::ZeroHeraldRate:
            return "ZeroHeraldRate";
        case ErrorCode::CutoffTooSmall:
            return "CutoffTooSmall";
        case ErrorCode::ResourceBound:
            return "ResourceBound";
        case ErrorCode::LabelMismatch:
            return "LabelMismatch";
        case ErrorCode::NotNormalized:
            return "NotNormalized";
        case ErrorCode::ConfigInvalid:
            return "ConfigInvalid";
        case ErrorCode::IoError:
            return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {
}

}  // namespace qwalk
