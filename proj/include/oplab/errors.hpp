// Copyright 2026 The oplab Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace oplab {

/// Failure categories raised by the library. The numeric values are part of
/// the C API (see oplab.h) and must stay stable.
enum class ErrorCode : int {
    InvalidArgument = 1,
    DomainError = 2,
    NotProbability = 3,
    KernelDomainError = 4,
    ConditioningOnNull = 5,
    CapacityError = 6,
    DimMismatch = 7,
    OutOfSpectralRange = 8,
    NotAQuestion = 9,
    NotCommuting = 10,
    HorizonExceeded = 11,
    TooShort = 12,
    PartitionDoesNotCover = 13,
    ZeroCell = 14,
    NoAbsolutelyContinuousPart = 15,
    GridMismatch = 16,
    SingularFrame = 17,
    NoRealizableFrame = 18,
    NotHermitian = 19,
    NotDensity = 20,
    ParseError = 21,
    IoError = 22,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code), detail_(what) {}

    ErrorCode code() const noexcept { return code_; }
    /// message without the code name prefix
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, ErrorCode code, const std::string& what) {
    if (!condition) fail(code, what);
}

}  // namespace oplab
