// Copyright 2026 the fibredyn authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace fibredyn {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimMismatch : Error {
    using Error::Error;
};
struct ZeroState : Error {
    using Error::Error;
};
struct NonFinite : Error {
    using Error::Error;
};
struct NonHermitianInput : Error {
    using Error::Error;
};
struct StepFailure : Error {
    using Error::Error;
};
struct BoundaryTime : Error {
    using Error::Error;
};
struct SingularTrivialization : Error {
    using Error::Error;
};
struct SingularSeed : Error {
    using Error::Error;
};
struct SingularGauge : Error {
    using Error::Error;
};
struct InsufficientStates : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct ValidationError : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

} // namespace fibredyn
