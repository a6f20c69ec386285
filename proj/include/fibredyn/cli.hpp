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

#include <iosfwd>
#include <string>
#include <vector>

namespace fibredyn {

/// Command-line entry point:
///   run <scenario> [--out <path>] [--format json-lines|csv-series|human-summary]
///                  [--seed N] [--tol X] [--steps N]
///   list-checks
///   validate <scenario>
/// Exit code 0 when every check passes, 1 when some check failed, 2 on
/// usage, parse, or validation errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace fibredyn
