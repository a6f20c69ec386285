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

#include <string>
#include <vector>

#include "fibredyn/report.hpp"

namespace fibredyn {

struct ScenarioSpec;

/// One registered property suite: a stable name, the tag of the operator
/// identity it verifies, and a one-line description.
struct CheckInfo {
    std::string name;
    std::string equation;
    std::string description;
};

/// Fixed registry; report order always follows it.
const std::vector<CheckInfo>& check_registry();

/// Resolve the enabled check list: validate requested names and their
/// prerequisites, or derive the default set applicable to the scenario.
/// Returned in registry order.
std::vector<std::string> resolve_checks(const ScenarioSpec& spec,
                                        const std::vector<std::string>& requested, bool use_defaults);

/// Execute every enabled check. Check failures are reported, never thrown;
/// only infrastructure errors propagate. Deterministic for a given
/// (spec, seed): every stochastic draw comes from a stream labeled by the
/// check name. The FIBREDYN_JOBS environment variable caps worker parallelism.
Report run_suite(const ScenarioSpec& spec);

} // namespace fibredyn
