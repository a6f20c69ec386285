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

#include <cstdint>
#include <string>
#include <vector>

#include "fibredyn/motion_integrals.hpp"

namespace fibredyn {

struct CheckResult {
    std::string name;
    std::string equation;
    double residual = 0.0;
    double threshold = 0.0;
    bool pass = false;
    double millis = 0.0;   // human summary only; never serialized to json-lines
    std::string error;     // set when the check raised instead of returning
};

struct VerdictRecord {
    std::string observable;
    IntegralVerdict verdict;
};

struct SeriesColumn {
    std::string name;
    std::vector<double> values;
};

struct Report {
    std::string scenario_digest;
    std::uint64_t seed = 0;
    bool overall_pass = true;
    std::vector<CheckResult> checks;
    std::vector<VerdictRecord> verdicts;
    std::vector<double> series_times;
    std::vector<SeriesColumn> series;
};

enum class ReportFormat { JsonLines, CsvSeries, HumanSummary };

/// json-lines: a meta record, one record per check (stable key order), then
/// one record per integral verdict. Byte-identical for identical (spec, seed).
/// csv-series: "t,<series names>" header and 17-significant-digit values.
/// human-summary: fixed-width pass/fail table with timings.
std::string emit_report(const Report& report, ReportFormat format);

} // namespace fibredyn
