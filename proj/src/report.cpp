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

#include "fibredyn/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace fibredyn {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string emit_json_lines(const Report& r) {
    std::ostringstream out;
    ordered_json meta;
    meta["scenario_digest"] = r.scenario_digest;
    meta["seed"] = r.seed;
    meta["overall_pass"] = r.overall_pass;
    out << meta.dump() << '\n';
    for (const CheckResult& c : r.checks) {
        ordered_json line;
        line["check"] = c.name;
        line["equation"] = c.equation;
        line["residual"] = c.residual;
        line["threshold"] = c.threshold;
        line["pass"] = c.pass;
        if (!c.error.empty()) line["error"] = c.error;
        out << line.dump() << '\n';
    }
    for (const VerdictRecord& v : r.verdicts) {
        ordered_json line;
        line["verdict"] = v.observable;
        line["mean_constancy"] = v.verdict.mean_constancy_residual;
        line["commutation"] = v.verdict.commutation_residual;
        line["lax"] = v.verdict.lax_residual;
        line["derivation"] = v.verdict.derivation_residual;
        line["heisenberg_constancy"] = v.verdict.heisenberg_constancy_residual;
        line["tol"] = v.verdict.tol.abs + v.verdict.tol.rel;
        line["is_integral"] = v.verdict.is_integral;
        out << line.dump() << '\n';
    }
    return out.str();
}

std::string emit_csv_series(const Report& r) {
    std::ostringstream out;
    out << 't';
    for (const SeriesColumn& col : r.series) out << ',' << csv_quote(col.name);
    out << '\n';
    for (std::size_t i = 0; i < r.series_times.size(); ++i) {
        out << format_number(r.series_times[i]);
        for (const SeriesColumn& col : r.series)
            out << ',' << (i < col.values.size() ? format_number(col.values[i]) : "");
        out << '\n';
    }
    return out.str();
}

std::string emit_human_summary(const Report& r) {
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-28s %-14s %-12s %-10s %-5s %9s\n", "check", "equation", "residual",
                  "threshold", "pass", "time");
    out << buf;
    out << std::string(82, '-') << '\n';
    for (const CheckResult& c : r.checks) {
        std::snprintf(buf, sizeof buf, "%-28s %-14s %-12.4e %-10.1e %-5s %7.1fms\n", c.name.c_str(),
                      c.equation.c_str(), c.residual, c.threshold, c.pass ? "ok" : "FAIL", c.millis);
        out << buf;
        if (!c.error.empty()) out << "    error: " << c.error << '\n';
    }
    for (const VerdictRecord& v : r.verdicts) {
        std::snprintf(buf, sizeof buf,
                      "verdict %-20s integral=%-5s mean=%.2e comm=%.2e lax=%.2e deriv=%.2e heis=%.2e\n",
                      v.observable.c_str(), v.verdict.is_integral ? "yes" : "no",
                      v.verdict.mean_constancy_residual, v.verdict.commutation_residual,
                      v.verdict.lax_residual, v.verdict.derivation_residual,
                      v.verdict.heisenberg_constancy_residual);
        out << buf;
    }
    out << std::string(82, '-') << '\n';
    out << "scenario " << r.scenario_digest << " seed " << r.seed << ": "
        << (r.overall_pass ? "all checks passed" : "SOME CHECKS FAILED") << '\n';
    return out.str();
}

} // namespace

std::string emit_report(const Report& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::JsonLines: return emit_json_lines(report);
        case ReportFormat::CsvSeries: return emit_csv_series(report);
        case ReportFormat::HumanSummary: return emit_human_summary(report);
    }
    throw ValidationError("unknown report format");
}

} // namespace fibredyn
