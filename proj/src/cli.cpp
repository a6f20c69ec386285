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

#include "fibredyn/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "fibredyn/checks.hpp"
#include "fibredyn/scenario.hpp"

namespace fibredyn {

namespace {

int write_output(const std::string& text, const std::string& out_path, std::ostream& out,
                 std::ostream& err) {
    if (out_path.empty()) {
        out << text;
        return 0;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) {
        err << "error: cannot open output file '" << out_path << "'\n";
        return 2;
    }
    file << text;
    if (!file) {
        err << "error: failed writing '" << out_path << "'\n";
        return 2;
    }
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"quantum evolution over a Hilbert fibre bundle: propagators, picture "
                 "transformations, and integral-of-motion certificates as machine-checked residuals",
                 "fibredyn"};
    app.require_subcommand(1);

    std::string scenario_path, out_path, format = "json-lines";
    std::optional<std::uint64_t> seed_override;
    std::optional<double> tol_override;
    std::optional<int> steps_override;

    CLI::App* run = app.add_subcommand("run", "run the enabled checks of a scenario");
    run->add_option("scenario", scenario_path, "scenario file (JSON)")->required();
    run->add_option("--out", out_path, "write the report to this path instead of stdout");
    run->add_option("--format", format, "json-lines | csv-series | human-summary")
        ->check(CLI::IsMember({"json-lines", "csv-series", "human-summary"}));
    run->add_option("--seed", seed_override, "override the scenario seed");
    run->add_option("--tol", tol_override, "override the absolute tolerance");
    run->add_option("--steps", steps_override, "override the time grid step count");

    std::string validate_path;
    CLI::App* validate = app.add_subcommand("validate", "parse and validate a scenario file");
    validate->add_option("scenario", validate_path, "scenario file (JSON)")->required();

    CLI::App* list = app.add_subcommand("list-checks", "list every check and its equation tag");

    std::vector<const char*> argv;
    argv.push_back("fibredyn");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help and friends
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    if (list->parsed()) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-28s %-14s %s\n", "check", "equation", "verifies");
        out << buf;
        for (const CheckInfo& c : check_registry()) {
            std::snprintf(buf, sizeof buf, "%-28s %-14s %s\n", c.name.c_str(), c.equation.c_str(),
                          c.description.c_str());
            out << buf;
        }
        return 0;
    }

    if (validate->parsed()) {
        try {
            const ScenarioSpec spec = parse_scenario_file(validate_path);
            out << "ok: digest " << scenario_digest(spec) << ", " << spec.checks.size()
                << " checks enabled\n";
            return 0;
        } catch (const Error& e) {
            err << "error: " << e.what() << "\n";
            return 2;
        }
    }

    // run
    ScenarioSpec spec;
    try {
        spec = parse_scenario_file(scenario_path);
        if (seed_override) spec.seed = *seed_override;
        if (tol_override) spec.tolerances = Tolerance(*tol_override, spec.tolerances.rel);
        if (steps_override) {
            if (*steps_override < 1) throw ValidationError("--steps must be at least 1");
            spec.time.steps = *steps_override;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    Report report;
    try {
        report = run_suite(spec);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    ReportFormat fmt = ReportFormat::JsonLines;
    if (format == "csv-series") fmt = ReportFormat::CsvSeries;
    if (format == "human-summary") fmt = ReportFormat::HumanSummary;
    const int io_rc = write_output(emit_report(report, fmt), out_path, out, err);
    if (io_rc != 0) return io_rc;
    return report.overall_pass ? 0 : 1;
}

} // namespace fibredyn
