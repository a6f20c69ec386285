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

#include "fibredyn/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fibredyn/checks.hpp"
#include "fibredyn/pauli.hpp"
#include "fibredyn/rng.hpp"

namespace fibredyn {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

void expect_keys(const json& obj, const std::string& context, std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) known = true;
        if (!known) throw ParseError("unknown key '" + it.key() + "' in " + context);
    }
}

double get_number(const json& obj, const std::string& context, const char* key, double fallback,
                  bool required = false) {
    if (!obj.contains(key)) {
        if (required) throw ParseError("missing key '" + std::string(key) + "' in " + context);
        return fallback;
    }
    if (!obj[key].is_number()) throw ParseError("key '" + std::string(key) + "' in " + context + " must be a number");
    return obj[key].get<double>();
}

Operator parse_matrix(const json& rows, const std::string& context) {
    if (!rows.is_array() || rows.empty()) throw ParseError(context + ": matrix must be a non-empty array of rows");
    const int n = static_cast<int>(rows.size());
    Operator m(n, n);
    for (int i = 0; i < n; ++i) {
        const json& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw ParseError(context + ": matrix row " + std::to_string(i) + " must have " +
                             std::to_string(n) + " entries");
        for (int j = 0; j < n; ++j) {
            const json& e = row[static_cast<std::size_t>(j)];
            if (e.is_number()) {
                m(i, j) = Complex(e.get<double>(), 0.0);
            } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
                m(i, j) = Complex(e[0].get<double>(), e[1].get<double>());
            } else {
                throw ParseError(context + ": matrix entry (" + std::to_string(i) + "," + std::to_string(j) +
                                 ") must be a number or [re, im]");
            }
        }
    }
    return m;
}

CoefficientSpec parse_coefficient(const json& obj, const std::string& context) {
    if (!obj.is_object()) throw ParseError(context + ": coefficient must be an object");
    CoefficientSpec c;
    const std::string fn = obj.value("fn", "");
    if (fn == "const") {
        expect_keys(obj, context, {"fn", "value"});
        c.fn = CoefficientSpec::Fn::Const;
        c.value = get_number(obj, context, "value", 0.0, true);
    } else if (fn == "sin" || fn == "cos") {
        expect_keys(obj, context, {"fn", "amplitude", "frequency", "phase"});
        c.fn = fn == "sin" ? CoefficientSpec::Fn::Sin : CoefficientSpec::Fn::Cos;
        c.amplitude = get_number(obj, context, "amplitude", 1.0);
        c.frequency = get_number(obj, context, "frequency", 1.0);
        c.phase = get_number(obj, context, "phase", 0.0);
    } else if (fn == "poly") {
        expect_keys(obj, context, {"fn", "coeffs"});
        c.fn = CoefficientSpec::Fn::Poly;
        if (!obj.contains("coeffs") || !obj["coeffs"].is_array())
            throw ParseError(context + ": poly coefficient needs a 'coeffs' array");
        for (const json& e : obj["coeffs"]) {
            if (!e.is_number()) throw ParseError(context + ": poly coeffs must be numbers");
            c.coeffs.push_back(e.get<double>());
        }
    } else {
        throw ParseError(context + ": coefficient fn must be one of const, sin, cos, poly");
    }
    return c;
}

void require_hermitian(const Operator& m, const std::string& context) {
    if (hermiticity_defect(m) > 1e-10 * std::max(1.0, m.norm()))
        throw ValidationError(context + " is not Hermitian");
}

OperatorSpec parse_operator_spec(const json& obj, const std::string& context) {
    if (!obj.is_object()) throw ParseError(context + " must be an object");
    OperatorSpec spec;
    spec.name = obj.value("name", "");
    const std::string type = obj.value("type", "");
    if (type == "constant-matrix") {
        expect_keys(obj, context, {"type", "name", "matrix"});
        spec.kind = OperatorSpec::Kind::ConstantMatrix;
        if (!obj.contains("matrix")) throw ParseError(context + ": constant-matrix needs 'matrix'");
        spec.matrix = parse_matrix(obj["matrix"], context);
        require_hermitian(spec.matrix, context);
    } else if (type == "piecewise-constant") {
        expect_keys(obj, context, {"type", "name", "breakpoints", "segments"});
        spec.kind = OperatorSpec::Kind::PiecewiseConstant;
        if (!obj.contains("segments") || !obj["segments"].is_array() || obj["segments"].empty())
            throw ParseError(context + ": piecewise-constant needs a non-empty 'segments' array");
        if (obj.contains("breakpoints"))
            for (const json& b : obj["breakpoints"]) {
                if (!b.is_number()) throw ParseError(context + ": breakpoints must be numbers");
                spec.breakpoints.push_back(b.get<double>());
            }
        for (std::size_t i = 0; i < obj["segments"].size(); ++i) {
            spec.segments.push_back(
                parse_matrix(obj["segments"][i], context + " segment " + std::to_string(i)));
            require_hermitian(spec.segments.back(), context + " segment " + std::to_string(i));
        }
        if (spec.segments.size() != spec.breakpoints.size() + 1)
            throw ValidationError(context + ": need one more segment than breakpoints");
        if (!std::is_sorted(spec.breakpoints.begin(), spec.breakpoints.end()))
            throw ValidationError(context + ": breakpoints must be ascending");
    } else if (type == "pauli-series") {
        expect_keys(obj, context, {"type", "name", "terms"});
        spec.kind = OperatorSpec::Kind::PauliSeries;
        if (!obj.contains("terms") || !obj["terms"].is_array() || obj["terms"].empty())
            throw ParseError(context + ": pauli-series needs a non-empty 'terms' array");
        for (std::size_t i = 0; i < obj["terms"].size(); ++i) {
            const json& term = obj["terms"][i];
            const std::string tctx = context + " term " + std::to_string(i);
            if (!term.is_object()) throw ParseError(tctx + " must be an object");
            expect_keys(term, tctx, {"pauli", "coeff"});
            if (!term.contains("pauli") || !term["pauli"].is_string())
                throw ParseError(tctx + " needs a 'pauli' label string");
            if (!term.contains("coeff")) throw ParseError(tctx + " needs a 'coeff' object");
            spec.terms.emplace_back(term["pauli"].get<std::string>(),
                                    parse_coefficient(term["coeff"], tctx));
        }
    } else if (type == "explicit-samples") {
        expect_keys(obj, context, {"type", "name", "samples"});
        spec.kind = OperatorSpec::Kind::ExplicitSamples;
        if (!obj.contains("samples") || !obj["samples"].is_array() || obj["samples"].size() < 2)
            throw ParseError(context + ": explicit-samples needs at least two samples");
        for (std::size_t i = 0; i < obj["samples"].size(); ++i) {
            const json& s = obj["samples"][i];
            const std::string sctx = context + " sample " + std::to_string(i);
            if (!s.is_object()) throw ParseError(sctx + " must be an object");
            expect_keys(s, sctx, {"t", "matrix"});
            const double t = get_number(s, sctx, "t", 0.0, true);
            if (!s.contains("matrix")) throw ParseError(sctx + " needs 'matrix'");
            Operator m = parse_matrix(s["matrix"], sctx);
            require_hermitian(m, sctx);
            spec.samples.emplace_back(t, std::move(m));
        }
        for (std::size_t i = 1; i < spec.samples.size(); ++i)
            if (!(spec.samples[i - 1].first < spec.samples[i].first))
                throw ValidationError(context + ": sample times must be strictly ascending");
    } else {
        throw ParseError(context + ": type must be one of constant-matrix, piecewise-constant, "
                                   "pauli-series, explicit-samples");
    }
    return spec;
}

AtlasSpec parse_atlas(const json& obj, const std::string& context) {
    if (!obj.is_object()) throw ParseError(context + " must be an object");
    AtlasSpec a;
    const std::string type = obj.value("type", "");
    if (type == "identity") {
        expect_keys(obj, context, {"type"});
        a.kind = AtlasKind::Identity;
    } else if (type == "unitary-field") {
        expect_keys(obj, context, {"type", "seed"});
        a.kind = AtlasKind::UnitaryField;
        a.seed = obj.value("seed", 1ULL);
    } else if (type == "invertible-field") {
        expect_keys(obj, context, {"type", "seed", "cond_cap"});
        a.kind = AtlasKind::InvertibleField;
        a.seed = obj.value("seed", 1ULL);
        a.cond_cap = get_number(obj, context, "cond_cap", 100.0);
        if (a.cond_cap <= 1.0) throw ValidationError(context + ": cond_cap must exceed 1");
    } else {
        throw ParseError(context + ": type must be one of identity, unitary-field, invertible-field");
    }
    return a;
}

PictureSpec parse_picture(const json& entry, const std::string& context) {
    PictureSpec p;
    if (entry.is_string()) {
        const std::string s = entry.get<std::string>();
        if (s == "schrodinger") p.kind = PictureSpec::Kind::Schrodinger;
        else if (s == "heisenberg") p.kind = PictureSpec::Kind::Heisenberg;
        else if (s == "v") p.kind = PictureSpec::Kind::V;
        else throw ParseError(context + ": unknown picture '" + s + "'");
        return p;
    }
    if (!entry.is_object()) throw ParseError(context + ": picture must be a string or object");
    const std::string type = entry.value("type", "");
    if (type == "v") {
        expect_keys(entry, context, {"type", "seed"});
        p.kind = PictureSpec::Kind::V;
        p.seed = entry.value("seed", 0ULL);
    } else if (type == "interaction") {
        expect_keys(entry, context, {"type", "split"});
        p.kind = PictureSpec::Kind::Interaction;
        if (!entry.contains("split") || !entry["split"].is_number_integer())
            throw ParseError(context + ": interaction picture needs an integer 'split'");
        p.split = entry["split"].get<int>();
    } else if (type == "schrodinger" || type == "heisenberg") {
        expect_keys(entry, context, {"type"});
        p.kind = type == "schrodinger" ? PictureSpec::Kind::Schrodinger : PictureSpec::Kind::Heisenberg;
    } else {
        throw ParseError(context + ": picture type must be one of schrodinger, heisenberg, v, interaction");
    }
    return p;
}

} // namespace

double CoefficientSpec::eval(double t) const {
    switch (fn) {
        case Fn::Const: return value;
        case Fn::Sin: return amplitude * std::sin(frequency * t + phase);
        case Fn::Cos: return amplitude * std::cos(frequency * t + phase);
        case Fn::Poly: {
            double acc = 0.0;
            for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * t + coeffs[k];
            return acc;
        }
    }
    return 0.0;
}

double CoefficientSpec::derivative(double t) const {
    switch (fn) {
        case Fn::Const: return 0.0;
        case Fn::Sin: return amplitude * frequency * std::cos(frequency * t + phase);
        case Fn::Cos: return -amplitude * frequency * std::sin(frequency * t + phase);
        case Fn::Poly: {
            double acc = 0.0;
            for (std::size_t k = coeffs.size(); k-- > 1;)
                acc = acc * t + coeffs[k] * static_cast<double>(k);
            return acc;
        }
    }
    return 0.0;
}

int OperatorSpec::dimension() const {
    switch (kind) {
        case Kind::ConstantMatrix: return static_cast<int>(matrix.rows());
        case Kind::PiecewiseConstant: return static_cast<int>(segments.front().rows());
        case Kind::PauliSeries: return 1 << terms.front().first.size();
        case Kind::ExplicitSamples: return static_cast<int>(samples.front().second.rows());
    }
    return 0;
}

HermitianFamily OperatorSpec::to_family(double hbar) const {
    switch (kind) {
        case Kind::ConstantMatrix: return HermitianFamily::constant(matrix, hbar);
        case Kind::PiecewiseConstant: return HermitianFamily::piecewise_constant(breakpoints, segments, hbar);
        case Kind::PauliSeries: {
            const int dim = dimension();
            std::vector<Operator> mats;
            std::vector<CoefficientSpec> cs;
            for (const auto& [label, coeff] : terms) {
                mats.push_back(pauli_string(label));
                cs.push_back(coeff);
            }
            return HermitianFamily(
                dim,
                [mats, cs, dim](double t) {
                    Operator h = Operator::Zero(dim, dim);
                    for (std::size_t k = 0; k < mats.size(); ++k) h += cs[k].eval(t) * mats[k];
                    return h;
                },
                [mats, cs, dim](double t) {
                    Operator h = Operator::Zero(dim, dim);
                    for (std::size_t k = 0; k < mats.size(); ++k) h += cs[k].derivative(t) * mats[k];
                    return h;
                },
                hbar);
        }
        case Kind::ExplicitSamples: {
            const int dim = dimension();
            auto pts = samples;
            return HermitianFamily(
                dim,
                [pts](double t) -> Operator {
                    if (t <= pts.front().first) return pts.front().second;
                    if (t >= pts.back().first) return pts.back().second;
                    std::size_t hi = 1;
                    while (pts[hi].first < t) ++hi;
                    const auto& [ta, ma] = pts[hi - 1];
                    const auto& [tb, mb] = pts[hi];
                    const double w = (t - ta) / (tb - ta);
                    return (1.0 - w) * ma + w * mb;
                },
                nullptr, hbar);
        }
    }
    throw ValidationError("unknown operator spec kind");
}

bool ScenarioSpec::has_picture(PictureSpec::Kind k) const { return find_picture(k) != nullptr; }

const PictureSpec* ScenarioSpec::find_picture(PictureSpec::Kind k) const {
    for (const PictureSpec& p : pictures)
        if (p.kind == k) return &p;
    return nullptr;
}

ScenarioSpec parse_scenario(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ParseError("scenario root must be an object");
    expect_keys(root, "scenario",
                {"dimension", "hbar", "time", "hamiltonian", "atlas", "observables", "pictures",
                 "checks", "tolerances", "seed"});

    ScenarioSpec spec;
    if (!root.contains("dimension") || !root["dimension"].is_number_integer())
        throw ParseError("scenario needs an integer 'dimension'");
    spec.dimension = root["dimension"].get<int>();
    if (spec.dimension < 1 || spec.dimension > kMaxDim)
        throw ValidationError("dimension must be in [1, " + std::to_string(kMaxDim) + "]");

    spec.hbar = get_number(root, "scenario", "hbar", 1.0);
    if (spec.hbar <= 0.0) throw ValidationError("hbar must be positive");

    if (root.contains("time")) {
        const json& t = root["time"];
        expect_keys(t, "time", {"t0", "t1", "steps"});
        spec.time.t0 = get_number(t, "time", "t0", 0.0);
        spec.time.t1 = get_number(t, "time", "t1", 1.0);
        if (t.contains("steps")) {
            if (!t["steps"].is_number_integer()) throw ParseError("time.steps must be an integer");
            spec.time.steps = t["steps"].get<int>();
        }
        if (!(spec.time.t0 < spec.time.t1)) throw ValidationError("time interval must satisfy t0 < t1");
        if (spec.time.steps < 1) throw ValidationError("time.steps must be at least 1");
    }

    if (!root.contains("hamiltonian")) throw ParseError("scenario needs a 'hamiltonian'");
    spec.hamiltonian = parse_operator_spec(root["hamiltonian"], "hamiltonian");
    if (spec.hamiltonian.name.empty()) spec.hamiltonian.name = "H";
    if (spec.hamiltonian.dimension() != spec.dimension)
        throw ValidationError("dimension mismatch: hamiltonian is " +
                              std::to_string(spec.hamiltonian.dimension()) + "-dimensional, scenario is " +
                              std::to_string(spec.dimension));

    if (root.contains("atlas")) spec.atlas = parse_atlas(root["atlas"], "atlas");

    if (root.contains("observables")) {
        if (!root["observables"].is_array()) throw ParseError("observables must be an array");
        for (std::size_t i = 0; i < root["observables"].size(); ++i) {
            OperatorSpec obs =
                parse_operator_spec(root["observables"][i], "observable " + std::to_string(i));
            if (obs.name.empty()) obs.name = "A" + std::to_string(i);
            if (obs.dimension() != spec.dimension)
                throw ValidationError("dimension mismatch: observable '" + obs.name + "' is " +
                                      std::to_string(obs.dimension()) + "-dimensional, scenario is " +
                                      std::to_string(spec.dimension));
            spec.observables.push_back(std::move(obs));
        }
    }

    if (root.contains("pictures")) {
        if (!root["pictures"].is_array()) throw ParseError("pictures must be an array");
        for (std::size_t i = 0; i < root["pictures"].size(); ++i) {
            PictureSpec p = parse_picture(root["pictures"][i], "picture " + std::to_string(i));
            if (spec.has_picture(p.kind))
                throw ValidationError("duplicate picture entry");
            spec.pictures.push_back(p);
        }
    } else {
        spec.pictures.push_back(PictureSpec{PictureSpec::Kind::Schrodinger, 0, 0});
        spec.pictures.push_back(PictureSpec{PictureSpec::Kind::Heisenberg, 0, 0});
    }

    if (const PictureSpec* ip = spec.find_picture(PictureSpec::Kind::Interaction)) {
        if (spec.hamiltonian.kind != OperatorSpec::Kind::PauliSeries)
            throw ValidationError("interaction picture requires a pauli-series hamiltonian to split");
        const int nterms = static_cast<int>(spec.hamiltonian.terms.size());
        if (ip->split < 1 || ip->split >= nterms)
            throw ValidationError("interaction split must leave at least one term on each side");
    }

    if (root.contains("tolerances")) {
        const json& t = root["tolerances"];
        expect_keys(t, "tolerances", {"abs", "rel"});
        const double abs_tol = get_number(t, "tolerances", "abs", 1e-5);
        const double rel_tol = get_number(t, "tolerances", "rel", 0.0);
        try {
            spec.tolerances = Tolerance(abs_tol, rel_tol);
        } catch (const ValidationError&) {
            throw ValidationError("tolerances must satisfy abs >= 0, rel >= 0, abs + rel > 0");
        }
    } else {
        spec.tolerances = Tolerance(1e-5, 0.0);
    }

    if (root.contains("seed")) {
        if (!root["seed"].is_number_integer()) throw ParseError("seed must be an integer");
        spec.seed = root["seed"].get<std::uint64_t>();
    }

    std::vector<std::string> requested;
    if (root.contains("checks")) {
        if (!root["checks"].is_array()) throw ParseError("checks must be an array of names");
        for (const json& c : root["checks"]) {
            if (!c.is_string()) throw ParseError("checks must be an array of names");
            requested.push_back(c.get<std::string>());
        }
    }
    spec.checks = resolve_checks(spec, requested, !root.contains("checks"));
    return spec;
}

ScenarioSpec parse_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

namespace {

ordered_json matrix_to_json(const Operator& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(ordered_json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(row);
    }
    return rows;
}

ordered_json coefficient_to_json(const CoefficientSpec& c) {
    ordered_json out;
    switch (c.fn) {
        case CoefficientSpec::Fn::Const:
            out["fn"] = "const";
            out["value"] = c.value;
            break;
        case CoefficientSpec::Fn::Sin:
        case CoefficientSpec::Fn::Cos:
            out["fn"] = c.fn == CoefficientSpec::Fn::Sin ? "sin" : "cos";
            out["amplitude"] = c.amplitude;
            out["frequency"] = c.frequency;
            out["phase"] = c.phase;
            break;
        case CoefficientSpec::Fn::Poly:
            out["fn"] = "poly";
            out["coeffs"] = c.coeffs;
            break;
    }
    return out;
}

ordered_json operator_to_json(const OperatorSpec& spec) {
    ordered_json out;
    switch (spec.kind) {
        case OperatorSpec::Kind::ConstantMatrix:
            out["type"] = "constant-matrix";
            out["name"] = spec.name;
            out["matrix"] = matrix_to_json(spec.matrix);
            break;
        case OperatorSpec::Kind::PiecewiseConstant: {
            out["type"] = "piecewise-constant";
            out["name"] = spec.name;
            out["breakpoints"] = spec.breakpoints;
            ordered_json segs = ordered_json::array();
            for (const Operator& s : spec.segments) segs.push_back(matrix_to_json(s));
            out["segments"] = segs;
            break;
        }
        case OperatorSpec::Kind::PauliSeries: {
            out["type"] = "pauli-series";
            out["name"] = spec.name;
            ordered_json terms = ordered_json::array();
            for (const auto& [label, coeff] : spec.terms) {
                ordered_json term;
                term["pauli"] = label;
                term["coeff"] = coefficient_to_json(coeff);
                terms.push_back(term);
            }
            out["terms"] = terms;
            break;
        }
        case OperatorSpec::Kind::ExplicitSamples: {
            out["type"] = "explicit-samples";
            out["name"] = spec.name;
            ordered_json samples = ordered_json::array();
            for (const auto& [t, m] : spec.samples) {
                ordered_json s;
                s["t"] = t;
                s["matrix"] = matrix_to_json(m);
                samples.push_back(s);
            }
            out["samples"] = samples;
            break;
        }
    }
    return out;
}

} // namespace

std::string canonical_scenario(const ScenarioSpec& spec) {
    ordered_json out;
    out["dimension"] = spec.dimension;
    out["hbar"] = spec.hbar;
    out["seed"] = spec.seed;
    out["time"] = {{"t0", spec.time.t0}, {"t1", spec.time.t1}, {"steps", spec.time.steps}};
    out["hamiltonian"] = operator_to_json(spec.hamiltonian);
    switch (spec.atlas.kind) {
        case AtlasKind::Identity: out["atlas"] = {{"type", "identity"}}; break;
        case AtlasKind::UnitaryField:
            out["atlas"] = {{"type", "unitary-field"}, {"seed", spec.atlas.seed}};
            break;
        case AtlasKind::InvertibleField:
            out["atlas"] = {{"type", "invertible-field"}, {"seed", spec.atlas.seed},
                            {"cond_cap", spec.atlas.cond_cap}};
            break;
    }
    ordered_json observables = ordered_json::array();
    for (const OperatorSpec& o : spec.observables) observables.push_back(operator_to_json(o));
    out["observables"] = observables;
    ordered_json pictures = ordered_json::array();
    for (const PictureSpec& p : spec.pictures) {
        switch (p.kind) {
            case PictureSpec::Kind::Schrodinger: pictures.push_back("schrodinger"); break;
            case PictureSpec::Kind::Heisenberg: pictures.push_back("heisenberg"); break;
            case PictureSpec::Kind::V: pictures.push_back(ordered_json{{"type", "v"}, {"seed", p.seed}}); break;
            case PictureSpec::Kind::Interaction:
                pictures.push_back(ordered_json{{"type", "interaction"}, {"split", p.split}});
                break;
        }
    }
    out["pictures"] = pictures;
    out["checks"] = spec.checks;
    out["tolerances"] = {{"abs", spec.tolerances.abs}, {"rel", spec.tolerances.rel}};
    return out.dump();
}

std::string scenario_digest(const ScenarioSpec& spec) {
    const std::uint64_t h = fnv1a(canonical_scenario(spec));
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

} // namespace fibredyn
