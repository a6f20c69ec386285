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
#include <optional>
#include <string>
#include <vector>

#include "fibredyn/bundle.hpp"
#include "fibredyn/family.hpp"
#include "fibredyn/linear.hpp"

namespace fibredyn {

struct TimeSpec {
    double t0 = 0.0;
    double t1 = 1.0;
    int steps = 200;
};

/// Scalar coefficient drawn from the fixed palette {const, sin, cos, poly}.
struct CoefficientSpec {
    enum class Fn { Const, Sin, Cos, Poly };
    Fn fn = Fn::Const;
    double value = 0.0;                       // const
    double amplitude = 1.0, frequency = 1.0, phase = 0.0; // sin/cos
    std::vector<double> coeffs;               // poly, ascending powers

    double eval(double t) const;
    double derivative(double t) const;
};

/// Tagged time-dependent Hermitian operator description.
struct OperatorSpec {
    enum class Kind { ConstantMatrix, PiecewiseConstant, PauliSeries, ExplicitSamples };
    Kind kind = Kind::ConstantMatrix;
    std::string name;

    Operator matrix;                                   // constant-matrix
    std::vector<double> breakpoints;                   // piecewise-constant
    std::vector<Operator> segments;                    //
    std::vector<std::pair<std::string, CoefficientSpec>> terms; // pauli-series
    std::vector<std::pair<double, Operator>> samples;  // explicit-samples

    int dimension() const;
    HermitianFamily to_family(double hbar) const;
};

struct AtlasSpec {
    AtlasKind kind = AtlasKind::Identity;
    std::uint64_t seed = 1;
    double cond_cap = 100.0;
};

struct PictureSpec {
    enum class Kind { Schrodinger, Heisenberg, V, Interaction };
    Kind kind = Kind::Schrodinger;
    std::uint64_t seed = 0; // v
    int split = 0;          // interaction: first `split` series terms form H0
};

/// A validated scenario: everything a run needs, defaults filled. Identical
/// (spec, seed) pairs produce bit-identical reports.
struct ScenarioSpec {
    int dimension = 2;
    double hbar = 1.0;
    TimeSpec time;
    OperatorSpec hamiltonian;
    AtlasSpec atlas;
    std::vector<OperatorSpec> observables;
    std::vector<PictureSpec> pictures;
    std::vector<std::string> checks; // resolved to the enabled subset, registry order
    Tolerance tolerances{1e-5, 0.0};
    std::uint64_t seed = 0;

    bool has_picture(PictureSpec::Kind k) const;
    const PictureSpec* find_picture(PictureSpec::Kind k) const;
};

/// Parse and validate a scenario document (JSON). Unknown keys are rejected;
/// Hermiticity and dimension consistency are enforced here.
ScenarioSpec parse_scenario(const std::string& text);
ScenarioSpec parse_scenario_file(const std::string& path);

/// Canonical form of the spec with all defaults filled, used for digests and
/// golden comparisons.
std::string canonical_scenario(const ScenarioSpec& spec);
/// FNV-1a content hash of the canonical form, as fixed-width hex.
std::string scenario_digest(const ScenarioSpec& spec);

} // namespace fibredyn
