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

#include <functional>
#include <memory>
#include <vector>

#include "fibredyn/linear.hpp"

namespace fibredyn {

using OperatorFn = std::function<Operator(double)>;
using StateFn = std::function<StateVector(double)>;

/// Default differencing step for derivatives taken numerically. All
/// discretization-tolerance contracts in the library scale as O(step^2).
inline constexpr double kDefaultFdStep = 1e-4;

/// A time-parameterized Hermitian operator family: a Hamiltonian H(t), or an
/// observable A(t) when an explicit time dependence matters. Evaluation
/// enforces Hermiticity; the time derivative is analytic when supplied and a
/// central difference otherwise. hbar rides along so generators and
/// frequencies stay consistent.
class HermitianFamily {
  public:
    HermitianFamily() = default;
    /// Smooth family from an evaluation callable (and optional analytic d/dt).
    HermitianFamily(int dim, OperatorFn eval, OperatorFn time_derivative = nullptr, double hbar = 1.0);

    static HermitianFamily constant(const Operator& h, double hbar = 1.0);
    /// Piecewise-constant family: values[k] on [breakpoints[k-1], breakpoints[k]),
    /// with values.size() == breakpoints.size() + 1 and the first/last segments
    /// extending to -inf/+inf.
    static HermitianFamily piecewise_constant(std::vector<double> breakpoints, std::vector<Operator> values,
                                              double hbar = 1.0);

    /// H(t); throws NonHermitianInput when the sampled value is not Hermitian.
    Operator operator()(double t) const;
    /// dH/dt at t, analytic if available, else a central difference of width h.
    Operator derivative(double t, double h = kDefaultFdStep) const;

    bool valid() const { return dim_ > 0; }
    bool has_analytic_derivative() const { return static_cast<bool>(ddt_); }
    bool piecewise_constant_kind() const { return piecewise_; }
    /// Breakpoints strictly inside (a, b), ascending. Empty for smooth families.
    std::vector<double> breakpoints_in(double a, double b) const;

    int dim() const { return dim_; }
    double hbar() const { return hbar_; }

  private:
    int dim_ = 0;
    double hbar_ = 1.0;
    OperatorFn eval_;
    OperatorFn ddt_;
    bool piecewise_ = false;
    std::shared_ptr<const std::vector<double>> breakpoints_;
};

/// a + b pointwise; dimensions and hbar must agree.
HermitianFamily operator+(const HermitianFamily& a, const HermitianFamily& b);

} // namespace fibredyn
