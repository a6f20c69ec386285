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

#include <memory>
#include <vector>

#include "fibredyn/family.hpp"
#include "fibredyn/linear.hpp"

namespace fibredyn {

/// Time-stepping scheme for the evolution operator.
///  - ExactPiecewise: hold H constant over each (sub-)step and exponentiate
///    exactly; machine precision for piecewise-constant families, first order
///    for smooth ones. Steps are split at declared family breakpoints.
///  - MidpointMagnus1: exponential of the midpoint-sampled generator per step;
///    exactly unitary and second-order accurate.
enum class Scheme { ExactPiecewise, MidpointMagnus1 };

struct IntegratorConfig {
    double max_step = 1e-3;
    Tolerance tol{1e-6, 0.0};
    bool reunitarize = false;
    Scheme scheme = Scheme::MidpointMagnus1;
};

/// The two-time unitary U(t, t0) solving i*hbar dU/dt = H(t) U, U(t0,t0) = 1,
/// realized as a product of per-step unitary factors on a uniform grid over
/// [t0, t1]. Queries at arbitrary times compose cached prefix products with a
/// partial step, so the group law U(t2,t0) = U(t2,t1) U(t1,t0) holds to
/// roundoff at grid points and query times alike. U(t,t) is the identity,
/// returned without computation. Immutable once built.
class Propagator {
  public:
    static Propagator build(const HermitianFamily& family, double t0, double t1,
                            const IntegratorConfig& cfg = {});

    /// U(t, s) for t, s anywhere in [t0, t1].
    Operator at(double t, double s) const;
    /// U(t, t0).
    Operator to(double t) const;

    double t0() const { return t0_; }
    double t1() const { return t1_; }
    double grid_step() const { return step_; }
    int steps() const { return static_cast<int>(factors_.size()); }
    Scheme scheme() const { return scheme_; }
    int dim() const { return family_.dim(); }
    double hbar() const { return family_.hbar(); }
    const HermitianFamily& family() const { return family_; }
    /// Per-interval unitary factors, earliest first.
    const std::vector<Operator>& cached_steps() const { return factors_; }
    bool contains(double t) const;

  private:
    Propagator() = default;
    Operator step_factor(double a, double b) const;
    Operator forward(double t) const; // U(t, t0)

    HermitianFamily family_;
    double t0_ = 0.0, t1_ = 0.0, step_ = 0.0;
    Scheme scheme_ = Scheme::MidpointMagnus1;
    bool reunitarize_ = false;
    std::vector<Operator> factors_; // factors_[k] = U(t_{k+1}, t_k)
    std::vector<Operator> prefix_;  // prefix_[k] = U(t_k, t0)
};

/// One-shot U(t, t0) with an accuracy probe: the result at max_step is
/// compared against a half-step rebuild, and StepFailure is raised when the
/// requested tolerance is out of reach. Exact piecewise propagation of
/// piecewise-constant families skips the probe.
Operator propagate(const HermitianFamily& family, double t0, double t, const IntegratorConfig& cfg = {});

/// Recover H(t) = i*hbar (dU/dt) U^{-1} by central differences on the
/// propagator; t must be at least h away from both grid ends.
Operator hamiltonian_from_propagator(const Propagator& u, double t, double h = kDefaultFdStep);

/// max over samples of ||i*hbar dpsi/dt - H(t) psi(t)|| / max(1, ||psi(t)||),
/// derivative by central differences.
double schrodinger_residual(const HermitianFamily& family, const StateFn& trajectory,
                            const std::vector<double>& t_samples, double h = kDefaultFdStep);

} // namespace fibredyn
