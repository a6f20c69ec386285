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
#include <memory>

#include "fibredyn/bundle.hpp"
#include "fibredyn/family.hpp"
#include "fibredyn/propagator.hpp"

namespace fibredyn {

/// A time family of unitaries V(t1, t) anchored at t1 with V(t1, t1) = 1.
/// The anchor normalization fixes the gauge so picture states at t = t1
/// coincide with Schroedinger states.
class UnitaryFamily {
  public:
    UnitaryFamily(int dim, double anchor, OperatorFn eval, OperatorFn time_derivative = nullptr);
    static UnitaryFamily identity(int dim, double anchor);
    /// V(anchor, t) = U(anchor, t): the Heisenberg choice. Carries the exact
    /// derivative dV/dt = (i/hbar) V(t) H(t).
    static UnitaryFamily heisenberg(std::shared_ptr<const Propagator> u, double anchor);
    /// Seeded smooth unitary family exp(-i K(t)) with K(anchor) = 0 and a
    /// non-commuting two-term Hermitian generator.
    static UnitaryFamily random_smooth(int dim, double anchor, std::uint64_t seed);

    /// V(anchor, t).
    Operator at(double t) const;
    /// V(anchor, t)^{-1} (the adjoint; the family is unitary).
    Operator inverse_at(double t) const;
    Operator derivative(double t, double h = kDefaultFdStep) const;

    double anchor() const { return anchor_; }
    int dim() const { return dim_; }
    bool backed_by(const Propagator& u) const { return backing_.get() == &u; }
    const std::shared_ptr<const Propagator>& backing() const { return backing_; }

  private:
    int dim_;
    double anchor_;
    OperatorFn eval_;
    OperatorFn ddt_;
    std::shared_ptr<const Propagator> backing_;
};

/// Heisenberg observable A_t^H(t0) = U(t0,t) A(t) U(t,t0).
Operator to_heisenberg_observable(const Propagator& u, const HermitianFamily& a, double t, double t0);
Operator to_heisenberg_observable(const Propagator& u, const Operator& a_static, double t, double t0);

/// The frozen Heisenberg state, psi(t0).
StateVector heisenberg_state(const StateFn& trajectory, double t0);

/// || i hbar dA^H/dt - [A^H, H^H] - i hbar (dA/dt)^H || at time t, derivative
/// by central differences of width h.
double heisenberg_eom_residual(const Propagator& u, const HermitianFamily& a, double t, double t0,
                               double h = kDefaultFdStep);

struct VPair {
    StateVector state;
    Operator observable;
};

/// (V psi, V A V^{-1}) at time t: the V-picture state and observable.
VPair to_v_picture(const UnitaryFamily& v, const StateVector& psi, const Operator& a, double t);

struct VHamiltonians {
    Operator transformed; // H_t^V  = V H V^{-1}
    Operator generator;   // _V H_t^V = -i hbar (dV/dt) V^{-1}
    Operator modified;    // H~_t^V = transformed - generator
};

VHamiltonians v_hamiltonians(const UnitaryFamily& v, const HermitianFamily& h, double t,
                             double fd = kDefaultFdStep);

/// U^V(t, t1, t0) = V(t1,t) U(t,t0) V^{-1}(t1,t0). When V is backed by the
/// same propagator the product collapses to the identity exactly (the
/// Heisenberg picture has a trivial propagator).
Operator v_propagator(const UnitaryFamily& v, const Propagator& u, double t, double t0);

struct VResiduals {
    double state;
    double observable;
};

/// Equation-of-motion residuals of the V-picture state and observable at t.
VResiduals v_eom_residuals(const UnitaryFamily& v, const HermitianFamily& h, const StateFn& trajectory,
                           const HermitianFamily& a, double t, double fd = kDefaultFdStep);

/// Same residuals computed in fibre coordinates at the anchor fibre, measured
/// in the fibre metric; equal to the Hilbert-space residuals.
VResiduals v_eom_residuals_bundle(const BundleAtlas& atlas, const UnitaryFamily& v,
                                  const HermitianFamily& h, const StateFn& trajectory,
                                  const HermitianFamily& a, double t, double fd = kDefaultFdStep);

struct InteractionSplit {
    Operator u_free;        // U^(0)(t, t0)
    Operator u_interaction; // U^(I)(t, t0)
    Operator u_full;        // U(t, t0)
};

/// Split propagation: U = U0 U_I, where U_I propagates the interaction
/// Hamiltonian transformed into the frame of the free evolution. All three
/// factors are integrated on the same grid.
InteractionSplit interaction_split(const HermitianFamily& h0, const HermitianFamily& h_int, double t,
                                   double t0, const IntegratorConfig& cfg = {});

/// Interaction-picture equations of motion: the V-picture residuals with
/// V = U^(0)(t0, .); the state evolves under the transformed interaction and
/// the observable under the transformed free Hamiltonian.
VResiduals interaction_eom_residuals(const HermitianFamily& h0, const HermitianFamily& h_int,
                                     const StateFn& trajectory, const HermitianFamily& a, double t,
                                     double t0, const IntegratorConfig& cfg = {},
                                     double fd = kDefaultFdStep);

} // namespace fibredyn
