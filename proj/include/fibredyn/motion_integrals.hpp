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
#include <vector>

#include "fibredyn/bundle.hpp"
#include "fibredyn/family.hpp"
#include "fibredyn/propagator.hpp"

namespace fibredyn {

/// Residuals of the five equivalent integral-of-motion criteria. All operator
/// residuals are scaled by max(1, ||A||) so thresholds are scale-free.
/// is_integral holds exactly when every residual passes the tolerance.
struct IntegralVerdict {
    double mean_constancy_residual = 0.0;
    double commutation_residual = 0.0;
    double lax_residual = 0.0;
    double derivation_residual = 0.0;
    double heisenberg_constancy_residual = 0.0;
    bool is_integral = false;
    Tolerance tol;

    double max_residual() const;
    /// True when the five criteria agree (all pass or all fail the tolerance).
    bool unanimous() const;
};

/// max over states and samples of |<A(t)> - <A(t0)>| along propagated
/// trajectories. The states must span the space; InsufficientStates otherwise.
double mean_constancy_residual(const Propagator& u, const HermitianFamily& a,
                               const std::vector<StateVector>& states,
                               const std::vector<double>& t_samples, double t0);

/// max over samples of ||U(t0,t) A(t) - A(t0) U(t0,t)|| / max(1, ||A(t)||).
double commutation_residual(const Propagator& u, const HermitianFamily& a,
                            const std::vector<double>& t_samples, double t0);

/// max over samples of ||dA^m/dt - [A^m, Gamma]|| / max(1, ||A^m||) in the
/// given frame: the Lax-pair form of the integral-of-motion condition.
double lax_residual(const MorphismField& field, const FrameField& frame,
                    const std::vector<double>& t_samples, double h = kDefaultFdStep);

/// max over samples of ||A_t^H(t0) - A(t0)|| / max(1, ||A(t0)||).
double heisenberg_constancy_residual(const Propagator& u, const HermitianFamily& a,
                                     const std::vector<double>& t_samples, double t0);

struct GaugePair {
    OperatorFn a;
    OperatorFn gamma;
};

/// Gauge transformation of a Lax pair: A -> W A W^{-1} and
/// Gamma -> W Gamma W^{-1} - (dW/dt) W^{-1}; A transforms as a tensor, Gamma
/// as a connection, and a vanishing Lax residual is preserved.
GaugePair gauge_transform(OperatorFn a, OperatorFn gamma, OperatorFn w, double h = kDefaultFdStep);

struct EigenConstancy {
    bool is_eigen_trajectory = false;
    double eigenvalue_drift = 0.0;
    double initial_eigenvalue = 0.0;
};

/// Checks whether the evolved state stays an eigenvector of A(t) and how much
/// the eigenvalue drifts. psi0 must be an eigenvector of A(t0) within eigen_tol
/// (otherwise is_eigen_trajectory is false and no drift is reported).
EigenConstancy eigenvalue_constancy_check(const Propagator& u, const HermitianFamily& a,
                                          const StateVector& psi0, const std::vector<double>& t_samples,
                                          double t0, double eigen_tol = 1e-8);

/// Runs all five criteria with shared interior samples and a spanning set of
/// seeded Haar states. The Hilbert-space observable is recovered from the
/// morphism field through the atlas; mean values go through the fibre metric.
IntegralVerdict certify(const Propagator& u, const EvolutionTransport& transport,
                        const MorphismField& field, const Tolerance& tol,
                        std::uint64_t seed = 0x5EEDULL);

} // namespace fibredyn
