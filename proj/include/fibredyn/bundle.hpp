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
#include <string>
#include <vector>

#include "fibredyn/family.hpp"
#include "fibredyn/linear.hpp"
#include "fibredyn/propagator.hpp"

namespace fibredyn {

/// An observer's world line, parameterized by time over a closed interval.
/// Using t itself as the base coordinate rules out self-intersections, so
/// sections along the path are single-valued.
struct ObserverPath {
    double t_min;
    double t_max;
    std::string label;

    ObserverPath(double lo, double hi, std::string name = "gamma");
    bool contains(double t) const;
};

enum class AtlasKind { Identity, UnitaryField, InvertibleField };

/// An observer path together with a field of trivializations l(t): invertible
/// maps identifying each fibre with the typical Hilbert space. The fibre inner
/// product is induced through the trivialization,
/// <Phi|Psi>_t := <l(t)Phi | l(t)Psi>, which makes the transport's
/// metric adjoint equal its inverse for unitary and non-unitary fields alike.
class BundleAtlas {
  public:
    static BundleAtlas identity(ObserverPath path, int dim);
    /// l(t) = exp(i K(t)) for a smooth seeded Hermitian interpolant K.
    static BundleAtlas unitary_field(ObserverPath path, int dim, std::uint64_t seed);
    /// Unitary field times (1 + bounded Hermitian perturbation); the condition
    /// number is verified against cond_cap on a sample grid.
    static BundleAtlas invertible_field(ObserverPath path, int dim, std::uint64_t seed,
                                        double cond_cap = 100.0);
    /// Custom trivialization field; samples of l are validated for
    /// invertibility (and unitarity when kind says so).
    BundleAtlas(ObserverPath path, int dim, AtlasKind kind, OperatorFn triv,
                OperatorFn triv_derivative = nullptr);

    Operator l(double t) const;
    Operator l_inverse(double t) const;
    /// Gram matrix of the fibre metric, l(t)^dag l(t).
    Operator gram(double t) const;
    Complex fibre_inner(double t, const StateVector& phi, const StateVector& psi) const;
    double fibre_norm(double t, const StateVector& psi) const;
    /// Fibre-metric Frobenius norm of an endomorphism of the fibre at t,
    /// ||l M l^{-1}||_F; coincides with the plain norm for unitary fields.
    double fibre_operator_norm(double t, const Operator& m) const;

    const ObserverPath& path() const { return path_; }
    AtlasKind kind() const { return kind_; }
    int dim() const { return dim_; }
    bool has_triv_derivative() const { return static_cast<bool>(triv_dot_); }
    Operator triv_derivative(double t) const;

  private:
    ObserverPath path_;
    int dim_;
    AtlasKind kind_;
    OperatorFn triv_;
    OperatorFn triv_dot_;
    void validate_samples() const;
};

/// A state section along the path in fibre coordinates.
struct StateSection {
    BundleAtlas atlas;
    StateFn value;

    StateVector at(double t) const { return value(t); }
};

/// A time family of fibre endomorphisms: the bundle image of an observable.
/// The derivative is the honest time derivative of the fibre-coordinate
/// matrix (atlas motion included); analytic only when that is exact.
struct MorphismField {
    BundleAtlas atlas;
    OperatorFn value;
    OperatorFn analytic_derivative; // may be empty

    Operator at(double t) const { return value(t); }
    Operator derivative(double t, double h = kDefaultFdStep) const {
        if (analytic_derivative) return analytic_derivative(t);
        return (value(t + h) - value(t - h)) / (2.0 * h);
    }
};

/// Connection coefficients Gamma and the matrix-bundle Hamiltonian
/// H^m = -i hbar Gamma in the working frame.
struct Connection {
    Operator gamma;
    Operator hm;
};

/// The fibre-to-fibre conjugate of the propagator,
/// Ucal(t,s) = l^{-1}(t) U(t,s) l(s): the bundle carrier of dynamics.
class EvolutionTransport {
  public:
    EvolutionTransport(BundleAtlas atlas, std::shared_ptr<const Propagator> propagator);

    /// Ucal(t,s); the identity is returned without computation when t == s.
    Operator at(double t, double s) const;
    /// Fibre-metric adjoint of Ucal(t,s), a map from the fibre at t back to
    /// the fibre at s; equals Ucal(s,t) for the evolution transport.
    Operator fibre_adjoint(double t, double s) const;

    StateVector transport_state(const StateVector& value, double s, double t) const;
    Operator transport_morphism(const Operator& a_at_s, double s, double t) const;

    /// Gamma(t) = d/ds Ucal(t,s)|_{s=t} by central differences in fibre
    /// coordinates, and H^m = -i hbar Gamma.
    Connection connection(double t, double h = kDefaultFdStep) const;

    const BundleAtlas& atlas() const { return atlas_; }
    const Propagator& propagator() const { return *prop_; }
    std::shared_ptr<const Propagator> propagator_ptr() const { return prop_; }
    int dim() const { return atlas_.dim(); }
    double hbar() const { return prop_->hbar(); }
    double t_min() const;
    double t_max() const;

  private:
    BundleAtlas atlas_;
    std::shared_ptr<const Propagator> prop_;
    void check_time(double t, double h = 0.0) const;
};

/// A field of bases along the path. The transport matrix, connection
/// coefficients and matrix-bundle Hamiltonian are all expressed in this
/// frame; gamma and hm stay consistent by construction.
class FrameField {
  public:
    FrameField(EvolutionTransport transport, OperatorFn basis);
    /// Fibre-coordinate frame (basis = identity).
    static FrameField coordinate(EvolutionTransport transport);
    /// Normal frame seeded at t0: basis(t) = Ucal(t,t0) seed. In this frame
    /// the transport matrix is the identity and Gamma vanishes.
    static FrameField normal(const EvolutionTransport& transport, double t0, const Operator& seed_basis);

    Operator basis(double t) const;
    Operator transport_matrix(double t, double s) const;
    Connection connection(double t, double h = kDefaultFdStep) const;
    /// Matrix of a fibre endomorphism in this frame.
    Operator to_frame(double t, const Operator& fibre_endomorphism) const;

    const EvolutionTransport& transport() const { return transport_; }
    double hbar() const { return transport_.hbar(); }
    bool is_coordinate_frame() const { return coordinate_; }

  private:
    EvolutionTransport transport_;
    OperatorFn basis_;
    bool coordinate_ = false;
};

/// Psi(t) = l^{-1}(t) psi(t) pointwise.
StateSection lift_state(const BundleAtlas& atlas, StateFn psi_trajectory);

/// Ucal(t,s) = l^{-1}(t) U(t,s) l(s) as a plain matrix.
Operator evolution_transport(const BundleAtlas& atlas, const Propagator& u, double t, double s);

/// A_gamma(t) = l^{-1}(t) A(t) l(t) pointwise; the analytic derivative is
/// carried over only for the identity atlas, where it is exact.
MorphismField lift_observable(const BundleAtlas& atlas, const HermitianFamily& observable);
MorphismField lift_observable(const BundleAtlas& atlas, OperatorFn observable);

/// Mean value in the fibre metric at time t; equals the Hilbert-space mean of
/// the corresponding observable in the corresponding state.
double fibre_mean_value(const MorphismField& field, const StateSection& section, double t);

Connection connection_coefficients(const EvolutionTransport& transport, double t,
                                   double h = kDefaultFdStep);
Connection connection_coefficients(const FrameField& frame, double t, double h = kDefaultFdStep);

/// max over samples of ||i hbar dPsi/dt - H^m Psi|| / max(1, ||Psi||) in fibre
/// coordinates; zero (to differencing tolerance) exactly for transported
/// sections.
double section_derivation_residual(const EvolutionTransport& transport, const StateSection& section,
                                   const std::vector<double>& t_samples, double h = kDefaultFdStep);

/// Derivation of a morphism field along the path induced by the transport:
/// dA/dt - [A, Gamma] in the working frame.
Operator morphism_derivation(const EvolutionTransport& transport, const MorphismField& field, double t,
                             double h = kDefaultFdStep);

/// The same derivation under its other name: acting on a time family of
/// fibre endomorphisms C(t) it reads dC/dt + [Gamma, C] up to ordering,
/// which is exactly the induced derivation on morphisms.
inline Operator operator_family_derivation(const EvolutionTransport& transport,
                                           const MorphismField& family, double t,
                                           double h = kDefaultFdStep) {
    return morphism_derivation(transport, family, t, h);
}

/// Finite-epsilon version of the defining limit of the induced derivation;
/// converges at O(epsilon) to morphism_derivation.
Operator morphism_derivation_limit(const EvolutionTransport& transport, const MorphismField& field,
                                   double t, double epsilon);

/// Conjugation transport on morphisms: Ucal(t,s) A Ucal(s,t).
Operator transport_morphism(const EvolutionTransport& transport, const Operator& a_at_s, double s,
                            double t);

FrameField normal_frame(const EvolutionTransport& transport, double t0, const Operator& seed_basis);

} // namespace fibredyn
