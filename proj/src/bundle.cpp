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

#include "fibredyn/bundle.hpp"

#include <algorithm>
#include <cmath>

#include "fibredyn/rng.hpp"

namespace fibredyn {

namespace {
const Complex kImag(0.0, 1.0);
constexpr int kAtlasSamples = 17;
constexpr double kAtlasCondLimit = 1e6;
} // namespace

ObserverPath::ObserverPath(double lo, double hi, std::string name)
    : t_min(lo), t_max(hi), label(std::move(name)) {
    if (!(t_min < t_max)) throw ValidationError("observer path interval must be non-degenerate");
}

bool ObserverPath::contains(double t) const {
    const double slack = 1e-9 * std::max(1.0, t_max - t_min);
    return t >= t_min - slack && t <= t_max + slack;
}

BundleAtlas::BundleAtlas(ObserverPath path, int dim, AtlasKind kind, OperatorFn triv,
                         OperatorFn triv_derivative)
    : path_(std::move(path)), dim_(dim), kind_(kind), triv_(std::move(triv)),
      triv_dot_(std::move(triv_derivative)) {
    if (dim < 1 || dim > kMaxDim) throw DimMismatch("atlas dimension outside supported range");
    if (kind_ != AtlasKind::Identity && !triv_)
        throw ValidationError("non-identity atlas requires a trivialization field");
    validate_samples();
}

void BundleAtlas::validate_samples() const {
    if (kind_ == AtlasKind::Identity) return;
    for (int i = 0; i < kAtlasSamples; ++i) {
        const double t =
            path_.t_min + (path_.t_max - path_.t_min) * i / static_cast<double>(kAtlasSamples - 1);
        const Operator m = triv_(t);
        check_dim(m, dim_);
        if (!m.allFinite()) throw SingularTrivialization("trivialization has non-finite entries");
        if (condition_number(m) > kAtlasCondLimit)
            throw SingularTrivialization("trivialization condition number exceeds 1e6 at t=" +
                                         std::to_string(t));
        if (kind_ == AtlasKind::UnitaryField && unitarity_defect(m) > 1e-10)
            throw ValidationError("unitary-field trivialization is not unitary at t=" + std::to_string(t));
    }
}

BundleAtlas BundleAtlas::identity(ObserverPath path, int dim) {
    return BundleAtlas(std::move(path), dim, AtlasKind::Identity, nullptr);
}

namespace {

// Smooth seeded Hermitian interpolant for trivialization fields.
OperatorFn hermitian_interpolant(int dim, SplitRng& rng) {
    const Operator s1 = rng.hermitian(dim, 1.0);
    const Operator s2 = rng.hermitian(dim, 1.0);
    const double c1 = rng.uniform(0.3, 0.9), c2 = rng.uniform(0.3, 0.9);
    const double w1 = rng.uniform(0.4, 1.2), w2 = rng.uniform(0.4, 1.2);
    const double p1 = rng.uniform(0.0, 2.0 * M_PI), p2 = rng.uniform(0.0, 2.0 * M_PI);
    return [=](double t) -> Operator {
        return c1 * std::sin(w1 * t + p1) * s1 + c2 * std::cos(w2 * t + p2) * s2;
    };
}

} // namespace

BundleAtlas BundleAtlas::unitary_field(ObserverPath path, int dim, std::uint64_t seed) {
    SplitRng rng(seed, "atlas-unitary");
    OperatorFn k = hermitian_interpolant(dim, rng);
    return BundleAtlas(std::move(path), dim, AtlasKind::UnitaryField,
                       [k](double t) -> Operator { return matrix_exponential(kImag * k(t)); });
}

BundleAtlas BundleAtlas::invertible_field(ObserverPath path, int dim, std::uint64_t seed,
                                          double cond_cap) {
    if (cond_cap <= 1.0) throw ValidationError("condition cap must exceed 1");
    for (int attempt = 0; attempt < 8; ++attempt) {
        SplitRng rng(seed + static_cast<std::uint64_t>(attempt), "atlas-invertible");
        OperatorFn k = hermitian_interpolant(dim, rng);
        Operator s3 = rng.hermitian(dim, 1.0);
        Eigen::JacobiSVD<Operator> svd(s3);
        const double top = svd.singularValues().maxCoeff();
        if (top > 0.0) s3 /= top;
        const double w3 = rng.uniform(0.4, 1.2), p3 = rng.uniform(0.0, 2.0 * M_PI);
        const Operator eye = Operator::Identity(dim, dim);
        OperatorFn triv = [=](double t) -> Operator {
            return matrix_exponential(kImag * k(t)) * (eye + 0.5 * std::sin(w3 * t + p3) * s3);
        };
        // ||0.5 sin * s3||_2 <= 0.5 keeps the condition number at or below 3,
        // but verify against the requested cap anyway.
        bool ok = true;
        for (int i = 0; i < kAtlasSamples && ok; ++i) {
            const double t = path.t_min + (path.t_max - path.t_min) * i / double(kAtlasSamples - 1);
            ok = condition_number(triv(t)) <= cond_cap;
        }
        if (ok) return BundleAtlas(path, dim, AtlasKind::InvertibleField, triv);
    }
    throw SingularTrivialization("could not generate an invertible field within the condition cap");
}

Operator BundleAtlas::l(double t) const {
    if (kind_ == AtlasKind::Identity) return Operator::Identity(dim_, dim_);
    Operator m = triv_(t);
    check_dim(m, dim_);
    return m;
}

Operator BundleAtlas::l_inverse(double t) const {
    if (kind_ == AtlasKind::Identity) return Operator::Identity(dim_, dim_);
    const Operator m = l(t);
    Eigen::PartialPivLU<Operator> lu(m);
    Operator inv = lu.inverse();
    if (!inv.allFinite()) throw SingularTrivialization("trivialization not invertible at t=" + std::to_string(t));
    return inv;
}

Operator BundleAtlas::gram(double t) const {
    if (kind_ == AtlasKind::Identity) return Operator::Identity(dim_, dim_);
    const Operator m = l(t);
    return m.adjoint() * m;
}

Complex BundleAtlas::fibre_inner(double t, const StateVector& phi, const StateVector& psi) const {
    if (kind_ == AtlasKind::Identity) return phi.dot(psi);
    const Operator m = l(t);
    return (m * phi).dot(m * psi);
}

double BundleAtlas::fibre_norm(double t, const StateVector& psi) const {
    if (kind_ == AtlasKind::Identity) return psi.norm();
    return (l(t) * psi).norm();
}

double BundleAtlas::fibre_operator_norm(double t, const Operator& m) const {
    if (kind_ == AtlasKind::Identity) return m.norm();
    return (l(t) * m * l_inverse(t)).norm();
}

Operator BundleAtlas::triv_derivative(double t) const {
    if (!triv_dot_) throw ValidationError("atlas has no trivialization derivative");
    Operator d = triv_dot_(t);
    check_dim(d, dim_);
    return d;
}

EvolutionTransport::EvolutionTransport(BundleAtlas atlas, std::shared_ptr<const Propagator> propagator)
    : atlas_(std::move(atlas)), prop_(std::move(propagator)) {
    if (!prop_) throw ValidationError("evolution transport requires a propagator");
    if (prop_->dim() != atlas_.dim()) throw DimMismatch("atlas and propagator dimensions differ");
    if (t_min() >= t_max())
        throw ValidationError("atlas path and propagator domain do not overlap");
}

double EvolutionTransport::t_min() const { return std::max(atlas_.path().t_min, prop_->t0()); }
double EvolutionTransport::t_max() const { return std::min(atlas_.path().t_max, prop_->t1()); }

void EvolutionTransport::check_time(double t, double h) const {
    const double slack = 1e-9 * std::max(1.0, t_max() - t_min());
    if (t - h < t_min() - slack || t + h > t_max() + slack)
        throw BoundaryTime("time " + std::to_string(t) + " outside transport domain");
}

Operator EvolutionTransport::at(double t, double s) const {
    check_time(t);
    check_time(s);
    if (t == s) return Operator::Identity(dim(), dim());
    return atlas_.l_inverse(t) * prop_->at(t, s) * atlas_.l(s);
}

Operator EvolutionTransport::fibre_adjoint(double t, double s) const {
    // <M Phi_s | Psi_t>_t = <Phi_s | M^ddag Psi_t>_s resolves to
    // M^ddag = G(s)^{-1} M^dag G(t) for M mapping the fibre at s to the one at t.
    const Operator m = at(t, s);
    return atlas_.gram(s).partialPivLu().solve(m.adjoint() * atlas_.gram(t));
}

StateVector EvolutionTransport::transport_state(const StateVector& value, double s, double t) const {
    if (value.size() != dim()) throw DimMismatch("section value dimension mismatch");
    if (t == s) return value;
    return at(t, s) * value;
}

Operator EvolutionTransport::transport_morphism(const Operator& a_at_s, double s, double t) const {
    check_dim(a_at_s, dim());
    if (t == s) return a_at_s;
    return at(t, s) * a_at_s * at(s, t);
}

Connection EvolutionTransport::connection(double t, double h) const {
    check_time(t, h);
    Connection c;
    c.gamma = (at(t, t + h) - at(t, t - h)) / (2.0 * h);
    c.hm = -kImag * hbar() * c.gamma;
    return c;
}

FrameField::FrameField(EvolutionTransport transport, OperatorFn basis)
    : transport_(std::move(transport)), basis_(std::move(basis)) {
    if (!basis_) throw ValidationError("frame field requires a basis function");
}

FrameField FrameField::coordinate(EvolutionTransport transport) {
    const int d = transport.dim();
    FrameField f(std::move(transport), [d](double) { return Operator::Identity(d, d); });
    f.coordinate_ = true;
    return f;
}

FrameField FrameField::normal(const EvolutionTransport& transport, double t0, const Operator& seed_basis) {
    check_dim(seed_basis, transport.dim());
    if (!seed_basis.allFinite() || condition_number(seed_basis) > kAtlasCondLimit)
        throw SingularSeed("normal frame seed basis is singular or ill-conditioned");
    EvolutionTransport captured = transport;
    return FrameField(transport,
                      [captured, t0, seed_basis](double t) -> Operator { return captured.at(t, t0) * seed_basis; });
}

Operator FrameField::basis(double t) const {
    Operator e = basis_(t);
    check_dim(e, transport_.dim());
    return e;
}

Operator FrameField::transport_matrix(double t, double s) const {
    if (t == s) return Operator::Identity(transport_.dim(), transport_.dim());
    if (coordinate_) return transport_.at(t, s);
    return basis(t).partialPivLu().solve(transport_.at(t, s) * basis(s));
}

Connection FrameField::connection(double t, double h) const {
    Connection c;
    c.gamma = (transport_matrix(t, t + h) - transport_matrix(t, t - h)) / (2.0 * h);
    c.hm = -kImag * hbar() * c.gamma;
    return c;
}

Operator FrameField::to_frame(double t, const Operator& fibre_endomorphism) const {
    if (coordinate_) return fibre_endomorphism;
    return basis(t).partialPivLu().solve(fibre_endomorphism * basis(t));
}

StateSection lift_state(const BundleAtlas& atlas, StateFn psi_trajectory) {
    if (!psi_trajectory) throw ValidationError("lift_state requires a trajectory");
    BundleAtlas captured = atlas;
    StateFn traj = std::move(psi_trajectory);
    return StateSection{atlas, [captured, traj](double t) -> StateVector {
                            StateVector psi = traj(t);
                            if (psi.size() != captured.dim())
                                throw DimMismatch("trajectory dimension mismatch");
                            return captured.l_inverse(t) * psi;
                        }};
}

Operator evolution_transport(const BundleAtlas& atlas, const Propagator& u, double t, double s) {
    if (atlas.dim() != u.dim()) throw DimMismatch("atlas and propagator dimensions differ");
    if (t == s) return Operator::Identity(atlas.dim(), atlas.dim());
    return atlas.l_inverse(t) * u.at(t, s) * atlas.l(s);
}

MorphismField lift_observable(const BundleAtlas& atlas, const HermitianFamily& observable) {
    if (observable.dim() != atlas.dim()) throw DimMismatch("observable dimension mismatch");
    BundleAtlas captured = atlas;
    HermitianFamily fam = observable;
    OperatorFn ddt;
    if (atlas.kind() == AtlasKind::Identity && observable.has_analytic_derivative())
        ddt = [fam](double t) -> Operator { return fam.derivative(t); };
    return MorphismField{atlas,
                         [captured, fam](double t) -> Operator {
                             return captured.l_inverse(t) * fam(t) * captured.l(t);
                         },
                         ddt};
}

MorphismField lift_observable(const BundleAtlas& atlas, OperatorFn observable) {
    if (!observable) throw ValidationError("lift_observable requires an observable");
    BundleAtlas captured = atlas;
    OperatorFn obs = std::move(observable);
    return MorphismField{atlas,
                         [captured, obs](double t) -> Operator {
                             Operator a = obs(t);
                             check_dim(a, captured.dim());
                             return captured.l_inverse(t) * a * captured.l(t);
                         },
                         nullptr};
}

double fibre_mean_value(const MorphismField& field, const StateSection& section, double t) {
    if (field.atlas.dim() != section.atlas.dim()) throw DimMismatch("field/section dimension mismatch");
    const StateVector psi = section.at(t);
    const double den = std::pow(section.atlas.fibre_norm(t, psi), 2);
    if (den == 0.0) throw ZeroState("fibre mean value of the zero section");
    const Complex num = section.atlas.fibre_inner(t, psi, field.at(t) * psi);
    return num.real() / den;
}

Connection connection_coefficients(const EvolutionTransport& transport, double t, double h) {
    return transport.connection(t, h);
}

Connection connection_coefficients(const FrameField& frame, double t, double h) {
    return frame.connection(t, h);
}

double section_derivation_residual(const EvolutionTransport& transport, const StateSection& section,
                                   const std::vector<double>& t_samples, double h) {
    const Complex ih = kImag * transport.hbar();
    double worst = 0.0;
    for (double t : t_samples) {
        const StateVector psi = section.at(t);
        const StateVector dpsi = (section.at(t + h) - section.at(t - h)) / (2.0 * h);
        const Operator hm = transport.connection(t, h).hm;
        const double r = (ih * dpsi - hm * psi).norm() / std::max(1.0, psi.norm());
        worst = std::max(worst, r);
    }
    return worst;
}

Operator morphism_derivation(const EvolutionTransport& transport, const MorphismField& field, double t,
                             double h) {
    const Operator gamma = transport.connection(t, h).gamma;
    return field.derivative(t, h) - commutator(field.at(t), gamma);
}

Operator morphism_derivation_limit(const EvolutionTransport& transport, const MorphismField& field,
                                   double t, double epsilon) {
    const Operator moved = transport.at(t, t + epsilon) * field.at(t + epsilon) * transport.at(t + epsilon, t);
    return (moved - field.at(t)) / epsilon;
}

Operator transport_morphism(const EvolutionTransport& transport, const Operator& a_at_s, double s,
                            double t) {
    return transport.transport_morphism(a_at_s, s, t);
}

FrameField normal_frame(const EvolutionTransport& transport, double t0, const Operator& seed_basis) {
    return FrameField::normal(transport, t0, seed_basis);
}

} // namespace fibredyn
