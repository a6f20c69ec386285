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

#include "fibredyn/pictures.hpp"

#include <cmath>

#include "fibredyn/rng.hpp"

namespace fibredyn {

namespace {
const Complex kImag(0.0, 1.0);
}

UnitaryFamily::UnitaryFamily(int dim, double anchor, OperatorFn eval, OperatorFn time_derivative)
    : dim_(dim), anchor_(anchor), eval_(std::move(eval)), ddt_(std::move(time_derivative)) {
    if (dim < 1 || dim > kMaxDim) throw DimMismatch("unitary family dimension outside supported range");
    if (!eval_) throw ValidationError("unitary family requires an evaluation function");
    const Operator v0 = eval_(anchor_);
    check_dim(v0, dim_);
    if ((v0 - Operator::Identity(dim_, dim_)).norm() > 1e-10)
        throw ValidationError("unitary family must satisfy V(t1, t1) = identity");
}

UnitaryFamily UnitaryFamily::identity(int dim, double anchor) {
    return UnitaryFamily(
        dim, anchor, [dim](double) -> Operator { return Operator::Identity(dim, dim); },
        [dim](double) -> Operator { return Operator::Zero(dim, dim); });
}

UnitaryFamily UnitaryFamily::heisenberg(std::shared_ptr<const Propagator> u, double anchor) {
    if (!u) throw ValidationError("heisenberg family requires a propagator");
    std::shared_ptr<const Propagator> prop = u;
    const double hbar = prop->hbar();
    UnitaryFamily fam(
        prop->dim(), anchor, [prop, anchor](double t) -> Operator { return prop->at(anchor, t); },
        [prop, anchor, hbar](double t) -> Operator {
            // d/dt U(t1,t) = (i/hbar) U(t1,t) H(t).
            return kImag / hbar * prop->at(anchor, t) * prop->family()(t);
        });
    fam.backing_ = std::move(prop);
    return fam;
}

UnitaryFamily UnitaryFamily::random_smooth(int dim, double anchor, std::uint64_t seed) {
    SplitRng rng(seed, "unitary-family");
    const Operator s1 = rng.hermitian(dim, 1.0);
    const Operator s2 = rng.hermitian(dim, 1.0);
    const double a1 = rng.uniform(0.3, 0.9), a2 = rng.uniform(0.3, 0.9);
    const double w1 = rng.uniform(0.5, 1.5), w2 = rng.uniform(0.5, 1.5);
    return UnitaryFamily(dim, anchor, [=](double t) -> Operator {
        const double u = t - anchor;
        const Operator k = a1 * std::sin(w1 * u) * s1 + a2 * (std::cos(w2 * u) - 1.0) * s2;
        return matrix_exponential(-kImag * k);
    });
}

Operator UnitaryFamily::at(double t) const {
    Operator v = eval_(t);
    check_dim(v, dim_);
    return v;
}

Operator UnitaryFamily::inverse_at(double t) const { return at(t).adjoint(); }

Operator UnitaryFamily::derivative(double t, double h) const {
    if (ddt_) {
        Operator d = ddt_(t);
        check_dim(d, dim_);
        return d;
    }
    return (at(t + h) - at(t - h)) / (2.0 * h);
}

Operator to_heisenberg_observable(const Propagator& u, const HermitianFamily& a, double t, double t0) {
    if (a.dim() != u.dim()) throw DimMismatch("observable/propagator dimension mismatch");
    return u.at(t0, t) * a(t) * u.at(t, t0);
}

Operator to_heisenberg_observable(const Propagator& u, const Operator& a_static, double t, double t0) {
    check_dim(a_static, u.dim());
    return u.at(t0, t) * a_static * u.at(t, t0);
}

StateVector heisenberg_state(const StateFn& trajectory, double t0) { return trajectory(t0); }

double heisenberg_eom_residual(const Propagator& u, const HermitianFamily& a, double t, double t0,
                               double h) {
    if (!(u.contains(t - h) && u.contains(t + h)))
        throw BoundaryTime("heisenberg residual needs t +/- h inside the propagator domain");
    auto heis = [&](double tau) { return to_heisenberg_observable(u, a, tau, t0); };
    const Operator dadt = (heis(t + h) - heis(t - h)) / (2.0 * h);
    const Operator a_h = heis(t);
    const Operator h_h = u.at(t0, t) * u.family()(t) * u.at(t, t0);
    const Operator da_h = u.at(t0, t) * a.derivative(t, h) * u.at(t, t0);
    const Complex ih = kImag * u.hbar();
    return (ih * dadt - commutator(a_h, h_h) - ih * da_h).norm();
}

VPair to_v_picture(const UnitaryFamily& v, const StateVector& psi, const Operator& a, double t) {
    if (psi.size() != v.dim()) throw DimMismatch("state dimension mismatch");
    check_dim(a, v.dim());
    const Operator vt = v.at(t);
    return VPair{vt * psi, vt * a * v.inverse_at(t)};
}

VHamiltonians v_hamiltonians(const UnitaryFamily& v, const HermitianFamily& h, double t, double fd) {
    if (h.dim() != v.dim()) throw DimMismatch("hamiltonian/family dimension mismatch");
    const Operator vt = v.at(t);
    const Operator vinv = v.inverse_at(t);
    const Operator vdot = v.derivative(t, fd);
    VHamiltonians out;
    out.transformed = vt * h(t) * vinv;
    out.generator = -kImag * h.hbar() * vdot * vinv;
    out.modified = out.transformed - out.generator;
    return out;
}

Operator v_propagator(const UnitaryFamily& v, const Propagator& u, double t, double t0) {
    if (v.dim() != u.dim()) throw DimMismatch("family/propagator dimension mismatch");
    if (v.backed_by(u)) {
        // V(t1,t) U(t,t0) V^{-1}(t1,t0) = U(t1,t) U(t,t0) U(t0,t1) = U(t1,t1).
        return Operator::Identity(u.dim(), u.dim());
    }
    return v.at(t) * u.at(t, t0) * v.at(t0).adjoint();
}

VResiduals v_eom_residuals(const UnitaryFamily& v, const HermitianFamily& h, const StateFn& trajectory,
                           const HermitianFamily& a, double t, double fd) {
    const Complex ih = kImag * h.hbar();
    const VHamiltonians ham = v_hamiltonians(v, h, t, fd);

    auto state = [&](double tau) -> StateVector { return v.at(tau) * trajectory(tau); };
    const StateVector dstate = (state(t + fd) - state(t - fd)) / (2.0 * fd);
    VResiduals r;
    r.state = (ih * dstate - ham.modified * state(t)).norm();

    auto obs = [&](double tau) -> Operator { return v.at(tau) * a(tau) * v.inverse_at(tau); };
    const Operator dobs = (obs(t + fd) - obs(t - fd)) / (2.0 * fd);
    const Operator da_v = v.at(t) * a.derivative(t, fd) * v.inverse_at(t);
    r.observable = (ih * dobs - commutator(obs(t), ham.generator) - ih * da_v).norm();
    return r;
}

VResiduals v_eom_residuals_bundle(const BundleAtlas& atlas, const UnitaryFamily& v,
                                  const HermitianFamily& h, const StateFn& trajectory,
                                  const HermitianFamily& a, double t, double fd) {
    if (atlas.dim() != v.dim()) throw DimMismatch("atlas/family dimension mismatch");
    const double t1 = v.anchor();
    const Complex ih = kImag * h.hbar();

    // Everything below lives in the fixed fibre at gamma(t1); V_gamma(t1,t) is
    // the two-point matrix l^{-1}(t1) V(t1,t) l(t).
    const Operator l1_inv = atlas.l_inverse(t1);
    auto v_gamma = [&](double tau) -> Operator { return l1_inv * v.at(tau) * atlas.l(tau); };
    const StateSection lifted = lift_state(atlas, trajectory);
    auto state = [&](double tau) -> StateVector { return v_gamma(tau) * lifted.at(tau); };

    const Operator v_g = v_gamma(t);
    const Operator v_g_inv = v_g.partialPivLu().inverse();
    const MorphismField h_lift = lift_observable(atlas, h);
    const MorphismField a_lift = lift_observable(atlas, a);

    // Modified and additional Hamiltonians in the anchor fibre: the V-forms of
    // the lifted Hamiltonian and the lifted generator.
    const VHamiltonians ham = v_hamiltonians(v, h, t, fd);
    const Operator generator_g = l1_inv * ham.generator * atlas.l(t1);
    const Operator modified_g = v_g * h_lift.at(t) * v_g_inv - generator_g;

    VResiduals r;
    const StateVector dstate = (state(t + fd) - state(t - fd)) / (2.0 * fd);
    r.state = atlas.fibre_norm(t1, ih * dstate - modified_g * state(t));

    auto obs = [&](double tau) -> Operator {
        const Operator vg = v_gamma(tau);
        return vg * a_lift.at(tau) * vg.partialPivLu().inverse();
    };
    const Operator dobs = (obs(t + fd) - obs(t - fd)) / (2.0 * fd);
    // Lift of the Hilbert-space dA/dt, then carried to the anchor fibre.
    const Operator da_gamma = atlas.l_inverse(t) * a.derivative(t, fd) * atlas.l(t);
    const Operator da_v = v_g * da_gamma * v_g_inv;
    r.observable =
        atlas.fibre_operator_norm(t1, ih * dobs - commutator(obs(t), generator_g) - ih * da_v);
    return r;
}

InteractionSplit interaction_split(const HermitianFamily& h0, const HermitianFamily& h_int, double t,
                                   double t0, const IntegratorConfig& cfg) {
    if (h0.dim() != h_int.dim()) throw DimMismatch("split Hamiltonians must share dimension");
    if (t == t0) {
        const Operator eye = Operator::Identity(h0.dim(), h0.dim());
        return InteractionSplit{eye, eye, eye};
    }
    const double lo = std::min(t0, t), hi = std::max(t0, t);
    auto free_prop = std::make_shared<const Propagator>(Propagator::build(h0, lo, hi, cfg));

    // Interaction Hamiltonian carried into the free frame, sampled on the same
    // grid as the free propagator.
    HermitianFamily transformed(
        h_int.dim(),
        [free_prop, h_int, t0](double tau) -> Operator {
            return free_prop->at(t0, tau) * h_int(tau) * free_prop->at(tau, t0);
        },
        nullptr, h_int.hbar());

    const Propagator int_prop = Propagator::build(transformed, lo, hi, cfg);
    const Propagator full_prop = Propagator::build(h0 + h_int, lo, hi, cfg);

    InteractionSplit out;
    out.u_free = free_prop->at(t, t0);
    out.u_interaction = int_prop.at(t, t0);
    out.u_full = full_prop.at(t, t0);
    return out;
}

VResiduals interaction_eom_residuals(const HermitianFamily& h0, const HermitianFamily& h_int,
                                     const StateFn& trajectory, const HermitianFamily& a, double t,
                                     double t0, const IntegratorConfig& cfg, double fd) {
    if (h0.dim() != h_int.dim() || h0.dim() != a.dim())
        throw DimMismatch("interaction residuals require matching dimensions");
    const double lo = std::min({t0, t - 2.0 * fd}), hi = std::max({t0, t + 2.0 * fd});
    auto free_prop = std::make_shared<const Propagator>(Propagator::build(h0, lo, hi, cfg));
    const UnitaryFamily v = UnitaryFamily::heisenberg(free_prop, t0);
    return v_eom_residuals(v, h0 + h_int, trajectory, a, t, fd);
}

} // namespace fibredyn
