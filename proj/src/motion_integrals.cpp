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

#include "fibredyn/motion_integrals.hpp"

#include <algorithm>
#include <cmath>

#include "fibredyn/rng.hpp"

namespace fibredyn {

double IntegralVerdict::max_residual() const {
    return std::max({mean_constancy_residual, commutation_residual, lax_residual, derivation_residual,
                     heisenberg_constancy_residual});
}

bool IntegralVerdict::unanimous() const {
    const bool votes[] = {tol.check(mean_constancy_residual), tol.check(commutation_residual),
                          tol.check(lax_residual), tol.check(derivation_residual),
                          tol.check(heisenberg_constancy_residual)};
    bool all = true, none = true;
    for (bool v : votes) {
        all = all && v;
        none = none && !v;
    }
    return all || none;
}

namespace {

void require_spanning(const std::vector<StateVector>& states, int dim) {
    if (static_cast<int>(states.size()) < dim)
        throw InsufficientStates("need at least dim states to span the space");
    Operator m(dim, static_cast<int>(states.size()));
    for (std::size_t j = 0; j < states.size(); ++j) {
        if (states[j].size() != dim) throw DimMismatch("state dimension mismatch in spanning set");
        m.col(static_cast<Eigen::Index>(j)) = states[j];
    }
    Eigen::JacobiSVD<Operator> svd(m);
    const double smax = svd.singularValues().maxCoeff();
    const double smin = svd.singularValues().minCoeff();
    if (smax <= 0.0 || smin <= 1e-8 * smax)
        throw InsufficientStates("state set does not span the space");
}

} // namespace

double mean_constancy_residual(const Propagator& u, const HermitianFamily& a,
                               const std::vector<StateVector>& states,
                               const std::vector<double>& t_samples, double t0) {
    require_spanning(states, u.dim());
    double worst = 0.0;
    const Operator a0 = a(t0);
    for (const StateVector& psi0 : states) {
        const double m0 = mean_value(a0, psi0);
        for (double t : t_samples) {
            const StateVector psi = u.at(t, t0) * psi0;
            worst = std::max(worst, std::abs(mean_value(a(t), psi) - m0));
        }
    }
    return worst;
}

double commutation_residual(const Propagator& u, const HermitianFamily& a,
                            const std::vector<double>& t_samples, double t0) {
    double worst = 0.0;
    const Operator a0 = a(t0);
    for (double t : t_samples) {
        const Operator at = a(t);
        const Operator back = u.at(t0, t);
        const double r = (back * at - a0 * back).norm() / std::max(1.0, at.norm());
        worst = std::max(worst, r);
    }
    return worst;
}

double lax_residual(const MorphismField& field, const FrameField& frame,
                    const std::vector<double>& t_samples, double h) {
    double worst = 0.0;
    for (double t : t_samples) {
        const Operator am = frame.to_frame(t, field.at(t));
        Operator dam;
        if (frame.is_coordinate_frame()) {
            dam = field.derivative(t, h);
        } else {
            dam = (frame.to_frame(t + h, field.at(t + h)) - frame.to_frame(t - h, field.at(t - h))) /
                  (2.0 * h);
        }
        const Operator gamma = frame.connection(t, h).gamma;
        const double r = (dam - commutator(am, gamma)).norm() / std::max(1.0, am.norm());
        worst = std::max(worst, r);
    }
    return worst;
}

double heisenberg_constancy_residual(const Propagator& u, const HermitianFamily& a,
                                     const std::vector<double>& t_samples, double t0) {
    const Operator a0 = a(t0);
    const double scale = std::max(1.0, a0.norm());
    double worst = 0.0;
    for (double t : t_samples) {
        const Operator heis = u.at(t0, t) * a(t) * u.at(t, t0);
        worst = std::max(worst, (heis - a0).norm() / scale);
    }
    return worst;
}

GaugePair gauge_transform(OperatorFn a, OperatorFn gamma, OperatorFn w, double h) {
    if (!a || !gamma || !w) throw ValidationError("gauge transform requires all three fields");
    OperatorFn a_fn = std::move(a), g_fn = std::move(gamma), w_fn = std::move(w);

    auto inverse_of = [](const Operator& m) {
        if (!m.allFinite() || condition_number(m) > 1e8)
            throw SingularGauge("gauge matrix is singular or ill-conditioned");
        return Operator(m.partialPivLu().inverse());
    };

    GaugePair out;
    out.a = [a_fn, w_fn, inverse_of](double t) {
        const Operator wt = w_fn(t);
        return Operator(wt * a_fn(t) * inverse_of(wt));
    };
    out.gamma = [g_fn, w_fn, inverse_of, h](double t) {
        const Operator wt = w_fn(t);
        const Operator winv = inverse_of(wt);
        const Operator wdot = (w_fn(t + h) - w_fn(t - h)) / (2.0 * h);
        return Operator(wt * g_fn(t) * winv - wdot * winv);
    };
    return out;
}

EigenConstancy eigenvalue_constancy_check(const Propagator& u, const HermitianFamily& a,
                                          const StateVector& psi0, const std::vector<double>& t_samples,
                                          double t0, double eigen_tol) {
    EigenConstancy out;
    if (psi0.size() != u.dim()) throw DimMismatch("state dimension mismatch");
    if (psi0.norm() == 0.0) throw ZeroState("eigen trajectory of the zero state");

    const Operator a0 = a(t0);
    const double a_val = mean_value(a0, psi0);
    out.initial_eigenvalue = a_val;
    const double defect0 = (a0 * psi0 - a_val * psi0).norm() / psi0.norm();
    if (defect0 > eigen_tol * std::max(1.0, a0.norm())) return out; // not an eigenvector to begin with

    out.is_eigen_trajectory = true;
    for (double t : t_samples) {
        const StateVector psi = u.at(t, t0) * psi0;
        const Operator at = a(t);
        const double val = mean_value(at, psi);
        const double defect = (at * psi - val * psi).norm() / psi.norm();
        if (defect > eigen_tol * std::max(1.0, at.norm())) out.is_eigen_trajectory = false;
        out.eigenvalue_drift = std::max(out.eigenvalue_drift, std::abs(val - a_val));
    }
    return out;
}

IntegralVerdict certify(const Propagator& u, const EvolutionTransport& transport,
                        const MorphismField& field, const Tolerance& tol, std::uint64_t seed) {
    if (u.dim() != transport.dim() || u.dim() != transport.atlas().dim())
        throw DimMismatch("certify inputs must share dimension");
    const int dim = u.dim();
    const BundleAtlas& atlas = transport.atlas();

    const double lo = std::max(u.t0(), transport.t_min());
    const double hi = std::min(u.t1(), transport.t_max());
    const double margin = std::max(4.0 * kDefaultFdStep, 0.02 * (hi - lo));
    const double t0 = lo;
    std::vector<double> samples;
    for (int i = 0; i < 8; ++i)
        samples.push_back(lo + margin + (hi - lo - 2.0 * margin) * i / 7.0);

    // Hilbert-space observable recovered through the atlas.
    BundleAtlas atlas_copy = atlas;
    MorphismField f = field;
    HermitianFamily a_hilbert(
        dim,
        [atlas_copy, f](double t) -> Operator {
            return atlas_copy.l(t) * f.at(t) * atlas_copy.l_inverse(t);
        },
        nullptr, u.hbar());

    // Spanning Haar states, frame condition below 1e2 (Gram condition 1e4).
    SplitRng rng(seed, "certify-states");
    std::vector<StateVector> states;
    for (int attempt = 0;; ++attempt) {
        states.clear();
        for (int k = 0; k < 2 * dim; ++k) states.push_back(rng.haar_state(dim));
        Operator m(dim, 2 * dim);
        for (int k = 0; k < 2 * dim; ++k) m.col(k) = states[static_cast<std::size_t>(k)];
        if (condition_number(m) <= 1e2) break;
        if (attempt >= 64) throw InsufficientStates("could not draw a well-conditioned spanning set");
    }

    IntegralVerdict v;
    v.tol = tol;

    // Mean constancy through the fibre metric (identical to Hilbert means).
    {
        require_spanning(states, dim);
        double worst = 0.0;
        for (const StateVector& psi0 : states) {
            const StateVector section0 = atlas.l_inverse(t0) * psi0;
            const StateVector f0 = field.at(t0) * section0;
            const double den0 = std::pow(atlas.fibre_norm(t0, section0), 2);
            const double m0 = atlas.fibre_inner(t0, section0, f0).real() / den0;
            for (double t : samples) {
                const StateVector st = transport.at(t, t0) * section0;
                const double den = std::pow(atlas.fibre_norm(t, st), 2);
                const double mt = atlas.fibre_inner(t, st, field.at(t) * st).real() / den;
                worst = std::max(worst, std::abs(mt - m0));
            }
        }
        v.mean_constancy_residual = worst;
    }

    v.commutation_residual = commutation_residual(u, a_hilbert, samples, t0);
    v.lax_residual = lax_residual(field, FrameField::coordinate(transport), samples);
    {
        double worst = 0.0;
        for (double t : samples) {
            const double r =
                morphism_derivation(transport, field, t).norm() / std::max(1.0, field.at(t).norm());
            worst = std::max(worst, r);
        }
        v.derivation_residual = worst;
    }
    v.heisenberg_constancy_residual = heisenberg_constancy_residual(u, a_hilbert, samples, t0);

    v.is_integral = tol.check(v.mean_constancy_residual) && tol.check(v.commutation_residual) &&
                    tol.check(v.lax_residual) && tol.check(v.derivation_residual) &&
                    tol.check(v.heisenberg_constancy_residual);
    return v;
}

} // namespace fibredyn
