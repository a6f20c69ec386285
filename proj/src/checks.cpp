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

#include "fibredyn/checks.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <limits>
#include <thread>

#include "fibredyn/generators.hpp"
#include "fibredyn/motion_integrals.hpp"
#include "fibredyn/pictures.hpp"
#include "fibredyn/rng.hpp"
#include "fibredyn/scenario.hpp"

namespace fibredyn {

namespace {

const Complex kImag(0.0, 1.0);

struct SuiteContext {
    const ScenarioSpec& spec;
    int dim;
    double hbar;
    double t0, t1, span, cell;
    double fd = kDefaultFdStep;
    Tolerance tol;

    HermitianFamily h;
    std::shared_ptr<const Propagator> prop;
    std::shared_ptr<const Propagator> prop_fine; // only when a check needs the continuum generator
    BundleAtlas atlas;
    EvolutionTransport transport;
    std::vector<std::string> obs_names;
    std::vector<HermitianFamily> observables;
    std::vector<MorphismField> morphisms;
    std::vector<double> samples;

    bool heisenberg = false, v_on = false, interaction_on = false;
    std::uint64_t v_seed = 0;
    HermitianFamily h_free, h_int;

    explicit SuiteContext(const ScenarioSpec& s)
        : spec(s), dim(s.dimension), hbar(s.hbar), t0(s.time.t0), t1(s.time.t1), span(t1 - t0),
          cell(span / s.time.steps), tol(s.tolerances), h(s.hamiltonian.to_family(s.hbar)),
          prop(std::make_shared<const Propagator>(Propagator::build(
              h, t0, t1, IntegratorConfig{span / s.time.steps, Tolerance(1e-6, 0.0), false,
                                          Scheme::MidpointMagnus1}))),
          atlas(make_atlas(s.atlas.kind, ObserverPath(t0, t1), s.dimension, s.atlas.seed,
                           s.atlas.cond_cap)),
          transport(atlas, prop) {
        for (const OperatorSpec& o : s.observables) {
            obs_names.push_back(o.name);
            observables.push_back(o.to_family(hbar));
            morphisms.push_back(lift_observable(atlas, observables.back()));
        }
        const double margin = std::max(4.0 * fd, 0.02 * span);
        for (int i = 0; i < 7; ++i)
            samples.push_back(t0 + margin + (span - 2.0 * margin) * i / 6.0);
        heisenberg = s.has_picture(PictureSpec::Kind::Heisenberg);
        if (const PictureSpec* p = s.find_picture(PictureSpec::Kind::V)) {
            v_on = true;
            v_seed = p->seed != 0 ? p->seed : SplitRng(s.seed, "v-picture-family").next_u64();
        }
        if (const PictureSpec* p = s.find_picture(PictureSpec::Kind::Interaction)) {
            interaction_on = true;
            OperatorSpec part = s.hamiltonian;
            part.terms.assign(s.hamiltonian.terms.begin(), s.hamiltonian.terms.begin() + p->split);
            h_free = part.to_family(hbar);
            part.terms.assign(s.hamiltonian.terms.begin() + p->split, s.hamiltonian.terms.end());
            h_int = part.to_family(hbar);
        }
    }

    void build_fine() {
        if (!prop_fine)
            prop_fine = std::make_shared<const Propagator>(Propagator::build(
                h, t0, t1,
                IntegratorConfig{std::min(cell, 2e-4), Tolerance(1e-6, 0.0), false,
                                 Scheme::MidpointMagnus1}));
    }

    double rand_time(SplitRng& rng, double margin = 0.0) const {
        return rng.uniform(t0 + margin, t1 - margin);
    }
    /// Scenario observables, or one seeded random static observable.
    std::vector<HermitianFamily> obs_or_random(SplitRng& rng) const {
        if (!observables.empty()) return observables;
        return {HermitianFamily::constant(rng.hermitian(dim, 1.0), hbar)};
    }
    UnitaryFamily v_family() const { return UnitaryFamily::random_smooth(dim, t0, v_seed); }
    StateFn trajectory(const StateVector& psi0) const {
        std::shared_ptr<const Propagator> u = prop;
        const double start = t0;
        return [u, psi0, start](double t) -> StateVector { return u->at(t, start) * psi0; };
    }
    IntegratorConfig grid_cfg() const {
        return IntegratorConfig{cell, Tolerance(1e-6, 0.0), false, Scheme::MidpointMagnus1};
    }
};

struct CheckDef {
    const char* name;
    const char* equation;
    const char* description;
    enum Req { None, NeedHeisenberg, NeedV, NeedInteraction } req = None;
    double (*threshold)(const SuiteContext&);
    double (*run)(SuiteContext&, SplitRng&, std::vector<VerdictRecord>&);
};

double tol_of(const SuiteContext& c) { return c.tol.abs + c.tol.rel; }
double law_tol(const SuiteContext& c) {
    return c.prop->scheme() == Scheme::ExactPiecewise ? 1e-9 : 1e-7;
}

// ---- propagation ----

double run_prop_unitarity(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    double worst = 0.0;
    for (const Operator& f : c.prop->cached_steps()) worst = std::max(worst, unitarity_defect(f));
    for (int i = 0; i < 8; ++i)
        worst = std::max(worst, unitarity_defect(c.prop->at(c.rand_time(rng), c.rand_time(rng))));
    return worst;
}

double run_prop_composition(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    double worst = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double r = c.rand_time(rng), s = c.rand_time(rng), t = c.rand_time(rng);
        worst = std::max(worst, (c.prop->at(t, r) - c.prop->at(t, s) * c.prop->at(s, r)).norm());
    }
    return worst;
}

double run_prop_inverse(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    double worst = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double a = c.rand_time(rng), b = c.rand_time(rng);
        const Operator fwd = c.prop->at(b, a);
        worst = std::max(worst, (fwd.adjoint() - c.prop->at(a, b)).norm());
        worst = std::max(worst, (fwd.adjoint() - Operator(fwd.partialPivLu().inverse())).norm());
    }
    return worst;
}

double run_schrodinger_residual(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    return schrodinger_residual(c.h, c.trajectory(rng.haar_state(c.dim)), c.samples, c.fd);
}

double run_hamiltonian_recovery(SuiteContext& c, SplitRng&, std::vector<VerdictRecord>&) {
    double worst = 0.0;
    for (double t : c.samples) {
        const Operator ht = c.h(t);
        const double r =
            (hamiltonian_from_propagator(*c.prop_fine, t, c.fd) - ht).norm() / std::max(1.0, ht.norm());
        worst = std::max(worst, r);
    }
    return worst;
}

// ---- bundle geometry ----

double run_lift_roundtrip(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    double worst = 0.0;
    for (int i = 0; i < 6; ++i) {
        const double t = c.rand_time(rng);
        const StateVector psi = rng.haar_state(c.dim);
        worst = std::max(worst, (c.atlas.l(t) * (c.atlas.l_inverse(t) * psi) - psi).norm());
    }
    return worst;
}

double run_transport_composition(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    double worst = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double r = c.rand_time(rng), s = c.rand_time(rng), t = c.rand_time(rng);
        worst = std::max(
            worst, (c.transport.at(t, s) * c.transport.at(s, r) - c.transport.at(t, r)).norm());
    }
    return worst;
}

double run_transport_adjoint(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    const Operator eye = Operator::Identity(c.dim, c.dim);
    double worst = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double s = c.rand_time(rng), t = c.rand_time(rng);
        worst = std::max(worst, (c.transport.at(s, t) * c.transport.at(t, s) - eye).norm());
        worst = std::max(worst, (c.transport.fibre_adjoint(t, s) - c.transport.at(s, t)).norm());
    }
    return worst;
}

double run_section_transport(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    double worst = 0.0;
    for (int i = 0; i < 6; ++i) {
        const StateVector psi0 = rng.haar_state(c.dim);
        const double s = c.rand_time(rng), t = c.rand_time(rng);
        const StateVector section_s = c.atlas.l_inverse(s) * (c.prop->at(s, c.t0) * psi0);
        const StateVector moved = c.transport.transport_state(section_s, s, t);
        const StateVector expected = c.atlas.l_inverse(t) * (c.prop->at(t, c.t0) * psi0);
        worst = std::max(worst, c.atlas.fibre_norm(t, moved - expected));
    }
    return worst;
}

double run_section_derivation(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    const StateVector section0 = c.atlas.l_inverse(c.t0) * rng.haar_state(c.dim);
    EvolutionTransport transport = c.transport;
    const double start = c.t0;
    StateSection section{c.atlas, [transport, section0, start](double t) -> StateVector {
                             return transport.at(t, start) * section0;
                         }};
    return section_derivation_residual(c.transport, section, c.samples, c.fd);
}

double run_connection(SuiteContext& c, SplitRng&, std::vector<VerdictRecord>&) {
    const EvolutionTransport fine(c.atlas, c.prop_fine);
    double worst = 0.0;
    for (double t : c.samples) {
        const Connection coarse = fine.connection(t, c.fd);
        // Richardson self-consistency of the differencing.
        const Connection half = fine.connection(t, c.fd / 2.0);
        worst = std::max(worst,
                         (coarse.gamma - half.gamma).norm() / std::max(1.0, half.gamma.norm()));
        if (c.atlas.kind() == AtlasKind::Identity) {
            const Operator ht = c.h(t);
            worst = std::max(worst, (coarse.hm - ht).norm() / std::max(1.0, ht.norm()));
        } else if (c.atlas.kind() == AtlasKind::UnitaryField) {
            worst = std::max(worst, hermiticity_defect(coarse.hm) / std::max(1.0, coarse.hm.norm()));
        }
    }
    return worst;
}

double run_fibre_mean(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    double worst = 0.0;
    for (const HermitianFamily& a : c.obs_or_random(rng)) {
        const MorphismField field = lift_observable(c.atlas, a);
        for (int i = 0; i < 4; ++i) {
            const double t = c.rand_time(rng);
            const StateVector psi = rng.haar_state(c.dim);
            BundleAtlas atlas = c.atlas;
            StateSection section{atlas, [atlas, psi](double tau) -> StateVector {
                                     return atlas.l_inverse(tau) * psi;
                                 }};
            worst = std::max(worst,
                             std::abs(fibre_mean_value(field, section, t) - mean_value(a(t), psi)));
        }
    }
    return worst;
}

// ---- Heisenberg picture ----

double run_heisenberg_mean(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    double worst = 0.0;
    for (const HermitianFamily& a : c.obs_or_random(rng)) {
        const MorphismField field = lift_observable(c.atlas, a);
        for (int i = 0; i < 4; ++i) {
            const StateVector psi0 = rng.haar_state(c.dim);
            const double t = c.rand_time(rng);
            const StateVector psi_t = c.prop->at(t, c.t0) * psi0;
            const double schrodinger = mean_value(a(t), psi_t);
            const Operator heis = to_heisenberg_observable(*c.prop, a, t, c.t0);
            worst = std::max(worst, std::abs(schrodinger - mean_value(heis, psi0)));

            // Bundle side: transported morphism against the frozen section.
            const StateVector section0 = c.atlas.l_inverse(c.t0) * psi0;
            const StateVector section_t = c.transport.at(t, c.t0) * section0;
            const double bundle_mean =
                c.atlas.fibre_inner(t, section_t, field.at(t) * section_t).real() /
                std::pow(c.atlas.fibre_norm(t, section_t), 2);
            const Operator heis_morph = c.transport.transport_morphism(field.at(t), t, c.t0);
            const double bundle_heis =
                c.atlas.fibre_inner(c.t0, section0, heis_morph * section0).real() /
                std::pow(c.atlas.fibre_norm(c.t0, section0), 2);
            worst = std::max(worst, std::abs(bundle_mean - bundle_heis));
            worst = std::max(worst, std::abs(bundle_mean - schrodinger));
        }
    }
    return worst;
}

double run_heisenberg_eom(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    double worst = 0.0;
    for (const HermitianFamily& a : c.obs_or_random(rng))
        for (int i = 1; i < 6; i += 2)
            worst = std::max(worst, heisenberg_eom_residual(*c.prop, a, c.samples[i], c.t0, c.fd));
    return worst;
}

double run_heisenberg_transport(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    double worst = 0.0;
    for (const HermitianFamily& a : c.obs_or_random(rng)) {
        const MorphismField field = lift_observable(c.atlas, a);
        for (int i = 0; i < 4; ++i) {
            const double t = c.rand_time(rng);
            const Operator heis = to_heisenberg_observable(*c.prop, a, t, c.t0);
            const Operator lifted = c.atlas.l_inverse(c.t0) * heis * c.atlas.l(c.t0);
            const Operator transported = c.transport.transport_morphism(field.at(t), t, c.t0);
            worst = std::max(worst, (lifted - transported).norm());
        }
    }
    return worst;
}

double run_morphism_derivation(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    const double eps = 1e-4;
    double worst = 0.0;
    for (const HermitianFamily& a : c.obs_or_random(rng)) {
        const MorphismField field = lift_observable(c.atlas, a);
        for (int i = 1; i < 6; i += 2) {
            const double t = c.samples[i];
            const Operator matrix_form = morphism_derivation(c.transport, field, t, c.fd);
            const Operator limit_form = morphism_derivation_limit(c.transport, field, t, eps);
            worst = std::max(worst,
                             (limit_form - matrix_form).norm() / std::max(1.0, field.at(t).norm()));
        }
    }
    return worst;
}

double run_derivation_transport(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    const Operator a0 = c.atlas.l_inverse(c.t0) * rng.hermitian(c.dim, 1.0) * c.atlas.l(c.t0);
    EvolutionTransport transport = c.transport;
    const double start = c.t0;
    MorphismField moved{c.atlas,
                        [transport, a0, start](double t) -> Operator {
                            return transport.at(t, start) * a0 * transport.at(start, t);
                        },
                        nullptr};
    double worst = 0.0;
    for (double t : c.samples)
        worst = std::max(worst, morphism_derivation(c.transport, moved, t, c.fd).norm() /
                                    std::max(1.0, moved.at(t).norm()));
    return worst;
}

double run_heisenberg_derivation(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    double worst = 0.0;
    for (const HermitianFamily& a : c.obs_or_random(rng)) {
        const MorphismField field = lift_observable(c.atlas, a);
        for (int i = 1; i < 6; i += 2) {
            const double t = c.samples[i];
            auto heis_morph = [&](double tau) {
                return c.transport.transport_morphism(field.at(tau), tau, c.t0);
            };
            const Operator lhs = (heis_morph(t + c.fd) - heis_morph(t - c.fd)) / (2.0 * c.fd);
            const Operator rhs = c.transport.at(c.t0, t) *
                                 morphism_derivation(c.transport, field, t, c.fd) *
                                 c.transport.at(t, c.t0);
            worst = std::max(worst, (lhs - rhs).norm() / std::max(1.0, field.at(t).norm()));
        }
    }
    return worst;
}

// ---- V picture ----

double run_v_mean(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    const UnitaryFamily v = c.v_family();
    double worst = 0.0;
    for (const HermitianFamily& a : c.obs_or_random(rng))
        for (int i = 0; i < 4; ++i) {
            const double t = c.rand_time(rng);
            const StateVector psi = rng.haar_state(c.dim);
            const VPair pv = to_v_picture(v, psi, a(t), t);
            worst = std::max(worst, std::abs(mean_value(a(t), psi) -
                                             mean_value(pv.observable, pv.state)));
        }
    return worst;
}

double run_v_state_eom(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    const UnitaryFamily v = c.v_family();
    const StateFn traj = c.trajectory(rng.haar_state(c.dim));
    double worst = 0.0;
    for (const HermitianFamily& a : c.obs_or_random(rng))
        for (int i = 1; i < 6; i += 2)
            worst = std::max(worst, v_eom_residuals(v, c.h, traj, a, c.samples[i], c.fd).state);
    return worst;
}

double run_v_observable_eom(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    const UnitaryFamily v = c.v_family();
    const StateFn traj = c.trajectory(rng.haar_state(c.dim));
    double worst = 0.0;
    for (const HermitianFamily& a : c.obs_or_random(rng))
        for (int i = 1; i < 6; i += 2)
            worst = std::max(worst, v_eom_residuals(v, c.h, traj, a, c.samples[i], c.fd).observable);
    return worst;
}

double run_v_bundle_consistency(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    const UnitaryFamily v = c.v_family();
    const StateFn traj = c.trajectory(rng.haar_state(c.dim));
    double worst = 0.0;
    for (const HermitianFamily& a : c.obs_or_random(rng))
        for (int i = 1; i < 6; i += 4) {
            const double t = c.samples[i];
            const VResiduals hilbert = v_eom_residuals(v, c.h, traj, a, t, c.fd);
            const VResiduals bundle = v_eom_residuals_bundle(c.atlas, v, c.h, traj, a, t, c.fd);
            worst = std::max({worst, std::abs(hilbert.state - bundle.state),
                              std::abs(hilbert.observable - bundle.observable)});
        }
    return worst;
}

double run_v_propagator(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    const UnitaryFamily v = c.v_family();
    const Complex ih = kImag * c.hbar;
    double worst = 0.0;
    for (int i = 1; i < 6; i += 2) {
        const double t = c.samples[i];
        const StateVector psi0 = rng.haar_state(c.dim);
        // Transport property: U^V moves the picture state from t0 to t.
        const Operator uv = v_propagator(v, *c.prop, t, c.t0);
        const StateVector lhs = uv * (v.at(c.t0) * psi0);
        const StateVector rhs = v.at(t) * (c.prop->at(t, c.t0) * psi0);
        worst = std::max(worst, (lhs - rhs).norm());
        // Initial-value problem for U^V.
        auto uv_at = [&](double tau) { return v_propagator(v, *c.prop, tau, c.t0); };
        const Operator duv = (uv_at(t + c.fd) - uv_at(t - c.fd)) / (2.0 * c.fd);
        const Operator modified = v_hamiltonians(v, c.h, t, c.fd).modified;
        worst = std::max(worst, (ih * duv - modified * uv).norm());
    }
    return worst;
}

double run_v_special_cases(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    double worst = 0.0;
    const UnitaryFamily vid = UnitaryFamily::identity(c.dim, c.t0);
    const UnitaryFamily vheis = UnitaryFamily::heisenberg(c.prop, c.t0);
    for (int i = 0; i < 3; ++i) {
        const double t = c.rand_time(rng);
        const StateVector psi = rng.haar_state(c.dim);
        const Operator a = rng.hermitian(c.dim, 1.0);
        // V = identity collapses to the Schroedinger picture bit-for-bit.
        const VPair pid = to_v_picture(vid, psi, a, t);
        worst = std::max({worst, (pid.state - psi).norm(), (pid.observable - a).norm()});
        // The Heisenberg choice has a trivial picture propagator.
        worst = std::max(worst, (v_propagator(vheis, *c.prop, t, c.t0) -
                                 Operator::Identity(c.dim, c.dim)).norm());
        // And reproduces the Heisenberg observable.
        const VPair ph = to_v_picture(vheis, psi, a, t);
        worst = std::max(worst, (ph.observable - to_heisenberg_observable(*c.prop, a, t, c.t0)).norm());
    }
    return worst;
}

// ---- interaction picture ----

double run_interaction_split(SuiteContext& c, SplitRng&, std::vector<VerdictRecord>&) {
    const InteractionSplit parts = interaction_split(c.h_free, c.h_int, c.t1, c.t0, c.grid_cfg());
    return (parts.u_free * parts.u_interaction - parts.u_full).norm();
}

double run_interaction_state_eom(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    const StateFn traj = c.trajectory(rng.haar_state(c.dim));
    double worst = 0.0;
    for (const HermitianFamily& a : c.obs_or_random(rng))
        for (int i = 1; i < 6; i += 2)
            worst = std::max(worst, interaction_eom_residuals(c.h_free, c.h_int, traj, a,
                                                              c.samples[i], c.t0, c.grid_cfg(), c.fd)
                                        .state);
    return worst;
}

double run_interaction_observable_eom(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    const StateFn traj = c.trajectory(rng.haar_state(c.dim));
    double worst = 0.0;
    for (const HermitianFamily& a : c.obs_or_random(rng))
        for (int i = 1; i < 6; i += 2)
            worst = std::max(worst, interaction_eom_residuals(c.h_free, c.h_int, traj, a,
                                                              c.samples[i], c.t0, c.grid_cfg(), c.fd)
                                        .observable);
    return worst;
}

// ---- normal frames and Lax structure ----

double run_normal_frame_transport(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    const Operator eye = Operator::Identity(c.dim, c.dim);
    Operator seed = eye + 0.3 * rng.hermitian(c.dim, 1.0);
    const FrameField frame = normal_frame(c.transport, c.t0, seed);
    double worst = 0.0;
    for (int i = 0; i < 6; ++i) {
        const double s = c.rand_time(rng), t = c.rand_time(rng);
        worst = std::max(worst, (frame.transport_matrix(t, s) - eye).norm());
    }
    return worst;
}

double run_normal_frame_connection(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    const Operator seed = Operator::Identity(c.dim, c.dim) + 0.3 * rng.hermitian(c.dim, 1.0);
    const FrameField frame = normal_frame(c.transport, c.t0, seed);
    double worst = 0.0;
    for (double t : c.samples) worst = std::max(worst, frame.connection(t, c.fd).gamma.norm());
    return worst;
}

MorphismField transported_morphism(const SuiteContext& c, const Operator& a0_fibre) {
    EvolutionTransport transport = c.transport;
    const double start = c.t0;
    const Operator a0 = a0_fibre;
    return MorphismField{c.atlas,
                         [transport, a0, start](double t) -> Operator {
                             return transport.at(t, start) * a0 * transport.at(start, t);
                         },
                         nullptr};
}

double run_lax(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    const MorphismField field =
        transported_morphism(c, c.atlas.l_inverse(c.t0) * rng.hermitian(c.dim, 1.0) * c.atlas.l(c.t0));
    return lax_residual(field, FrameField::coordinate(c.transport), c.samples, c.fd);
}

double run_lax_gauge(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    const MorphismField field =
        transported_morphism(c, c.atlas.l_inverse(c.t0) * rng.hermitian(c.dim, 1.0) * c.atlas.l(c.t0));
    EvolutionTransport transport = c.transport;
    OperatorFn a_fn = [field](double t) -> Operator { return field.at(t); };
    OperatorFn gamma_fn = [transport](double t) -> Operator { return transport.connection(t).gamma; };
    const GaugePair moved = gauge_transform(a_fn, gamma_fn, random_gauge_field(c.dim, rng.next_u64()), c.fd);
    double worst = 0.0;
    for (double t : c.samples) {
        const Operator da = (moved.a(t + c.fd) - moved.a(t - c.fd)) / (2.0 * c.fd);
        const Operator am = moved.a(t);
        worst = std::max(worst,
                         (da - commutator(am, moved.gamma(t))).norm() / std::max(1.0, am.norm()));
    }
    return worst;
}

double run_eigen_constancy(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>&) {
    double worst = 0.0;
    for (const HermitianFamily& a : c.obs_or_random(rng)) {
        // Only a certified integral promises eigenvalue constancy.
        if (commutation_residual(*c.prop, a, c.samples, c.t0) > tol_of(c)) continue;
        Eigen::SelfAdjointEigenSolver<Operator> es(a(c.t0));
        const StateVector psi0 = es.eigenvectors().col(0);
        const EigenConstancy ec =
            eigenvalue_constancy_check(*c.prop, a, psi0, c.samples, c.t0, 1e-8);
        if (ec.is_eigen_trajectory) worst = std::max(worst, ec.eigenvalue_drift);
    }
    return worst;
}

double run_integral(SuiteContext& c, SplitRng& rng, std::vector<VerdictRecord>& verdicts) {
    std::vector<HermitianFamily> families = c.observables;
    std::vector<std::string> names = c.obs_names;
    if (families.empty()) {
        families.push_back(HermitianFamily::constant(rng.hermitian(c.dim, 1.0), c.hbar));
        names.push_back("random-observable");
    }
    int disagreements = 0;
    for (std::size_t i = 0; i < families.size(); ++i) {
        const MorphismField field = lift_observable(c.atlas, families[i]);
        const IntegralVerdict v = certify(*c.prop, c.transport, field, c.tol, rng.next_u64());
        if (!v.unanimous()) ++disagreements;
        verdicts.push_back(VerdictRecord{names[i], v});
    }
    return static_cast<double>(disagreements);
}

const std::vector<CheckDef>& defs() {
    static const std::vector<CheckDef> registry = {
        {"propagator-unitarity", "2.1", "cached factors and two-time queries stay unitary",
         CheckDef::None, law_tol, run_prop_unitarity},
        {"propagator-composition", "2.1", "group law U(t,r) = U(t,s) U(s,r)", CheckDef::None, law_tol,
         run_prop_composition},
        {"propagator-inverse", "4.2b", "adjoint of U(a,b) equals the inverse of U(b,a)",
         CheckDef::None, law_tol, run_prop_inverse},
        {"schrodinger-residual", "2.5", "propagated trajectories solve the Schrodinger equation",
         CheckDef::None, tol_of, run_schrodinger_residual},
        {"hamiltonian-recovery", "2.7", "i hbar (dU/dt) U^{-1} recovers the generating Hamiltonian",
         CheckDef::None, tol_of, run_hamiltonian_recovery},
        {"lift-roundtrip", "4.3a", "trivialization followed by its inverse is the identity",
         CheckDef::None, [](const SuiteContext&) { return 1e-11; }, run_lift_roundtrip},
        {"transport-composition", "4.7", "evolution transport composes along the path",
         CheckDef::None, [](const SuiteContext&) { return 1e-9; }, run_transport_composition},
        {"transport-adjoint", "4.14", "fibre-metric adjoint of the transport equals its inverse",
         CheckDef::None, [](const SuiteContext&) { return 1e-9; }, run_transport_adjoint},
        {"section-transport", "4.4", "transported sections match the lifted Hilbert evolution",
         CheckDef::None, [](const SuiteContext&) { return 1e-10; }, run_section_transport},
        {"section-derivation", "5.13", "transported sections solve the bundle Schrodinger equation",
         CheckDef::None, tol_of, run_section_derivation},
        {"connection-coefficients", "5.10", "connection matches the matrix-bundle Hamiltonian",
         CheckDef::None, tol_of, run_connection},
        {"fibre-mean", "6.1''", "fibre-metric means equal Hilbert-space means", CheckDef::None,
         [](const SuiteContext&) { return 1e-10; }, run_fibre_mean},
        {"heisenberg-mean", "7.11", "Heisenberg means equal Schrodinger means, both descriptions",
         CheckDef::NeedHeisenberg, [](const SuiteContext&) { return 1e-9; }, run_heisenberg_mean},
        {"heisenberg-eom", "7.8", "Heisenberg observables solve their equation of motion",
         CheckDef::NeedHeisenberg, tol_of, run_heisenberg_eom},
        {"heisenberg-transport", "7.13b2", "Heisenberg morphisms arise from the induced transport",
         CheckDef::NeedHeisenberg, [](const SuiteContext&) { return 1e-9; }, run_heisenberg_transport},
        {"morphism-derivation", "7.13b4", "matrix form of the induced derivation matches its limit",
         CheckDef::None, [](const SuiteContext&) { return 1e-2; }, run_morphism_derivation},
        {"derivation-transport", "7.13b8", "the induced derivation annihilates transported morphisms",
         CheckDef::None, tol_of, run_derivation_transport},
        {"heisenberg-derivation", "7.13b7", "Heisenberg time derivative via the induced derivation",
         CheckDef::NeedHeisenberg, tol_of, run_heisenberg_derivation},
        {"v-mean", "7.17", "V-picture means equal Schrodinger means", CheckDef::NeedV,
         [](const SuiteContext&) { return 1e-9; }, run_v_mean},
        {"v-state-eom", "7.24", "V-picture states evolve under the modified Hamiltonian",
         CheckDef::NeedV, tol_of, run_v_state_eom},
        {"v-observable-eom", "7.27", "V-picture observables evolve under the additional Hamiltonian",
         CheckDef::NeedV, tol_of, run_v_observable_eom},
        {"v-bundle-consistency", "7.21", "bundle and Hilbert V-picture residuals coincide",
         CheckDef::NeedV, [](const SuiteContext&) { return 1e-9; }, run_v_bundle_consistency},
        {"v-propagator", "7.34", "the V-picture propagator moves picture states and solves its IVP",
         CheckDef::NeedV, tol_of, run_v_propagator},
        {"v-special-cases", "7.35a", "identity V collapses to Schrodinger; Heisenberg V is trivial",
         CheckDef::None, [](const SuiteContext&) { return 1e-10; }, run_v_special_cases},
        {"interaction-split", "7.38", "the propagator splits into free and interaction factors",
         CheckDef::NeedInteraction, tol_of, run_interaction_split},
        {"interaction-state-eom", "7.39", "interaction states evolve under the transformed coupling",
         CheckDef::NeedInteraction, tol_of, run_interaction_state_eom},
        {"interaction-observable-eom", "7.40", "interaction observables evolve under the free part",
         CheckDef::NeedInteraction, tol_of, run_interaction_observable_eom},
        {"normal-frame-transport", "7.3", "the transport matrix is the identity in a normal frame",
         CheckDef::None, [](const SuiteContext&) { return 1e-9; }, run_normal_frame_transport},
        {"normal-frame-connection", "7.3", "connection coefficients vanish in a normal frame",
         CheckDef::None, tol_of, run_normal_frame_connection},
        {"lax", "Lax-equation", "transported observables satisfy the Lax pair equation",
         CheckDef::None, tol_of, run_lax},
        {"lax-gauge", "Lax-invariance", "gauge transformations preserve vanishing Lax residuals",
         CheckDef::None, tol_of, run_lax_gauge},
        {"eigen-constancy", "8.4", "eigenvalues along eigenstate trajectories of integrals stay put",
         CheckDef::None, tol_of, run_eigen_constancy},
        {"integral", "8.17a", "the five integral-of-motion criteria agree unanimously",
         CheckDef::None, [](const SuiteContext&) { return 0.5; }, run_integral},
    };
    return registry;
}

bool requirement_met(const CheckDef& def, const ScenarioSpec& spec) {
    switch (def.req) {
        case CheckDef::None: return true;
        case CheckDef::NeedHeisenberg: return spec.has_picture(PictureSpec::Kind::Heisenberg);
        case CheckDef::NeedV: return spec.has_picture(PictureSpec::Kind::V);
        case CheckDef::NeedInteraction: return spec.has_picture(PictureSpec::Kind::Interaction);
    }
    return false;
}

unsigned worker_count(std::size_t n_checks) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("FIBREDYN_JOBS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
    }
    return std::max(1u, std::min<unsigned>(hw, static_cast<unsigned>(n_checks)));
}

} // namespace

const std::vector<CheckInfo>& check_registry() {
    static const std::vector<CheckInfo> info = [] {
        std::vector<CheckInfo> out;
        for (const CheckDef& d : defs()) out.push_back(CheckInfo{d.name, d.equation, d.description});
        return out;
    }();
    return info;
}

std::vector<std::string> resolve_checks(const ScenarioSpec& spec,
                                        const std::vector<std::string>& requested, bool use_defaults) {
    std::vector<std::string> enabled;
    if (use_defaults) {
        for (const CheckDef& d : defs())
            if (requirement_met(d, spec)) enabled.push_back(d.name);
        return enabled;
    }
    for (const std::string& name : requested) {
        const CheckDef* found = nullptr;
        for (const CheckDef& d : defs())
            if (name == d.name) found = &d;
        if (!found) throw ValidationError("unknown check '" + name + "'");
        if (!requirement_met(*found, spec))
            throw ValidationError("check '" + name + "' requires a picture the scenario does not enable");
    }
    for (const CheckDef& d : defs())
        for (const std::string& name : requested)
            if (name == d.name && (enabled.empty() || enabled.back() != d.name)) {
                enabled.push_back(d.name);
                break;
            }
    return enabled;
}

Report run_suite(const ScenarioSpec& spec) {
    SuiteContext ctx(spec);

    std::vector<const CheckDef*> enabled;
    for (const CheckDef& d : defs())
        for (const std::string& name : spec.checks)
            if (name == d.name) {
                enabled.push_back(&d);
                break;
            }
    for (const CheckDef* d : enabled) {
        const std::string n = d->name;
        if (n == "hamiltonian-recovery" || n == "connection-coefficients") ctx.build_fine();
    }

    Report report;
    report.seed = spec.seed;
    report.scenario_digest = scenario_digest(spec);
    report.checks.resize(enabled.size());

    std::vector<std::vector<VerdictRecord>> verdicts(enabled.size());
    std::atomic<std::size_t> cursor{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= enabled.size()) return;
            const CheckDef& d = *enabled[i];
            CheckResult& r = report.checks[i];
            r.name = d.name;
            r.equation = d.equation;
            r.threshold = d.threshold(ctx);
            SplitRng rng(spec.seed, d.name);
            const auto start = std::chrono::steady_clock::now();
            try {
                r.residual = d.run(ctx, rng, verdicts[i]);
                r.pass = r.residual <= r.threshold;
            } catch (const Error& e) {
                r.error = e.what();
                r.residual = std::numeric_limits<double>::infinity();
                r.pass = false;
            }
            r.millis =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                    .count();
        }
    };
    const unsigned jobs = worker_count(enabled.size());
    if (jobs <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }

    for (std::vector<VerdictRecord>& v : verdicts)
        for (VerdictRecord& rec : v) report.verdicts.push_back(std::move(rec));
    report.overall_pass = true;
    for (const CheckResult& r : report.checks) report.overall_pass = report.overall_pass && r.pass;

    // Plot series: picture means along the grid, plus the state norm.
    const int points = std::min(spec.time.steps, 64);
    SplitRng series_rng(spec.seed, "series");
    const StateVector psi0 = series_rng.haar_state(ctx.dim);
    for (int i = 0; i <= points; ++i)
        report.series_times.push_back(ctx.t0 + ctx.span * i / points);
    {
        SeriesColumn norm_col{"state_norm", {}};
        for (double t : report.series_times) norm_col.values.push_back((ctx.prop->at(t, ctx.t0) * psi0).norm());
        report.series.push_back(std::move(norm_col));
    }
    for (std::size_t k = 0; k < ctx.observables.size(); ++k) {
        const HermitianFamily& a = ctx.observables[k];
        SeriesColumn mean_s{"mean_schrodinger:" + ctx.obs_names[k], {}};
        for (double t : report.series_times)
            mean_s.values.push_back(mean_value(a(t), ctx.prop->at(t, ctx.t0) * psi0));
        report.series.push_back(std::move(mean_s));
        if (ctx.heisenberg) {
            SeriesColumn mean_h{"mean_heisenberg:" + ctx.obs_names[k], {}};
            for (double t : report.series_times)
                mean_h.values.push_back(mean_value(to_heisenberg_observable(*ctx.prop, a, t, ctx.t0), psi0));
            report.series.push_back(std::move(mean_h));
        }
        if (ctx.v_on) {
            const UnitaryFamily v = ctx.v_family();
            SeriesColumn mean_v{"mean_v:" + ctx.obs_names[k], {}};
            for (double t : report.series_times) {
                const VPair p = to_v_picture(v, ctx.prop->at(t, ctx.t0) * psi0, a(t), t);
                mean_v.values.push_back(mean_value(p.observable, p.state));
            }
            report.series.push_back(std::move(mean_v));
        }
    }
    return report;
}

} // namespace fibredyn
