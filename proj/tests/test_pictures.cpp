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

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "fibredyn/generators.hpp"
#include "fibredyn/pauli.hpp"
#include "fibredyn/pictures.hpp"
#include "fibredyn/rng.hpp"

using namespace fibredyn;

namespace {

std::shared_ptr<const Propagator> build_prop(const HermitianFamily& h, double t0 = 0.0,
                                             double t1 = 1.0, double step = 1e-3) {
    IntegratorConfig cfg;
    cfg.max_step = step;
    return std::make_shared<const Propagator>(Propagator::build(h, t0, t1, cfg));
}

StateFn trajectory_of(std::shared_ptr<const Propagator> u, const StateVector& psi0) {
    return [u, psi0](double t) -> StateVector { return u->at(t, u->t0()) * psi0; };
}

} // namespace

TEST_CASE("heisenberg observable") {
    SUBCASE("commuting static observables are frozen") {
        const HermitianFamily h = HermitianFamily::constant(pauli_z());
        auto u = build_prop(h);
        const Operator heis = to_heisenberg_observable(*u, pauli_z(), 0.8, 0.0);
        CHECK((heis - pauli_z()).norm() < 1e-12);
    }
    SUBCASE("sigma_x rotates to -sigma_y after a quarter period") {
        const HermitianFamily h = HermitianFamily::constant(pauli_z());
        auto u = build_prop(h, 0.0, 1.0);
        const Operator heis = to_heisenberg_observable(*u, pauli_x(), M_PI / 4.0, 0.0);
        CHECK((heis + pauli_y()).norm() < 1e-8);
    }
    SUBCASE("the spectrum is preserved") {
        const HermitianFamily h = random_smooth_family(3, 61);
        auto u = build_prop(h);
        SplitRng rng(62, "spectrum");
        const Operator a = rng.hermitian(3);
        Eigen::SelfAdjointEigenSolver<Operator> before(a);
        Eigen::SelfAdjointEigenSolver<Operator> after(to_heisenberg_observable(*u, a, 0.8, 0.0));
        CHECK((before.eigenvalues() - after.eigenvalues()).norm() < 1e-10);
    }
}

TEST_CASE("heisenberg state and mean equality") {
    const HermitianFamily h = HermitianFamily::constant(pauli_z());
    auto u = build_prop(h);
    const StateVector psi0 = (StateVector(2) << 1, 1).finished() / std::sqrt(2.0);
    const StateFn traj = trajectory_of(u, psi0);

    CHECK((heisenberg_state(traj, 0.0) - psi0).norm() == 0.0);

    const double t = M_PI / 4.0;
    const double schrodinger_mean = mean_value(pauli_x(), traj(t));
    const double heisenberg_mean =
        mean_value(to_heisenberg_observable(*u, pauli_x(), t, 0.0), psi0);
    CHECK(std::abs(schrodinger_mean - heisenberg_mean) < 1e-10);
    // For this state the rotated mean crosses zero at t = pi/4.
    CHECK(std::abs(schrodinger_mean) < 1e-8);
}

TEST_CASE("heisenberg equation of motion") {
    SUBCASE("static commuting pair") {
        const HermitianFamily h = HermitianFamily::constant(pauli_z());
        auto u = build_prop(h);
        CHECK(heisenberg_eom_residual(*u, HermitianFamily::constant(pauli_z()), 0.5, 0.0) < 1e-8);
    }
    SUBCASE("rotating observable") {
        const HermitianFamily h = HermitianFamily::constant(pauli_z());
        auto u = build_prop(h);
        CHECK(heisenberg_eom_residual(*u, HermitianFamily::constant(pauli_x()), 0.5, 0.0, 1e-4) < 1e-6);
    }
    SUBCASE("explicitly time-dependent observable") {
        const HermitianFamily h = HermitianFamily::constant(pauli_z());
        auto u = build_prop(h);
        const Operator sx = pauli_x();
        const HermitianFamily a(
            2, [sx](double t) -> Operator { return std::cos(t) * sx; },
            [sx](double t) -> Operator { return -std::sin(t) * sx; });
        CHECK(heisenberg_eom_residual(*u, a, 0.5, 0.0, 1e-4) < 1e-6);
    }
}

TEST_CASE("v picture transformations") {
    const HermitianFamily h = random_smooth_family(2, 63);
    auto u = build_prop(h);
    SplitRng rng(64, "v-picture");
    const StateVector psi = rng.haar_state(2);
    const Operator a = rng.hermitian(2);

    SUBCASE("identity family is a bitwise no-op") {
        const UnitaryFamily v = UnitaryFamily::identity(2, 0.0);
        const VPair p = to_v_picture(v, psi, a, 0.6);
        CHECK((p.state - psi).norm() == 0.0);
        CHECK((p.observable - a).norm() == 0.0);
    }
    SUBCASE("propagator-backed family reproduces the Heisenberg picture") {
        const UnitaryFamily v = UnitaryFamily::heisenberg(u, 0.0);
        const VPair p = to_v_picture(v, psi, a, 0.6);
        CHECK((p.observable - to_heisenberg_observable(*u, a, 0.6, 0.0)).norm() < 1e-10);
        CHECK((p.state - u->at(0.0, 0.6) * psi).norm() < 1e-12);
    }
    SUBCASE("random families preserve mean values") {
        for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
            const UnitaryFamily v = UnitaryFamily::random_smooth(2, 0.0, seed);
            const VPair p = to_v_picture(v, psi, a, 0.6);
            CHECK(std::abs(mean_value(a, psi) - mean_value(p.observable, p.state)) < 1e-10);
        }
    }
}

TEST_CASE("v-picture Hamiltonians") {
    SUBCASE("identity family gives (H, 0, H)") {
        const HermitianFamily h = HermitianFamily::constant(pauli_z());
        const UnitaryFamily v = UnitaryFamily::identity(2, 0.0);
        const VHamiltonians parts = v_hamiltonians(v, h, 0.4);
        CHECK((parts.transformed - pauli_z()).norm() == 0.0);
        CHECK(parts.generator.norm() == 0.0);
        CHECK((parts.modified - pauli_z()).norm() == 0.0);
    }
    SUBCASE("the Heisenberg choice freezes the state: modified Hamiltonian vanishes") {
        const HermitianFamily h = HermitianFamily::constant(pauli_z());
        auto u = build_prop(h);
        const UnitaryFamily v = UnitaryFamily::heisenberg(u, 0.0);
        const VHamiltonians parts = v_hamiltonians(v, h, 0.5);
        CHECK(parts.modified.norm() < 1e-6);
    }
    SUBCASE("free-frame transformation isolates the perturbation") {
        // V(t0,t) = exp(+i H0 (t - t0)) is the backward free propagator; the
        // modified Hamiltonian becomes the conjugated perturbation.
        const Operator h0 = pauli_z();
        const Operator h1 = 0.3 * pauli_x();
        const HermitianFamily h = HermitianFamily::constant(h0 + h1);
        const UnitaryFamily v(2, 0.0, [h0](double t) -> Operator {
            return matrix_exponential(Complex(0, t) * h0);
        });
        const VHamiltonians parts = v_hamiltonians(v, h, 0.5, 1e-4);
        const Operator vt = v.at(0.5);
        CHECK((parts.modified - vt * h1 * vt.adjoint()).norm() < 1e-6);
        // All three parts stay Hermitian.
        CHECK(hermiticity_defect(parts.transformed) < 1e-8);
        CHECK(hermiticity_defect(parts.generator) < 1e-7);
        CHECK(hermiticity_defect(parts.modified) < 1e-7);
    }
}

TEST_CASE("v-picture propagator") {
    const HermitianFamily h = random_smooth_family(2, 65);
    auto u = build_prop(h);

    SUBCASE("identity family returns the plain propagator bitwise") {
        const UnitaryFamily v = UnitaryFamily::identity(2, 0.0);
        CHECK((v_propagator(v, *u, 0.7, 0.0) - u->at(0.7, 0.0)).norm() == 0.0);
    }
    SUBCASE("the Heisenberg picture propagator is exactly the identity") {
        const UnitaryFamily v = UnitaryFamily::heisenberg(u, 0.0);
        CHECK((v_propagator(v, *u, 0.7, 0.0) - Operator::Identity(2, 2)).norm() == 0.0);
    }
    SUBCASE("moves picture states and solves its initial-value problem") {
        const UnitaryFamily v = UnitaryFamily::random_smooth(2, 0.0, 7);
        SplitRng rng(66, "vprop");
        const StateVector psi0 = rng.haar_state(2);
        const double t = 0.6;
        const Operator uv = v_propagator(v, *u, t, 0.0);
        CHECK((uv * (v.at(0.0) * psi0) - v.at(t) * (u->at(t, 0.0) * psi0)).norm() < 1e-12);

        const double fd = 1e-4;
        const Operator duv =
            (v_propagator(v, *u, t + fd, 0.0) - v_propagator(v, *u, t - fd, 0.0)) / (2.0 * fd);
        const Operator modified = v_hamiltonians(v, h, t, fd).modified;
        CHECK((Complex(0, 1) * duv - modified * uv).norm() < 1e-6);
        CHECK((v_propagator(v, *u, 0.0, 0.0) - Operator::Identity(2, 2)).norm() < 1e-12);
    }
}

TEST_CASE("v-picture equations of motion") {
    const HermitianFamily h = random_smooth_family(2, 67);
    auto u = build_prop(h);
    SplitRng rng(68, "v-eom");
    const StateFn traj = trajectory_of(u, rng.haar_state(2));
    const HermitianFamily a = random_smooth_family(2, 69, 1.0, 0.8);

    SUBCASE("identity family reduces to the Schrodinger residual") {
        const UnitaryFamily v = UnitaryFamily::identity(2, 0.0);
        const VResiduals r = v_eom_residuals(v, h, traj, a, 0.5);
        CHECK(r.state < 1e-6);
        CHECK(r.observable < 1e-5);
    }
    SUBCASE("the Heisenberg choice reproduces the Heisenberg equation check") {
        const UnitaryFamily v = UnitaryFamily::heisenberg(u, 0.0);
        const VResiduals r = v_eom_residuals(v, h, traj, HermitianFamily::constant(pauli_x()), 0.5);
        CHECK(r.observable < 1e-6);
        const double heis = heisenberg_eom_residual(*u, HermitianFamily::constant(pauli_x()), 0.5, 0.0);
        CHECK(std::abs(r.observable - heis) < 1e-6);
        CHECK(r.state < 1e-6); // the picture state is frozen
    }
    SUBCASE("random families satisfy both equations") {
        for (std::uint64_t seed : {11ULL, 12ULL}) {
            const UnitaryFamily v = UnitaryFamily::random_smooth(2, 0.0, seed);
            const VResiduals r = v_eom_residuals(v, h, traj, a, 0.45, 1e-4);
            CHECK(r.state < 1e-5);
            CHECK(r.observable < 1e-5);
        }
    }
    SUBCASE("bundle residuals equal Hilbert residuals for every atlas kind") {
        const UnitaryFamily v = UnitaryFamily::random_smooth(2, 0.0, 13);
        for (AtlasKind kind :
             {AtlasKind::Identity, AtlasKind::UnitaryField, AtlasKind::InvertibleField}) {
            const BundleAtlas atlas = make_atlas(kind, ObserverPath(0.0, 1.0), 2, 23);
            const VResiduals hilbert = v_eom_residuals(v, h, traj, a, 0.5);
            const VResiduals bundle = v_eom_residuals_bundle(atlas, v, h, traj, a, 0.5);
            CHECK(std::abs(hilbert.state - bundle.state) < 1e-9);
            CHECK(std::abs(hilbert.observable - bundle.observable) < 1e-9);
        }
    }
}

TEST_CASE("interaction splitting") {
    IntegratorConfig cfg;
    cfg.max_step = 1e-3;

    SUBCASE("zero interaction leaves only the free factor") {
        const HermitianFamily h0 = HermitianFamily::constant(pauli_z());
        const HermitianFamily hi = HermitianFamily::constant(Operator::Zero(2, 2));
        const InteractionSplit parts = interaction_split(h0, hi, 1.0, 0.0, cfg);
        CHECK((parts.u_interaction - Operator::Identity(2, 2)).norm() < 1e-12);
        CHECK((parts.u_full - parts.u_free).norm() < 1e-12);
    }
    SUBCASE("zero free part leaves only the interaction") {
        const HermitianFamily h0 = HermitianFamily::constant(Operator::Zero(2, 2));
        const HermitianFamily hi = HermitianFamily::constant(0.4 * pauli_x());
        const InteractionSplit parts = interaction_split(h0, hi, 1.0, 0.0, cfg);
        CHECK((parts.u_free - Operator::Identity(2, 2)).norm() < 1e-12);
        CHECK((parts.u_interaction - parts.u_full).norm() < 1e-10);
    }
    SUBCASE("golden split: sigma_z with a small sigma_x coupling") {
        const HermitianFamily h0 = HermitianFamily::constant(pauli_z());
        const HermitianFamily hi = HermitianFamily::constant(0.1 * pauli_x());
        const InteractionSplit parts = interaction_split(h0, hi, 1.0, 0.0, cfg);
        CHECK((parts.u_free * parts.u_interaction - parts.u_full).norm() < 1e-7);
    }
    SUBCASE("halving the step shrinks the splitting defect at second order") {
        const HermitianFamily h0 = random_smooth_family(2, 71);
        const HermitianFamily hi = random_smooth_family(2, 72, 1.0, 0.3);
        IntegratorConfig coarse;
        coarse.max_step = 8e-3;
        IntegratorConfig fine;
        fine.max_step = 4e-3;
        const InteractionSplit pc = interaction_split(h0, hi, 1.0, 0.0, coarse);
        const InteractionSplit pf = interaction_split(h0, hi, 1.0, 0.0, fine);
        const double rc = (pc.u_free * pc.u_interaction - pc.u_full).norm();
        const double rf = (pf.u_free * pf.u_interaction - pf.u_full).norm();
        CHECK(rc / rf >= 3.0);
    }
}

TEST_CASE("interaction equations of motion") {
    IntegratorConfig cfg;
    cfg.max_step = 1e-3;
    const HermitianFamily h0 = HermitianFamily::constant(pauli_z());
    const HermitianFamily hi = HermitianFamily::constant(0.1 * pauli_x());
    auto u_full = build_prop(h0 + hi);
    SplitRng rng(73, "interaction");
    const StateFn traj = trajectory_of(u_full, rng.haar_state(2));

    SUBCASE("zero interaction freezes the picture state") {
        const HermitianFamily none = HermitianFamily::constant(Operator::Zero(2, 2));
        auto u_free = build_prop(h0);
        const StateFn free_traj = trajectory_of(u_free, rng.haar_state(2));
        const VResiduals r = interaction_eom_residuals(h0, none, free_traj, h0, 0.5, 0.0, cfg);
        CHECK(r.state < 1e-8);
    }
    SUBCASE("state equation under the transformed coupling") {
        const VResiduals r = interaction_eom_residuals(h0, hi, traj, hi, 0.5, 0.0, cfg, 1e-4);
        CHECK(r.state < 1e-5);
    }
    SUBCASE("observable equation for a static sigma_z") {
        const VResiduals r = interaction_eom_residuals(h0, hi, traj, HermitianFamily::constant(pauli_z()),
                                                       0.5, 0.0, cfg, 1e-4);
        CHECK(r.observable < 1e-5);
    }
}

TEST_CASE("picture equivalence of means across random tuples") {
    SplitRng rng(74, "picture-equivalence");
    for (int rep = 0; rep < 10; ++rep) {
        const int dim = 2 + static_cast<int>(rng.next_u64() % 3);
        const HermitianFamily h = random_smooth_family(dim, rng.next_u64());
        auto u = build_prop(h);
        const Operator a = rng.hermitian(dim);
        const StateVector psi0 = rng.haar_state(dim);
        const double t = rng.uniform(0.1, 0.9);
        const StateVector psi_t = u->at(t, 0.0) * psi0;
        const double reference = mean_value(a, psi_t);

        const double heis = mean_value(to_heisenberg_observable(*u, a, t, 0.0), psi0);
        CHECK(std::abs(heis - reference) < 1e-9);

        const UnitaryFamily v = UnitaryFamily::random_smooth(dim, 0.0, rng.next_u64());
        const VPair p = to_v_picture(v, psi_t, a, t);
        CHECK(std::abs(mean_value(p.observable, p.state) - reference) < 1e-9);
    }
}

TEST_CASE("heisenberg derivative equals the transported induced derivation") {
    const HermitianFamily h = random_smooth_family(2, 75);
    const BundleAtlas atlas = make_atlas(AtlasKind::UnitaryField, ObserverPath(0.0, 1.0), 2, 24);
    const EvolutionTransport transport(atlas, build_prop(h));
    const MorphismField field = lift_observable(atlas, random_smooth_family(2, 76, 1.0, 0.7));
    const double fd = 1e-4;
    for (double t : {0.3, 0.6}) {
        auto heis = [&](double tau) {
            return transport.transport_morphism(field.at(tau), tau, 0.0);
        };
        const Operator lhs = (heis(t + fd) - heis(t - fd)) / (2.0 * fd);
        const Operator rhs =
            transport.at(0.0, t) * morphism_derivation(transport, field, t, fd) * transport.at(t, 0.0);
        CHECK((lhs - rhs).norm() < 1e-5);
    }
}
