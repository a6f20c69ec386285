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
#include "fibredyn/motion_integrals.hpp"
#include "fibredyn/pauli.hpp"
#include "fibredyn/rng.hpp"

using namespace fibredyn;

namespace {

std::shared_ptr<const Propagator> build_prop(const HermitianFamily& h, double t0 = 0.0,
                                             double t1 = 1.0, double step = 1e-3) {
    IntegratorConfig cfg;
    cfg.max_step = step;
    return std::make_shared<const Propagator>(Propagator::build(h, t0, t1, cfg));
}

std::vector<StateVector> spanning_states(int dim, std::uint64_t seed, int count) {
    SplitRng rng(seed, "states");
    std::vector<StateVector> out;
    for (int i = 0; i < count; ++i) out.push_back(rng.haar_state(dim));
    return out;
}

const std::vector<double> kSamples{0.15, 0.35, 0.55, 0.75};
const Tolerance kTol{1e-5, 0.0};

} // namespace

TEST_CASE("mean constancy residual") {
    SUBCASE("the identity is an integral of motion") {
        const HermitianFamily h = random_smooth_family(2, 81);
        auto u = build_prop(h);
        const HermitianFamily eye = HermitianFamily::constant(Operator::Identity(2, 2));
        CHECK(mean_constancy_residual(*u, eye, spanning_states(2, 1, 8), kSamples, 0.0) < 1e-12);
    }
    SUBCASE("a commuting constant pair is conserved") {
        auto u = build_prop(HermitianFamily::constant(pauli_z()));
        CHECK(mean_constancy_residual(*u, HermitianFamily::constant(pauli_z()),
                                      spanning_states(2, 2, 8), kSamples, 0.0) < 1e-9);
    }
    SUBCASE("sigma_x under sigma_z sweeps its mean") {
        auto u = build_prop(HermitianFamily::constant(pauli_z()), 0.0, M_PI / 2.0);
        std::vector<StateVector> states = spanning_states(2, 3, 7);
        states.push_back((StateVector(2) << 1, 1).finished() / std::sqrt(2.0));
        const std::vector<double> samples{0.3, 0.8, 1.2, M_PI / 2.0 - 0.01};
        CHECK(mean_constancy_residual(*u, HermitianFamily::constant(pauli_x()), states, samples, 0.0) >
              0.5);
    }
    SUBCASE("non-spanning state sets are rejected") {
        auto u = build_prop(HermitianFamily::constant(pauli_z()));
        const StateVector e0 = (StateVector(2) << 1, 0).finished();
        const std::vector<StateVector> degenerate{e0, e0, e0, e0, e0, e0, e0, e0};
        CHECK_THROWS_AS(mean_constancy_residual(*u, HermitianFamily::constant(pauli_z()), degenerate,
                                                kSamples, 0.0),
                        InsufficientStates);
    }
}

TEST_CASE("commutation residual") {
    SUBCASE("A equal to a constant H commutes with the evolution") {
        auto u = build_prop(HermitianFamily::constant(pauli_z()));
        CHECK(commutation_residual(*u, HermitianFamily::constant(pauli_z()), kSamples, 0.0) < 1e-10);
    }
    SUBCASE("a transported observable commutes by construction") {
        const HermitianFamily h = random_smooth_family(2, 82);
        auto u = build_prop(h);
        SplitRng rng(83, "constructed");
        const HermitianFamily a = transported_observable(u, rng.hermitian(2));
        CHECK(commutation_residual(*u, a, kSamples, 0.0) < 1e-9);
    }
    SUBCASE("sigma_x against sigma_z fails loudly") {
        auto u = build_prop(HermitianFamily::constant(pauli_z()));
        const std::vector<double> samples{M_PI / 4.0};
        CHECK(commutation_residual(*u, HermitianFamily::constant(pauli_x()), samples, 0.0) > 0.5);
    }
}

TEST_CASE("lax residual") {
    const HermitianFamily h = HermitianFamily::constant(pauli_z());
    const BundleAtlas atlas = BundleAtlas::identity(ObserverPath(0.0, 1.0), 2);
    const EvolutionTransport transport(atlas, build_prop(h));
    const FrameField frame = FrameField::coordinate(transport);

    SUBCASE("the identity field has zero residual") {
        const MorphismField f{atlas, [](double) { return Operator::Identity(2, 2).eval(); }, nullptr};
        CHECK(lax_residual(f, frame, kSamples) < 1e-12);
    }
    SUBCASE("the Heisenberg-rotated family is Lax-compatible") {
        // A(t) = U(t,0) sigma_x U(0,t) = cos(2t) sigma_x + sin(2t) sigma_y.
        const Operator sx = pauli_x(), sy = pauli_y();
        const MorphismField f{atlas,
                              [sx, sy](double t) -> Operator {
                                  return std::cos(2 * t) * sx + std::sin(2 * t) * sy;
                              },
                              nullptr};
        CHECK(lax_residual(f, frame, kSamples, 1e-4) < 1e-5);
    }
    SUBCASE("a static non-commuting observable fails") {
        const MorphismField f{atlas, [](double) -> Operator { return pauli_x(); }, nullptr};
        CHECK(lax_residual(f, frame, kSamples) > 1.0);
    }
}

TEST_CASE("heisenberg constancy residual") {
    SUBCASE("constant commuting pair") {
        auto u = build_prop(HermitianFamily::constant(pauli_z()));
        CHECK(heisenberg_constancy_residual(*u, HermitianFamily::constant(pauli_z()), kSamples, 0.0) <
              1e-10);
    }
    SUBCASE("transported observables freeze in the Heisenberg picture") {
        const HermitianFamily h = random_smooth_family(2, 84);
        auto u = build_prop(h);
        SplitRng rng(85, "frozen");
        const HermitianFamily a = transported_observable(u, rng.hermitian(2));
        CHECK(heisenberg_constancy_residual(*u, a, kSamples, 0.0) < 1e-9);
    }
    SUBCASE("sigma_x under sigma_z drifts") {
        auto u = build_prop(HermitianFamily::constant(pauli_z()));
        const std::vector<double> samples{M_PI / 4.0};
        CHECK(heisenberg_constancy_residual(*u, HermitianFamily::constant(pauli_x()), samples, 0.0) >
              1.0);
    }
}

TEST_CASE("gauge transformation of a Lax pair") {
    const Operator sz = pauli_z();
    const OperatorFn a_fn = [sz](double t) -> Operator {
        return std::cos(2 * t) * pauli_x() + std::sin(2 * t) * pauli_y();
    };
    const OperatorFn gamma_fn = [sz](double) -> Operator { return Complex(0, 1) * sz; };

    SUBCASE("the identity gauge changes nothing") {
        const OperatorFn w = [](double) { return Operator::Identity(2, 2).eval(); };
        const GaugePair moved = gauge_transform(a_fn, gamma_fn, w);
        CHECK((moved.a(0.3) - a_fn(0.3)).norm() == 0.0);
        CHECK((moved.gamma(0.3) - gamma_fn(0.3)).norm() < 1e-12);
    }
    SUBCASE("constant gauges drop the inhomogeneous term") {
        SplitRng rng(86, "gauge");
        const Operator w0 = Operator::Identity(2, 2) + 0.4 * rng.hermitian(2);
        const OperatorFn w = [w0](double) { return w0; };
        const GaugePair moved = gauge_transform(a_fn, gamma_fn, w);
        const Operator expected = w0 * gamma_fn(0.5) * Operator(w0.partialPivLu().inverse());
        CHECK((moved.gamma(0.5) - expected).norm() < 1e-12);
    }
    SUBCASE("smooth gauges preserve a vanishing Lax residual") {
        const GaugePair moved = gauge_transform(a_fn, gamma_fn, random_gauge_field(2, 87), 1e-4);
        for (double t : kSamples) {
            const double fd = 1e-4;
            const Operator da = (moved.a(t + fd) - moved.a(t - fd)) / (2.0 * fd);
            CHECK((da - commutator(moved.a(t), moved.gamma(t))).norm() < 1e-5);
        }
    }
    SUBCASE("singular gauges are rejected") {
        Operator degenerate(2, 2);
        degenerate << 1, 0, 0, 0;
        const GaugePair moved =
            gauge_transform(a_fn, gamma_fn, [degenerate](double) { return degenerate; });
        CHECK_THROWS_AS(moved.a(0.5), SingularGauge);
    }
}

TEST_CASE("eigenvalue constancy") {
    SUBCASE("any state is an eigenstate of the identity with eigenvalue one") {
        const HermitianFamily h = random_smooth_family(2, 88);
        auto u = build_prop(h);
        SplitRng rng(89, "eigen");
        const EigenConstancy ec = eigenvalue_constancy_check(
            *u, HermitianFamily::constant(Operator::Identity(2, 2)), rng.haar_state(2), kSamples, 0.0);
        CHECK(ec.is_eigen_trajectory);
        CHECK(ec.initial_eigenvalue == doctest::Approx(1.0));
        CHECK(ec.eigenvalue_drift < 1e-12);
    }
    SUBCASE("a stationary eigenstate keeps its eigenvalue") {
        auto u = build_prop(HermitianFamily::constant(pauli_z()));
        const StateVector e0 = (StateVector(2) << 1, 0).finished();
        const EigenConstancy ec =
            eigenvalue_constancy_check(*u, HermitianFamily::constant(pauli_z()), e0, kSamples, 0.0);
        CHECK(ec.is_eigen_trajectory);
        CHECK(ec.initial_eigenvalue == doctest::Approx(1.0));
        CHECK(ec.eigenvalue_drift < 1e-9);
    }
    SUBCASE("states leave the eigenbasis of a non-integral") {
        auto u = build_prop(HermitianFamily::constant(pauli_z()));
        const StateVector plus = (StateVector(2) << 1, 1).finished() / std::sqrt(2.0);
        const EigenConstancy ec =
            eigenvalue_constancy_check(*u, HermitianFamily::constant(pauli_x()), plus, kSamples, 0.0);
        CHECK_FALSE(ec.is_eigen_trajectory);
    }
    SUBCASE("non-eigenvector inputs report no trajectory") {
        auto u = build_prop(HermitianFamily::constant(pauli_z()));
        const StateVector plus = (StateVector(2) << 1, 1).finished() / std::sqrt(2.0);
        const EigenConstancy ec =
            eigenvalue_constancy_check(*u, HermitianFamily::constant(pauli_z()), plus, kSamples, 0.0);
        CHECK_FALSE(ec.is_eigen_trajectory);
        CHECK(ec.eigenvalue_drift == 0.0);
    }
}

TEST_CASE("certify") {
    SUBCASE("a constant Hamiltonian certifies itself") {
        auto u = build_prop(HermitianFamily::constant(pauli_z()));
        const BundleAtlas atlas = BundleAtlas::identity(ObserverPath(0.0, 1.0), 2);
        const EvolutionTransport transport(atlas, u);
        const MorphismField f = lift_observable(atlas, HermitianFamily::constant(pauli_z()));
        const IntegralVerdict v = certify(*u, transport, f, Tolerance(1e-8, 0.0));
        CHECK(v.is_integral);
        CHECK(v.max_residual() < 1e-8);
        CHECK(v.unanimous());
    }
    SUBCASE("transported observables certify under a time-dependent Hamiltonian") {
        const HermitianFamily h = random_smooth_family(2, 90);
        auto u = build_prop(h);
        SplitRng rng(91, "certify");
        const HermitianFamily a = transported_observable(u, rng.hermitian(2));
        const BundleAtlas atlas = make_atlas(AtlasKind::InvertibleField, ObserverPath(0.0, 1.0), 2, 25);
        const EvolutionTransport transport(atlas, u);
        const IntegralVerdict v = certify(*u, transport, lift_observable(atlas, a), kTol);
        CHECK(v.is_integral);
        CHECK(v.unanimous());
    }
    SUBCASE("sigma_x under sigma_z is rejected with margin") {
        auto u = build_prop(HermitianFamily::constant(pauli_z()));
        const BundleAtlas atlas = BundleAtlas::identity(ObserverPath(0.0, 1.0), 2);
        const EvolutionTransport transport(atlas, u);
        const MorphismField f = lift_observable(atlas, HermitianFamily::constant(pauli_x()));
        const IntegralVerdict v = certify(*u, transport, f, kTol);
        CHECK_FALSE(v.is_integral);
        CHECK(v.max_residual() > 0.5);
        CHECK(v.unanimous());
    }
    SUBCASE("the verdict is atlas-independent") {
        const HermitianFamily h = random_smooth_family(2, 92);
        auto u = build_prop(h);
        SplitRng rng(93, "atlas-invariance");
        const HermitianFamily good = transported_observable(u, rng.hermitian(2));
        const HermitianFamily bad = HermitianFamily::constant(pauli_x() + 0.5 * pauli_z());
        for (AtlasKind kind :
             {AtlasKind::Identity, AtlasKind::UnitaryField, AtlasKind::InvertibleField}) {
            const BundleAtlas atlas = make_atlas(kind, ObserverPath(0.0, 1.0), 2, 26);
            const EvolutionTransport transport(atlas, u);
            CHECK(certify(*u, transport, lift_observable(atlas, good), kTol).is_integral);
            CHECK_FALSE(certify(*u, transport, lift_observable(atlas, bad), kTol).is_integral);
        }
    }
}

TEST_CASE("matrix commutation is frame-dependent but the verdict is not") {
    // In the computation frame A = H^m = sigma_z commute. After a smooth gauge
    // the transformed pair no longer commutes entrywise, yet the Lax residual
    // still vanishes: naive matrix commutation is not the invariant statement.
    const Operator sz = pauli_z();
    const OperatorFn a_fn = [sz](double) { return sz; };
    const OperatorFn gamma_fn = [sz](double) -> Operator { return Complex(0, 1) * sz; };
    const OperatorFn w = [](double t) -> Operator {
        return matrix_exponential(Complex(0, -t) * pauli_x());
    };
    const GaugePair moved = gauge_transform(a_fn, gamma_fn, w, 1e-4);

    const double t = 0.4;
    const Operator hm_moved = Complex(0, -1) * moved.gamma(t);
    CHECK(commutator(moved.a(t), hm_moved).norm() > 0.5); // naive commutation fails

    const double fd = 1e-4;
    const Operator da = (moved.a(t + fd) - moved.a(t - fd)) / (2.0 * fd);
    CHECK((da - commutator(moved.a(t), moved.gamma(t))).norm() < 1e-5); // Lax form survives
}

TEST_CASE("five criteria agree on randomized fixtures") {
    SplitRng rng(94, "unanimity");
    for (int rep = 0; rep < 6; ++rep) {
        const int dim = 2 + static_cast<int>(rng.next_u64() % 2);
        const HermitianFamily h = random_smooth_family(dim, rng.next_u64());
        auto u = build_prop(h);
        const BundleAtlas atlas =
            make_atlas(rep % 2 ? AtlasKind::UnitaryField : AtlasKind::Identity, ObserverPath(0.0, 1.0),
                       dim, rng.next_u64());
        const EvolutionTransport transport(atlas, u);

        const HermitianFamily good = transported_observable(u, rng.hermitian(dim));
        const IntegralVerdict vg = certify(*u, transport, lift_observable(atlas, good), kTol);
        CHECK(vg.is_integral);
        CHECK(vg.unanimous());

        Operator a0 = rng.hermitian(dim);
        while (commutator(a0, h(0.5)).norm() < 0.3) a0 = rng.hermitian(dim);
        const HermitianFamily bad = HermitianFamily::constant(a0);
        const IntegralVerdict vb = certify(*u, transport, lift_observable(atlas, bad), kTol);
        CHECK_FALSE(vb.is_integral);
        CHECK(vb.unanimous());
    }
}
