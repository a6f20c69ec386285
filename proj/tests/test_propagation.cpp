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

#include "fibredyn/generators.hpp"
#include "fibredyn/pauli.hpp"
#include "fibredyn/propagator.hpp"
#include "fibredyn/rng.hpp"
#include "oracles.hpp"

using namespace fibredyn;

namespace {
HermitianFamily zeeman_drive() {
    // H(t) = sigma_z + sin(t) sigma_x
    const Operator sz = pauli_z(), sx = pauli_x();
    return HermitianFamily(
        2, [sz, sx](double t) -> Operator { return sz + std::sin(t) * sx; },
        [sx](double t) -> Operator { return std::cos(t) * sx; });
}
} // namespace

TEST_CASE("zero Hamiltonian propagates to the identity") {
    const HermitianFamily h = HermitianFamily::constant(Operator::Zero(2, 2));
    const Operator u = propagate(h, 0.0, 1.7);
    CHECK((u - Operator::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("constant sigma_z over [0, pi] gives minus the identity") {
    const HermitianFamily h = HermitianFamily::constant(pauli_z());
    IntegratorConfig cfg;
    cfg.max_step = 1e-2;
    const Operator u = propagate(h, 0.0, M_PI, cfg);
    CHECK((u + Operator::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("time-dependent drive matches the fine-step RK oracle") {
    const HermitianFamily h = zeeman_drive();
    IntegratorConfig cfg;
    cfg.max_step = 1e-4;
    const Propagator u = Propagator::build(h, 0.0, 2.0, cfg);
    const Operator oracle = testing::rk4_propagator(h, 0.0, 2.0, 1e-5);
    CHECK((u.to(2.0) - oracle).norm() < 1e-8);
}

TEST_CASE("piecewise-constant families propagate exactly") {
    const Operator sz = pauli_z(), sx = pauli_x();
    const HermitianFamily h = HermitianFamily::piecewise_constant({0.4}, {sz, sx});
    IntegratorConfig cfg;
    cfg.max_step = 0.17; // deliberately not aligned with the breakpoint
    const Propagator u = Propagator::build(h, 0.0, 1.0, cfg);
    CHECK(u.scheme() == Scheme::ExactPiecewise);
    const Complex mi(0, -1);
    const Operator expected = matrix_exponential(mi * sx * 0.6) * matrix_exponential(mi * sz * 0.4);
    CHECK((u.to(1.0) - expected).norm() < 1e-12);
}

TEST_CASE("propagator caches unitary factors and satisfies the group law") {
    const HermitianFamily h = zeeman_drive();
    IntegratorConfig cfg;
    cfg.max_step = 1e-2;
    const Propagator u = Propagator::build(h, 0.0, 2.0, cfg);

    for (const Operator& f : u.cached_steps()) CHECK(unitarity_defect(f) < 1e-10);

    SplitRng rng(31, "group-law");
    for (int rep = 0; rep < 20; ++rep) {
        const double r = rng.uniform(0.0, 2.0), s = rng.uniform(0.0, 2.0), t = rng.uniform(0.0, 2.0);
        CHECK((u.at(t, r) - u.at(t, s) * u.at(s, r)).norm() < 1e-10);
        CHECK((u.at(r, s).adjoint() - Operator(u.at(r, s).partialPivLu().inverse())).norm() < 1e-10);
    }
    // U(t, t) is the identity, bitwise.
    CHECK((u.at(0.377, 0.377) - Operator::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("midpoint scheme is second order against the oracle") {
    for (std::uint64_t seed : {101ULL, 102ULL, 103ULL}) {
        const int dim = 2 + static_cast<int>(seed % 3);
        const HermitianFamily h = random_smooth_family(dim, seed);
        const Operator oracle = testing::rk4_propagator(h, 0.0, 1.0, 1e-4);
        IntegratorConfig cfg;
        cfg.max_step = 4e-3;
        const double coarse = (Propagator::build(h, 0.0, 1.0, cfg).to(1.0) - oracle).norm();
        cfg.max_step = 2e-3;
        const double fine = (Propagator::build(h, 0.0, 1.0, cfg).to(1.0) - oracle).norm();
        CHECK(coarse / fine >= 3.5);
    }
}

TEST_CASE("reunitarized factors stay unitary") {
    const HermitianFamily h = zeeman_drive();
    IntegratorConfig cfg;
    cfg.max_step = 5e-2;
    cfg.reunitarize = true;
    const Propagator u = Propagator::build(h, 0.0, 1.0, cfg);
    for (const Operator& f : u.cached_steps()) CHECK(unitarity_defect(f) < 1e-13);
}

TEST_CASE("propagate raises StepFailure for unreachable tolerances") {
    const HermitianFamily h = zeeman_drive();
    IntegratorConfig cfg;
    cfg.max_step = 0.1;
    cfg.tol = Tolerance(1e-14, 0.0);
    CHECK_THROWS_AS(propagate(h, 0.0, 2.0, cfg), StepFailure);
}

TEST_CASE("propagate rejects non-Hermitian generators") {
    Operator raising(2, 2);
    raising << 0, 1, 0, 0;
    const HermitianFamily h(2, [raising](double) -> Operator { return raising; });
    CHECK_THROWS_AS(propagate(h, 0.0, 1.0), NonHermitianInput);
}

TEST_CASE("propagation is reversible") {
    const HermitianFamily h = zeeman_drive();
    IntegratorConfig cfg;
    cfg.max_step = 1e-3;
    const Propagator u = Propagator::build(h, 0.0, 1.0, cfg);
    CHECK((u.at(0.0, 1.0) - u.at(1.0, 0.0).adjoint()).norm() < 1e-12);
}

TEST_CASE("hamiltonian recovery from the propagator") {
    SUBCASE("zero Hamiltonian") {
        const HermitianFamily h = HermitianFamily::constant(Operator::Zero(2, 2));
        const Propagator u = Propagator::build(h, 0.0, 1.0);
        CHECK(hamiltonian_from_propagator(u, 0.5).norm() < 1e-12);
    }
    SUBCASE("constant sigma_z") {
        const HermitianFamily h = HermitianFamily::constant(pauli_z());
        const Propagator u = Propagator::build(h, 0.0, 1.0);
        const Operator rec = hamiltonian_from_propagator(u, 0.37, 1e-4);
        CHECK((rec - pauli_z()).norm() < 1e-6);
        CHECK(hermiticity_defect(rec) < 1e-6);
    }
    SUBCASE("cos(t) sigma_y at t = 0.5") {
        const Operator sy = pauli_y();
        const HermitianFamily h(2, [sy](double t) -> Operator { return std::cos(t) * sy; });
        IntegratorConfig cfg;
        cfg.max_step = 1e-3;
        const Propagator u = Propagator::build(h, 0.0, 1.0, cfg);
        CHECK((hamiltonian_from_propagator(u, 0.5, 1e-4) - std::cos(0.5) * sy).norm() < 1e-6);
    }
    SUBCASE("boundary times are rejected") {
        const HermitianFamily h = HermitianFamily::constant(pauli_z());
        const Propagator u = Propagator::build(h, 0.0, 1.0);
        CHECK_THROWS_AS(hamiltonian_from_propagator(u, 0.0, 1e-4), BoundaryTime);
        CHECK_THROWS_AS(hamiltonian_from_propagator(u, 1.0, 1e-4), BoundaryTime);
    }
}

TEST_CASE("schrodinger residual") {
    const std::vector<double> samples{0.2, 0.5, 0.8};

    SUBCASE("propagated trajectory has a small residual") {
        const HermitianFamily h = HermitianFamily::constant(pauli_z());
        auto u = std::make_shared<const Propagator>(Propagator::build(h, 0.0, 1.0));
        const StateVector psi0 = (StateVector(2) << 0.6, 0.8).finished();
        const StateFn traj = [u, psi0](double t) -> StateVector { return u->to(t) * psi0; };
        CHECK(schrodinger_residual(h, traj, samples, 1e-4) < 1e-6);
    }
    SUBCASE("constant state under zero Hamiltonian is exact") {
        const HermitianFamily h = HermitianFamily::constant(Operator::Zero(2, 2));
        const StateVector psi = (StateVector(2) << 1, 0).finished();
        const StateFn traj = [psi](double) { return psi; };
        CHECK(schrodinger_residual(h, traj, samples) == 0.0);
    }
    SUBCASE("a frozen state under sigma_z violates the equation by exactly one") {
        const HermitianFamily h = HermitianFamily::constant(pauli_z());
        const StateVector psi = (StateVector(2) << 1, 1).finished() / std::sqrt(2.0);
        const StateFn traj = [psi](double) { return psi; };
        CHECK(schrodinger_residual(h, traj, samples) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("analytic family derivatives match central differences") {
    for (std::uint64_t seed : {5ULL, 6ULL, 7ULL}) {
        const HermitianFamily h = random_smooth_family(3, seed);
        REQUIRE(h.has_analytic_derivative());
        SplitRng rng(seed, "derivative-check");
        for (int rep = 0; rep < 5; ++rep) {
            const double t = rng.uniform(-2.0, 2.0);
            const double fd = 1e-4;
            const Operator diff = (h(t + fd) - h(t - fd)) / (2.0 * fd);
            CHECK((h.derivative(t) - diff).norm() < 1e-7); // O(h^2)
        }
    }
}

TEST_CASE("propagator domain is enforced") {
    const HermitianFamily h = HermitianFamily::constant(pauli_z());
    const Propagator u = Propagator::build(h, 0.0, 1.0);
    CHECK_THROWS_AS(u.at(1.5, 0.0), BoundaryTime);
    CHECK_THROWS_AS(u.at(0.5, -0.2), BoundaryTime);
}
