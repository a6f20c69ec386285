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

#include "fibredyn/linear.hpp"
#include "fibredyn/pauli.hpp"
#include "fibredyn/rng.hpp"
#include "oracles.hpp"

using namespace fibredyn;

namespace {
// Brute-force <psi|A psi> / <psi|psi> by explicit index summation.
Complex mean_by_summation(const Operator& a, const StateVector& psi) {
    Complex num(0, 0), den(0, 0);
    for (int i = 0; i < a.rows(); ++i) {
        den += std::conj(psi(i)) * psi(i);
        for (int j = 0; j < a.cols(); ++j) num += std::conj(psi(i)) * a(i, j) * psi(j);
    }
    return num / den;
}

// Hand-rolled 2x2 matrix product for the commutator oracle.
Operator mul2(const Operator& a, const Operator& b) {
    Operator c(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    return c;
}
} // namespace

TEST_CASE("tolerance requires a positive budget") {
    CHECK_THROWS_AS(Tolerance(0.0, 0.0), ValidationError);
    CHECK_THROWS_AS(Tolerance(-1e-3, 1e-2), ValidationError);
    const Tolerance t(1e-8, 1e-3);
    CHECK(t.check(5e-9));
    CHECK(t.check(5e-4, 1.0));
    CHECK_FALSE(t.check(2e-3, 1.0));
}

TEST_CASE("mean value basics") {
    const StateVector e0 = (StateVector(2) << 1, 0).finished();

    CHECK(mean_value(Operator::Identity(2, 2), e0) == doctest::Approx(1.0));
    CHECK(mean_value(pauli_z(), e0) == doctest::Approx(1.0));

    const StateVector plus = (StateVector(2) << 1, 1).finished() / std::sqrt(2.0);
    const double direct = mean_value(pauli_x(), plus);
    CHECK(direct == doctest::Approx(1.0));
    CHECK(std::abs(direct - mean_by_summation(pauli_x(), plus).real()) < 1e-14);
}

TEST_CASE("mean value is scale invariant and real for Hermitian operators") {
    SplitRng rng(21, "mean-props");
    for (int rep = 0; rep < 20; ++rep) {
        const int dim = 2 + static_cast<int>(rng.next_u64() % 5);
        const Operator a = rng.hermitian(dim, 2.0);
        const StateVector psi = rng.haar_state(dim);
        const Complex m = mean_value_complex(a, psi);
        CHECK(std::abs(m.imag()) < 1e-12);
        const Complex c(rng.uniform(-2, 2), rng.uniform(-2, 2));
        if (std::abs(c) > 1e-3) {
            const StateVector scaled = c * psi;
            CHECK(std::abs(mean_value(a, scaled) - m.real()) < 1e-12);
        }
        // Cross-check against the summation oracle.
        CHECK(std::abs(mean_value_complex(a, psi) - mean_by_summation(a, psi)) < 1e-13);
    }
}

TEST_CASE("mean value error paths") {
    CHECK_THROWS_AS(mean_value(pauli_z(), StateVector::Zero(2)), ZeroState);
    CHECK_THROWS_AS(mean_value(pauli_z(), StateVector::Ones(3).eval()), DimMismatch);
    Operator rect(2, 3);
    rect.setZero();
    CHECK_THROWS_AS(mean_value(rect, StateVector::Ones(3).eval()), DimMismatch);
}

TEST_CASE("commutator identities") {
    const Operator sx = pauli_x(), sy = pauli_y(), sz = pauli_z();

    CHECK(commutator(sx, sx).norm() == 0.0);

    // [sx, sy] = 2 i sz, checked against a hand-rolled 2x2 product.
    const Operator expected = mul2(sx, sy) - mul2(sy, sx);
    CHECK((expected - Complex(0, 2) * sz).norm() < 1e-15);
    CHECK((commutator(sx, sy) - expected).norm() < 1e-15);

    Operator d1(2, 2), d2(2, 2);
    d1 << 1.5, 0, 0, -0.25;
    d2 << -3, 0, 0, 7;
    CHECK(commutator(d1, d2).norm() == 0.0);

    CHECK_THROWS_AS(commutator(pauli_x(), Operator::Identity(3, 3)), DimMismatch);
}

TEST_CASE("commutator is bilinear and antisymmetric") {
    SplitRng rng(22, "commutator-props");
    for (int rep = 0; rep < 20; ++rep) {
        const int dim = 2 + static_cast<int>(rng.next_u64() % 4);
        const Operator a = rng.hermitian(dim), b = rng.hermitian(dim), c = rng.hermitian(dim);
        const Complex alpha(rng.uniform(-2, 2), rng.uniform(-2, 2));
        const Complex beta(rng.uniform(-2, 2), rng.uniform(-2, 2));
        CHECK((commutator(a, alpha * b + beta * c) - alpha * commutator(a, b) -
               beta * commutator(a, c))
                  .norm() < 1e-12);
        CHECK((commutator(a, b) + commutator(b, a)).norm() < 1e-13);
    }
}

TEST_CASE("matrix exponential golden cases") {
    CHECK((matrix_exponential(Operator::Zero(3, 3)) - Operator::Identity(3, 3)).norm() == 0.0);

    const Operator m = matrix_exponential(Complex(0, -M_PI) * pauli_z());
    CHECK((m + Operator::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("matrix exponential matches the eigendecomposition oracle") {
    SplitRng rng(23, "expm-oracle");
    for (int rep = 0; rep < 10; ++rep) {
        const Operator h = rng.hermitian(4, 2.0);
        const Operator skew = Complex(0, 1) * h;
        const Operator via_pade = matrix_exponential(skew);
        const Operator via_eig = testing::expm_eigendecomposition(skew);
        CHECK((via_pade - via_eig).norm() < 1e-12);
        CHECK(unitarity_defect(via_pade) < 1e-13);
    }
}

TEST_CASE("matrix exponential inverse and adjoint laws") {
    SplitRng rng(24, "expm-props");
    for (int rep = 0; rep < 12; ++rep) {
        const int dim = 2 + static_cast<int>(rng.next_u64() % 5);
        Operator a(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) a(i, j) = rng.complex_gaussian();
        a *= 5.0 / std::max(1.0, a.norm()); // ||A|| <= 5
        CHECK((matrix_exponential(a) * matrix_exponential(-a) - Operator::Identity(dim, dim)).norm() <
              1e-10);
        CHECK((matrix_exponential(a.adjoint()) - matrix_exponential(a).adjoint()).norm() < 1e-12);
    }
}

TEST_CASE("matrix exponential rejects bad input") {
    Operator bad(2, 2);
    bad << 1, 0, 0, std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(matrix_exponential(bad), NonFinite);

    const Operator huge = Operator::Identity(kMaxDim + 1, kMaxDim + 1);
    CHECK_THROWS_AS(matrix_exponential(huge), DimMismatch);
}

TEST_CASE("polar projection returns the nearest unitary") {
    SplitRng rng(25, "polar");
    const Operator u0 = rng.unitary(3);
    CHECK((polar_unitary(u0) - u0).norm() < 1e-13);

    Operator stretched = u0;
    stretched.col(0) *= 1.7;
    const Operator w = polar_unitary(stretched);
    CHECK(unitarity_defect(w) < 1e-13);
}

TEST_CASE("pauli strings") {
    CHECK((pauli_string("z") - pauli_z()).norm() == 0.0);
    const Operator zz = pauli_string("zz");
    CHECK(zz.rows() == 4);
    CHECK(zz(0, 0) == Complex(1, 0));
    CHECK(zz(1, 1) == Complex(-1, 0));
    CHECK(zz(3, 3) == Complex(1, 0));
    CHECK_THROWS_AS(pauli_string("q"), ValidationError);
    CHECK_THROWS_AS(pauli_string(""), ValidationError);
}
