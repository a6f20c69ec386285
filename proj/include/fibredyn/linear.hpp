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

#include <Eigen/Dense>
#include <complex>

#include "fibredyn/errors.hpp"

namespace fibredyn {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

/// Largest supported matrix dimension. Everything here is dense; the point of
/// the engine is identity verification, not scale.
inline constexpr int kMaxDim = 64;

/// Absolute/relative tolerance pair. At least one component must be positive.
struct Tolerance {
    double abs = 1e-10;
    double rel = 0.0;

    Tolerance() = default;
    Tolerance(double abs_tol, double rel_tol) : abs(abs_tol), rel(rel_tol) {
        if (abs < 0.0 || rel < 0.0 || abs + rel <= 0.0)
            throw ValidationError("Tolerance requires abs >= 0, rel >= 0, abs + rel > 0");
    }

    /// True when |error| is acceptable against the given magnitude scale.
    bool check(double error, double scale = 1.0) const {
        return std::abs(error) <= abs + rel * std::abs(scale);
    }
};

void check_dim(const Operator& a, int dim);
void check_square(const Operator& a);
void check_same_dim(const Operator& a, const Operator& b);

/// ||A - A^dag||_F.
double hermiticity_defect(const Operator& a);
/// ||A^dag A - I||_F.
double unitarity_defect(const Operator& a);
bool is_hermitian(const Operator& a, double tol = 1e-10);
bool is_unitary(const Operator& a, double tol = 1e-10);

/// <psi|A psi> / <psi|psi>, no reality assumption on the result.
Complex mean_value_complex(const Operator& a, const StateVector& psi);

/// Mean value of a Hermitian operator; the real part of the normalized
/// expectation. Invariant under psi -> c*psi for any nonzero c.
double mean_value(const Operator& a, const StateVector& psi);

/// AB - BA.
Operator commutator(const Operator& a, const Operator& b);

/// exp(A) by scaling-and-squaring with diagonal Pade approximants.
/// Unitary (to roundoff) when A is skew-Hermitian.
Operator matrix_exponential(const Operator& a);

/// Nearest unitary in Frobenius norm (polar factor via SVD).
Operator polar_unitary(const Operator& a);

/// Spectral condition number (sigma_max / sigma_min); infinity if singular.
double condition_number(const Operator& a);

} // namespace fibredyn
