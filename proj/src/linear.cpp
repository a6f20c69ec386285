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

#include "fibredyn/linear.hpp"

#include <cmath>
#include <limits>

namespace fibredyn {

void check_dim(const Operator& a, int dim) {
    if (a.rows() != dim || a.cols() != dim)
        throw DimMismatch("operator is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                          ", expected " + std::to_string(dim) + "x" + std::to_string(dim));
}

void check_square(const Operator& a) {
    if (a.rows() != a.cols())
        throw DimMismatch("operator must be square, got " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()));
    if (a.rows() < 1 || a.rows() > kMaxDim)
        throw DimMismatch("dimension " + std::to_string(a.rows()) + " outside supported range [1, " +
                          std::to_string(kMaxDim) + "]");
}

void check_same_dim(const Operator& a, const Operator& b) {
    check_square(a);
    check_square(b);
    if (a.rows() != b.rows())
        throw DimMismatch("operator dimensions differ: " + std::to_string(a.rows()) + " vs " +
                          std::to_string(b.rows()));
}

double hermiticity_defect(const Operator& a) { return (a - a.adjoint()).norm(); }

double unitarity_defect(const Operator& a) {
    return (a.adjoint() * a - Operator::Identity(a.rows(), a.cols())).norm();
}

bool is_hermitian(const Operator& a, double tol) {
    return a.rows() == a.cols() && hermiticity_defect(a) <= tol;
}

bool is_unitary(const Operator& a, double tol) {
    return a.rows() == a.cols() && unitarity_defect(a) <= tol;
}

Complex mean_value_complex(const Operator& a, const StateVector& psi) {
    check_square(a);
    if (psi.size() != a.rows())
        throw DimMismatch("state dimension " + std::to_string(psi.size()) + " does not match operator " +
                          std::to_string(a.rows()));
    const double nrm2 = psi.squaredNorm();
    if (nrm2 == 0.0)
        throw ZeroState("mean value of the zero state is undefined");
    return psi.dot(a * psi) / nrm2;
}

double mean_value(const Operator& a, const StateVector& psi) {
    return mean_value_complex(a, psi).real();
}

Operator commutator(const Operator& a, const Operator& b) {
    check_same_dim(a, b);
    return a * b - b * a;
}

namespace {

// Diagonal Pade approximant exp(A) ~ (V - U)^{-1} (V + U) of order 2m+... with
// U odd and V even in A; coefficients from the standard double-precision
// scaling-and-squaring method.
Operator pade_solve(const Operator& u, const Operator& v) {
    return (v - u).partialPivLu().solve(v + u);
}

Operator pade3(const Operator& a, const Operator& eye) {
    static const double b[] = {120., 60., 12., 1.};
    const Operator a2 = a * a;
    const Operator u = a * (b[3] * a2 + b[1] * eye);
    const Operator v = b[2] * a2 + b[0] * eye;
    return pade_solve(u, v);
}

Operator pade5(const Operator& a, const Operator& eye) {
    static const double b[] = {30240., 15120., 3360., 420., 30., 1.};
    const Operator a2 = a * a;
    const Operator a4 = a2 * a2;
    const Operator u = a * (b[5] * a4 + b[3] * a2 + b[1] * eye);
    const Operator v = b[4] * a4 + b[2] * a2 + b[0] * eye;
    return pade_solve(u, v);
}

Operator pade7(const Operator& a, const Operator& eye) {
    static const double b[] = {17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.};
    const Operator a2 = a * a;
    const Operator a4 = a2 * a2;
    const Operator a6 = a4 * a2;
    const Operator u = a * (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * eye);
    const Operator v = b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * eye;
    return pade_solve(u, v);
}

Operator pade9(const Operator& a, const Operator& eye) {
    static const double b[] = {17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                               2162160.,     110880.,     3960.,       90.,        1.};
    const Operator a2 = a * a;
    const Operator a4 = a2 * a2;
    const Operator a6 = a4 * a2;
    const Operator a8 = a6 * a2;
    const Operator u = a * (b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * eye);
    const Operator v = b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * eye;
    return pade_solve(u, v);
}

Operator pade13(const Operator& a, const Operator& eye) {
    static const double b[] = {64764752532480000., 32382376266240000., 7771770303897600., 1187353796428800.,
                               129060195264000.,   10559470521600.,    670442572800.,     33522128640.,
                               1323241920.,        40840800.,          960960.,           16380.,
                               182.,               1.};
    const Operator a2 = a * a;
    const Operator a4 = a2 * a2;
    const Operator a6 = a4 * a2;
    const Operator u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                            b[3] * a2 + b[1] * eye);
    const Operator v =
        a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * eye;
    return pade_solve(u, v);
}

} // namespace

Operator matrix_exponential(const Operator& a) {
    check_square(a);
    if (!a.allFinite())
        throw NonFinite("matrix exponential of a matrix with non-finite entries");

    const Operator eye = Operator::Identity(a.rows(), a.cols());
    const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();

    // Order-selection thresholds for double precision.
    if (norm1 < 1.495585217958292e-2) return pade3(a, eye);
    if (norm1 < 2.539398330063230e-1) return pade5(a, eye);
    if (norm1 < 9.504178996162932e-1) return pade7(a, eye);
    if (norm1 < 2.097847961257068e0) return pade9(a, eye);

    const double theta13 = 5.371920351148152e0;
    int squarings = 0;
    Operator scaled = a;
    if (norm1 > theta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
        scaled /= std::pow(2.0, squarings);
    }
    Operator result = pade13(scaled, eye);
    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
}

Operator polar_unitary(const Operator& a) {
    check_square(a);
    Eigen::JacobiSVD<Operator> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

double condition_number(const Operator& a) {
    Eigen::JacobiSVD<Operator> svd(a);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smin <= 0.0) return std::numeric_limits<double>::infinity();
    return smax / smin;
}

} // namespace fibredyn
