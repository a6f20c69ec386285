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

#include "fibredyn/rng.hpp"

#include <cmath>

namespace fibredyn {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
} // namespace

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t basis) {
    std::uint64_t h = basis;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

SplitRng::SplitRng(std::uint64_t seed) : state_(seed) {}

SplitRng::SplitRng(std::uint64_t root, std::string_view label) : state_(mix(root ^ fnv1a(label))) {}

std::uint64_t SplitRng::next_u64() {
    state_ += kGolden;
    return mix(state_);
}

double SplitRng::uniform() {
    // 53 high bits -> [0, 1).
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SplitRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double SplitRng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

Complex SplitRng::complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return Complex(re, im) / std::sqrt(2.0);
}

StateVector SplitRng::haar_state(int dim) {
    StateVector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = complex_gaussian();
    const double n = v.norm();
    if (n == 0.0) return haar_state(dim);
    return v / n;
}

Operator SplitRng::hermitian(int dim, double scale) {
    Operator g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = complex_gaussian();
    Operator h = (g + g.adjoint()) / 2.0;
    // GUE spectral radius concentrates near 2*sqrt(dim).
    return h * (scale / (2.0 * std::sqrt(static_cast<double>(dim))));
}

Operator SplitRng::unitary(int dim) {
    Operator g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = complex_gaussian();
    Eigen::HouseholderQR<Operator> qr(g);
    Operator q = qr.householderQ();
    const Operator r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phase ambiguity so the distribution is Haar.
    for (int j = 0; j < dim; ++j) {
        const Complex d = r(j, j);
        const double m = std::abs(d);
        q.col(j) *= (m == 0.0) ? Complex(1, 0) : d / m;
    }
    return q;
}

std::uint64_t SplitRng::fork(std::string_view label) const { return mix(state_ ^ fnv1a(label)); }

} // namespace fibredyn
