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

#include "fibredyn/generators.hpp"

#include <cmath>

#include "fibredyn/rng.hpp"

namespace fibredyn {

namespace {
const Complex kImag(0.0, 1.0);
}

HermitianFamily random_smooth_family(int dim, std::uint64_t seed, double hbar, double scale) {
    SplitRng rng(seed, "smooth-family");
    const Operator c0 = rng.hermitian(dim, scale);
    const Operator c1 = rng.hermitian(dim, 0.7 * scale);
    const Operator c2 = rng.hermitian(dim, 0.7 * scale);
    const double w1 = rng.uniform(0.5, 1.4), w2 = rng.uniform(0.5, 1.4);
    const double p1 = rng.uniform(0.0, 2.0 * M_PI), p2 = rng.uniform(0.0, 2.0 * M_PI);
    return HermitianFamily(
        dim,
        [=](double t) -> Operator { return c0 + std::sin(w1 * t + p1) * c1 + std::cos(w2 * t + p2) * c2; },
        [=](double t) -> Operator { return w1 * std::cos(w1 * t + p1) * c1 - w2 * std::sin(w2 * t + p2) * c2; },
        hbar);
}

HermitianFamily random_static_family(int dim, std::uint64_t seed, double hbar, double scale) {
    SplitRng rng(seed, "static-family");
    return HermitianFamily::constant(rng.hermitian(dim, scale), hbar);
}

HermitianFamily transported_observable(std::shared_ptr<const Propagator> u, const Operator& a0) {
    if (!u) throw ValidationError("transported observable requires a propagator");
    check_dim(a0, u->dim());
    std::shared_ptr<const Propagator> prop = std::move(u);
    const double t0 = prop->t0();
    return HermitianFamily(
        prop->dim(),
        [prop, a0, t0](double t) -> Operator { return prop->at(t, t0) * a0 * prop->at(t0, t); },
        nullptr, prop->hbar());
}

BundleAtlas make_atlas(AtlasKind kind, const ObserverPath& path, int dim, std::uint64_t seed,
                       double cond_cap) {
    switch (kind) {
        case AtlasKind::Identity: return BundleAtlas::identity(path, dim);
        case AtlasKind::UnitaryField: return BundleAtlas::unitary_field(path, dim, seed);
        case AtlasKind::InvertibleField: return BundleAtlas::invertible_field(path, dim, seed, cond_cap);
    }
    throw ValidationError("unknown atlas kind");
}

OperatorFn random_gauge_field(int dim, std::uint64_t seed) {
    SplitRng rng(seed, "gauge-field");
    const Operator s1 = rng.hermitian(dim, 1.0);
    const Operator s2 = rng.hermitian(dim, 1.0);
    Eigen::JacobiSVD<Operator> svd(s2);
    const double top = svd.singularValues().maxCoeff();
    const Operator s2n = top > 0.0 ? Operator(s2 / top) : s2;
    const double w1 = rng.uniform(0.4, 1.1), w2 = rng.uniform(0.4, 1.1);
    const double p1 = rng.uniform(0.0, 2.0 * M_PI), p2 = rng.uniform(0.0, 2.0 * M_PI);
    const Operator eye = Operator::Identity(dim, dim);
    return [=](double t) -> Operator {
        return matrix_exponential(kImag * std::sin(w1 * t + p1) * s1) *
               (eye + 0.4 * std::sin(w2 * t + p2) * s2n);
    };
}

} // namespace fibredyn
