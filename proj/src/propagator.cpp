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

#include "fibredyn/propagator.hpp"

#include <algorithm>
#include <cmath>

namespace fibredyn {

namespace {
const Complex kImag(0.0, 1.0);
}

Propagator Propagator::build(const HermitianFamily& family, double t0, double t1,
                             const IntegratorConfig& cfg) {
    if (!family.valid()) throw ValidationError("propagator needs a valid Hamiltonian family");
    if (!(t1 > t0)) throw ValidationError("propagator interval must satisfy t0 < t1");
    if (cfg.max_step <= 0.0) throw ValidationError("max_step must be positive");

    Propagator p;
    p.family_ = family;
    p.t0_ = t0;
    p.t1_ = t1;
    // Exact per-segment exponentials whenever the family declares itself
    // piecewise constant.
    p.scheme_ = family.piecewise_constant_kind() ? Scheme::ExactPiecewise : cfg.scheme;
    p.reunitarize_ = cfg.reunitarize;

    const int n = std::max(1, static_cast<int>(std::ceil((t1 - t0) / cfg.max_step - 1e-12)));
    p.step_ = (t1 - t0) / n;

    p.factors_.reserve(n);
    p.prefix_.reserve(n + 1);
    p.prefix_.push_back(Operator::Identity(family.dim(), family.dim()));
    for (int k = 0; k < n; ++k) {
        const double a = t0 + k * p.step_;
        const double b = (k + 1 == n) ? t1 : t0 + (k + 1) * p.step_;
        Operator f = p.step_factor(a, b);
        if (unitarity_defect(f) > 1e-8)
            throw StepFailure("step factor lost unitarity on [" + std::to_string(a) + ", " +
                              std::to_string(b) + "]");
        p.prefix_.push_back(f * p.prefix_.back());
        p.factors_.push_back(std::move(f));
    }
    return p;
}

Operator Propagator::step_factor(double a, double b) const {
    const int d = family_.dim();
    if (b == a) return Operator::Identity(d, d);
    Operator u = Operator::Identity(d, d);
    if (scheme_ == Scheme::ExactPiecewise) {
        std::vector<double> cuts = family_.breakpoints_in(a, b);
        cuts.push_back(b);
        double lo = a;
        for (double hi : cuts) {
            // Left-endpoint sample: inside [lo, hi) the family is constant for
            // piecewise kinds, held constant otherwise.
            u = matrix_exponential(-kImag / family_.hbar() * family_(lo) * (hi - lo)) * u;
            lo = hi;
        }
    } else {
        u = matrix_exponential(-kImag / family_.hbar() * family_(0.5 * (a + b)) * (b - a));
    }
    if (reunitarize_) u = polar_unitary(u);
    return u;
}

bool Propagator::contains(double t) const {
    const double slack = 1e-9 * std::max(1.0, t1_ - t0_);
    return t >= t0_ - slack && t <= t1_ + slack;
}

Operator Propagator::forward(double t) const {
    const int n = static_cast<int>(factors_.size());
    int k = static_cast<int>(std::floor((t - t0_) / step_));
    k = std::clamp(k, 0, n);
    double tk = t0_ + k * step_;
    if (tk > t + 1e-15 && k > 0) {
        --k;
        tk = t0_ + k * step_;
    }
    const double delta = t - tk;
    if (delta == 0.0 || k == n) return prefix_[static_cast<std::size_t>(k)];
    return step_factor(tk, t) * prefix_[static_cast<std::size_t>(k)];
}

Operator Propagator::at(double t, double s) const {
    if (!contains(t) || !contains(s))
        throw BoundaryTime("time outside propagator domain [" + std::to_string(t0_) + ", " +
                           std::to_string(t1_) + "]");
    const int d = family_.dim();
    if (t == s) return Operator::Identity(d, d);
    if (s == t0_) return forward(t);
    return forward(t) * forward(s).adjoint();
}

Operator Propagator::to(double t) const { return at(t, t0_); }

Operator propagate(const HermitianFamily& family, double t0, double t, const IntegratorConfig& cfg) {
    if (t == t0) return Operator::Identity(family.dim(), family.dim());
    const double lo = std::min(t0, t), hi = std::max(t0, t);
    const Propagator coarse = Propagator::build(family, lo, hi, cfg);
    const Operator u = coarse.at(t, t0);

    const bool exact = family.piecewise_constant_kind();
    if (!exact) {
        IntegratorConfig fine_cfg = cfg;
        fine_cfg.max_step = cfg.max_step / 2.0;
        const Propagator fine = Propagator::build(family, lo, hi, fine_cfg);
        const double estimate = (u - fine.at(t, t0)).norm();
        if (!cfg.tol.check(estimate))
            throw StepFailure("estimated propagation error " + std::to_string(estimate) +
                              " exceeds requested tolerance at max_step " + std::to_string(cfg.max_step));
    }
    return u;
}

Operator hamiltonian_from_propagator(const Propagator& u, double t, double h) {
    if (!(u.contains(t - h) && u.contains(t + h)))
        throw BoundaryTime("central difference at t=" + std::to_string(t) +
                           " leaves the propagator domain");
    const Operator fwd = u.to(t + h);
    const Operator bwd = u.to(t - h);
    const Operator mid = u.to(t);
    return kImag * u.hbar() * (fwd - bwd) / (2.0 * h) * mid.adjoint();
}

double schrodinger_residual(const HermitianFamily& family, const StateFn& trajectory,
                            const std::vector<double>& t_samples, double h) {
    double worst = 0.0;
    for (double t : t_samples) {
        const StateVector psi = trajectory(t);
        const StateVector dpsi = (trajectory(t + h) - trajectory(t - h)) / (2.0 * h);
        const double r =
            (kImag * family.hbar() * dpsi - family(t) * psi).norm() / std::max(1.0, psi.norm());
        worst = std::max(worst, r);
    }
    return worst;
}

} // namespace fibredyn
