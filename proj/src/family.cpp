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

#include "fibredyn/family.hpp"

#include <algorithm>

namespace fibredyn {

HermitianFamily::HermitianFamily(int dim, OperatorFn eval, OperatorFn time_derivative, double hbar)
    : dim_(dim), hbar_(hbar), eval_(std::move(eval)), ddt_(std::move(time_derivative)) {
    if (dim < 1 || dim > kMaxDim)
        throw DimMismatch("family dimension " + std::to_string(dim) + " outside [1, " +
                          std::to_string(kMaxDim) + "]");
    if (hbar <= 0.0) throw ValidationError("hbar must be positive");
    if (!eval_) throw ValidationError("family requires an evaluation function");
}

HermitianFamily HermitianFamily::constant(const Operator& h, double hbar) {
    return piecewise_constant({}, {h}, hbar);
}

HermitianFamily HermitianFamily::piecewise_constant(std::vector<double> breakpoints,
                                                    std::vector<Operator> values, double hbar) {
    if (values.empty()) throw ValidationError("piecewise-constant family needs at least one segment");
    if (values.size() != breakpoints.size() + 1)
        throw ValidationError("piecewise-constant family needs one more segment than breakpoints");
    if (!std::is_sorted(breakpoints.begin(), breakpoints.end()))
        throw ValidationError("piecewise-constant breakpoints must be ascending");
    const int dim = static_cast<int>(values.front().rows());
    for (const Operator& v : values) check_dim(v, dim);

    auto breaks = std::make_shared<const std::vector<double>>(std::move(breakpoints));
    auto segments = std::make_shared<const std::vector<Operator>>(std::move(values));
    HermitianFamily fam(
        dim,
        [breaks, segments](double t) -> Operator {
            const auto idx = std::upper_bound(breaks->begin(), breaks->end(), t) - breaks->begin();
            return (*segments)[static_cast<std::size_t>(idx)];
        },
        [dim](double) -> Operator { return Operator::Zero(dim, dim); }, hbar);
    fam.piecewise_ = true;
    fam.breakpoints_ = breaks;
    return fam;
}

Operator HermitianFamily::operator()(double t) const {
    if (!eval_) throw ValidationError("evaluating an empty family");
    Operator h = eval_(t);
    check_dim(h, dim_);
    if (!h.allFinite()) throw NonFinite("family value has non-finite entries at t=" + std::to_string(t));
    if (hermiticity_defect(h) > 1e-10 * std::max(1.0, h.norm()))
        throw NonHermitianInput("family value is not Hermitian at t=" + std::to_string(t));
    return h;
}

Operator HermitianFamily::derivative(double t, double h) const {
    if (ddt_) {
        Operator d = ddt_(t);
        check_dim(d, dim_);
        return d;
    }
    return ((*this)(t + h) - (*this)(t - h)) / (2.0 * h);
}

std::vector<double> HermitianFamily::breakpoints_in(double a, double b) const {
    std::vector<double> out;
    if (!breakpoints_) return out;
    for (double x : *breakpoints_)
        if (x > a && x < b) out.push_back(x);
    return out;
}

HermitianFamily operator+(const HermitianFamily& a, const HermitianFamily& b) {
    if (a.dim() != b.dim()) throw DimMismatch("summed families must share dimension");
    if (a.hbar() != b.hbar()) throw ValidationError("summed families must share hbar");
    OperatorFn ddt;
    if (a.has_analytic_derivative() && b.has_analytic_derivative())
        ddt = [a, b](double t) -> Operator { return a.derivative(t) + b.derivative(t); };
    return HermitianFamily(
        a.dim(), [a, b](double t) -> Operator { return a(t) + b(t); }, ddt, a.hbar());
}

} // namespace fibredyn
