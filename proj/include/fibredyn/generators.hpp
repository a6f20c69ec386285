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

#include <cstdint>
#include <memory>
#include <vector>

#include "fibredyn/bundle.hpp"
#include "fibredyn/family.hpp"
#include "fibredyn/propagator.hpp"

namespace fibredyn {

/// Seeded smooth Hermitian family C0 + sin(w1 t + p1) C1 + cos(w2 t + p2) C2
/// with an analytic time derivative; amplitudes O(scale), frequencies O(1).
HermitianFamily random_smooth_family(int dim, std::uint64_t seed, double hbar = 1.0, double scale = 1.0);

/// Seeded static Hermitian observable as a constant family.
HermitianFamily random_static_family(int dim, std::uint64_t seed, double hbar = 1.0, double scale = 1.0);

/// The transported family A(t) = U(t,t0) A0 U(t0,t): an integral of motion by
/// construction.
HermitianFamily transported_observable(std::shared_ptr<const Propagator> u, const Operator& a0);

/// Atlas of the requested kind over the path, seeded.
BundleAtlas make_atlas(AtlasKind kind, const ObserverPath& path, int dim, std::uint64_t seed,
                       double cond_cap = 100.0);

/// Seeded smooth invertible gauge field W(t) = exp(i K(t)) (1 + 0.4 sin M),
/// condition number O(1).
OperatorFn random_gauge_field(int dim, std::uint64_t seed);

} // namespace fibredyn
