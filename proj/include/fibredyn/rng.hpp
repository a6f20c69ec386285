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
#include <string_view>

#include "fibredyn/linear.hpp"

namespace fibredyn {

/// Deterministic random stream with labeled splitting. A root seed plus a
/// label (for example a check name) yields an independent stream, so adding
/// one consumer never perturbs another's draws. The generator is splitmix64
/// and all distributions are implemented here, keeping byte-identical output
/// across platforms and standard libraries.
class SplitRng {
  public:
    explicit SplitRng(std::uint64_t seed);
    SplitRng(std::uint64_t root, std::string_view label);

    std::uint64_t next_u64();
    /// Uniform in [0, 1).
    double uniform();
    double uniform(double lo, double hi);
    /// Standard normal via Box-Muller.
    double gaussian();
    /// Complex with independent N(0, 1/2) parts (unit expected modulus squared).
    Complex complex_gaussian();

    /// Haar-random unit state.
    StateVector haar_state(int dim);
    /// Random Hermitian matrix from the Gaussian unitary ensemble scaled so
    /// the spectral norm is O(scale).
    Operator hermitian(int dim, double scale = 1.0);
    /// Haar-random unitary (QR of a Ginibre matrix with phase correction).
    Operator unitary(int dim);

    /// Derive a seed for a child stream.
    std::uint64_t fork(std::string_view label) const;

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// FNV-1a hash of a byte string, used for stream labels and content digests.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t basis = 1469598103934665603ULL);

} // namespace fibredyn
