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

#include <string_view>

#include "fibredyn/linear.hpp"

namespace fibredyn {

Operator pauli_i();
Operator pauli_x();
Operator pauli_y();
Operator pauli_z();

/// Kronecker product, row-major convention: kron(A, B)(i*p+k, j*q+l) = A(i,j) B(k,l).
Operator kron(const Operator& a, const Operator& b);

/// Tensor product of single-qubit Paulis named by a string over {i,x,y,z},
/// e.g. "zx" is sigma_z (x) sigma_x acting on a 4-dimensional space.
Operator pauli_string(std::string_view labels);

} // namespace fibredyn
