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

#include "fibredyn/pauli.hpp"

namespace fibredyn {

Operator pauli_i() { return Operator::Identity(2, 2); }

Operator pauli_x() {
    Operator m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Operator pauli_y() {
    Operator m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

Operator pauli_z() {
    Operator m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Operator kron(const Operator& a, const Operator& b) {
    Operator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Operator pauli_string(std::string_view labels) {
    if (labels.empty()) throw ValidationError("empty Pauli string");
    Operator out = Operator::Identity(1, 1);
    for (char c : labels) {
        switch (c) {
            case 'i': case 'I': out = kron(out, pauli_i()); break;
            case 'x': case 'X': out = kron(out, pauli_x()); break;
            case 'y': case 'Y': out = kron(out, pauli_y()); break;
            case 'z': case 'Z': out = kron(out, pauli_z()); break;
            default:
                throw ValidationError(std::string("unknown Pauli label '") + c + "', expected one of i,x,y,z");
        }
    }
    return out;
}

} // namespace fibredyn
