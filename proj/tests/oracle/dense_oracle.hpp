// Copyright 2026 The qgen Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense reference simulator: every gate becomes a full 2^n x 2^n matrix
// (Kronecker products of 2x2 blocks, matrix exponentials of Pauli
// generators) applied to the full state vector. Shares nothing with the
// production kernels except the Gate description.
#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qgen/simulator.hpp"

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat pauli(char axis) {
    Mat m(2, 2);
    switch (axis) {
    case 'X':
        m << 0, 1, 1, 0;
        break;
    case 'Y':
        m << 0, cd(0, -1), cd(0, 1), 0;
        break;
    case 'Z':
        m << 1, 0, 0, -1;
        break;
    default:
        m = Mat::Identity(2, 2);
    }
    return m;
}

inline Mat projector(int bit) {
    Mat m = Mat::Zero(2, 2);
    m(bit, bit) = 1;
    return m;
}

/// Full operator with `ops[q]` acting on qubit q (identity where absent).
/// Qubit 0 is the least significant index bit, i.e. the rightmost factor.
inline Mat embed(std::size_t n, const std::vector<std::pair<std::size_t, Mat>> &ops) {
    Mat full = Mat::Identity(1, 1);
    for (std::size_t q = n; q-- > 0;) {
        Mat f = Mat::Identity(2, 2);
        for (const auto &[qq, m] : ops) {
            if (qq == q) {
                f = m;
            }
        }
        Mat next = Eigen::kroneckerProduct(full, f).eval();
        full = next;
    }
    return full;
}

/// exp(-i t G / 2) for a Hermitian generator G.
inline Mat rotation(const Mat &generator, double t) {
    Mat a = (cd(0, -t / 2) * generator).eval();
    return a.exp();
}

inline Mat single(qgen::GateKind kind, const std::vector<double> &p) {
    using qgen::GateKind;
    switch (kind) {
    case GateKind::RX:
        return rotation(pauli('X'), p[0]);
    case GateKind::RY:
        return rotation(pauli('Y'), p[0]);
    case GateKind::RZ:
        return rotation(pauli('Z'), p[0]);
    case GateKind::H: {
        Mat h(2, 2);
        h << 1, 1, 1, -1;
        return h / std::sqrt(2.0);
    }
    case GateKind::R3:
    case GateKind::CR3:
        return rotation(pauli('Z'), p[2]) * rotation(pauli('Y'), p[1]) *
               rotation(pauli('Z'), p[0]);
    default:
        throw std::invalid_argument("not a single-qubit kind");
    }
}

inline Mat gate_matrix(std::size_t n, const qgen::Gate &g) {
    using qgen::GateKind;
    const auto &q = g.qubits;
    switch (g.kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::H:
    case GateKind::R3:
        return embed(n, {{q[0], single(g.kind, g.params)}});
    case GateKind::CNOT:
        return embed(n, {{q[0], projector(0)}}) + embed(n, {{q[0], projector(1)}, {q[1], pauli('X')}});
    case GateKind::CR3:
        return embed(n, {{q[0], projector(0)}}) +
               embed(n, {{q[0], projector(1)}, {q[1], single(g.kind, g.params)}});
    case GateKind::CPhase: {
        const Mat p11 = embed(n, {{q[0], projector(1)}, {q[1], projector(1)}});
        const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
        return Mat::Identity(dim, dim) + (std::exp(cd(0, g.params[0])) - 1.0) * p11;
    }
    case GateKind::XXRot:
        return rotation(embed(n, {{q[0], pauli('X')}, {q[1], pauli('X')}}), g.params[0]);
    }
    throw std::invalid_argument("unknown gate kind");
}

inline Vec zero_state(std::size_t n) {
    Vec v = Vec::Zero(static_cast<Eigen::Index>(std::size_t{1} << n));
    v(0) = 1;
    return v;
}

inline Vec run(std::size_t n, const std::vector<qgen::Gate> &gates) {
    Vec psi = zero_state(n);
    for (const auto &g : gates) {
        psi = (gate_matrix(n, g) * psi).eval();
    }
    return psi;
}

inline Mat pauli_matrix(std::size_t n, const qgen::PauliString &p) {
    std::vector<std::pair<std::size_t, Mat>> ops;
    for (const auto &f : p.factors()) {
        const char axis = f.axis == qgen::PauliAxis::X ? 'X' : f.axis == qgen::PauliAxis::Y ? 'Y' : 'Z';
        ops.emplace_back(f.qubit, pauli(axis));
    }
    return embed(n, ops);
}

inline double expectation(const Vec &psi, std::size_t n, const qgen::PauliString &p) {
    return (psi.adjoint() * pauli_matrix(n, p) * psi)(0, 0).real();
}

} // namespace oracle
