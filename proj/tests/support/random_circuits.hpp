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

// Seeded random circuits, states and observables for property tests.
#pragma once

#include <cstddef>
#include <vector>

#include "qgen/circuits.hpp"
#include "qgen/random.hpp"
#include "qgen/simulator.hpp"

namespace testing_support {

struct RandomCircuit {
    qgen::Circuit circuit;
    std::vector<double> inputs;
    std::vector<double> params;
};

inline std::size_t pick(qgen::Rng &rng, std::size_t n) {
    return static_cast<std::size_t>(qgen::uniform01(rng) * static_cast<double>(n)) % n;
}

inline double angle(qgen::Rng &rng) { return qgen::uniform(rng, -3.5, 3.5); }

/// Random circuit over every gate kind. Angles bind to trainable parameters
/// (possibly shared between slots), fixed values, or, when `with_data`, to
/// inputs through any data map. Inputs are drawn inside (-0.9, 0.9).
inline RandomCircuit random_circuit(qgen::Rng &rng, std::size_t max_qubits = 4,
                                    std::size_t max_params = 12, std::size_t max_ops = 12,
                                    bool with_data = true) {
    using qgen::GateKind;
    static const std::vector<GateKind> kinds{GateKind::RX, GateKind::RY,     GateKind::RZ,
                                             GateKind::H,  GateKind::R3,     GateKind::CPhase,
                                             GateKind::CNOT, GateKind::CR3, GateKind::XXRot};
    static const std::vector<qgen::DataMap> maps{qgen::DataMap::Arcsin,
                                                 qgen::DataMap::ArccosSquare,
                                                 qgen::DataMap::Identity};
    const std::size_t n = 1 + pick(rng, max_qubits);
    const std::size_t n_params = 1 + pick(rng, max_params);
    const std::size_t n_inputs = with_data ? 1 + pick(rng, 2) : 0;
    qgen::Circuit c(n, n_inputs, n_params);
    const std::size_t n_ops = 1 + pick(rng, max_ops);
    for (std::size_t k = 0; k < n_ops; ++k) {
        GateKind kind = kinds[pick(rng, kinds.size())];
        if (n == 1 && qgen::gate_qubit_count(kind) == 2) {
            kind = GateKind::RY;
        }
        qgen::Operation op{kind, {}, {}};
        op.qubits.push_back(pick(rng, n));
        if (qgen::gate_qubit_count(kind) == 2) {
            std::size_t t = pick(rng, n - 1);
            if (t >= op.qubits[0]) {
                ++t;
            }
            op.qubits.push_back(t);
        }
        for (std::size_t a = 0; a < qgen::gate_param_count(kind); ++a) {
            const double u = qgen::uniform01(rng);
            if (u < 0.6) {
                op.slots.emplace_back(qgen::TrainableBinding{pick(rng, n_params)});
            } else if (u < 0.8 || !with_data) {
                op.slots.emplace_back(qgen::FixedBinding{angle(rng)});
            } else {
                op.slots.emplace_back(qgen::DataBinding{pick(rng, n_inputs), maps[pick(rng, 3)]});
            }
        }
        c.append(std::move(op));
    }
    RandomCircuit out{std::move(c), {}, {}};
    for (std::size_t i = 0; i < n_inputs; ++i) {
        out.inputs.push_back(qgen::uniform(rng, -0.9, 0.9));
    }
    for (std::size_t i = 0; i < n_params; ++i) {
        out.params.push_back(angle(rng));
    }
    return out;
}

inline qgen::PauliString random_pauli(qgen::Rng &rng, std::size_t n) {
    std::vector<qgen::PauliFactor> f;
    for (std::size_t q = 0; q < n; ++q) {
        const auto r = pick(rng, 4);
        if (r > 0) {
            f.push_back({q, static_cast<qgen::PauliAxis>(r - 1)});
        }
    }
    if (f.empty()) {
        f.push_back({pick(rng, n), qgen::PauliAxis::Z});
    }
    return qgen::PauliString(std::move(f));
}

/// Central finite difference of f at x along coordinate i.
template <class F> double central_difference(F &&f, std::vector<double> x, std::size_t i, double h) {
    const double x0 = x[i];
    x[i] = x0 + h;
    const double up = f(x);
    x[i] = x0 - h;
    const double down = f(x);
    return (up - down) / (2 * h);
}

} // namespace testing_support
