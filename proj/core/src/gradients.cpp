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

#include "qgen/gradients.hpp"

#include <cmath>
#include <numbers>

#include "qgen/errors.hpp"

namespace qgen {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

std::vector<double> shifted_derivatives(std::size_t n_qubits, const std::vector<Gate> &base,
                                        std::span<const PauliString> paulis, SlotRef slot,
                                        const EvalMode &mode) {
    const auto rule = shift_rule(base[slot.op].kind);
    std::vector<double> out(paulis.size(), 0.0);
    auto gates = base;
    for (const auto &term : rule) {
        gates[slot.op].params[slot.angle] = base[slot.op].params[slot.angle] + term.shift;
        const auto values = measure(run_gates(n_qubits, gates), paulis, mode);
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] += term.coefficient * values[i];
        }
    }
    return out;
}

template <class Binding> std::vector<SlotRef> slots_of(const Circuit &circuit) {
    std::vector<SlotRef> out;
    for (std::size_t o = 0; o < circuit.ops().size(); ++o) {
        const auto &slots = circuit.ops()[o].slots;
        for (std::size_t a = 0; a < slots.size(); ++a) {
            if (std::holds_alternative<Binding>(slots[a])) {
                out.push_back({o, a});
            }
        }
    }
    return out;
}

} // namespace

std::vector<ShiftTerm> shift_rule(GateKind kind) {
    switch (kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::R3:
    case GateKind::XXRot:
    case GateKind::CPhase:
        return {{kHalfPi, 0.5}, {-kHalfPi, -0.5}};
    case GateKind::CR3: {
        const double root2 = std::numbers::sqrt2;
        const double c_plus = (root2 + 1.0) / (4.0 * root2);
        const double c_minus = (root2 - 1.0) / (4.0 * root2);
        return {{kHalfPi, c_plus},
                {-kHalfPi, -c_plus},
                {3 * kHalfPi, -c_minus},
                {-3 * kHalfPi, c_minus}};
    }
    case GateKind::H:
    case GateKind::CNOT:
        break;
    }
    throw UnsupportedGateError(std::string(to_string(kind)) + " has no differentiable angle");
}

ShiftPair make_shift_pair(const Circuit &circuit, std::span<const double> inputs,
                          std::span<const double> params, SlotRef slot, double shift) {
    (void)circuit.slot(slot);
    ShiftPair pair{slot, resolve(circuit, inputs, params), {}};
    pair.minus = pair.plus;
    pair.plus[slot.op].params[slot.angle] += shift;
    pair.minus[slot.op].params[slot.angle] -= shift;
    return pair;
}

std::vector<SlotRef> trainable_slots(const Circuit &circuit) {
    return slots_of<TrainableBinding>(circuit);
}

std::vector<SlotRef> data_slots(const Circuit &circuit) { return slots_of<DataBinding>(circuit); }

std::vector<double> slot_derivatives(const Circuit &circuit, std::span<const PauliString> paulis,
                                     std::span<const double> inputs,
                                     std::span<const double> params, SlotRef slot,
                                     const EvalMode &mode) {
    (void)circuit.slot(slot);
    const auto base = resolve(circuit, inputs, params);
    return shifted_derivatives(circuit.n_qubits(), base, paulis, slot, mode);
}

double param_shift_derivative(const Circuit &circuit, const PauliString &pauli,
                              std::span<const double> inputs, std::span<const double> params,
                              SlotRef slot, const EvalMode &mode) {
    return slot_derivatives(circuit, std::span(&pauli, 1), inputs, params, slot, mode).front();
}

Jacobian jacobian(const Circuit &circuit, std::span<const PauliString> paulis,
                  std::span<const double> inputs, std::span<const double> params,
                  const EvalMode &mode) {
    Jacobian jac(paulis.size(), circuit.n_trainable());
    const auto slots = trainable_slots(circuit);
    if (slots.empty() || paulis.empty()) {
        (void)resolve(circuit, inputs, params); // length checks
        return jac;
    }
    const auto base = resolve(circuit, inputs, params);
    for (const auto &slot : slots) {
        const auto k = std::get<TrainableBinding>(circuit.slot(slot)).param;
        const auto d = shifted_derivatives(circuit.n_qubits(), base, paulis, slot, mode);
        for (std::size_t i = 0; i < paulis.size(); ++i) {
            jac.at(i, k) += d[i];
        }
    }
    return jac;
}

Jacobian input_jacobian(const Circuit &circuit, std::span<const PauliString> paulis,
                        std::span<const double> inputs, std::span<const double> params,
                        const EvalMode &mode) {
    Jacobian jac(paulis.size(), circuit.input_dim());
    const auto base = resolve(circuit, inputs, params);
    const auto slots = data_slots(circuit);
    // Validate the domain up front so a boundary input fails before any work.
    for (const auto &slot : slots) {
        const auto &b = std::get<DataBinding>(circuit.slot(slot));
        (void)data_map_derivative(b.map, inputs[b.input]);
    }
    if (paulis.empty()) {
        return jac;
    }
    for (const auto &slot : slots) {
        const auto &b = std::get<DataBinding>(circuit.slot(slot));
        const double chain = data_map_derivative(b.map, inputs[b.input]);
        const auto d = shifted_derivatives(circuit.n_qubits(), base, paulis, slot, mode);
        for (std::size_t i = 0; i < paulis.size(); ++i) {
            jac.at(i, b.input) += d[i] * chain;
        }
    }
    return jac;
}

std::vector<double> param_gradient(const Circuit &circuit, const PauliString &pauli,
                                   std::span<const double> inputs, std::span<const double> params,
                                   const EvalMode &mode) {
    return jacobian(circuit, std::span(&pauli, 1), inputs, params, mode).entries;
}

std::vector<double> input_gradient(const Circuit &circuit, const PauliString &pauli,
                                   std::span<const double> inputs, std::span<const double> params,
                                   const EvalMode &mode) {
    return input_jacobian(circuit, std::span(&pauli, 1), inputs, params, mode).entries;
}

} // namespace qgen
