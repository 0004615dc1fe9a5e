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
/**
 * @file
 * Analytic derivatives of circuit expectation values.
 *
 * Each angle is differentiated by re-running the circuit with that angle
 * shifted (classical linear combination of unitaries). Gates of the form
 * exp(-i t V / 2) with V a Pauli string, and CPHASE, whose generator
 * |11><11| also has two eigenvalues one apart, use
 *
 *     d<P>/dt = 1/2 [<P>(t + pi/2) - <P>(t - pi/2)].
 *
 * The angles of CR3 are controlled rotations with generator eigenvalues
 * {0, +-1/2}; they need the four-term rule
 *
 *     d<P>/dt = c+ [<P>(t + pi/2) - <P>(t - pi/2)] - c- [<P>(t + 3pi/2) - <P>(t - 3pi/2)],
 *     c+- = (sqrt 2 +- 1) / (4 sqrt 2).
 */
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qgen/circuits.hpp"

namespace qgen {

struct ShiftTerm {
    double shift;
    double coefficient;
};

/// Shift/coefficient pairs whose weighted sum of shifted expectations is the
/// exact derivative with respect to one angle of `kind`. Throws
/// UnsupportedGateError for kinds without angles.
[[nodiscard]] std::vector<ShiftTerm> shift_rule(GateKind kind);

/// The two resolved programs of the basic +-shift for one slot.
struct ShiftPair {
    SlotRef slot;
    std::vector<Gate> plus;
    std::vector<Gate> minus;
};

[[nodiscard]] ShiftPair make_shift_pair(const Circuit &circuit, std::span<const double> inputs,
                                        std::span<const double> params, SlotRef slot,
                                        double shift);

/// Row-major M x K matrix; row i belongs to observable i.
struct Jacobian {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> entries;

    Jacobian() = default;
    Jacobian(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c, 0.0) {}
    [[nodiscard]] double &at(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
    [[nodiscard]] double at(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }
};

/// Slots of `circuit` bound to trainable parameters / data inputs, in op order.
[[nodiscard]] std::vector<SlotRef> trainable_slots(const Circuit &circuit);
[[nodiscard]] std::vector<SlotRef> data_slots(const Circuit &circuit);

/// Derivatives of every observable with respect to the resolved angle of `slot`.
[[nodiscard]] std::vector<double> slot_derivatives(const Circuit &circuit,
                                                   std::span<const PauliString> paulis,
                                                   std::span<const double> inputs,
                                                   std::span<const double> params, SlotRef slot,
                                                   const EvalMode &mode = ExactMode{});

[[nodiscard]] double param_shift_derivative(const Circuit &circuit, const PauliString &pauli,
                                            std::span<const double> inputs,
                                            std::span<const double> params, SlotRef slot,
                                            const EvalMode &mode = ExactMode{});

/// d<P>/d(theta_k) for every trainable parameter; repeated parameters accumulate.
[[nodiscard]] std::vector<double> param_gradient(const Circuit &circuit, const PauliString &pauli,
                                                 std::span<const double> inputs,
                                                 std::span<const double> params,
                                                 const EvalMode &mode = ExactMode{});

/// d<P>/d(x_k): slot derivative times the derivative of the slot's data map.
/// Throws DomainError when a differentiated input is within 1e-9 of +-1.
[[nodiscard]] std::vector<double> input_gradient(const Circuit &circuit, const PauliString &pauli,
                                                 std::span<const double> inputs,
                                                 std::span<const double> params,
                                                 const EvalMode &mode = ExactMode{});

/// M x n_trainable matrix of parameter derivatives.
[[nodiscard]] Jacobian jacobian(const Circuit &circuit, std::span<const PauliString> paulis,
                                std::span<const double> inputs, std::span<const double> params,
                                const EvalMode &mode = ExactMode{});

/// M x input_dim matrix of input derivatives.
[[nodiscard]] Jacobian input_jacobian(const Circuit &circuit, std::span<const PauliString> paulis,
                                      std::span<const double> inputs,
                                      std::span<const double> params,
                                      const EvalMode &mode = ExactMode{});

} // namespace qgen
