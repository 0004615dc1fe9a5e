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
 * Parameterized circuit representation plus the encoder and ansatz builders.
 *
 * Every angle of every operation is a ParamSlot: bound to a component of the
 * classical input (through a nonlinear map), to a trainable parameter, or to
 * a fixed value. The data/trainable split is what lets the gradient code
 * differentiate with respect to either.
 */
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qgen/simulator.hpp"

namespace qgen {

/// Nonlinear maps from an input component to a gate angle.
enum class DataMap {
    Arcsin,       ///< g(x) = asin(x)
    ArccosSquare, ///< f(x) = acos(x^2)
    Identity,     ///< angle = x
};

/// Inputs may overshoot [-1, 1] by this much (shot noise) and are clamped.
inline constexpr double kInputClampSlack = 1e-6;
/// Derivatives of asin / acos(x^2) are rejected this close to |x| = 1.
inline constexpr double kInputDerivativeMargin = 1e-9;

[[nodiscard]] double apply_data_map(DataMap map, double x);
[[nodiscard]] double data_map_derivative(DataMap map, double x);
[[nodiscard]] std::string_view to_string(DataMap map) noexcept;

struct DataBinding {
    std::size_t input;
    DataMap map;
    friend bool operator==(const DataBinding &, const DataBinding &) = default;
};
struct TrainableBinding {
    std::size_t param;
    friend bool operator==(const TrainableBinding &, const TrainableBinding &) = default;
};
struct FixedBinding {
    double value;
    friend bool operator==(const FixedBinding &, const FixedBinding &) = default;
};

using ParamSlot = std::variant<DataBinding, TrainableBinding, FixedBinding>;

struct Operation {
    GateKind kind;
    std::vector<std::size_t> qubits;
    std::vector<ParamSlot> slots;
    friend bool operator==(const Operation &, const Operation &) = default;
};

/// Addresses one angle of one operation.
struct SlotRef {
    std::size_t op;
    std::size_t angle;
    friend bool operator==(const SlotRef &, const SlotRef &) = default;
};

class Circuit {
  public:
    explicit Circuit(std::size_t n_qubits, std::size_t input_dim = 0, std::size_t n_trainable = 0);

    /// Appends an operation after checking its arity and slot indices.
    void append(Operation op);

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t input_dim() const noexcept { return input_dim_; }
    [[nodiscard]] std::size_t n_trainable() const noexcept { return n_trainable_; }
    [[nodiscard]] const std::vector<Operation> &ops() const noexcept { return ops_; }
    [[nodiscard]] const ParamSlot &slot(SlotRef ref) const;

    /// Structured text form, one operation per line:
    ///
    ///     circuit qubits=2 inputs=1 params=3
    ///     RY 0 : x0/arcsin
    ///     RZ 0 : x0/arccos_sq
    ///     XXROT 0 1 : t2
    ///     R3 1 : t3 0.5 x0/id
    ///     CNOT 0 1
    ///
    /// `xK/map` binds input K through map, `tK` trainable parameter K, and a
    /// bare number a fixed angle.
    [[nodiscard]] std::string to_text() const;
    static Circuit parse(std::string_view text);

    friend bool operator==(const Circuit &, const Circuit &) = default;

  private:
    std::size_t n_qubits_;
    std::size_t input_dim_;
    std::size_t n_trainable_;
    std::vector<Operation> ops_;
};

/// Resolves every slot to a concrete angle.
[[nodiscard]] std::vector<Gate> resolve(const Circuit &circuit, std::span<const double> inputs,
                                        std::span<const double> params);

/// Applies gates in order to |0...0>.
[[nodiscard]] Statevector run_gates(std::size_t n_qubits, std::span<const Gate> gates);

[[nodiscard]] Statevector run(const Circuit &circuit, std::span<const double> inputs,
                              std::span<const double> params);

/// Product encoding with tensorial copies: input component k is written onto
/// qubits k*copies .. k*copies + copies - 1, each receiving RY(asin x_k)
/// followed by RZ(acos x_k^2).
[[nodiscard]] Circuit product_encoder(std::size_t input_dim, std::size_t copies_per_component);

/// RY(t0) on qubit 0, RY(t1) on qubit 1, then XXROT(t2) on (0, 1).
[[nodiscard]] Circuit generator_ansatz_2q();

enum class EntanglerKind { CR3, CPhase };

/// B(n, r) block: an R3 layer, n/gcd(n, r) two-qubit gates with
/// target (j r - r) mod n and control j r mod n for j = 1..n/gcd(n, r), and
/// optionally a final RX layer.
[[nodiscard]] Circuit b_block(std::size_t n, std::size_t r, EntanglerKind kind, bool final_x_layer);

/// Encoder ops followed by ansatz ops. Ansatz input and parameter indices are
/// shifted past the encoder's so the two index spaces stay disjoint.
[[nodiscard]] Circuit compose(const Circuit &encoder, const Circuit &ansatz);

} // namespace qgen
