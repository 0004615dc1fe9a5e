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
 * Dense statevector simulator: gate application, Pauli-string expectation
 * values and finite-shot estimation.
 *
 * Bit order: qubit q corresponds to bit q of the amplitude index, so qubit 0
 * is the least significant bit.
 */
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qgen/random.hpp"

namespace qgen {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxQubits = 12;

class Statevector {
  public:
    /// |0...0> on n_qubits; throws CapacityError outside [1, kMaxQubits].
    static Statevector zero(std::size_t n_qubits);

    /// Adopts an explicit amplitude vector (length must be a power of two).
    static Statevector from_amplitudes(std::vector<Complex> amplitudes);

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t size() const noexcept { return amplitudes_.size(); }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
    [[nodiscard]] std::span<Complex> amplitudes() noexcept { return amplitudes_; }
    [[nodiscard]] const Complex &operator[](std::size_t i) const { return amplitudes_[i]; }
    [[nodiscard]] double norm_squared() const noexcept;

    friend bool operator==(const Statevector &, const Statevector &) = default;

  private:
    Statevector(std::size_t n_qubits, std::vector<Complex> amplitudes)
        : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {}

    std::size_t n_qubits_;
    std::vector<Complex> amplitudes_;
};

[[nodiscard]] inline Statevector zero_state(std::size_t n_qubits) {
    return Statevector::zero(n_qubits);
}

/// Rotations follow R_V(t) = exp(-i t V / 2). R3(a, b, c) = RZ(c) RY(b) RZ(a).
/// Two-qubit gates take their qubits as {control, target}; CPHASE applies
/// diag(1, 1, 1, e^{i t}) and XXROT is exp(-i t X(x)X / 2).
enum class GateKind { RX, RY, RZ, H, R3, CPhase, CNOT, CR3, XXRot };

[[nodiscard]] std::size_t gate_qubit_count(GateKind kind) noexcept;
[[nodiscard]] std::size_t gate_param_count(GateKind kind) noexcept;
[[nodiscard]] std::string_view to_string(GateKind kind) noexcept;
[[nodiscard]] std::optional<GateKind> parse_gate_kind(std::string_view name) noexcept;

struct Gate {
    GateKind kind;
    std::vector<std::size_t> qubits;
    std::vector<double> params;
};

using Matrix2 = std::array<Complex, 4>; // row-major

/// 2x2 unitary for the single-qubit kinds (RX, RY, RZ, H, R3). For CR3 this
/// is the matrix applied to the target when the control is set.
[[nodiscard]] Matrix2 single_qubit_matrix(GateKind kind, std::span<const double> params);

void apply_gate_inplace(Statevector &state, const Gate &gate);
[[nodiscard]] Statevector apply_gate(Statevector state, const Gate &gate);

enum class PauliAxis { X, Y, Z };

struct PauliFactor {
    std::size_t qubit;
    PauliAxis axis;
    friend bool operator==(const PauliFactor &, const PauliFactor &) = default;
};

/// Tensor product of single-qubit Paulis; identity on unlisted qubits.
class PauliString {
  public:
    PauliString() = default;
    explicit PauliString(std::vector<PauliFactor> factors);

    static PauliString x(std::size_t q) { return PauliString({{q, PauliAxis::X}}); }
    static PauliString y(std::size_t q) { return PauliString({{q, PauliAxis::Y}}); }
    static PauliString z(std::size_t q) { return PauliString({{q, PauliAxis::Z}}); }

    /// Parses whitespace-separated factors such as "Z0 X1"; "I" is the identity.
    static PauliString parse(std::string_view text);
    [[nodiscard]] std::string to_string() const;

    [[nodiscard]] const std::vector<PauliFactor> &factors() const noexcept { return factors_; }
    [[nodiscard]] bool is_identity() const noexcept { return factors_.empty(); }
    /// Number of qubits needed to evaluate this string (max index + 1).
    [[nodiscard]] std::size_t min_qubits() const noexcept;

    friend bool operator==(const PauliString &, const PauliString &) = default;

  private:
    std::vector<PauliFactor> factors_;
};

/// <psi|P|psi>; the imaginary residue is discarded.
[[nodiscard]] double expectation(const Statevector &state, const PauliString &pauli);

/// Draws `shots` +-1 outcomes from the Born distribution of a +-1 observable
/// with the given exact expectation and returns their mean.
[[nodiscard]] double sample_from_expectation(double exact, std::uint64_t shots, Rng &rng);

[[nodiscard]] double sample_expectation(const Statevector &state, const PauliString &pauli,
                                        std::uint64_t shots, Rng &rng);

/// Expectation values computed to working precision.
struct ExactMode {
    friend bool operator==(const ExactMode &, const ExactMode &) = default;
};

/// Finite-shot estimation; every evaluation restarts the stream from `seed`.
struct ShotMode {
    std::uint64_t shots;
    std::uint64_t seed;
    friend bool operator==(const ShotMode &, const ShotMode &) = default;
};

using EvalMode = std::variant<ExactMode, ShotMode>;

/// Measures each observable independently under `mode`.
[[nodiscard]] std::vector<double> measure(const Statevector &state,
                                          std::span<const PauliString> paulis,
                                          const EvalMode &mode);

} // namespace qgen
