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

#include "qgen/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "qgen/errors.hpp"

namespace qgen {

namespace {

constexpr Complex kI{0.0, 1.0};

Matrix2 multiply(const Matrix2 &a, const Matrix2 &b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Matrix2 rx(double t) {
    const double c = std::cos(t / 2), s = std::sin(t / 2);
    return {c, -kI * s, -kI * s, c};
}

Matrix2 ry(double t) {
    const double c = std::cos(t / 2), s = std::sin(t / 2);
    return {c, -s, s, c};
}

Matrix2 rz(double t) {
    return {std::polar(1.0, -t / 2), 0.0, 0.0, std::polar(1.0, t / 2)};
}

void check_qubit(const Statevector &state, std::size_t q) {
    if (q >= state.n_qubits()) {
        throw IndexError("qubit index " + std::to_string(q) + " out of range for " +
                         std::to_string(state.n_qubits()) + "-qubit state");
    }
}

// Applies m to `target` on the subspace where every bit in control_mask is set.
void apply_matrix2(std::span<Complex> amps, std::size_t target, std::size_t control_mask,
                   const Matrix2 &m) {
    const std::size_t tmask = std::size_t{1} << target;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & tmask) != 0 || (i & control_mask) != control_mask) {
            continue;
        }
        const std::size_t j = i | tmask;
        const Complex a0 = amps[i], a1 = amps[j];
        amps[i] = m[0] * a0 + m[1] * a1;
        amps[j] = m[2] * a0 + m[3] * a1;
    }
}

} // namespace

Statevector Statevector::zero(std::size_t n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw CapacityError("register size " + std::to_string(n_qubits) +
                            " outside supported range [1, " + std::to_string(kMaxQubits) + "]");
    }
    std::vector<Complex> amps(std::size_t{1} << n_qubits);
    amps[0] = 1.0;
    return {n_qubits, std::move(amps)};
}

Statevector Statevector::from_amplitudes(std::vector<Complex> amplitudes) {
    const std::size_t len = amplitudes.size();
    if (len < 2 || !std::has_single_bit(len)) {
        throw ArgumentError("amplitude vector length must be a power of two >= 2");
    }
    const auto n = static_cast<std::size_t>(std::countr_zero(len));
    if (n > kMaxQubits) {
        throw CapacityError("register size " + std::to_string(n) + " exceeds cap");
    }
    return {n, std::move(amplitudes)};
}

double Statevector::norm_squared() const noexcept {
    double acc = 0.0;
    for (const auto &a : amplitudes_) {
        acc += std::norm(a);
    }
    return acc;
}

std::size_t gate_qubit_count(GateKind kind) noexcept {
    switch (kind) {
    case GateKind::CPhase:
    case GateKind::CNOT:
    case GateKind::CR3:
    case GateKind::XXRot:
        return 2;
    default:
        return 1;
    }
}

std::size_t gate_param_count(GateKind kind) noexcept {
    switch (kind) {
    case GateKind::H:
    case GateKind::CNOT:
        return 0;
    case GateKind::R3:
    case GateKind::CR3:
        return 3;
    default:
        return 1;
    }
}

std::string_view to_string(GateKind kind) noexcept {
    switch (kind) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::H: return "H";
    case GateKind::R3: return "R3";
    case GateKind::CPhase: return "CPHASE";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CR3: return "CR3";
    case GateKind::XXRot: return "XXROT";
    }
    return "?";
}

std::optional<GateKind> parse_gate_kind(std::string_view name) noexcept {
    for (auto k : {GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::H, GateKind::R3,
                   GateKind::CPhase, GateKind::CNOT, GateKind::CR3, GateKind::XXRot}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

Matrix2 single_qubit_matrix(GateKind kind, std::span<const double> params) {
    if (params.size() != gate_param_count(kind)) {
        throw ArgumentError(std::string(to_string(kind)) + " expects " +
                            std::to_string(gate_param_count(kind)) + " parameter(s)");
    }
    switch (kind) {
    case GateKind::RX: return rx(params[0]);
    case GateKind::RY: return ry(params[0]);
    case GateKind::RZ: return rz(params[0]);
    case GateKind::H: {
        const double r = 1.0 / std::sqrt(2.0);
        return {r, r, r, -r};
    }
    case GateKind::R3:
    case GateKind::CR3:
        return multiply(rz(params[2]), multiply(ry(params[1]), rz(params[0])));
    default:
        throw ArgumentError(std::string(to_string(kind)) + " is not a single-qubit gate");
    }
}

void apply_gate_inplace(Statevector &state, const Gate &gate) {
    if (gate.qubits.size() != gate_qubit_count(gate.kind)) {
        throw ArgumentError(std::string(to_string(gate.kind)) + " expects " +
                            std::to_string(gate_qubit_count(gate.kind)) + " qubit(s)");
    }
    if (gate.params.size() != gate_param_count(gate.kind)) {
        throw ArgumentError(std::string(to_string(gate.kind)) + " expects " +
                            std::to_string(gate_param_count(gate.kind)) + " parameter(s)");
    }
    for (auto q : gate.qubits) {
        check_qubit(state, q);
    }
    if (gate.qubits.size() == 2 && gate.qubits[0] == gate.qubits[1]) {
        throw IndexError("two-qubit gate acting twice on qubit " + std::to_string(gate.qubits[0]));
    }

    auto amps = state.amplitudes();
    switch (gate.kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::H:
    case GateKind::R3:
        apply_matrix2(amps, gate.qubits[0], 0, single_qubit_matrix(gate.kind, gate.params));
        break;
    case GateKind::CNOT:
        apply_matrix2(amps, gate.qubits[1], std::size_t{1} << gate.qubits[0],
                      Matrix2{0.0, 1.0, 1.0, 0.0});
        break;
    case GateKind::CR3:
        apply_matrix2(amps, gate.qubits[1], std::size_t{1} << gate.qubits[0],
                      single_qubit_matrix(gate.kind, gate.params));
        break;
    case GateKind::CPhase: {
        const std::size_t mask = (std::size_t{1} << gate.qubits[0]) | (std::size_t{1} << gate.qubits[1]);
        const Complex phase = std::polar(1.0, gate.params[0]);
        for (std::size_t i = 0; i < amps.size(); ++i) {
            if ((i & mask) == mask) {
                amps[i] *= phase;
            }
        }
        break;
    }
    case GateKind::XXRot: {
        const std::size_t ma = std::size_t{1} << gate.qubits[0];
        const std::size_t flip = ma | (std::size_t{1} << gate.qubits[1]);
        const double c = std::cos(gate.params[0] / 2), s = std::sin(gate.params[0] / 2);
        for (std::size_t i = 0; i < amps.size(); ++i) {
            if ((i & ma) != 0) {
                continue;
            }
            const std::size_t j = i ^ flip;
            const Complex a = amps[i], b = amps[j];
            amps[i] = c * a - kI * s * b;
            amps[j] = c * b - kI * s * a;
        }
        break;
    }
    }
}

Statevector apply_gate(Statevector state, const Gate &gate) {
    apply_gate_inplace(state, gate);
    return state;
}

PauliString::PauliString(std::vector<PauliFactor> factors) : factors_(std::move(factors)) {
    std::sort(factors_.begin(), factors_.end(),
              [](const PauliFactor &a, const PauliFactor &b) { return a.qubit < b.qubit; });
    for (std::size_t i = 1; i < factors_.size(); ++i) {
        if (factors_[i].qubit == factors_[i - 1].qubit) {
            throw ArgumentError("Pauli string lists qubit " + std::to_string(factors_[i].qubit) +
                                " more than once");
        }
    }
}

PauliString PauliString::parse(std::string_view text) {
    std::vector<PauliFactor> factors;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
        if (tok == "I") {
            continue;
        }
        PauliAxis axis{};
        switch (tok[0]) {
        case 'X': axis = PauliAxis::X; break;
        case 'Y': axis = PauliAxis::Y; break;
        case 'Z': axis = PauliAxis::Z; break;
        default: throw ArgumentError("bad Pauli factor '" + tok + "'");
        }
        const std::string digits = tok.substr(1);
        if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) {
            throw ArgumentError("bad Pauli factor '" + tok + "'");
        }
        factors.push_back({std::stoul(digits), axis});
    }
    return PauliString(std::move(factors));
}

std::string PauliString::to_string() const {
    if (factors_.empty()) {
        return "I";
    }
    std::string out;
    for (const auto &f : factors_) {
        if (!out.empty()) {
            out += ' ';
        }
        out += f.axis == PauliAxis::X ? 'X' : f.axis == PauliAxis::Y ? 'Y' : 'Z';
        out += std::to_string(f.qubit);
    }
    return out;
}

std::size_t PauliString::min_qubits() const noexcept {
    return factors_.empty() ? 0 : factors_.back().qubit + 1;
}

double expectation(const Statevector &state, const PauliString &pauli) {
    std::size_t flip = 0, sign = 0, n_y = 0;
    for (const auto &f : pauli.factors()) {
        check_qubit(state, f.qubit);
        const std::size_t bit = std::size_t{1} << f.qubit;
        if (f.axis != PauliAxis::Z) {
            flip |= bit;
        }
        if (f.axis != PauliAxis::X) {
            sign |= bit;
        }
        if (f.axis == PauliAxis::Y) {
            ++n_y;
        }
    }
    // P|i> = i^{n_y} (-1)^{popcount(i & sign)} |i ^ flip>
    const auto amps = state.amplitudes();
    Complex acc = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const Complex term = std::conj(amps[i ^ flip]) * amps[i];
        acc += (std::popcount(i & sign) % 2 == 0) ? term : -term;
    }
    static constexpr std::array<Complex, 4> kIPow{Complex{1, 0}, Complex{0, 1}, Complex{-1, 0},
                                                  Complex{0, -1}};
    acc *= kIPow[n_y % 4];
    return std::clamp(acc.real(), -1.0, 1.0);
}

double sample_from_expectation(double exact, std::uint64_t shots, Rng &rng) {
    if (shots == 0) {
        throw ArgumentError("shot count must be at least 1");
    }
    const double p_plus = std::clamp((1.0 + exact) / 2.0, 0.0, 1.0);
    std::binomial_distribution<std::uint64_t> draw(shots, p_plus);
    const auto n_plus = draw(rng);
    return (2.0 * static_cast<double>(n_plus) - static_cast<double>(shots)) /
           static_cast<double>(shots);
}

double sample_expectation(const Statevector &state, const PauliString &pauli, std::uint64_t shots,
                          Rng &rng) {
    if (shots == 0) {
        throw ArgumentError("shot count must be at least 1");
    }
    return sample_from_expectation(expectation(state, pauli), shots, rng);
}

std::vector<double> measure(const Statevector &state, std::span<const PauliString> paulis,
                            const EvalMode &mode) {
    std::vector<double> out;
    out.reserve(paulis.size());
    if (const auto *shot = std::get_if<ShotMode>(&mode)) {
        Rng rng{shot->seed};
        for (const auto &p : paulis) {
            out.push_back(sample_expectation(state, p, shot->shots, rng));
        }
    } else {
        for (const auto &p : paulis) {
            out.push_back(expectation(state, p));
        }
    }
    return out;
}

} // namespace qgen
