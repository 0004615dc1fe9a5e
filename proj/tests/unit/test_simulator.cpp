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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "dense_oracle.hpp"
#include "qgen/errors.hpp"
#include "qgen/simulator.hpp"
#include "random_circuits.hpp"

using namespace qgen;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double kPi = std::numbers::pi;

Statevector ry_state(double t) { return apply_gate(zero_state(1), {GateKind::RY, {0}, {t}}); }

} // namespace

TEST_CASE("zero state and capacity", "[simulator]") {
    const auto s = zero_state(3);
    REQUIRE(s.size() == 8);
    CHECK(s[0] == Complex(1, 0));
    for (std::size_t i = 1; i < 8; ++i) {
        CHECK(s[i] == Complex(0, 0));
    }
    CHECK(zero_state(12).size() == 4096);
    CHECK_THROWS_AS(zero_state(0), CapacityError);
    CHECK_THROWS_AS(zero_state(13), CapacityError);
    CHECK_THROWS_AS(Statevector::from_amplitudes({1, 0, 0}), ArgumentError);
}

TEST_CASE("single-qubit gates on basis states", "[simulator]") {
    const auto x = apply_gate(zero_state(1), {GateKind::RX, {0}, {kPi}});
    CHECK_THAT(x[0].real(), WithinAbs(0, 1e-15));
    CHECK_THAT(x[1].imag(), WithinAbs(-1, 1e-15));

    const auto h = apply_gate(zero_state(1), {GateKind::H, {0}, {}});
    CHECK_THAT(h[0].real(), WithinAbs(1 / std::sqrt(2.0), 1e-15));
    CHECK_THAT(h[1].real(), WithinAbs(1 / std::sqrt(2.0), 1e-15));

    // RY on qubit 1 of two: amplitude moves to index 2 (qubit 0 is the low bit).
    const auto s = apply_gate(zero_state(2), {GateKind::RY, {1}, {kPi}});
    CHECK_THAT(std::abs(s[2]), WithinAbs(1, 1e-15));
    CHECK_THAT(std::abs(s[1]), WithinAbs(0, 1e-15));
}

TEST_CASE("XXROT on |00>", "[simulator]") {
    const auto s = apply_gate(zero_state(2), {GateKind::XXRot, {0, 1}, {1.0}});
    CHECK_THAT(s[0].real(), WithinAbs(std::cos(0.5), 1e-15));
    CHECK_THAT(s[3].imag(), WithinAbs(-std::sin(0.5), 1e-15));
    CHECK_THAT(std::abs(s[1]) + std::abs(s[2]), WithinAbs(0, 1e-15));
}

TEST_CASE("controlled gates respect control/target order", "[simulator]") {
    // Control qubit 0 set, target qubit 1 flips: |01> (index 1) -> |11> (index 3).
    auto s = apply_gate(zero_state(2), {GateKind::RX, {0}, {kPi}});
    s = apply_gate(s, {GateKind::CNOT, {0, 1}, {}});
    CHECK_THAT(std::abs(s[3]), WithinAbs(1, 1e-15));
    // Control unset: nothing happens.
    const auto t = apply_gate(zero_state(2), {GateKind::CNOT, {1, 0}, {}});
    CHECK(t == zero_state(2));

    auto c = apply_gate(zero_state(2), {GateKind::H, {0}, {}});
    c = apply_gate(c, {GateKind::H, {1}, {}});
    c = apply_gate(c, {GateKind::CPhase, {0, 1}, {0.7}});
    CHECK_THAT(std::arg(c[3]), WithinAbs(0.7, 1e-14));
    CHECK_THAT(std::arg(c[1]), WithinAbs(0, 1e-14));
}

TEST_CASE("gate validation", "[simulator]") {
    auto s = zero_state(2);
    CHECK_THROWS_AS(apply_gate(s, {GateKind::RY, {2}, {0.1}}), IndexError);
    CHECK_THROWS_AS(apply_gate(s, {GateKind::RY, {0}, {}}), ArgumentError);
    CHECK_THROWS_AS(apply_gate(s, {GateKind::CNOT, {0}, {}}), ArgumentError);
    CHECK_THROWS_AS(apply_gate(s, {GateKind::CNOT, {1, 1}, {}}), IndexError);
    CHECK_THROWS_AS(apply_gate(s, {GateKind::R3, {0}, {0.1, 0.2}}), ArgumentError);
}

TEST_CASE("gate names round-trip", "[simulator]") {
    for (auto k : {GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::H, GateKind::R3,
                   GateKind::CPhase, GateKind::CNOT, GateKind::CR3, GateKind::XXRot}) {
        CHECK(parse_gate_kind(to_string(k)) == k);
    }
    CHECK_FALSE(parse_gate_kind("SWAP").has_value());
}

TEST_CASE("Pauli strings", "[simulator]") {
    const auto p = PauliString::parse("X1 Z0");
    CHECK(p.to_string() == "Z0 X1");
    CHECK(p.min_qubits() == 2);
    CHECK(PauliString::parse("I").is_identity());
    CHECK_THROWS_AS(PauliString::parse("Z0 X0"), ArgumentError);
    CHECK_THROWS_AS(PauliString::parse("Q3"), ArgumentError);
    CHECK_THROWS_AS(expectation(zero_state(1), PauliString::z(1)), IndexError);
}

TEST_CASE("expectation values", "[simulator]") {
    CHECK(expectation(zero_state(1), PauliString::z(0)) == 1.0);
    CHECK_THAT(expectation(ry_state(kPi / 2), PauliString::z(0)), WithinAbs(0, 1e-12));
    CHECK_THAT(expectation(ry_state(0.4), PauliString::x(0)), WithinAbs(std::sin(0.4), 1e-14));

    // Reference data-source circuit at trivial encoding, checked on both qubits.
    std::vector<Gate> gates{{GateKind::RY, {0}, {2.48}},
                            {GateKind::RY, {1}, {2.52}},
                            {GateKind::XXRot, {0, 1}, {2.0}}};
    auto s = zero_state(2);
    for (const auto &g : gates) {
        apply_gate_inplace(s, g);
    }
    const auto psi = oracle::run(2, gates);
    for (auto p : {PauliString::x(0), PauliString::x(1), PauliString::parse("Z0 Y1")}) {
        CHECK_THAT(expectation(s, p), WithinAbs(oracle::expectation(psi, 2, p), 1e-12));
    }
}

TEST_CASE("random circuits match the dense oracle", "[simulator][property]") {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        auto rc = testing_support::random_circuit(rng, 4, 12, 20);
        const auto gates = resolve(rc.circuit, rc.inputs, rc.params);
        const auto n = rc.circuit.n_qubits();
        const auto s = run_gates(n, gates);
        const auto psi = oracle::run(n, gates);
        CHECK_THAT(s.norm_squared(), WithinAbs(1.0, 1e-12));
        double worst = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            worst = std::max(worst, std::abs(s[i] - psi(static_cast<Eigen::Index>(i))));
        }
        CHECK(worst < 1e-10);
        const auto p = testing_support::random_pauli(rng, n);
        const double e = expectation(s, p);
        CHECK(std::abs(e) <= 1 + 1e-12);
        CHECK_THAT(e, WithinAbs(oracle::expectation(psi, n, p), 1e-10));
    }
}

TEST_CASE("shot sampling", "[simulator]") {
    Rng rng(1);
    CHECK(sample_expectation(zero_state(1), PauliString::z(0), 17, rng) == 1.0);
    CHECK_THROWS_AS(sample_expectation(zero_state(1), PauliString::z(0), 0, rng), ArgumentError);

    Rng a(99), b(99);
    const auto s = ry_state(kPi / 3);
    const double v1 = sample_expectation(s, PauliString::z(0), 10000, a);
    const double v2 = sample_expectation(s, PauliString::z(0), 10000, b);
    CHECK(v1 == v2);
    CHECK_THAT(v1, WithinAbs(0.5, 3 * 0.0087));

    // Unbiasedness over 200 repetitions.
    const double exact = std::cos(kPi / 3);
    const double sigma = std::sqrt(1 - exact * exact) / 100.0;
    double mean = 0;
    for (int k = 0; k < 200; ++k) {
        Rng r = make_stream(5, "shots", static_cast<std::uint64_t>(k));
        mean += sample_expectation(s, PauliString::z(0), 10000, r);
    }
    mean /= 200;
    CHECK(std::abs(mean - exact) < 4 * sigma / std::sqrt(200.0));
}

TEST_CASE("measure honours the evaluation mode", "[simulator]") {
    const auto s = ry_state(1.1);
    const std::vector<PauliString> ps{PauliString::z(0), PauliString::x(0)};
    const auto exact = measure(s, ps, ExactMode{});
    CHECK_THAT(exact[0], WithinAbs(std::cos(1.1), 1e-14));
    const auto shot1 = measure(s, ps, ShotMode{1000, 3});
    const auto shot2 = measure(s, ps, ShotMode{1000, 3});
    CHECK(shot1 == shot2);
    CHECK(shot1 != exact);
}
