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

#include "qgen/errors.hpp"
#include "qgen/gradients.hpp"
#include "random_circuits.hpp"

using namespace qgen;
using Catch::Matchers::WithinAbs;
using testing_support::central_difference;

namespace {

constexpr double kPi = std::numbers::pi;

Circuit single_ry() {
    Circuit c(1, 0, 1);
    c.append({GateKind::RY, {0}, {TrainableBinding{0}}});
    return c;
}

Circuit arcsin_encoder() {
    Circuit c(1, 1, 0);
    c.append({GateKind::RY, {0}, {DataBinding{0, DataMap::Arcsin}}});
    return c;
}

double expect(const Circuit &c, const PauliString &p, std::span<const double> x,
              std::span<const double> t) {
    return expectation(run(c, x, t), p);
}

} // namespace

TEST_CASE("shift rule on RY", "[gradients]") {
    const auto c = single_ry();
    const auto z = PauliString::z(0);
    CHECK_THAT(param_shift_derivative(c, z, {}, std::vector<double>{kPi / 2}, {0, 0}),
               WithinAbs(-1.0, 1e-14));
    CHECK_THAT(param_shift_derivative(c, z, {}, std::vector<double>{0.0}, {0, 0}),
               WithinAbs(0.0, 1e-14));
    CHECK_THROWS_AS(shift_rule(GateKind::H), UnsupportedGateError);
    CHECK_THROWS_AS(shift_rule(GateKind::CNOT), UnsupportedGateError);
}

TEST_CASE("shift pair differs only in the shifted slot", "[gradients]") {
    const auto g = compose(product_encoder(1, 2), generator_ansatz_2q());
    const std::vector<double> z{0.3}, t{2.3, 2.3, 1.0};
    const auto pair = make_shift_pair(g, z, t, {6, 0}, kPi / 2);
    const auto base = resolve(g, z, t);
    for (std::size_t i = 0; i < base.size(); ++i) {
        if (i == 6) {
            CHECK_THAT(pair.plus[i].params[0] - base[i].params[0], WithinAbs(kPi / 2, 1e-15));
            CHECK_THAT(base[i].params[0] - pair.minus[i].params[0], WithinAbs(kPi / 2, 1e-15));
        } else {
            CHECK(pair.plus[i].params == base[i].params);
            CHECK(pair.minus[i].params == base[i].params);
        }
    }
}

TEST_CASE("generator gradients", "[gradients]") {
    const auto g = compose(product_encoder(1, 2), generator_ansatz_2q());
    const auto z0 = PauliString::z(0);
    const std::vector<double> z{0.3}, t{2.3, 2.3, 1.0};
    const auto grad = param_gradient(g, z0, z, t);
    REQUIRE(grad.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        const double fd = central_difference(
            [&](const std::vector<double> &tt) { return expect(g, z0, z, tt); }, t, k, 1e-5);
        CHECK_THAT(grad[k], WithinAbs(fd, 1e-6));
    }
    const auto zero = param_gradient(g, z0, std::vector<double>{0.0}, std::vector<double>{0, 0, 0});
    for (double v : zero) {
        CHECK_THAT(v, WithinAbs(0.0, 1e-14));
    }
    CHECK(param_gradient(product_encoder(1, 1), z0, std::vector<double>{0.2}, {}).empty());

    const std::vector<PauliString> one{z0};
    const auto j = jacobian(g, one, z, t);
    CHECK(j.rows == 1);
    CHECK(j.cols == 3);
    CHECK(j.entries == grad);
    const auto empty = jacobian(g, std::vector<PauliString>{}, z, t);
    CHECK(empty.rows == 0);
    CHECK(empty.cols == 3);
}

TEST_CASE("input gradients", "[gradients]") {
    const auto c = arcsin_encoder();
    const auto z = PauliString::z(0);
    CHECK_THAT(input_gradient(c, z, std::vector<double>{0.0}, {})[0], WithinAbs(0.0, 1e-14));
    CHECK_THAT(input_gradient(c, z, std::vector<double>{0.5}, {})[0],
               WithinAbs(-0.5 / std::sqrt(0.75), 1e-12));
    CHECK_THROWS_AS(input_gradient(c, z, std::vector<double>{1.0}, {}), DomainError);
    CHECK_THROWS_AS(input_gradient(c, z, std::vector<double>{-1.0}, {}), DomainError);

    // Three-copy discriminator encoder followed by a random CPHASE block.
    const auto d = compose(product_encoder(1, 3), b_block(3, 1, EntanglerKind::CPhase, true));
    Rng rng(5);
    std::vector<double> theta(d.n_trainable());
    for (auto &v : theta) {
        v = uniform(rng, -kPi, kPi);
    }
    for (double x : {-0.8, -0.3, 0.1, 0.65}) {
        const std::vector<double> xv{x};
        const double fd = central_difference(
            [&](const std::vector<double> &xx) { return expect(d, z, xx, theta); }, xv, 0, 1e-5);
        CHECK_THAT(input_gradient(d, z, xv, theta)[0], WithinAbs(fd, 1e-5));
    }
}

TEST_CASE("shift rules match finite differences on random circuits", "[gradients][property]") {
    Rng rng(31337);
    for (int trial = 0; trial < 100; ++trial) {
        const auto rc = testing_support::random_circuit(rng);
        const auto p = testing_support::random_pauli(rng, rc.circuit.n_qubits());
        const auto f = [&](const std::vector<double> &t) { return expect(rc.circuit, p, rc.inputs, t); };
        const auto grad = param_gradient(rc.circuit, p, rc.inputs, rc.params);
        for (std::size_t k = 0; k < rc.params.size(); ++k) {
            CHECK_THAT(grad[k], WithinAbs(central_difference(f, rc.params, k, 1e-5), 1e-6));
        }
        const auto g = [&](const std::vector<double> &x) { return expect(rc.circuit, p, x, rc.params); };
        const auto igrad = input_gradient(rc.circuit, p, rc.inputs, rc.params);
        for (std::size_t k = 0; k < rc.inputs.size(); ++k) {
            CHECK_THAT(igrad[k], WithinAbs(central_difference(g, rc.inputs, k, 1e-5), 1e-5));
        }
    }
}

TEST_CASE("CR3 angles need the four-term rule", "[gradients]") {
    Circuit c(2, 0, 3);
    c.append({GateKind::H, {0}, {}});
    c.append({GateKind::RY, {1}, {FixedBinding{0.4}}});
    c.append({GateKind::CR3, {0, 1}, {TrainableBinding{0}, TrainableBinding{1}, TrainableBinding{2}}});
    const std::vector<double> t{0.3, 1.1, -0.7};
    const auto p = PauliString::parse("X0 X1");
    const auto f = [&](const std::vector<double> &tt) { return expect(c, p, {}, tt); };
    const auto grad = param_gradient(c, p, {}, t);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK_THAT(grad[k], WithinAbs(central_difference(f, t, k, 1e-5), 1e-8));
    }
    CHECK(shift_rule(GateKind::CR3).size() == 4);
    CHECK(shift_rule(GateKind::CPhase).size() == 2);
}

TEST_CASE("linearity across observables", "[gradients]") {
    Rng rng(8);
    const auto rc = testing_support::random_circuit(rng, 3, 6, 10, false);
    const auto p1 = testing_support::random_pauli(rng, rc.circuit.n_qubits());
    const auto p2 = testing_support::random_pauli(rng, rc.circuit.n_qubits());
    const double a = 0.7, b = -1.3;
    const auto g1 = param_gradient(rc.circuit, p1, {}, rc.params);
    const auto g2 = param_gradient(rc.circuit, p2, {}, rc.params);
    const std::vector<PauliString> both{p1, p2};
    const auto j = jacobian(rc.circuit, both, {}, rc.params);
    for (std::size_t k = 0; k < g1.size(); ++k) {
        CHECK_THAT(a * j.at(0, k) + b * j.at(1, k), WithinAbs(a * g1[k] + b * g2[k], 1e-10));
    }
}

TEST_CASE("shot-estimated derivatives are unbiased", "[gradients]") {
    const auto g = compose(product_encoder(1, 2), generator_ansatz_2q());
    const std::vector<double> z{0.3}, t{2.3, 2.3, 1.0};
    const auto z0 = PauliString::z(0);
    const double exact = param_shift_derivative(g, z0, z, t, {6, 0});
    std::vector<double> est;
    for (std::uint64_t s = 0; s < 200; ++s) {
        est.push_back(param_shift_derivative(g, z0, z, t, {6, 0}, ShotMode{2000, 1000 + s}));
    }
    double mean = 0, var = 0;
    for (double v : est) {
        mean += v;
    }
    mean /= 200;
    for (double v : est) {
        var += (v - mean) * (v - mean);
    }
    const double se = std::sqrt(var / 199) / std::sqrt(200.0);
    CHECK(std::abs(mean - exact) < 4 * se);
}
