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

#include <benchmark/benchmark.h>

#include <vector>

#include "qgen/circuits.hpp"
#include "qgen/gradients.hpp"
#include "qgen/models.hpp"
#include "qgen/random.hpp"
#include "qgen/simulator.hpp"

using namespace qgen;

namespace {

void BM_SingleQubitGate(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    auto psi = Statevector::zero(n);
    const Gate g{GateKind::RY, {n / 2}, {0.3}};
    for (auto _ : state) {
        psi = apply_gate(std::move(psi), g);
        benchmark::DoNotOptimize(psi);
    }
}
BENCHMARK(BM_SingleQubitGate)->DenseRange(2, 12, 2);

void BM_TwoQubitGate(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    auto psi = Statevector::zero(n);
    const Gate g{GateKind::CR3, {0, n - 1}, {0.1, 0.2, 0.3}};
    for (auto _ : state) {
        psi = apply_gate(std::move(psi), g);
        benchmark::DoNotOptimize(psi);
    }
}
BENCHMARK(BM_TwoQubitGate)->DenseRange(2, 12, 2);

void BM_DiscriminatorJacobian(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Circuit c = compose(product_encoder(1, n), b_block(n, 1, EntanglerKind::CPhase, true));
    Rng rng(5);
    std::vector<double> theta(c.n_trainable());
    for (auto &t : theta) {
        t = uniform(rng, -3, 3);
    }
    const std::vector<double> x{0.25};
    const std::vector<PauliString> p{PauliString::z(0)};
    for (auto _ : state) {
        benchmark::DoNotOptimize(jacobian(c, p, x, theta));
    }
}
BENCHMARK(BM_DiscriminatorJacobian)->DenseRange(2, 8, 2);

void BM_GeneratorSample(benchmark::State &state) {
    const auto gen = two_qubit_generator(kGeneratorInitTheta);
    const std::vector<double> z{0.3};
    for (auto _ : state) {
        benchmark::DoNotOptimize(gen.generate(z));
    }
}
BENCHMARK(BM_GeneratorSample);

} // namespace

BENCHMARK_MAIN();
