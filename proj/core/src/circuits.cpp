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

#include "qgen/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "qgen/errors.hpp"
#include "qgen/text.hpp"

namespace qgen {

namespace {

double clamp_input(double x) {
    if (!std::isfinite(x) || std::abs(x) > 1.0 + kInputClampSlack) {
        throw DomainError("encoder input " + format_double(x) + " outside [-1, 1]");
    }
    return std::clamp(x, -1.0, 1.0);
}

std::optional<DataMap> parse_data_map(std::string_view s) {
    for (auto m : {DataMap::Arcsin, DataMap::ArccosSquare, DataMap::Identity}) {
        if (to_string(m) == s) {
            return m;
        }
    }
    return std::nullopt;
}

std::string slot_to_text(const ParamSlot &slot) {
    return std::visit(
        [](const auto &b) -> std::string {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, DataBinding>) {
                return "x" + std::to_string(b.input) + "/" + std::string(to_string(b.map));
            } else if constexpr (std::is_same_v<T, TrainableBinding>) {
                return "t" + std::to_string(b.param);
            } else {
                return format_double(b.value);
            }
        },
        slot);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) {
            ++i;
        }
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') {
            ++j;
        }
        if (j > i) {
            out.push_back(s.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

} // namespace

std::string_view to_string(DataMap map) noexcept {
    switch (map) {
    case DataMap::Arcsin: return "arcsin";
    case DataMap::ArccosSquare: return "arccos_sq";
    case DataMap::Identity: return "id";
    }
    return "?";
}

double apply_data_map(DataMap map, double x) {
    switch (map) {
    case DataMap::Arcsin: return std::asin(clamp_input(x));
    case DataMap::ArccosSquare: {
        const double c = clamp_input(x);
        return std::acos(c * c);
    }
    case DataMap::Identity: return x;
    }
    return x;
}

double data_map_derivative(DataMap map, double x) {
    if (map == DataMap::Identity) {
        return 1.0;
    }
    if (!std::isfinite(x) || std::abs(x) >= 1.0 - kInputDerivativeMargin) {
        throw DomainError("encoder derivative undefined at input " + format_double(x) +
                          " (|x| must be < 1)");
    }
    if (map == DataMap::Arcsin) {
        return 1.0 / std::sqrt(1.0 - x * x);
    }
    return -2.0 * x / std::sqrt(1.0 - x * x * x * x);
}

Circuit::Circuit(std::size_t n_qubits, std::size_t input_dim, std::size_t n_trainable)
    : n_qubits_(n_qubits), input_dim_(input_dim), n_trainable_(n_trainable) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw CapacityError("circuit register size " + std::to_string(n_qubits) +
                            " outside [1, " + std::to_string(kMaxQubits) + "]");
    }
}

void Circuit::append(Operation op) {
    const auto name = std::string(to_string(op.kind));
    if (op.qubits.size() != gate_qubit_count(op.kind)) {
        throw ArgumentError(name + " expects " + std::to_string(gate_qubit_count(op.kind)) +
                            " qubit(s)");
    }
    if (op.slots.size() != gate_param_count(op.kind)) {
        throw ArgumentError(name + " expects " + std::to_string(gate_param_count(op.kind)) +
                            " angle slot(s)");
    }
    for (auto q : op.qubits) {
        if (q >= n_qubits_) {
            throw IndexError(name + " acts on qubit " + std::to_string(q) + " of a " +
                             std::to_string(n_qubits_) + "-qubit circuit");
        }
    }
    if (op.qubits.size() == 2 && op.qubits[0] == op.qubits[1]) {
        throw IndexError(name + " acts twice on qubit " + std::to_string(op.qubits[0]));
    }
    for (const auto &slot : op.slots) {
        if (const auto *d = std::get_if<DataBinding>(&slot); d && d->input >= input_dim_) {
            throw IndexError("data slot references input " + std::to_string(d->input) +
                             " but input_dim is " + std::to_string(input_dim_));
        }
        if (const auto *t = std::get_if<TrainableBinding>(&slot); t && t->param >= n_trainable_) {
            throw IndexError("trainable slot references parameter " + std::to_string(t->param) +
                             " but n_trainable is " + std::to_string(n_trainable_));
        }
    }
    ops_.push_back(std::move(op));
}

const ParamSlot &Circuit::slot(SlotRef ref) const {
    if (ref.op >= ops_.size() || ref.angle >= ops_[ref.op].slots.size()) {
        throw IndexError("slot reference (" + std::to_string(ref.op) + ", " +
                         std::to_string(ref.angle) + ") out of range");
    }
    return ops_[ref.op].slots[ref.angle];
}

std::string Circuit::to_text() const {
    std::string out = "circuit qubits=" + std::to_string(n_qubits_) +
                      " inputs=" + std::to_string(input_dim_) +
                      " params=" + std::to_string(n_trainable_) + "\n";
    for (const auto &op : ops_) {
        out += to_string(op.kind);
        for (auto q : op.qubits) {
            out += ' ' + std::to_string(q);
        }
        if (!op.slots.empty()) {
            out += " :";
            for (const auto &s : op.slots) {
                out += ' ' + slot_to_text(s);
            }
        }
        out += '\n';
    }
    return out;
}

Circuit Circuit::parse(std::string_view text) {
    std::size_t offset = 0;
    std::optional<Circuit> circuit;
    while (offset < text.size()) {
        auto nl = text.find('\n', offset);
        if (nl == std::string_view::npos) {
            nl = text.size();
        }
        const auto line = trim(text.substr(offset, nl - offset));
        const std::size_t line_offset = offset;
        offset = nl + 1;
        if (line.empty() || line.front() == '#') {
            continue;
        }
        auto fail = [&](const std::string &msg) -> ParseError {
            return ParseError("circuit: " + msg + " in line '" + std::string(line) + "'",
                              line_offset);
        };
        if (!circuit) {
            const auto tok = split_ws(line);
            if (tok.size() != 4 || tok[0] != "circuit") {
                throw fail("expected header 'circuit qubits=N inputs=N params=N'");
            }
            std::size_t vals[3];
            const char *keys[3] = {"qubits=", "inputs=", "params="};
            for (int k = 0; k < 3; ++k) {
                if (tok[k + 1].rfind(keys[k], 0) != 0) {
                    throw fail(std::string("expected ") + keys[k]);
                }
                auto v = parse_integer<std::size_t>(tok[k + 1].substr(std::string_view(keys[k]).size()));
                if (!v) {
                    throw fail("bad integer");
                }
                vals[k] = *v;
            }
            try {
                circuit.emplace(vals[0], vals[1], vals[2]);
            } catch (const Error &e) {
                throw fail(e.what());
            }
            continue;
        }
        const auto colon = line.find(':');
        const auto head = split_ws(line.substr(0, colon));
        const auto tail = colon == std::string_view::npos ? std::vector<std::string_view>{}
                                                          : split_ws(line.substr(colon + 1));
        if (head.empty()) {
            throw fail("missing gate name");
        }
        const auto kind = parse_gate_kind(head[0]);
        if (!kind) {
            throw fail("unknown gate '" + std::string(head[0]) + "'");
        }
        Operation op{*kind, {}, {}};
        for (std::size_t i = 1; i < head.size(); ++i) {
            auto q = parse_integer<std::size_t>(head[i]);
            if (!q) {
                throw fail("bad qubit index '" + std::string(head[i]) + "'");
            }
            op.qubits.push_back(*q);
        }
        for (auto tok : tail) {
            if (tok.front() == 'x') {
                const auto slash = tok.find('/');
                auto idx = parse_integer<std::size_t>(tok.substr(1, slash - 1));
                auto map = slash == std::string_view::npos ? std::nullopt
                                                           : parse_data_map(tok.substr(slash + 1));
                if (!idx || !map) {
                    throw fail("bad data slot '" + std::string(tok) + "'");
                }
                op.slots.emplace_back(DataBinding{*idx, *map});
            } else if (tok.front() == 't') {
                auto idx = parse_integer<std::size_t>(tok.substr(1));
                if (!idx) {
                    throw fail("bad trainable slot '" + std::string(tok) + "'");
                }
                op.slots.emplace_back(TrainableBinding{*idx});
            } else {
                auto v = parse_double(tok);
                if (!v) {
                    throw fail("bad fixed angle '" + std::string(tok) + "'");
                }
                op.slots.emplace_back(FixedBinding{*v});
            }
        }
        try {
            circuit->append(std::move(op));
        } catch (const Error &e) {
            throw fail(e.what());
        }
    }
    if (!circuit) {
        throw ParseError("circuit: missing header", text.size());
    }
    return std::move(*circuit);
}

std::vector<Gate> resolve(const Circuit &circuit, std::span<const double> inputs,
                          std::span<const double> params) {
    if (inputs.size() != circuit.input_dim()) {
        throw ArgumentError("circuit expects " + std::to_string(circuit.input_dim()) +
                            " input(s), got " + std::to_string(inputs.size()));
    }
    if (params.size() != circuit.n_trainable()) {
        throw ArgumentError("circuit expects " + std::to_string(circuit.n_trainable()) +
                            " parameter(s), got " + std::to_string(params.size()));
    }
    std::vector<Gate> gates;
    gates.reserve(circuit.ops().size());
    for (const auto &op : circuit.ops()) {
        Gate g{op.kind, op.qubits, {}};
        g.params.reserve(op.slots.size());
        for (const auto &slot : op.slots) {
            g.params.push_back(std::visit(
                [&](const auto &b) -> double {
                    using T = std::decay_t<decltype(b)>;
                    if constexpr (std::is_same_v<T, DataBinding>) {
                        return apply_data_map(b.map, inputs[b.input]);
                    } else if constexpr (std::is_same_v<T, TrainableBinding>) {
                        return params[b.param];
                    } else {
                        return b.value;
                    }
                },
                slot));
        }
        gates.push_back(std::move(g));
    }
    return gates;
}

Statevector run_gates(std::size_t n_qubits, std::span<const Gate> gates) {
    auto state = Statevector::zero(n_qubits);
    for (const auto &g : gates) {
        apply_gate_inplace(state, g);
    }
    return state;
}

Statevector run(const Circuit &circuit, std::span<const double> inputs,
                std::span<const double> params) {
    const auto gates = resolve(circuit, inputs, params);
    return run_gates(circuit.n_qubits(), gates);
}

Circuit product_encoder(std::size_t input_dim, std::size_t copies_per_component) {
    if (input_dim < 1 || copies_per_component < 1) {
        throw ArgumentError("product encoder needs input_dim >= 1 and copies >= 1");
    }
    Circuit c(input_dim * copies_per_component, input_dim, 0);
    for (std::size_t k = 0; k < input_dim; ++k) {
        for (std::size_t i = 0; i < copies_per_component; ++i) {
            const std::size_t q = k * copies_per_component + i;
            c.append({GateKind::RY, {q}, {DataBinding{k, DataMap::Arcsin}}});
            c.append({GateKind::RZ, {q}, {DataBinding{k, DataMap::ArccosSquare}}});
        }
    }
    return c;
}

Circuit generator_ansatz_2q() {
    Circuit c(2, 0, 3);
    c.append({GateKind::RY, {0}, {TrainableBinding{0}}});
    c.append({GateKind::RY, {1}, {TrainableBinding{1}}});
    c.append({GateKind::XXRot, {0, 1}, {TrainableBinding{2}}});
    return c;
}

Circuit b_block(std::size_t n, std::size_t r, EntanglerKind kind, bool final_x_layer) {
    if (n < 2) {
        throw ArgumentError("B(n, r) block needs n >= 2");
    }
    if (r < 1 || r >= n) {
        throw ArgumentError("B(n, r) block needs 1 <= r < n (got r = " + std::to_string(r) + ")");
    }
    const std::size_t n_two = n / std::gcd(n, r);
    const std::size_t per_two = kind == EntanglerKind::CR3 ? 3 : 1;
    const std::size_t total = 3 * n + per_two * n_two + (final_x_layer ? n : 0);
    Circuit c(n, 0, total);
    std::size_t p = 0;
    for (std::size_t q = 0; q < n; ++q, p += 3) {
        c.append({GateKind::R3,
                  {q},
                  {TrainableBinding{p}, TrainableBinding{p + 1}, TrainableBinding{p + 2}}});
    }
    for (std::size_t j = 1; j <= n_two; ++j) {
        const std::size_t target = (j * r - r) % n;
        const std::size_t control = (j * r) % n;
        if (kind == EntanglerKind::CR3) {
            c.append({GateKind::CR3,
                      {control, target},
                      {TrainableBinding{p}, TrainableBinding{p + 1}, TrainableBinding{p + 2}}});
        } else {
            c.append({GateKind::CPhase, {control, target}, {TrainableBinding{p}}});
        }
        p += per_two;
    }
    if (final_x_layer) {
        for (std::size_t q = 0; q < n; ++q, ++p) {
            c.append({GateKind::RX, {q}, {TrainableBinding{p}}});
        }
    }
    return c;
}

Circuit compose(const Circuit &encoder, const Circuit &ansatz) {
    if (encoder.n_qubits() != ansatz.n_qubits()) {
        throw CompositionError("cannot compose a " + std::to_string(encoder.n_qubits()) +
                               "-qubit encoder with a " + std::to_string(ansatz.n_qubits()) +
                               "-qubit ansatz");
    }
    Circuit out(encoder.n_qubits(), encoder.input_dim() + ansatz.input_dim(),
                encoder.n_trainable() + ansatz.n_trainable());
    for (const auto &op : encoder.ops()) {
        out.append(op);
    }
    for (auto op : ansatz.ops()) {
        for (auto &slot : op.slots) {
            if (auto *d = std::get_if<DataBinding>(&slot)) {
                d->input += encoder.input_dim();
            } else if (auto *t = std::get_if<TrainableBinding>(&slot)) {
                t->param += encoder.n_trainable();
            }
        }
        out.append(std::move(op));
    }
    return out;
}

} // namespace qgen
