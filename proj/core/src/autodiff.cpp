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

#include "qgen/autodiff.hpp"

#include <cmath>

#include "qgen/errors.hpp"
#include "qgen/gradients.hpp"

namespace qgen {

namespace {

double stable_sigmoid(double x) {
    if (x >= 0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

std::string shape_str(Shape s) { return std::to_string(s.rows) + "x" + std::to_string(s.cols); }

} // namespace

const Tape::Node &Tape::node(NodeId id) const {
    if (id >= nodes_.size()) {
        throw IndexError("node id " + std::to_string(id) + " not on tape");
    }
    return nodes_[id];
}

NodeId Tape::push(Node n) {
    for (auto p : n.parents) {
        n.depends_on_input = n.depends_on_input || node(p).depends_on_input;
    }
    nodes_.push_back(std::move(n));
    forward_done_ = false;
    backward_done_ = false;
    return nodes_.size() - 1;
}

Tape::Node Tape::make_node(OpKind kind, std::vector<NodeId> parents, Shape shape) {
    Node n;
    n.kind = kind;
    n.parents = std::move(parents);
    n.shape = shape;
    return n;
}

NodeId Tape::constant(std::vector<double> value, std::optional<Shape> shape) {
    const Shape s = shape.value_or(vector_shape(value.size()));
    if (s.size() != value.size()) {
        throw ShapeError("constant of " + std::to_string(value.size()) +
                         " value(s) declared with shape " + shape_str(s));
    }
    Node n = make_node(OpKind::Constant, {}, s);
    n.constant_value = std::move(value);
    return push(std::move(n));
}

NodeId Tape::input(Shape shape, std::string name) {
    Node n = make_node(OpKind::Input, {}, shape);
    n.depends_on_input = true;
    n.name = std::move(name);
    return push(std::move(n));
}

NodeId Tape::elementwise(OpKind kind, NodeId a, NodeId b) {
    const Shape sa = node(a).shape, sb = node(b).shape;
    Shape out;
    if (sa == sb) {
        out = sa;
    } else if (sb.size() == 1) {
        out = sa;
    } else if (sa.size() == 1) {
        out = sb;
    } else {
        throw ShapeError("elementwise operands have shapes " + shape_str(sa) + " and " +
                         shape_str(sb));
    }
    return push(make_node(kind, {a, b}, out));
}

NodeId Tape::unary(OpKind kind, NodeId a) { return push(make_node(kind, {a}, node(a).shape)); }

NodeId Tape::add(NodeId a, NodeId b) { return elementwise(OpKind::Add, a, b); }
NodeId Tape::multiply(NodeId a, NodeId b) { return elementwise(OpKind::Multiply, a, b); }

NodeId Tape::bias_add(NodeId x, NodeId bias) {
    if (node(x).shape.size() != node(bias).shape.size()) {
        throw ShapeError("bias of shape " + shape_str(node(bias).shape) +
                         " does not match input of shape " + shape_str(node(x).shape));
    }
    return push(make_node(OpKind::BiasAdd, {x, bias}, node(x).shape));
}

NodeId Tape::matvec(NodeId matrix, NodeId vec) {
    const Shape sm = node(matrix).shape, sv = node(vec).shape;
    if (sv.size() != sm.cols) {
        throw ShapeError("matvec of " + shape_str(sm) + " matrix with vector of size " +
                         std::to_string(sv.size()));
    }
    return push(make_node(OpKind::MatVec, {matrix, vec}, vector_shape(sm.rows)));
}

NodeId Tape::sigmoid(NodeId a) { return unary(OpKind::Sigmoid, a); }
NodeId Tape::tanh(NodeId a) { return unary(OpKind::Tanh, a); }
NodeId Tape::relu(NodeId a) { return unary(OpKind::Relu, a); }
NodeId Tape::log(NodeId a) { return unary(OpKind::Log, a); }
NodeId Tape::negate(NodeId a) { return unary(OpKind::Negate, a); }
NodeId Tape::mean(NodeId a) { return push(make_node(OpKind::Mean, {a}, Shape{1, 1})); }

NodeId Tape::quantum_node(QuantumNodeSpec spec) {
    if (node(spec.input).shape.size() != spec.circuit.input_dim()) {
        throw ShapeError("quantum node input has " + std::to_string(node(spec.input).shape.size()) +
                         " component(s); circuit expects " +
                         std::to_string(spec.circuit.input_dim()));
    }
    if (node(spec.params).shape.size() != spec.circuit.n_trainable()) {
        throw ShapeError("quantum node parameters have " +
                         std::to_string(node(spec.params).shape.size()) +
                         " component(s); circuit expects " +
                         std::to_string(spec.circuit.n_trainable()));
    }
    for (const auto &p : spec.paulis) {
        if (p.min_qubits() > spec.circuit.n_qubits()) {
            throw ShapeError("observable " + p.to_string() + " exceeds the circuit register");
        }
    }
    Node n = make_node(OpKind::QuantumExpectation, {spec.input, spec.params},
                       vector_shape(spec.paulis.size()));
    n.quantum = std::move(spec);
    return push(std::move(n));
}

const std::vector<double> &Tape::value(NodeId id) const {
    (void)node(id);
    if (!forward_done_) {
        throw StateError("tape values requested before forward()");
    }
    return values_[id];
}

const std::vector<double> &Tape::adjoint(NodeId id) const {
    (void)node(id);
    if (!backward_done_) {
        throw StateError("adjoints requested before backward()");
    }
    return adjoints_[id];
}

const std::vector<double> &Tape::forward(const Bindings &bindings, std::optional<NodeId> root) {
    if (nodes_.empty()) {
        throw StateError("forward() on an empty tape");
    }
    root_ = root.value_or(nodes_.size() - 1);
    (void)node(root_);
    forward_done_ = false;
    backward_done_ = false;
    values_.assign(nodes_.size(), {});

    for (NodeId id = 0; id < nodes_.size(); ++id) {
        const Node &n = nodes_[id];
        auto &out = values_[id];
        const auto in = [&](std::size_t k) -> const std::vector<double> & {
            return values_[n.parents[k]];
        };
        switch (n.kind) {
        case OpKind::Constant:
            out = n.constant_value;
            break;
        case OpKind::Input: {
            auto it = bindings.find(id);
            if (it == bindings.end()) {
                throw EvaluationError("input node " + std::to_string(id) +
                                      (n.name.empty() ? "" : " ('" + n.name + "')") +
                                      " is unbound");
            }
            if (it->second.size() != n.shape.size()) {
                throw ShapeError("binding for input node " + std::to_string(id) + " has " +
                                 std::to_string(it->second.size()) + " value(s), expected " +
                                 std::to_string(n.shape.size()));
            }
            out = it->second;
            break;
        }
        case OpKind::Add:
        case OpKind::Multiply:
        case OpKind::BiasAdd: {
            const auto &a = in(0), &b = in(1);
            out.resize(n.shape.size());
            for (std::size_t i = 0; i < out.size(); ++i) {
                const double x = a.size() == 1 ? a[0] : a[i];
                const double y = b.size() == 1 ? b[0] : b[i];
                out[i] = n.kind == OpKind::Multiply ? x * y : x + y;
            }
            break;
        }
        case OpKind::MatVec: {
            const auto &w = in(0), &v = in(1);
            const Shape sw = nodes_[n.parents[0]].shape;
            out.assign(sw.rows, 0.0);
            for (std::size_t r = 0; r < sw.rows; ++r) {
                double acc = 0.0;
                for (std::size_t c = 0; c < sw.cols; ++c) {
                    acc += w[r * sw.cols + c] * v[c];
                }
                out[r] = acc;
            }
            break;
        }
        case OpKind::Sigmoid:
        case OpKind::Tanh:
        case OpKind::Relu:
        case OpKind::Log:
        case OpKind::Negate: {
            const auto &a = in(0);
            out.resize(a.size());
            for (std::size_t i = 0; i < a.size(); ++i) {
                switch (n.kind) {
                case OpKind::Sigmoid: out[i] = stable_sigmoid(a[i]); break;
                case OpKind::Tanh: out[i] = std::tanh(a[i]); break;
                case OpKind::Relu: out[i] = a[i] > 0 ? a[i] : 0.0; break;
                case OpKind::Log: out[i] = std::log(a[i]); break;
                default: out[i] = -a[i]; break;
                }
            }
            break;
        }
        case OpKind::Mean: {
            const auto &a = in(0);
            double acc = 0.0;
            for (double v : a) {
                acc += v;
            }
            out = {a.empty() ? 0.0 : acc / static_cast<double>(a.size())};
            break;
        }
        case OpKind::QuantumExpectation: {
            const auto &q = *n.quantum;
            out = measure(run(q.circuit, in(0), in(1)), q.paulis, q.mode);
            break;
        }
        }
    }
    forward_done_ = true;
    return values_[root_];
}

const std::vector<std::vector<double>> &Tape::backward() {
    if (!forward_done_) {
        throw StateError("backward() called before forward()");
    }
    adjoints_.assign(nodes_.size(), {});
    for (NodeId id = 0; id < nodes_.size(); ++id) {
        adjoints_[id].assign(nodes_[id].shape.size(), 0.0);
    }
    if (nodes_[root_].depends_on_input) {
        std::fill(adjoints_[root_].begin(), adjoints_[root_].end(), 1.0);
    }

    for (NodeId id = root_ + 1; id-- > 0;) {
        const Node &n = nodes_[id];
        if (!n.depends_on_input || n.parents.empty()) {
            continue;
        }
        const auto &g = adjoints_[id];
        const auto &y = values_[id];
        const auto wants = [&](std::size_t k) { return nodes_[n.parents[k]].depends_on_input; };
        const auto grad = [&](std::size_t k) -> std::vector<double> & {
            return adjoints_[n.parents[k]];
        };
        const auto val = [&](std::size_t k) -> const std::vector<double> & {
            return values_[n.parents[k]];
        };
        // Accumulates g * scale into parent k, summing when the parent was broadcast.
        const auto accumulate = [&](std::size_t k, auto &&scale) {
            auto &ga = grad(k);
            for (std::size_t i = 0; i < g.size(); ++i) {
                ga[ga.size() == 1 ? 0 : i] += g[i] * scale(i);
            }
        };

        switch (n.kind) {
        case OpKind::Add:
        case OpKind::BiasAdd:
            for (std::size_t k = 0; k < 2; ++k) {
                if (wants(k)) {
                    accumulate(k, [](std::size_t) { return 1.0; });
                }
            }
            break;
        case OpKind::Multiply:
            for (std::size_t k = 0; k < 2; ++k) {
                if (wants(k)) {
                    const auto &other = val(1 - k);
                    accumulate(k, [&](std::size_t i) { return other.size() == 1 ? other[0] : other[i]; });
                }
            }
            break;
        case OpKind::MatVec: {
            const Shape sw = nodes_[n.parents[0]].shape;
            const auto &w = val(0), &v = val(1);
            if (wants(0)) {
                auto &gw = grad(0);
                for (std::size_t r = 0; r < sw.rows; ++r) {
                    for (std::size_t c = 0; c < sw.cols; ++c) {
                        gw[r * sw.cols + c] += g[r] * v[c];
                    }
                }
            }
            if (wants(1)) {
                auto &gv = grad(1);
                for (std::size_t r = 0; r < sw.rows; ++r) {
                    for (std::size_t c = 0; c < sw.cols; ++c) {
                        gv[c] += g[r] * w[r * sw.cols + c];
                    }
                }
            }
            break;
        }
        case OpKind::Sigmoid:
            accumulate(0, [&](std::size_t i) { return y[i] * (1.0 - y[i]); });
            break;
        case OpKind::Tanh:
            accumulate(0, [&](std::size_t i) { return 1.0 - y[i] * y[i]; });
            break;
        case OpKind::Relu:
            accumulate(0, [&](std::size_t i) { return val(0)[i] > 0 ? 1.0 : 0.0; });
            break;
        case OpKind::Log:
            accumulate(0, [&](std::size_t i) { return 1.0 / val(0)[i]; });
            break;
        case OpKind::Negate:
            accumulate(0, [](std::size_t) { return -1.0; });
            break;
        case OpKind::Mean: {
            auto &ga = grad(0);
            const double scale = 1.0 / static_cast<double>(ga.size());
            for (auto &a : ga) {
                a += g[0] * scale;
            }
            break;
        }
        case OpKind::QuantumExpectation: {
            const auto &q = *n.quantum;
            const auto pull = [&](const Jacobian &jac, std::vector<double> &target) {
                for (std::size_t i = 0; i < jac.rows; ++i) {
                    if (g[i] == 0.0) {
                        continue;
                    }
                    for (std::size_t j = 0; j < jac.cols; ++j) {
                        target[j] += g[i] * jac.at(i, j);
                    }
                }
            };
            if (wants(1)) {
                pull(jacobian(q.circuit, q.paulis, val(0), val(1), q.mode), grad(1));
            }
            if (wants(0)) {
                pull(input_jacobian(q.circuit, q.paulis, val(0), val(1), q.mode), grad(0));
            }
            break;
        }
        case OpKind::Constant:
        case OpKind::Input:
            break;
        }
    }
    backward_done_ = true;
    return adjoints_;
}

} // namespace qgen
