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
 * Reverse-mode accumulation tape whose primitives include quantum
 * expectation nodes.
 *
 * Nodes are appended in topological order. forward() evaluates the whole
 * tape; backward() seeds the root adjoint with 1 and sweeps the tape in
 * reverse, propagating vector-Jacobian products. A quantum node contributes
 * adjoint^T * (d<P>/d theta) to its parameter parent and
 * adjoint^T * (d<P>/dx) to its input parent, both computed with shift rules.
 *
 * Adjoints are accumulated only into nodes that depend on at least one input
 * node; constants and everything computed purely from constants keep a zero
 * adjoint, which also spares the Jacobian evaluations of frozen parameters.
 */
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qgen/circuits.hpp"
#include "qgen/simulator.hpp"

namespace qgen {

using NodeId = std::size_t;

enum class OpKind {
    Constant,
    Input,
    Add,
    Multiply,
    MatVec,
    BiasAdd,
    Sigmoid,
    Tanh,
    Relu,
    Log,
    Negate,
    Mean,
    QuantumExpectation,
};

/// rows x cols; plain vectors are n x 1 and scalars 1 x 1.
struct Shape {
    std::size_t rows = 1;
    std::size_t cols = 1;
    [[nodiscard]] std::size_t size() const noexcept { return rows * cols; }
    friend bool operator==(const Shape &, const Shape &) = default;
};

[[nodiscard]] inline Shape vector_shape(std::size_t n) { return {n, 1}; }

struct QuantumNodeSpec {
    Circuit circuit;
    std::vector<PauliString> paulis;
    NodeId input;
    NodeId params;
    EvalMode mode = ExactMode{};
};

using Bindings = std::map<NodeId, std::vector<double>>;

class Tape {
  public:
    NodeId constant(std::vector<double> value, std::optional<Shape> shape = std::nullopt);
    NodeId constant(double value) { return constant(std::vector<double>{value}); }
    NodeId input(Shape shape, std::string name = {});

    /// Elementwise; a 1x1 operand broadcasts against the other.
    NodeId add(NodeId a, NodeId b);
    NodeId multiply(NodeId a, NodeId b);
    NodeId matvec(NodeId matrix, NodeId vec);
    NodeId bias_add(NodeId x, NodeId bias);
    NodeId sigmoid(NodeId a);
    NodeId tanh(NodeId a);
    NodeId relu(NodeId a);
    NodeId log(NodeId a);
    NodeId negate(NodeId a);
    NodeId mean(NodeId a);
    NodeId quantum_node(QuantumNodeSpec spec);

    /// Evaluates every node; returns the value of `root` (the last node when omitted).
    const std::vector<double> &forward(const Bindings &bindings,
                                       std::optional<NodeId> root = std::nullopt);

    /// Adjoints of every node with respect to the root used in forward().
    const std::vector<std::vector<double>> &backward();

    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
    [[nodiscard]] OpKind kind(NodeId id) const { return node(id).kind; }
    [[nodiscard]] Shape shape(NodeId id) const { return node(id).shape; }
    [[nodiscard]] const std::vector<NodeId> &parents(NodeId id) const { return node(id).parents; }
    [[nodiscard]] const std::string &name(NodeId id) const { return node(id).name; }
    [[nodiscard]] const std::vector<double> &value(NodeId id) const;
    [[nodiscard]] const std::vector<double> &adjoint(NodeId id) const;

  private:
    struct Node {
        OpKind kind;
        std::vector<NodeId> parents;
        Shape shape;
        bool depends_on_input = false;
        std::string name;
        std::vector<double> constant_value;
        std::optional<QuantumNodeSpec> quantum;
    };

    static Node make_node(OpKind kind, std::vector<NodeId> parents, Shape shape);
    [[nodiscard]] const Node &node(NodeId id) const;
    NodeId push(Node n);
    NodeId elementwise(OpKind kind, NodeId a, NodeId b);
    NodeId unary(OpKind kind, NodeId a);

    std::vector<Node> nodes_;
    std::vector<std::vector<double>> values_;
    std::vector<std::vector<double>> adjoints_;
    NodeId root_ = 0;
    bool forward_done_ = false;
    bool backward_done_ = false;
};

} // namespace qgen
