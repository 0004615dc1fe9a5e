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

#include "qgen/models.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "qgen/errors.hpp"

namespace qgen {

using json = nlohmann::json;

namespace {

std::size_t product(const std::vector<std::size_t> &shape) {
    std::size_t n = 1;
    for (auto d : shape) {
        n *= d;
    }
    return n;
}

Shape to_tape_shape(const std::vector<std::size_t> &shape) {
    if (shape.size() == 2) {
        return {shape[0], shape[1]};
    }
    return vector_shape(product(shape));
}

void check_blocks(std::span<const NamedArray> got, const std::vector<NamedArray> &want,
                  const char *who) {
    if (got.size() != want.size()) {
        throw ShapeError(std::string(who) + ": expected " + std::to_string(want.size()) +
                         " parameter block(s), got " + std::to_string(got.size()));
    }
    for (std::size_t i = 0; i < got.size(); ++i) {
        if (got[i].data.size() != want[i].data.size()) {
            throw ShapeError(std::string(who) + ": block '" + want[i].name + "' expects " +
                             std::to_string(want[i].data.size()) + " value(s), got " +
                             std::to_string(got[i].data.size()));
        }
    }
}

double sigmoid(double x) {
    if (x >= 0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

json array_to_json(const NamedArray &a) {
    return json{{"name", a.name}, {"shape", a.shape}, {"data", a.data}};
}

NamedArray array_from_json(const json &j) {
    NamedArray a{j.at("name").get<std::string>(), j.at("shape").get<std::vector<std::size_t>>(),
                 j.at("data").get<std::vector<double>>()};
    if (product(a.shape) != a.data.size()) {
        throw ShapeError("array '" + a.name + "' has " + std::to_string(a.data.size()) +
                         " value(s) but its shape holds " + std::to_string(product(a.shape)));
    }
    return a;
}

std::vector<NamedArray> arrays_from_json(const json &j) {
    std::vector<NamedArray> out;
    for (const auto &e : j) {
        out.push_back(array_from_json(e));
    }
    return out;
}

json arrays_to_json(const std::vector<NamedArray> &blocks) {
    json out = json::array();
    for (const auto &b : blocks) {
        out.push_back(array_to_json(b));
    }
    return out;
}

} // namespace

std::vector<double> flatten(std::span<const NamedArray> blocks) {
    std::vector<double> out;
    for (const auto &b : blocks) {
        out.insert(out.end(), b.data.begin(), b.data.end());
    }
    return out;
}

void unflatten(std::span<const double> flat, std::span<NamedArray> blocks) {
    std::size_t total = 0;
    for (const auto &b : blocks) {
        total += b.data.size();
    }
    if (total != flat.size()) {
        throw ShapeError("flat parameter vector has " + std::to_string(flat.size()) +
                         " value(s), blocks hold " + std::to_string(total));
    }
    std::size_t offset = 0;
    for (auto &b : blocks) {
        std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(offset), b.data.size(), b.data.begin());
        offset += b.data.size();
    }
}

std::vector<NodeId> declare_blocks(Tape &tape, std::span<const NamedArray> blocks, bool trainable,
                                   Bindings &bindings) {
    std::vector<NodeId> ids;
    ids.reserve(blocks.size());
    for (const auto &b : blocks) {
        const Shape s = to_tape_shape(b.shape);
        if (trainable) {
            const auto id = tape.input(s, b.name);
            bindings[id] = b.data;
            ids.push_back(id);
        } else {
            ids.push_back(tape.constant(b.data, s));
        }
    }
    return ids;
}

// --- Generator ---------------------------------------------------------------

Generator::Generator(Circuit encoder, Circuit ansatz, std::vector<PauliString> paulis,
                     std::vector<double> theta, std::optional<PostProcessing> post)
    : encoder_(std::move(encoder)), ansatz_(std::move(ansatz)),
      circuit_(compose(encoder_, ansatz_)), paulis_(std::move(paulis)), theta_(std::move(theta)),
      post_(std::move(post)) {
    if (paulis_.empty()) {
        throw ArgumentError("generator needs at least one decoding observable");
    }
    for (const auto &p : paulis_) {
        if (p.min_qubits() > circuit_.n_qubits()) {
            throw IndexError("decoding observable " + p.to_string() + " exceeds the " +
                             std::to_string(circuit_.n_qubits()) + "-qubit register");
        }
    }
    if (theta_.size() != circuit_.n_trainable()) {
        throw ShapeError("generator circuit has " + std::to_string(circuit_.n_trainable()) +
                         " trainable angle(s), got " + std::to_string(theta_.size()));
    }
    if (post_) {
        if (post_->out_dim == 0 || post_->weights.size() != post_->out_dim * paulis_.size() ||
            post_->bias.size() != post_->out_dim) {
            throw ShapeError("post-processing W must be out_dim x M and b of size out_dim");
        }
    }
}

std::vector<double> Generator::generate(std::span<const double> z, const EvalMode &mode) const {
    if (z.size() != noise_dim()) {
        throw ShapeError("generator expects " + std::to_string(noise_dim()) +
                         " noise component(s), got " + std::to_string(z.size()));
    }
    auto p = measure(run(circuit_, z, theta_), paulis_, mode);
    if (!post_) {
        return p;
    }
    std::vector<double> x(post_->out_dim);
    for (std::size_t r = 0; r < x.size(); ++r) {
        double acc = post_->bias[r];
        for (std::size_t c = 0; c < p.size(); ++c) {
            acc += post_->weights[r * p.size() + c] * p[c];
        }
        x[r] = post_->activation == Activation::Tanh ? std::tanh(acc) : acc;
    }
    return x;
}

std::vector<NamedArray> Generator::param_blocks() const {
    std::vector<NamedArray> out{{"theta", {theta_.size()}, theta_}};
    if (post_) {
        out.push_back({"W", {post_->out_dim, paulis_.size()}, post_->weights});
        out.push_back({"b", {post_->out_dim}, post_->bias});
    }
    return out;
}

void Generator::set_param_blocks(std::span<const NamedArray> blocks) {
    check_blocks(blocks, param_blocks(), "generator");
    theta_ = blocks[0].data;
    if (post_) {
        post_->weights = blocks[1].data;
        post_->bias = blocks[2].data;
    }
}

void Generator::set_flat_params(std::span<const double> flat) {
    auto blocks = param_blocks();
    unflatten(flat, blocks);
    set_param_blocks(blocks);
}

NodeId Generator::build(Tape &tape, NodeId z, std::span<const NodeId> blocks,
                        const EvalMode &mode) const {
    if (blocks.size() != (post_ ? 3U : 1U)) {
        throw ShapeError("generator build expects " + std::to_string(post_ ? 3 : 1) +
                         " parameter node(s)");
    }
    NodeId out = tape.quantum_node({circuit_, paulis_, z, blocks[0], mode});
    if (post_) {
        out = tape.bias_add(tape.matvec(blocks[1], out), blocks[2]);
        if (post_->activation == Activation::Tanh) {
            out = tape.tanh(out);
        }
    }
    return out;
}

// --- ClassicalDiscriminator --------------------------------------------------

ClassicalDiscriminator ClassicalDiscriminator::initialized(std::vector<std::size_t> layer_sizes,
                                                           Rng &rng) {
    if (layer_sizes.size() < 2) {
        throw ArgumentError("discriminator needs at least input and output layers");
    }
    std::vector<std::vector<double>> w, b;
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(layer_sizes[l]));
        std::vector<double> wl(layer_sizes[l + 1] * layer_sizes[l]);
        std::vector<double> bl(layer_sizes[l + 1]);
        for (auto &v : wl) {
            v = uniform(rng, -bound, bound);
        }
        for (auto &v : bl) {
            v = uniform(rng, -bound, bound);
        }
        w.push_back(std::move(wl));
        b.push_back(std::move(bl));
    }
    return {std::move(layer_sizes), std::move(w), std::move(b)};
}

ClassicalDiscriminator::ClassicalDiscriminator(std::vector<std::size_t> layer_sizes,
                                               std::vector<std::vector<double>> weights,
                                               std::vector<std::vector<double>> biases)
    : sizes_(std::move(layer_sizes)), weights_(std::move(weights)), biases_(std::move(biases)) {
    if (sizes_.size() < 2 || sizes_.back() != 1) {
        throw ArgumentError("discriminator layers must end in a single output unit");
    }
    if (std::find(sizes_.begin(), sizes_.end(), 0U) != sizes_.end()) {
        throw ArgumentError("discriminator layer sizes must be positive");
    }
    if (weights_.size() != sizes_.size() - 1 || biases_.size() != sizes_.size() - 1) {
        throw ShapeError("discriminator needs one weight matrix and bias per layer");
    }
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        if (weights_[l].size() != sizes_[l + 1] * sizes_[l] || biases_[l].size() != sizes_[l + 1]) {
            throw ShapeError("discriminator layer " + std::to_string(l) + " has inconsistent shapes");
        }
    }
}

double ClassicalDiscriminator::probability(std::span<const double> x) const {
    if (x.size() != sizes_.front()) {
        throw ShapeError("discriminator expects " + std::to_string(sizes_.front()) +
                         " input(s), got " + std::to_string(x.size()));
    }
    std::vector<double> h(x.begin(), x.end());
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        std::vector<double> next(sizes_[l + 1]);
        for (std::size_t r = 0; r < next.size(); ++r) {
            double acc = biases_[l][r];
            for (std::size_t c = 0; c < h.size(); ++c) {
                acc += weights_[l][r * h.size() + c] * h[c];
            }
            next[r] = l + 2 == sizes_.size() ? sigmoid(acc) : std::tanh(acc);
        }
        h = std::move(next);
    }
    return h[0];
}

std::vector<NamedArray> ClassicalDiscriminator::param_blocks() const {
    std::vector<NamedArray> out;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        out.push_back({"W" + std::to_string(l), {sizes_[l + 1], sizes_[l]}, weights_[l]});
        out.push_back({"b" + std::to_string(l), {sizes_[l + 1]}, biases_[l]});
    }
    return out;
}

void ClassicalDiscriminator::set_param_blocks(std::span<const NamedArray> blocks) {
    check_blocks(blocks, param_blocks(), "classical discriminator");
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        weights_[l] = blocks[2 * l].data;
        biases_[l] = blocks[2 * l + 1].data;
    }
}

NodeId ClassicalDiscriminator::build(Tape &tape, NodeId x, std::span<const NodeId> blocks) const {
    if (blocks.size() != 2 * (sizes_.size() - 1)) {
        throw ShapeError("classical discriminator build expects one node per weight and bias");
    }
    NodeId h = x;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        h = tape.bias_add(tape.matvec(blocks[2 * l], h), blocks[2 * l + 1]);
        h = l + 2 == sizes_.size() ? tape.sigmoid(h) : tape.tanh(h);
    }
    return h;
}

// --- QuantumDiscriminator ----------------------------------------------------

QuantumDiscriminator::QuantumDiscriminator(Circuit encoder, Circuit ansatz,
                                           std::vector<double> theta, std::size_t readout)
    : encoder_(std::move(encoder)), ansatz_(std::move(ansatz)),
      circuit_(compose(encoder_, ansatz_)), theta_(std::move(theta)), readout_(readout) {
    if (readout_ >= circuit_.n_qubits()) {
        throw IndexError("readout qubit " + std::to_string(readout_) + " outside the register");
    }
    if (theta_.size() != circuit_.n_trainable()) {
        throw ShapeError("discriminator circuit has " + std::to_string(circuit_.n_trainable()) +
                         " trainable angle(s), got " + std::to_string(theta_.size()));
    }
}

double QuantumDiscriminator::probability(std::span<const double> x, const EvalMode &mode) const {
    if (x.size() != input_dim()) {
        throw ShapeError("discriminator expects " + std::to_string(input_dim()) +
                         " input(s), got " + std::to_string(x.size()));
    }
    std::vector<double> clamped(x.begin(), x.end());
    for (auto &v : clamped) {
        v = std::clamp(v, -1.0, 1.0);
    }
    const auto readout = PauliString::z(readout_);
    const double z = measure(run(circuit_, clamped, theta_), std::span(&readout, 1), mode).front();
    return (1.0 + z) / 2.0;
}

std::vector<NamedArray> QuantumDiscriminator::param_blocks() const {
    return {{"theta", {theta_.size()}, theta_}};
}

void QuantumDiscriminator::set_param_blocks(std::span<const NamedArray> blocks) {
    check_blocks(blocks, param_blocks(), "quantum discriminator");
    theta_ = blocks[0].data;
}

NodeId QuantumDiscriminator::build(Tape &tape, NodeId x, std::span<const NodeId> blocks,
                                   const EvalMode &mode) const {
    if (blocks.size() != 1) {
        throw ShapeError("quantum discriminator build expects one parameter node");
    }
    const NodeId z = tape.quantum_node({circuit_, {PauliString::z(readout_)}, x, blocks[0], mode});
    return tape.multiply(tape.add(z, tape.constant(1.0)), tape.constant(0.5));
}

// --- Discriminator variant ---------------------------------------------------

double discriminate(const Discriminator &disc, std::span<const double> x, const EvalMode &mode) {
    return std::visit(
        [&](const auto &d) {
            if constexpr (std::is_same_v<std::decay_t<decltype(d)>, ClassicalDiscriminator>) {
                return d.probability(x);
            } else {
                return d.probability(x, mode);
            }
        },
        disc);
}

std::vector<NamedArray> param_blocks(const Discriminator &disc) {
    return std::visit([](const auto &d) { return d.param_blocks(); }, disc);
}

void set_param_blocks(Discriminator &disc, std::span<const NamedArray> blocks) {
    std::visit([&](auto &d) { d.set_param_blocks(blocks); }, disc);
}

NodeId build(const Discriminator &disc, Tape &tape, NodeId x, std::span<const NodeId> blocks,
             const EvalMode &mode) {
    return std::visit(
        [&](const auto &d) {
            if constexpr (std::is_same_v<std::decay_t<decltype(d)>, ClassicalDiscriminator>) {
                return d.build(tape, x, blocks);
            } else {
                return d.build(tape, x, blocks, mode);
            }
        },
        disc);
}

std::size_t input_dim(const Discriminator &disc) {
    return std::visit([](const auto &d) { return d.input_dim(); }, disc);
}

// --- Factories ---------------------------------------------------------------

Generator two_qubit_generator(std::vector<double> theta, std::vector<PauliString> paulis) {
    return {product_encoder(1, 2), generator_ansatz_2q(), std::move(paulis), std::move(theta)};
}

DataSource reference_data_source() {
    return DataSource(two_qubit_generator(kDataSourceTheta, {PauliString::x(0)}));
}

QuantumDiscriminator bblock_discriminator(std::size_t input_dim, std::size_t copies,
                                          std::size_t range, EntanglerKind kind,
                                          bool final_x_layer, std::size_t readout,
                                          std::vector<double> theta) {
    return {product_encoder(input_dim, copies),
            b_block(input_dim * copies, range, kind, final_x_layer), std::move(theta), readout};
}

// --- Checkpoints -------------------------------------------------------------

std::string serialize_checkpoint(const Generator &gen, const Discriminator &disc) {
    json g{{"encoder", gen.encoder().to_text()},
           {"ansatz", gen.ansatz().to_text()},
           {"paulis", json::array()},
           {"params", arrays_to_json({gen.param_blocks().front()})}};
    for (const auto &p : gen.paulis()) {
        g["paulis"].push_back(p.to_string());
    }
    if (const auto &post = gen.postprocessing()) {
        g["postprocessing"] = {
            {"activation", post->activation == Activation::Tanh ? "tanh" : "identity"},
            {"W", array_to_json({"W", {post->out_dim, gen.paulis().size()}, post->weights})},
            {"b", array_to_json({"b", {post->out_dim}, post->bias})}};
    } else {
        g["postprocessing"] = nullptr;
    }

    json d = std::visit(
        [](const auto &dd) -> json {
            using T = std::decay_t<decltype(dd)>;
            if constexpr (std::is_same_v<T, ClassicalDiscriminator>) {
                return {{"kind", "classical"},
                        {"layer_sizes", dd.layer_sizes()},
                        {"params", arrays_to_json(dd.param_blocks())}};
            } else {
                return {{"kind", "quantum"},
                        {"encoder", dd.encoder().to_text()},
                        {"ansatz", dd.ansatz().to_text()},
                        {"readout", dd.readout()},
                        {"params", arrays_to_json(dd.param_blocks())}};
            }
        },
        disc);

    json root{{"format", "qgen-checkpoint"}, {"version", 1}, {"generator", g}, {"discriminator", d}};
    return root.dump(2) + "\n";
}

Checkpoint parse_checkpoint(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ParseError(std::string("checkpoint: ") + e.what(), e.byte);
    }
    try {
        if (root.at("format").get<std::string>() != "qgen-checkpoint") {
            throw ParseError("checkpoint: unexpected format tag", 0);
        }
        const auto &g = root.at("generator");
        std::vector<PauliString> paulis;
        for (const auto &p : g.at("paulis")) {
            paulis.push_back(PauliString::parse(p.get<std::string>()));
        }
        std::optional<PostProcessing> post;
        if (const auto &pj = g.at("postprocessing"); !pj.is_null()) {
            const auto w = array_from_json(pj.at("W"));
            const auto b = array_from_json(pj.at("b"));
            const auto act = pj.at("activation").get<std::string>();
            if (act != "identity" && act != "tanh") {
                throw ParseError("checkpoint: unknown activation '" + act + "'", 0);
            }
            post = PostProcessing{b.data.size(), w.data, b.data,
                                  act == "tanh" ? Activation::Tanh : Activation::Identity};
        }
        const auto gparams = arrays_from_json(g.at("params"));
        if (gparams.size() != 1) {
            throw ParseError("checkpoint: generator params must hold exactly 'theta'", 0);
        }
        Generator gen(Circuit::parse(g.at("encoder").get<std::string>()),
                      Circuit::parse(g.at("ansatz").get<std::string>()), std::move(paulis),
                      gparams.front().data, std::move(post));

        const auto &d = root.at("discriminator");
        const auto kind = d.at("kind").get<std::string>();
        const auto dparams = arrays_from_json(d.at("params"));
        if (kind == "classical") {
            const auto sizes = d.at("layer_sizes").get<std::vector<std::size_t>>();
            if (dparams.size() != 2 * (sizes.size() - 1)) {
                throw ParseError("checkpoint: classical discriminator parameter count mismatch", 0);
            }
            std::vector<std::vector<double>> w, b;
            for (std::size_t l = 0; 2 * l < dparams.size(); ++l) {
                w.push_back(dparams[2 * l].data);
                b.push_back(dparams[2 * l + 1].data);
            }
            return {std::move(gen), ClassicalDiscriminator(sizes, std::move(w), std::move(b))};
        }
        if (kind == "quantum") {
            if (dparams.size() != 1) {
                throw ParseError("checkpoint: quantum discriminator params must hold 'theta'", 0);
            }
            return {std::move(gen),
                    QuantumDiscriminator(Circuit::parse(d.at("encoder").get<std::string>()),
                                         Circuit::parse(d.at("ansatz").get<std::string>()),
                                         dparams.front().data, d.at("readout").get<std::size_t>())};
        }
        throw ParseError("checkpoint: unknown discriminator kind '" + kind + "'", 0);
    } catch (const json::exception &e) {
        throw ParseError(std::string("checkpoint: ") + e.what(), 0);
    } catch (const ParseError &) {
        throw;
    } catch (const Error &e) {
        throw ParseError(std::string("checkpoint: ") + e.what(), 0);
    }
}

} // namespace qgen
