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
 * Generator, discriminators and the fixed real-data source.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qgen/autodiff.hpp"
#include "qgen/circuits.hpp"
#include "qgen/random.hpp"
#include "qgen/simulator.hpp"

namespace qgen {

/// Named parameter array with its logical shape; the unit of checkpointing
/// and of tape parameter nodes.
struct NamedArray {
    std::string name;
    std::vector<std::size_t> shape;
    std::vector<double> data;
    friend bool operator==(const NamedArray &, const NamedArray &) = default;
};

[[nodiscard]] std::vector<double> flatten(std::span<const NamedArray> blocks);
/// Overwrites block data from a flat vector laid out as flatten() produces it.
void unflatten(std::span<const double> flat, std::span<NamedArray> blocks);

/// Declares one tape node per block: input nodes (bound in `bindings`) when
/// trainable, constants otherwise.
[[nodiscard]] std::vector<NodeId> declare_blocks(Tape &tape, std::span<const NamedArray> blocks,
                                                 bool trainable, Bindings &bindings);

enum class Activation { Identity, Tanh };

/// x = h(W P + b) applied to the measured expectation vector P.
struct PostProcessing {
    std::size_t out_dim = 0;
    std::vector<double> weights; // out_dim x M, row-major
    std::vector<double> bias;
    Activation activation = Activation::Identity;
    friend bool operator==(const PostProcessing &, const PostProcessing &) = default;
};

class Generator {
  public:
    Generator(Circuit encoder, Circuit ansatz, std::vector<PauliString> paulis,
              std::vector<double> theta, std::optional<PostProcessing> post = std::nullopt);

    [[nodiscard]] const Circuit &encoder() const noexcept { return encoder_; }
    [[nodiscard]] const Circuit &ansatz() const noexcept { return ansatz_; }
    [[nodiscard]] const Circuit &circuit() const noexcept { return circuit_; }
    [[nodiscard]] const std::vector<PauliString> &paulis() const noexcept { return paulis_; }
    [[nodiscard]] const std::vector<double> &theta() const noexcept { return theta_; }
    [[nodiscard]] const std::optional<PostProcessing> &postprocessing() const noexcept {
        return post_;
    }
    [[nodiscard]] std::size_t noise_dim() const noexcept { return encoder_.input_dim(); }
    [[nodiscard]] std::size_t output_dim() const noexcept {
        return post_ ? post_->out_dim : paulis_.size();
    }

    [[nodiscard]] std::vector<double> generate(std::span<const double> z,
                                               const EvalMode &mode = ExactMode{}) const;

    /// "theta", then "W" and "b" when post-processing is present.
    [[nodiscard]] std::vector<NamedArray> param_blocks() const;
    void set_param_blocks(std::span<const NamedArray> blocks);
    [[nodiscard]] std::vector<double> flat_params() const { return flatten(param_blocks()); }
    void set_flat_params(std::span<const double> flat);

    /// Appends the generator's computation; `blocks` follow param_blocks() order.
    [[nodiscard]] NodeId build(Tape &tape, NodeId z, std::span<const NodeId> blocks,
                               const EvalMode &mode = ExactMode{}) const;

  private:
    Circuit encoder_;
    Circuit ansatz_;
    Circuit circuit_;
    std::vector<PauliString> paulis_;
    std::vector<double> theta_;
    std::optional<PostProcessing> post_;
};

/// Feed-forward network: tanh hidden layers, sigmoid output of size 1.
class ClassicalDiscriminator {
  public:
    /// Weights and biases uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)].
    static ClassicalDiscriminator initialized(std::vector<std::size_t> layer_sizes, Rng &rng);

    /// weights[l] is sizes[l+1] x sizes[l] row-major; biases[l] has sizes[l+1] entries.
    ClassicalDiscriminator(std::vector<std::size_t> layer_sizes,
                           std::vector<std::vector<double>> weights,
                           std::vector<std::vector<double>> biases);

    [[nodiscard]] const std::vector<std::size_t> &layer_sizes() const noexcept { return sizes_; }
    [[nodiscard]] std::size_t input_dim() const noexcept { return sizes_.front(); }

    [[nodiscard]] double probability(std::span<const double> x) const;

    /// "W0", "b0", "W1", "b1", ...
    [[nodiscard]] std::vector<NamedArray> param_blocks() const;
    void set_param_blocks(std::span<const NamedArray> blocks);

    [[nodiscard]] NodeId build(Tape &tape, NodeId x, std::span<const NodeId> blocks) const;

  private:
    std::vector<std::size_t> sizes_;
    std::vector<std::vector<double>> weights_;
    std::vector<std::vector<double>> biases_;
};

/// Encoder E(x) followed by a variational block D(theta); the probability of
/// "real" is (1 + <Z_readout>) / 2.
class QuantumDiscriminator {
  public:
    QuantumDiscriminator(Circuit encoder, Circuit ansatz, std::vector<double> theta,
                         std::size_t readout);

    [[nodiscard]] const Circuit &encoder() const noexcept { return encoder_; }
    [[nodiscard]] const Circuit &ansatz() const noexcept { return ansatz_; }
    [[nodiscard]] const Circuit &circuit() const noexcept { return circuit_; }
    [[nodiscard]] const std::vector<double> &theta() const noexcept { return theta_; }
    [[nodiscard]] std::size_t readout() const noexcept { return readout_; }
    [[nodiscard]] std::size_t input_dim() const noexcept { return encoder_.input_dim(); }

    /// Inputs are clamped to [-1, 1] first (shot estimates may overshoot).
    [[nodiscard]] double probability(std::span<const double> x,
                                     const EvalMode &mode = ExactMode{}) const;

    [[nodiscard]] std::vector<NamedArray> param_blocks() const;
    void set_param_blocks(std::span<const NamedArray> blocks);

    [[nodiscard]] NodeId build(Tape &tape, NodeId x, std::span<const NodeId> blocks,
                               const EvalMode &mode = ExactMode{}) const;

  private:
    Circuit encoder_;
    Circuit ansatz_;
    Circuit circuit_;
    std::vector<double> theta_;
    std::size_t readout_;
};

using Discriminator = std::variant<ClassicalDiscriminator, QuantumDiscriminator>;

[[nodiscard]] double discriminate(const Discriminator &disc, std::span<const double> x,
                                  const EvalMode &mode = ExactMode{});
[[nodiscard]] std::vector<NamedArray> param_blocks(const Discriminator &disc);
void set_param_blocks(Discriminator &disc, std::span<const NamedArray> blocks);
[[nodiscard]] NodeId build(const Discriminator &disc, Tape &tape, NodeId x,
                           std::span<const NodeId> blocks, const EvalMode &mode = ExactMode{});
[[nodiscard]] std::size_t input_dim(const Discriminator &disc);

/// Generator with frozen parameters, always evaluated exactly.
class DataSource {
  public:
    explicit DataSource(Generator generator) : generator_(std::move(generator)) {}
    [[nodiscard]] const Generator &generator() const noexcept { return generator_; }
    [[nodiscard]] std::vector<double> sample(std::span<const double> z) const {
        return generator_.generate(z, ExactMode{});
    }

  private:
    Generator generator_;
};

[[nodiscard]] inline std::vector<double> generate(const Generator &gen, std::span<const double> z,
                                                  const EvalMode &mode = ExactMode{}) {
    return gen.generate(z, mode);
}
[[nodiscard]] inline std::vector<double> data_sample(const DataSource &src,
                                                     std::span<const double> z) {
    return src.sample(z);
}
[[nodiscard]] inline double discriminate_classical(const ClassicalDiscriminator &disc,
                                                   std::span<const double> x) {
    return disc.probability(x);
}
[[nodiscard]] inline double discriminate_quantum(const QuantumDiscriminator &disc,
                                                 std::span<const double> x,
                                                 const EvalMode &mode = ExactMode{}) {
    return disc.probability(x, mode);
}

/// Two-qubit generator: z replicated on both qubits, RY/RY/XXROT ansatz,
/// decoded with `paulis`.
[[nodiscard]] Generator two_qubit_generator(std::vector<double> theta,
                                            std::vector<PauliString> paulis = {PauliString::z(0)});

inline const std::vector<double> kDataSourceTheta{2.48, 2.52, 2.0};
inline const std::vector<double> kGeneratorInitTheta{2.3, 2.3, 1.0};

/// Real-data source: the two-qubit generator frozen at (2.48, 2.52, 2.0), read out with X on qubit 0.
[[nodiscard]] DataSource reference_data_source();

/// Product encoder with `copies` per component followed by a B(n, r) block.
[[nodiscard]] QuantumDiscriminator bblock_discriminator(std::size_t input_dim, std::size_t copies,
                                                        std::size_t range, EntanglerKind kind,
                                                        bool final_x_layer, std::size_t readout,
                                                        std::vector<double> theta);

/// JSON checkpoint holding both models: circuits in their text form and all
/// parameters as named arrays with shapes.
[[nodiscard]] std::string serialize_checkpoint(const Generator &gen, const Discriminator &disc);

struct Checkpoint {
    Generator generator;
    Discriminator discriminator;
};

/// Throws ParseError (with byte offset) on malformed input.
[[nodiscard]] Checkpoint parse_checkpoint(std::string_view text);

} // namespace qgen
