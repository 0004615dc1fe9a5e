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
 * Adversarial training loop, its losses and optimizer, and the histogram
 * metrics used to track convergence.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qgen/models.hpp"
#include "qgen/random.hpp"
#include "qgen/simulator.hpp"

namespace qgen {

/// Probabilities are clipped into [kProbClip, 1 - kProbClip] before taking logs.
inline constexpr double kProbClip = 1e-12;

enum class Scheme { Classical, Quantum };
enum class GeneratorLoss { Minimax, Heuristic };

struct TrainConfig {
    Scheme scheme = Scheme::Classical;
    std::size_t epochs = 300;
    std::size_t disc_steps = 1;
    std::size_t gen_steps = 1;
    std::size_t batch_size = 64;
    double lr_disc = 0.005;
    double lr_gen = 0.02;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    double label_smooth = 0.1;
    double flip_prob = 0.05;
    GeneratorLoss gen_loss = GeneratorLoss::Heuristic;
    EvalMode mode = ExactMode{};
    std::size_t eval_samples = 1000;
    std::size_t kl_bins = 20;
    std::uint64_t seed = 7;

    /// Throws ConfigError naming the first offending field.
    void validate() const;
};

struct EpochRecord {
    std::size_t epoch = 0;
    double c_d = 0;
    double c_g = 0;
    double kl = 0;
    double mean_gen = 0;
    double std_gen = 0;
    double mean_data = 0;
    double std_data = 0;
};

/// Generated and real histograms at one epoch, over the shared bin edges.
struct Snapshot {
    std::size_t epoch = 0;
    std::vector<double> edges;
    std::vector<std::size_t> gen_counts;
    std::vector<std::size_t> data_counts;
    double kl = 0;
};

struct TrainResult {
    std::vector<EpochRecord> records;
    std::vector<Snapshot> snapshots;
    std::optional<std::string> abort_reason;
    [[nodiscard]] bool aborted() const noexcept { return abort_reason.has_value(); }
};

/// Smoothed cross entropy: real targets 1 - smooth, fake targets 0.
[[nodiscard]] double discriminator_loss(std::span<const double> d_real,
                                        std::span<const double> d_fake, double smooth);
/// Same loss with explicit per-sample targets (after label flips).
[[nodiscard]] double discriminator_loss(std::span<const double> d_real,
                                        std::span<const double> real_targets,
                                        std::span<const double> d_fake,
                                        std::span<const double> fake_targets);
[[nodiscard]] double generator_loss(std::span<const double> d_fake, GeneratorLoss kind);

/// Swaps each target with the opposite class target with probability flip_prob.
/// `targets[i]` must be either `real` or `fake`.
[[nodiscard]] std::vector<double> flip_labels(std::span<const double> targets, double real,
                                              double fake, double flip_prob, Rng &rng);

/// Tape form of scale * sum_i [t_i log d_i + (1 - t_i) log(1 - d_i)], with each
/// d_i squeezed affinely into [kProbClip, 1 - kProbClip].
[[nodiscard]] NodeId log_likelihood_sum(Tape &tape, std::span<const NodeId> probs,
                                        std::span<const double> targets, double scale);

/// Tape form of generator_loss().
[[nodiscard]] NodeId generator_loss_node(Tape &tape, std::span<const NodeId> d_fake,
                                         GeneratorLoss kind);

struct AdamHyper {
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::uint64_t step = 0;
    explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

void adam_step(std::span<double> params, std::span<const double> grads, AdamState &state,
               const AdamHyper &hyper);

/// Uniform bin edges over [lo, hi] (bins + 1 values).
[[nodiscard]] std::vector<double> bin_edges(std::size_t bins, double lo, double hi);
/// Counts per bin; samples outside [lo, hi] land in the nearest edge bin and
/// non-finite samples are rejected.
[[nodiscard]] std::vector<std::size_t> histogram(std::span<const double> samples, std::size_t bins,
                                                 double lo, double hi);
/// KL(p || q) of binned samples with one pseudo-count added to every bin.
[[nodiscard]] double kl_divergence(std::span<const double> samples_p,
                                   std::span<const double> samples_q, std::size_t bins = 20,
                                   double lo = -1.0, double hi = 1.0);

struct Moments {
    double mean = 0;
    double std = 0; // population convention
};
[[nodiscard]] Moments moments(std::span<const double> samples);

/// Epochs at which histogram snapshots are taken: 0, N/4, N/2, N (deduplicated).
[[nodiscard]] std::vector<std::size_t> snapshot_epochs(std::size_t epochs);

using EpochCallback = std::function<void(const EpochRecord &)>;

/// Runs the adversarial loop, updating `gen` and `disc` in place. Metrics
/// track the first output component. A non-finite loss or gradient stops the
/// run; the records gathered so far are kept and the models hold their last
/// finite parameters.
[[nodiscard]] TrainResult train(const TrainConfig &config, Generator &gen, Discriminator &disc,
                                const DataSource &src, const EpochCallback &on_epoch = {});

} // namespace qgen
