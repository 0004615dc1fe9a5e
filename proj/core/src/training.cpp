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

#include "qgen/training.hpp"

#include <algorithm>
#include <cmath>

#include "qgen/errors.hpp"

namespace qgen {

namespace {

double clip_prob(double p) { return std::clamp(p, kProbClip, 1.0 - kProbClip); }

double mean_log_term(std::span<const double> d, std::span<const double> targets) {
    double acc = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double p = clip_prob(d[i]);
        acc += targets[i] * std::log(p) + (1.0 - targets[i]) * std::log(1.0 - p);
    }
    return acc / static_cast<double>(d.size());
}

void require_nonempty(std::span<const double> s, const char *what) {
    if (s.empty()) {
        throw ArgumentError(std::string(what) + " batch is empty");
    }
}

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

/// Per-step evaluation modes: shot mode gets a fresh seed for every circuit
/// family so that separate samples do not share shot noise.
class ModeSource {
  public:
    ModeSource(const EvalMode &mode, std::uint64_t master)
        : mode_(mode), rng_(make_stream(master, "shots")) {}
    EvalMode next() {
        if (const auto *s = std::get_if<ShotMode>(&mode_)) {
            return ShotMode{s->shots, rng_()};
        }
        return ExactMode{};
    }

  private:
    EvalMode mode_;
    Rng rng_;
};

std::vector<std::vector<double>> draw_noise(Rng &rng, std::size_t count, std::size_t dim) {
    std::vector<std::vector<double>> z(count, std::vector<double>(dim));
    for (auto &row : z) {
        for (auto &v : row) {
            v = uniform(rng, -1.0, 1.0);
        }
    }
    return z;
}

/// Clipped probability as a differentiable affine squeeze into [c, 1 - c].
NodeId squeeze(Tape &tape, NodeId d) {
    return tape.add(tape.multiply(d, tape.constant(1.0 - 2.0 * kProbClip)),
                    tape.constant(kProbClip));
}

/// t log d + (1 - t) log(1 - d), skipping terms with zero weight.
NodeId log_likelihood(Tape &tape, NodeId d, double target) {
    const NodeId ds = squeeze(tape, d);
    std::optional<NodeId> out;
    if (target != 0.0) {
        out = tape.multiply(tape.log(ds), tape.constant(target));
    }
    if (target != 1.0) {
        const NodeId one_minus = tape.add(tape.negate(ds), tape.constant(1.0));
        const NodeId term = tape.multiply(tape.log(one_minus), tape.constant(1.0 - target));
        out = out ? tape.add(*out, term) : term;
    }
    return *out;
}

std::vector<double> gather_grads(const Tape &tape, std::span<const NodeId> nodes) {
    std::vector<double> g;
    for (auto id : nodes) {
        const auto &a = tape.adjoint(id);
        g.insert(g.end(), a.begin(), a.end());
    }
    return g;
}

std::vector<NamedArray> apply_update(std::vector<NamedArray> blocks, std::span<const double> grads,
                                     AdamState &state, const AdamHyper &hyper) {
    auto flat = flatten(blocks);
    adam_step(flat, grads, state, hyper);
    unflatten(flat, blocks);
    return blocks;
}

} // namespace

NodeId generator_loss_node(Tape &tape, std::span<const NodeId> d_fake, GeneratorLoss kind) {
    const bool heuristic = kind == GeneratorLoss::Heuristic;
    const std::vector<double> targets(d_fake.size(), heuristic ? 1.0 : 0.0);
    return log_likelihood_sum(tape, d_fake, targets,
                              (heuristic ? -1.0 : 0.5) / static_cast<double>(d_fake.size()));
}

void TrainConfig::validate() const {
    const auto fail = [](const std::string &field, const std::string &why) {
        throw ConfigError("train." + field + ": " + why);
    };
    if (disc_steps < 1) fail("disc_steps", "must be at least 1");
    if (gen_steps < 1) fail("gen_steps", "must be at least 1");
    if (batch_size < 1) fail("batch_size", "must be at least 1");
    if (eval_samples < 1) fail("eval_samples", "must be at least 1");
    if (kl_bins < 2) fail("kl_bins", "must be at least 2");
    if (!(lr_disc >= 0) || !std::isfinite(lr_disc)) fail("lr_disc", "must be finite and >= 0");
    if (!(lr_gen >= 0) || !std::isfinite(lr_gen)) fail("lr_gen", "must be finite and >= 0");
    if (!(beta1 >= 0 && beta1 < 1)) fail("beta1", "must lie in [0, 1)");
    if (!(beta2 >= 0 && beta2 < 1)) fail("beta2", "must lie in [0, 1)");
    if (!(adam_eps > 0)) fail("adam_eps", "must be positive");
    if (!(label_smooth >= 0 && label_smooth < 1)) fail("label_smooth", "must lie in [0, 1)");
    if (!(flip_prob >= 0 && flip_prob < 1)) fail("flip_prob", "must lie in [0, 1)");
    if (const auto *s = std::get_if<ShotMode>(&mode); s && s->shots == 0) {
        fail("mode", "shot count must be positive");
    }
}

double discriminator_loss(std::span<const double> d_real, std::span<const double> d_fake,
                          double smooth) {
    const std::vector<double> rt(d_real.size(), 1.0 - smooth);
    const std::vector<double> ft(d_fake.size(), 0.0);
    return discriminator_loss(d_real, rt, d_fake, ft);
}

double discriminator_loss(std::span<const double> d_real, std::span<const double> real_targets,
                          std::span<const double> d_fake, std::span<const double> fake_targets) {
    require_nonempty(d_real, "real");
    require_nonempty(d_fake, "fake");
    if (real_targets.size() != d_real.size() || fake_targets.size() != d_fake.size()) {
        throw ShapeError("one target per probability is required");
    }
    return -0.5 * mean_log_term(d_real, real_targets) - 0.5 * mean_log_term(d_fake, fake_targets);
}

double generator_loss(std::span<const double> d_fake, GeneratorLoss kind) {
    require_nonempty(d_fake, "fake");
    double acc = 0;
    for (double d : d_fake) {
        const double p = clip_prob(d);
        acc += kind == GeneratorLoss::Heuristic ? -std::log(p) : 0.5 * std::log(1.0 - p);
    }
    return acc / static_cast<double>(d_fake.size());
}

std::vector<double> flip_labels(std::span<const double> targets, double real, double fake,
                                double flip_prob, Rng &rng) {
    if (!(flip_prob >= 0 && flip_prob < 1)) {
        throw ArgumentError("flip probability must lie in [0, 1)");
    }
    std::vector<double> out(targets.begin(), targets.end());
    for (auto &t : out) {
        if (uniform01(rng) < flip_prob) {
            t = t == real ? fake : real;
        }
    }
    return out;
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState &state,
               const AdamHyper &hyper) {
    if (state.step == 0 && state.m.empty() && state.v.empty()) {
        state.m.assign(params.size(), 0.0);
        state.v.assign(params.size(), 0.0);
    }
    if (grads.size() != params.size() || state.m.size() != params.size() ||
        state.v.size() != params.size()) {
        throw ShapeError("adam_step: " + std::to_string(params.size()) + " parameter(s), " +
                         std::to_string(grads.size()) + " gradient(s), state of " +
                         std::to_string(state.m.size()));
    }
    ++state.step;
    const double t = static_cast<double>(state.step);
    const double c1 = 1.0 - std::pow(hyper.beta1, t);
    const double c2 = 1.0 - std::pow(hyper.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.m[i] = hyper.beta1 * state.m[i] + (1.0 - hyper.beta1) * grads[i];
        state.v[i] = hyper.beta2 * state.v[i] + (1.0 - hyper.beta2) * grads[i] * grads[i];
        params[i] -= hyper.lr * (state.m[i] / c1) / (std::sqrt(state.v[i] / c2) + hyper.eps);
    }
}

NodeId log_likelihood_sum(Tape &tape, std::span<const NodeId> probs,
                          std::span<const double> targets, double scale) {
    if (probs.empty() || probs.size() != targets.size()) {
        throw ShapeError("log-likelihood needs one target per probability node");
    }
    NodeId acc = log_likelihood(tape, probs[0], targets[0]);
    for (std::size_t i = 1; i < probs.size(); ++i) {
        acc = tape.add(acc, log_likelihood(tape, probs[i], targets[i]));
    }
    return tape.multiply(acc, tape.constant(scale));
}

std::vector<double> bin_edges(std::size_t bins, double lo, double hi) {
    if (bins < 1 || !(hi > lo)) {
        throw ArgumentError("histogram needs at least one bin and hi > lo");
    }
    std::vector<double> edges(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) {
        edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
    }
    return edges;
}

std::vector<std::size_t> histogram(std::span<const double> samples, std::size_t bins, double lo,
                                   double hi) {
    if (bins < 1 || !(hi > lo)) {
        throw ArgumentError("histogram needs at least one bin and hi > lo");
    }
    std::vector<std::size_t> counts(bins, 0);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (double x : samples) {
        if (!std::isfinite(x)) {
            throw ArgumentError("histogram of a non-finite sample");
        }
        const double pos = (std::clamp(x, lo, hi) - lo) / width;
        const auto b = std::min(static_cast<std::size_t>(pos), bins - 1);
        ++counts[b];
    }
    return counts;
}

double kl_divergence(std::span<const double> samples_p, std::span<const double> samples_q,
                     std::size_t bins, double lo, double hi) {
    if (samples_p.empty() || samples_q.empty()) {
        throw ArgumentError("KL divergence of an empty sample set");
    }
    if (bins < 2) {
        throw ArgumentError("KL divergence needs at least 2 bins");
    }
    const auto cp = histogram(samples_p, bins, lo, hi);
    const auto cq = histogram(samples_q, bins, lo, hi);
    const double np = static_cast<double>(samples_p.size() + bins);
    const double nq = static_cast<double>(samples_q.size() + bins);
    double kl = 0;
    for (std::size_t b = 0; b < bins; ++b) {
        const double p = static_cast<double>(cp[b] + 1) / np;
        const double q = static_cast<double>(cq[b] + 1) / nq;
        kl += p * std::log(p / q);
    }
    return std::max(kl, 0.0);
}

Moments moments(std::span<const double> samples) {
    if (samples.empty()) {
        throw ArgumentError("moments of an empty sample set");
    }
    const double n = static_cast<double>(samples.size());
    double mean = 0;
    for (double x : samples) {
        mean += x;
    }
    mean /= n;
    double var = 0;
    for (double x : samples) {
        var += (x - mean) * (x - mean);
    }
    return {mean, std::sqrt(var / n)};
}

std::vector<std::size_t> snapshot_epochs(std::size_t epochs) {
    std::vector<std::size_t> out{0, epochs / 4, epochs / 2, epochs};
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

class Trainer {
  public:
    Trainer(const TrainConfig &cfg, Generator &gen, Discriminator &disc, const DataSource &src)
        : cfg_(cfg), gen_(gen), disc_(disc), src_(src), modes_(cfg.mode, cfg.seed),
          gen_z_(make_stream(cfg.seed, "gen_z")), data_z_(make_stream(cfg.seed, "data_z")),
          flips_(make_stream(cfg.seed, "flips")), eval_(make_stream(cfg.seed, "eval")),
          disc_adam_(flatten(param_blocks(disc)).size()),
          gen_adam_(gen.flat_params().size()) {}

    TrainResult run(const EpochCallback &on_epoch) {
        TrainResult result;
        const auto snaps = snapshot_epochs(cfg_.epochs);
        auto snap_it = snaps.begin();
        try {
            {
                const auto m = evaluate(0);
                if (snap_it != snaps.end() && *snap_it == 0) {
                    result.snapshots.push_back(m.snapshot);
                    ++snap_it;
                }
            }
            for (std::size_t epoch = 1; epoch <= cfg_.epochs; ++epoch) {
                double c_d = 0, c_g = 0;
                for (std::size_t s = 0; s < cfg_.disc_steps; ++s) {
                    const auto loss = disc_step();
                    if (!loss) {
                        result.abort_reason = diagnostic(epoch, "discriminator", s);
                        return result;
                    }
                    c_d += *loss;
                }
                for (std::size_t s = 0; s < cfg_.gen_steps; ++s) {
                    const auto loss = gen_step();
                    if (!loss) {
                        result.abort_reason = diagnostic(epoch, "generator", s);
                        return result;
                    }
                    c_g += *loss;
                }
                const auto m = evaluate(epoch);
                EpochRecord rec = m.record;
                rec.c_d = c_d / static_cast<double>(cfg_.disc_steps);
                rec.c_g = c_g / static_cast<double>(cfg_.gen_steps);
                result.records.push_back(rec);
                if (on_epoch) {
                    on_epoch(rec);
                }
                if (snap_it != snaps.end() && *snap_it == epoch) {
                    result.snapshots.push_back(m.snapshot);
                    ++snap_it;
                }
            }
        } catch (const Error &e) {
            result.abort_reason = std::string("training aborted: ") + e.what();
        }
        return result;
    }

  private:
    struct Metrics {
        EpochRecord record;
        Snapshot snapshot;
    };

    static std::string diagnostic(std::size_t epoch, const char *who, std::size_t step) {
        return "non-finite " + std::string(who) + " loss or gradient at epoch " +
               std::to_string(epoch) + ", step " + std::to_string(step);
    }

    Metrics evaluate(std::size_t epoch) {
        const auto zg = draw_noise(eval_, cfg_.eval_samples, gen_.noise_dim());
        const auto zd = draw_noise(eval_, cfg_.eval_samples, gen_.noise_dim());
        std::vector<double> xg, xd;
        xg.reserve(zg.size());
        xd.reserve(zd.size());
        for (const auto &z : zg) {
            xg.push_back(gen_.generate(z, modes_.next()).front());
        }
        for (const auto &z : zd) {
            xd.push_back(src_.sample(z).front());
        }
        Metrics m;
        const auto mg = moments(xg);
        const auto md = moments(xd);
        m.record.epoch = epoch;
        m.record.kl = kl_divergence(xd, xg, cfg_.kl_bins);
        m.record.mean_gen = mg.mean;
        m.record.std_gen = mg.std;
        m.record.mean_data = md.mean;
        m.record.std_data = md.std;
        m.snapshot = {epoch, bin_edges(cfg_.kl_bins, -1.0, 1.0),
                      histogram(xg, cfg_.kl_bins, -1.0, 1.0),
                      histogram(xd, cfg_.kl_bins, -1.0, 1.0), m.record.kl};
        return m;
    }

    std::optional<double> disc_step() {
        const std::size_t n = cfg_.batch_size;
        const auto zf = draw_noise(gen_z_, n, gen_.noise_dim());
        const auto zr = draw_noise(data_z_, n, gen_.noise_dim());
        const double real_t = 1.0 - cfg_.label_smooth;
        const auto rt = flip_labels(std::vector<double>(n, real_t), real_t, 0.0, cfg_.flip_prob,
                                    flips_);
        const auto ft = flip_labels(std::vector<double>(n, 0.0), real_t, 0.0, cfg_.flip_prob,
                                    flips_);

        Tape tape;
        Bindings bindings;
        const auto blocks = param_blocks(disc_);
        const auto ids = declare_blocks(tape, blocks, true, bindings);
        std::vector<NodeId> probs;
        probs.reserve(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            const NodeId x = tape.constant(src_.sample(zr[i]));
            probs.push_back(build(disc_, tape, x, ids, modes_.next()));
        }
        for (std::size_t i = 0; i < n; ++i) {
            const NodeId x = tape.constant(gen_.generate(zf[i], modes_.next()));
            probs.push_back(build(disc_, tape, x, ids, modes_.next()));
        }
        std::vector<double> targets(rt);
        targets.insert(targets.end(), ft.begin(), ft.end());
        const NodeId loss =
            log_likelihood_sum(tape, probs, targets, -0.5 / static_cast<double>(n));
        const double value = tape.forward(bindings, loss).front();
        tape.backward();
        const auto grads = gather_grads(tape, ids);
        if (!std::isfinite(value) || !all_finite(grads)) {
            return std::nullopt;
        }
        set_param_blocks(disc_, apply_update(blocks, grads, disc_adam_,
                                             {cfg_.lr_disc, cfg_.beta1, cfg_.beta2, cfg_.adam_eps}));
        return value;
    }

    std::optional<double> gen_step() {
        const std::size_t n = cfg_.batch_size;
        const auto z = draw_noise(gen_z_, n, gen_.noise_dim());

        Tape tape;
        Bindings bindings;
        const auto gblocks = gen_.param_blocks();
        const auto gids = declare_blocks(tape, gblocks, true, bindings);
        const auto dids = declare_blocks(tape, param_blocks(disc_), false, bindings);
        std::vector<NodeId> probs;
        probs.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const NodeId x = gen_.build(tape, tape.constant(z[i]), gids, modes_.next());
            probs.push_back(build(disc_, tape, x, dids, modes_.next()));
        }
        const NodeId loss = generator_loss_node(tape, probs, cfg_.gen_loss);
        const double value = tape.forward(bindings, loss).front();
        tape.backward();
        const auto grads = gather_grads(tape, gids);
        if (!std::isfinite(value) || !all_finite(grads)) {
            return std::nullopt;
        }
        gen_.set_param_blocks(
            apply_update(gblocks, grads, gen_adam_, {cfg_.lr_gen, cfg_.beta1, cfg_.beta2, cfg_.adam_eps}));
        return value;
    }

    const TrainConfig &cfg_;
    Generator &gen_;
    Discriminator &disc_;
    const DataSource &src_;
    ModeSource modes_;
    Rng gen_z_;
    Rng data_z_;
    Rng flips_;
    Rng eval_;
    AdamState disc_adam_;
    AdamState gen_adam_;
};

} // namespace

TrainResult train(const TrainConfig &config, Generator &gen, Discriminator &disc,
                  const DataSource &src, const EpochCallback &on_epoch) {
    config.validate();
    if (gen.output_dim() != input_dim(disc)) {
        throw ShapeError("generator emits " + std::to_string(gen.output_dim()) +
                         " value(s) but the discriminator reads " +
                         std::to_string(input_dim(disc)));
    }
    if (src.generator().output_dim() != gen.output_dim() ||
        src.generator().noise_dim() != gen.noise_dim()) {
        throw ShapeError("data source and generator disagree on noise or output dimension");
    }
    Trainer trainer(config, gen, disc, src);
    return trainer.run(on_epoch);
}

} // namespace qgen
