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

#include "qgen/experiment.hpp"

#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "qgen/errors.hpp"
#include "qgen/gradients.hpp"
#include "qgen/random.hpp"
#include "qgen/text.hpp"

#ifndef QGEN_VERSION
#define QGEN_VERSION "0.0.0"
#endif

namespace qgen {

namespace {

// --- value codecs --------------------------------------------------------------

std::vector<std::string_view> split_list(std::string_view v) {
    std::vector<std::string_view> out;
    if (trim(v).empty()) {
        return out;
    }
    std::size_t start = 0;
    while (true) {
        const auto comma = v.find(',', start);
        out.push_back(trim(v.substr(start, comma - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

double to_double(std::string_view v) {
    if (auto d = parse_double(v)) {
        return *d;
    }
    throw ConfigError("expected a number, got '" + std::string(v) + "'");
}

std::size_t to_size(std::string_view v) {
    if (auto n = parse_integer<std::size_t>(v)) {
        return *n;
    }
    throw ConfigError("expected a non-negative integer, got '" + std::string(v) + "'");
}

std::uint64_t to_u64(std::string_view v) {
    if (auto n = parse_integer<std::uint64_t>(v)) {
        return *n;
    }
    throw ConfigError("expected an unsigned 64-bit integer, got '" + std::string(v) + "'");
}

bool to_bool(std::string_view v) {
    if (v == "true") {
        return true;
    }
    if (v == "false") {
        return false;
    }
    throw ConfigError("expected true or false, got '" + std::string(v) + "'");
}

std::vector<double> to_doubles(std::string_view v) {
    std::vector<double> out;
    for (auto item : split_list(v)) {
        out.push_back(to_double(item));
    }
    return out;
}

std::vector<std::size_t> to_sizes(std::string_view v) {
    std::vector<std::size_t> out;
    for (auto item : split_list(v)) {
        out.push_back(to_size(item));
    }
    return out;
}

std::vector<std::string> to_paulis(std::string_view v) {
    std::vector<std::string> out;
    for (auto item : split_list(v)) {
        out.push_back(PauliString::parse(item).to_string());
    }
    return out;
}

template <class T, class F> std::string join(const std::vector<T> &items, F &&fmt) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        out += (i ? ", " : "") + fmt(items[i]);
    }
    return out;
}

std::string doubles_str(const std::vector<double> &v) { return join(v, format_shortest); }
std::string sizes_str(const std::vector<std::size_t> &v) {
    return join(v, [](std::size_t n) { return std::to_string(n); });
}
std::string strings_str(const std::vector<std::string> &v) {
    return join(v, [](const std::string &s) { return s; });
}

EntanglerKind to_entangler(std::string_view v) {
    if (v == "cr3") {
        return EntanglerKind::CR3;
    }
    if (v == "cphase") {
        return EntanglerKind::CPhase;
    }
    throw ConfigError("expected cr3 or cphase, got '" + std::string(v) + "'");
}

std::string entangler_str(EntanglerKind k) { return k == EntanglerKind::CR3 ? "cr3" : "cphase"; }

// --- key table -------------------------------------------------------------------

struct Key {
    std::string name;
    std::function<void(ExperimentConfig &, std::string_view)> set;
    std::function<std::string(const ExperimentConfig &)> get;
};

#define QGEN_KEY(name, field, parse, print)                                                        \
    Key {                                                                                          \
        name, [](ExperimentConfig &c, std::string_view v) { c.field = parse(v); },                 \
            [](const ExperimentConfig &c) { return print(c.field); }                               \
    }

std::string size_str(std::size_t n) { return std::to_string(n); }
std::string u64_str(std::uint64_t n) { return std::to_string(n); }
std::string bool_str(bool b) { return b ? "true" : "false"; }
std::string identity_str(const std::string &s) { return s; }
std::string to_string_copy(std::string_view v) { return std::string(v); }

const std::vector<Key> &keys() {
    static const std::vector<Key> table{
        QGEN_KEY("seed", train.seed, to_u64, u64_str),
        Key{"train.scheme",
            [](ExperimentConfig &c, std::string_view v) {
                if (v == "I") {
                    c.train.scheme = Scheme::Classical;
                } else if (v == "II") {
                    c.train.scheme = Scheme::Quantum;
                } else {
                    throw ConfigError("expected I or II, got '" + std::string(v) + "'");
                }
            },
            [](const ExperimentConfig &c) {
                return std::string(c.train.scheme == Scheme::Classical ? "I" : "II");
            }},
        QGEN_KEY("train.epochs", train.epochs, to_size, size_str),
        QGEN_KEY("train.disc_steps", train.disc_steps, to_size, size_str),
        QGEN_KEY("train.gen_steps", train.gen_steps, to_size, size_str),
        QGEN_KEY("train.batch_size", train.batch_size, to_size, size_str),
        QGEN_KEY("train.lr_disc", train.lr_disc, to_double, format_shortest),
        QGEN_KEY("train.lr_gen", train.lr_gen, to_double, format_shortest),
        QGEN_KEY("train.beta1", train.beta1, to_double, format_shortest),
        QGEN_KEY("train.beta2", train.beta2, to_double, format_shortest),
        QGEN_KEY("train.adam_eps", train.adam_eps, to_double, format_shortest),
        QGEN_KEY("train.label_smooth", train.label_smooth, to_double, format_shortest),
        QGEN_KEY("train.flip_prob", train.flip_prob, to_double, format_shortest),
        Key{"train.gen_loss",
            [](ExperimentConfig &c, std::string_view v) {
                if (v == "heuristic") {
                    c.train.gen_loss = GeneratorLoss::Heuristic;
                } else if (v == "minimax") {
                    c.train.gen_loss = GeneratorLoss::Minimax;
                } else {
                    throw ConfigError("expected heuristic or minimax, got '" + std::string(v) + "'");
                }
            },
            [](const ExperimentConfig &c) {
                return std::string(c.train.gen_loss == GeneratorLoss::Heuristic ? "heuristic"
                                                                                : "minimax");
            }},
        QGEN_KEY("train.mode", train.mode, parse_mode, mode_to_string),
        QGEN_KEY("train.eval_samples", train.eval_samples, to_size, size_str),
        QGEN_KEY("train.kl_bins", train.kl_bins, to_size, size_str),

        QGEN_KEY("generator.copies", gen_copies, to_size, size_str),
        Key{"generator.ansatz",
            [](ExperimentConfig &c, std::string_view v) {
                if (v == "xxrot") {
                    c.gen_ansatz = AnsatzKind::XXRot;
                } else if (v == "bblock") {
                    c.gen_ansatz = AnsatzKind::BBlock;
                } else if (v == "none") {
                    c.gen_ansatz = AnsatzKind::None;
                } else {
                    throw ConfigError("expected xxrot, bblock or none, got '" + std::string(v) +
                                      "'");
                }
            },
            [](const ExperimentConfig &c) {
                switch (c.gen_ansatz) {
                case AnsatzKind::XXRot:
                    return std::string("xxrot");
                case AnsatzKind::BBlock:
                    return std::string("bblock");
                case AnsatzKind::None:
                    break;
                }
                return std::string("none");
            }},
        QGEN_KEY("generator.range", gen_range, to_size, size_str),
        QGEN_KEY("generator.entangler", gen_entangler, to_entangler, entangler_str),
        QGEN_KEY("generator.final_x", gen_final_x, to_bool, bool_str),
        QGEN_KEY("generator.theta", gen_theta, to_doubles, doubles_str),
        QGEN_KEY("generator.paulis", gen_paulis, to_paulis, strings_str),
        Key{"generator.post",
            [](ExperimentConfig &c, std::string_view v) {
                if (v == "none") {
                    c.gen_post.reset();
                } else if (v == "identity") {
                    c.gen_post = Activation::Identity;
                } else if (v == "tanh") {
                    c.gen_post = Activation::Tanh;
                } else {
                    throw ConfigError("expected none, identity or tanh, got '" + std::string(v) +
                                      "'");
                }
            },
            [](const ExperimentConfig &c) {
                if (!c.gen_post) {
                    return std::string("none");
                }
                return std::string(*c.gen_post == Activation::Tanh ? "tanh" : "identity");
            }},
        QGEN_KEY("generator.post_weights", gen_post_weights, to_doubles, doubles_str),
        QGEN_KEY("generator.post_bias", gen_post_bias, to_doubles, doubles_str),

        QGEN_KEY("data.theta", data_theta, to_doubles, doubles_str),
        QGEN_KEY("data.paulis", data_paulis, to_paulis, strings_str),

        QGEN_KEY("disc.hidden", disc_hidden, to_sizes, sizes_str),
        QGEN_KEY("disc.copies", disc_copies, to_size, size_str),
        QGEN_KEY("disc.range", disc_range, to_size, size_str),
        QGEN_KEY("disc.entangler", disc_entangler, to_entangler, entangler_str),
        QGEN_KEY("disc.final_x", disc_final_x, to_bool, bool_str),
        QGEN_KEY("disc.readout", disc_readout, to_size, size_str),
        QGEN_KEY("disc.theta", disc_theta, to_doubles, doubles_str),
        QGEN_KEY("disc.init_range", disc_init_range, to_double, format_shortest),

        QGEN_KEY("output.dir", out_dir, to_string_copy, identity_str),

        QGEN_KEY("gradcheck.points", gradcheck_points, to_size, size_str),
        QGEN_KEY("gradcheck.z", gradcheck_z, to_doubles, doubles_str),
    };
    return table;
}

#undef QGEN_KEY

constexpr std::string_view kVersionKey = "meta.version";

void set_key(ExperimentConfig &cfg, std::string_view key, std::string_view value) {
    if (key == kVersionKey) {
        return; // informational
    }
    for (const auto &k : keys()) {
        if (k.name == key) {
            try {
                k.set(cfg, value);
            } catch (const ConfigError &) {
                throw;
            } catch (const Error &e) {
                throw ConfigError(e.what());
            }
            return;
        }
    }
    throw ConfigError("unknown key '" + std::string(key) + "'");
}

std::pair<std::string_view, std::string_view> split_assignment(std::string_view line) {
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError("expected 'key = value', got '" + std::string(line) + "'");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) {
        throw ConfigError("missing key before '='");
    }
    return {key, trim(line.substr(eq + 1))};
}

void write_file(const std::filesystem::path &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) {
        throw Error("cannot write " + path.string());
    }
}

std::vector<PauliString> parse_paulis(const std::vector<std::string> &items) {
    std::vector<PauliString> out;
    for (const auto &s : items) {
        out.push_back(PauliString::parse(s));
    }
    return out;
}

} // namespace

// --- config ----------------------------------------------------------------------

EvalMode parse_mode(std::string_view text) {
    if (text == "exact") {
        return ExactMode{};
    }
    constexpr std::string_view prefix = "shots:";
    if (text.substr(0, prefix.size()) == prefix) {
        const auto n = parse_integer<std::uint64_t>(text.substr(prefix.size()));
        if (n && *n > 0) {
            return ShotMode{*n, 0};
        }
    }
    throw ConfigError("mode must be 'exact' or 'shots:<n>' with n > 0, got '" + std::string(text) +
                      "'");
}

std::string mode_to_string(const EvalMode &mode) {
    if (const auto *s = std::get_if<ShotMode>(&mode)) {
        return "shots:" + std::to_string(s->shots);
    }
    return "exact";
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig cfg;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        try {
            const auto [key, value] = split_assignment(line);
            set_key(cfg, key, value);
        } catch (const ConfigError &e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read config file " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ConfigError &e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void apply_override(ExperimentConfig &cfg, std::string_view assignment) {
    try {
        const auto [key, value] = split_assignment(assignment);
        set_key(cfg, key, value);
    } catch (const ConfigError &e) {
        throw ConfigError("--set " + std::string(assignment) + ": " + e.what());
    }
}

std::string serialize_config(const ExperimentConfig &cfg) {
    std::string out;
    for (const auto &k : keys()) {
        out += k.name + " = " + k.get(cfg) + "\n";
    }
    out += std::string(kVersionKey) + " = " + QGEN_VERSION + "\n";
    return out;
}

std::vector<std::string> config_keys() {
    std::vector<std::string> out;
    for (const auto &k : keys()) {
        out.push_back(k.name);
    }
    return out;
}

// --- models ----------------------------------------------------------------------

Models build_models(const ExperimentConfig &cfg) {
    try {
        Circuit encoder = product_encoder(1, cfg.gen_copies);
        Circuit ansatz = [&] {
            switch (cfg.gen_ansatz) {
            case AnsatzKind::XXRot:
                return generator_ansatz_2q();
            case AnsatzKind::BBlock:
                return b_block(cfg.gen_copies, cfg.gen_range, cfg.gen_entangler, cfg.gen_final_x);
            case AnsatzKind::None:
                break;
            }
            return Circuit(cfg.gen_copies);
        }();
        std::optional<PostProcessing> post;
        if (cfg.gen_post) {
            post = PostProcessing{cfg.gen_post_bias.size(), cfg.gen_post_weights,
                                  cfg.gen_post_bias, *cfg.gen_post};
        }
        Generator gen(std::move(encoder), std::move(ansatz), parse_paulis(cfg.gen_paulis),
                      cfg.gen_theta, std::move(post));

        Generator data_gen(product_encoder(1, 2), generator_ansatz_2q(),
                           parse_paulis(cfg.data_paulis), cfg.data_theta);

        const std::size_t n_in = gen.output_dim();
        if (cfg.train.scheme == Scheme::Classical) {
            std::vector<std::size_t> sizes{n_in};
            sizes.insert(sizes.end(), cfg.disc_hidden.begin(), cfg.disc_hidden.end());
            sizes.push_back(1);
            Rng rng = make_stream(cfg.train.seed, "init", 0);
            auto disc = ClassicalDiscriminator::initialized(sizes, rng);
            return {std::move(gen), std::move(disc), DataSource(std::move(data_gen))};
        }
        std::vector<double> theta = cfg.disc_theta;
        if (theta.empty()) {
            const auto n = n_in * cfg.disc_copies;
            const auto block = b_block(n, cfg.disc_range, cfg.disc_entangler, cfg.disc_final_x);
            Rng rng = make_stream(cfg.train.seed, "init", 1);
            theta.resize(block.n_trainable());
            for (auto &t : theta) {
                t = uniform(rng, -cfg.disc_init_range, cfg.disc_init_range);
            }
        }
        auto disc = bblock_discriminator(n_in, cfg.disc_copies, cfg.disc_range,
                                         cfg.disc_entangler, cfg.disc_final_x, cfg.disc_readout,
                                         std::move(theta));
        return {std::move(gen), std::move(disc), DataSource(std::move(data_gen))};
    } catch (const ConfigError &) {
        throw;
    } catch (const Error &e) {
        throw ConfigError(std::string("model construction: ") + e.what());
    }
}

// --- run -------------------------------------------------------------------------

std::string trace_csv(std::span<const EpochRecord> records) {
    std::string out = "epoch,C_d,C_g,KL,mean_gen,std_gen,mean_data,std_data\n";
    for (const auto &r : records) {
        out += std::to_string(r.epoch);
        for (double v : {r.c_d, r.c_g, r.kl, r.mean_gen, r.std_gen, r.mean_data, r.std_data}) {
            out += ',' + format_double(v);
        }
        out += '\n';
    }
    return out;
}

std::string histograms_json(std::span<const Snapshot> snapshots) {
    nlohmann::json root{{"snapshots", nlohmann::json::array()}};
    for (const auto &s : snapshots) {
        root["snapshots"].push_back({{"epoch", s.epoch},
                                     {"kl", s.kl},
                                     {"edges", s.edges},
                                     {"generated", s.gen_counts},
                                     {"data", s.data_counts}});
    }
    return root.dump(2) + "\n";
}

RunOutcome run_experiment(const ExperimentConfig &cfg, std::ostream &log) {
    cfg.train.validate();
    Models models = build_models(cfg);
    const std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "manifest.cfg", serialize_config(cfg));

    const std::size_t every = std::max<std::size_t>(1, cfg.train.epochs / 10);
    const auto progress = [&](const EpochRecord &r) {
        if (r.epoch % every == 0 || r.epoch == cfg.train.epochs) {
            log << "epoch " << r.epoch << "/" << cfg.train.epochs << std::fixed
                << std::setprecision(4) << "  C_d " << r.c_d << "  C_g " << r.c_g << "  KL "
                << r.kl << std::defaultfloat << '\n';
        }
    };
    RunOutcome outcome{train(cfg.train, models.generator, models.discriminator, models.source,
                             progress),
                       dir};
    write_file(dir / "trace.csv", trace_csv(outcome.result.records));
    write_file(dir / "histograms.json", histograms_json(outcome.result.snapshots));
    write_file(dir / "checkpoint.json",
               serialize_checkpoint(models.generator, models.discriminator));
    return outcome;
}

// --- gradcheck -------------------------------------------------------------------

bool GradcheckReport::passed() const {
    if (domain_error) {
        return false;
    }
    return std::all_of(entries.begin(), entries.end(),
                       [&](const GradcheckEntry &e) { return e.max_discrepancy < tolerance; });
}

namespace {

constexpr double kFdStep = 1e-5;

using ScalarFn = std::function<double(std::span<const double>)>;

void compare(GradcheckEntry &entry, const ScalarFn &f, std::vector<double> at,
             std::span<const double> analytic) {
    for (std::size_t i = 0; i < at.size(); ++i) {
        const double x0 = at[i];
        at[i] = x0 + kFdStep;
        const double up = f(at);
        at[i] = x0 - kFdStep;
        const double down = f(at);
        at[i] = x0;
        const double fd = (up - down) / (2 * kFdStep);
        entry.max_discrepancy = std::max(entry.max_discrepancy, std::abs(fd - analytic[i]));
        ++entry.checked;
    }
}

double weighted_mean(std::span<const double> v, std::span<const double> w) {
    double acc = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        acc += v[i] * w[i];
    }
    return acc / static_cast<double>(v.size());
}

NodeId weighted_mean_node(Tape &tape, NodeId v, const std::vector<double> &w) {
    return tape.mean(tape.multiply(v, tape.constant(w)));
}

std::vector<double> adjoints_of(const Tape &tape, std::span<const NodeId> ids) {
    std::vector<double> g;
    for (auto id : ids) {
        const auto &a = tape.adjoint(id);
        g.insert(g.end(), a.begin(), a.end());
    }
    return g;
}

} // namespace

GradcheckReport gradcheck(const ExperimentConfig &cfg) {
    GradcheckReport report;
    Models m = build_models(cfg);
    const Generator &gen = m.generator;
    const Discriminator &disc = m.discriminator;
    Rng rng = make_stream(cfg.train.seed, "gradcheck");

    std::vector<std::vector<double>> zs;
    if (!cfg.gradcheck_z.empty()) {
        if (cfg.gradcheck_z.size() % gen.noise_dim() != 0) {
            throw ConfigError("gradcheck.z length is not a multiple of the noise dimension");
        }
        for (std::size_t i = 0; i < cfg.gradcheck_z.size(); i += gen.noise_dim()) {
            zs.emplace_back(cfg.gradcheck_z.begin() + static_cast<std::ptrdiff_t>(i),
                            cfg.gradcheck_z.begin() +
                                static_cast<std::ptrdiff_t>(i + gen.noise_dim()));
        }
    } else {
        for (std::size_t i = 0; i < cfg.gradcheck_points; ++i) {
            std::vector<double> z(gen.noise_dim());
            for (auto &v : z) {
                v = uniform(rng, -1.0, 1.0);
            }
            zs.push_back(std::move(z));
        }
    }
    std::vector<double> w(gen.output_dim());
    for (auto &v : w) {
        v = uniform(rng, -1.0, 1.0);
    }

    GradcheckEntry gen_params{"generator.params"}, gen_input{"generator.input"},
        disc_params{"discriminator.params"}, disc_input{"discriminator.input"},
        loss_d{"loss.C_d"}, loss_g{"loss.C_g"};
    const auto gblocks = gen.param_blocks();
    const auto dblocks = param_blocks(disc);
    const auto gflat = flatten(gblocks);
    const auto dflat = flatten(dblocks);

    const auto gen_with = [&](std::span<const double> p) {
        Generator g = gen;
        g.set_flat_params(p);
        return g;
    };
    const auto disc_with = [&](std::span<const double> p) {
        Discriminator d = disc;
        auto blocks = dblocks;
        unflatten(p, blocks);
        set_param_blocks(d, blocks);
        return d;
    };

    try {
        std::vector<std::vector<double>> xs_fake, xs_real;
        for (const auto &z : zs) {
            xs_fake.push_back(gen.generate(z));
            xs_real.push_back(m.source.sample(z));
        }

        for (const auto &z : zs) {
            {
                Tape tape;
                Bindings b;
                const auto ids = declare_blocks(tape, gblocks, true, b);
                const NodeId root =
                    weighted_mean_node(tape, gen.build(tape, tape.constant(z), ids), w);
                tape.forward(b, root);
                tape.backward();
                compare(gen_params, [&](std::span<const double> p) {
                    return weighted_mean(gen_with(p).generate(z), w);
                }, gflat, adjoints_of(tape, ids));
            }
            {
                Tape tape;
                Bindings b;
                const auto ids = declare_blocks(tape, gblocks, false, b);
                const NodeId zin = tape.input(vector_shape(z.size()), "z");
                b[zin] = z;
                const NodeId root = weighted_mean_node(tape, gen.build(tape, zin, ids), w);
                tape.forward(b, root);
                tape.backward();
                compare(gen_input, [&](std::span<const double> zz) {
                    return weighted_mean(gen.generate(zz), w);
                }, z, tape.adjoint(zin));
            }
        }

        const auto all_x = [&] {
            auto v = xs_fake;
            v.insert(v.end(), xs_real.begin(), xs_real.end());
            return v;
        }();
        for (const auto &x : all_x) {
            {
                Tape tape;
                Bindings b;
                const auto ids = declare_blocks(tape, dblocks, true, b);
                const NodeId root = build(disc, tape, tape.constant(x), ids);
                tape.forward(b, root);
                tape.backward();
                compare(disc_params, [&](std::span<const double> p) {
                    return discriminate(disc_with(p), x);
                }, dflat, adjoints_of(tape, ids));
            }
            {
                Tape tape;
                Bindings b;
                const auto ids = declare_blocks(tape, dblocks, false, b);
                const NodeId xin = tape.input(vector_shape(x.size()), "x");
                b[xin] = x;
                const NodeId root = build(disc, tape, xin, ids);
                tape.forward(b, root);
                tape.backward();
                compare(disc_input, [&](std::span<const double> xx) {
                    return discriminate(disc, xx);
                }, x, tape.adjoint(xin));
            }
        }

        const std::size_t n = zs.size();
        if (n > 0) {
            const double real_t = 1.0 - cfg.train.label_smooth;
            const std::vector<double> rt(n, real_t), ft(n, 0.0);
            {
                Tape tape;
                Bindings b;
                const auto ids = declare_blocks(tape, dblocks, true, b);
                std::vector<NodeId> probs;
                for (const auto &x : xs_real) {
                    probs.push_back(build(disc, tape, tape.constant(x), ids));
                }
                for (const auto &x : xs_fake) {
                    probs.push_back(build(disc, tape, tape.constant(x), ids));
                }
                std::vector<double> targets(rt);
                targets.insert(targets.end(), ft.begin(), ft.end());
                const NodeId root =
                    log_likelihood_sum(tape, probs, targets, -0.5 / static_cast<double>(n));
                tape.forward(b, root);
                tape.backward();
                compare(loss_d, [&](std::span<const double> p) {
                    const auto d = disc_with(p);
                    std::vector<double> dr, df;
                    for (const auto &x : xs_real) {
                        dr.push_back(discriminate(d, x));
                    }
                    for (const auto &x : xs_fake) {
                        df.push_back(discriminate(d, x));
                    }
                    return discriminator_loss(dr, rt, df, ft);
                }, dflat, adjoints_of(tape, ids));
            }
            {
                Tape tape;
                Bindings b;
                const auto gids = declare_blocks(tape, gblocks, true, b);
                const auto dids = declare_blocks(tape, dblocks, false, b);
                std::vector<NodeId> probs;
                for (const auto &z : zs) {
                    probs.push_back(
                        build(disc, tape, gen.build(tape, tape.constant(z), gids), dids));
                }
                const NodeId root = generator_loss_node(tape, probs, cfg.train.gen_loss);
                tape.forward(b, root);
                tape.backward();
                compare(loss_g, [&](std::span<const double> p) {
                    const auto g = gen_with(p);
                    std::vector<double> df;
                    for (const auto &z : zs) {
                        df.push_back(discriminate(disc, g.generate(z)));
                    }
                    return generator_loss(df, cfg.train.gen_loss);
                }, gflat, adjoints_of(tape, gids));
            }
        }
    } catch (const DomainError &e) {
        report.domain_error = std::string("input on the encoding domain boundary: ") + e.what();
    }
    report.entries = {gen_params, gen_input, disc_params, disc_input, loss_d, loss_g};
    return report;
}

// --- sample ----------------------------------------------------------------------

std::string sample_lines(const Checkpoint &ckpt, std::size_t count, std::uint64_t seed,
                         const EvalMode &mode) {
    const Generator &gen = ckpt.generator;
    Rng rng = make_stream(seed, "sample");
    std::string out;
    std::vector<double> z(gen.noise_dim());
    for (std::size_t i = 0; i < count; ++i) {
        for (auto &v : z) {
            v = uniform(rng, -1.0, 1.0);
        }
        EvalMode m = ExactMode{};
        if (const auto *s = std::get_if<ShotMode>(&mode)) {
            m = ShotMode{s->shots, derive_seed(seed, "shots", i)};
        }
        const auto x = gen.generate(z, m);
        std::string line;
        for (double v : z) {
            line += format_double(v) + ',';
        }
        for (std::size_t k = 0; k < x.size(); ++k) {
            line += format_double(x[k]) + (k + 1 < x.size() ? "," : "\n");
        }
        out += line;
    }
    return out;
}

} // namespace qgen
