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

// qgen: train variational quantum generators, check gradients, draw samples.
//
//   qgen run --config configs/scheme1.cfg --out runs/s1
//   qgen gradcheck --config configs/scheme2.cfg
//   qgen sample --checkpoint runs/s1/checkpoint.json --count 1000 --out s.csv
//
// Exit status: 0 success, 1 usage or configuration error, 2 runtime abort.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qgen/errors.hpp"
#include "qgen/experiment.hpp"
#include "qgen/text.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kAbort = 2;

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> epochs;
    std::optional<std::string> mode;
    std::optional<std::string> out;
    std::vector<std::string> sets;
};

qgen::ExperimentConfig resolve(const CommonFlags &f) {
    auto cfg = qgen::load_config(f.config);
    for (const auto &s : f.sets) {
        qgen::apply_override(cfg, s);
    }
    if (f.seed) {
        cfg.train.seed = *f.seed;
    }
    if (f.epochs) {
        cfg.train.epochs = *f.epochs;
    }
    if (f.mode) {
        cfg.train.mode = qgen::parse_mode(*f.mode);
    }
    if (f.out) {
        cfg.out_dir = *f.out;
    }
    cfg.train.validate();
    return cfg;
}

int cmd_run(const CommonFlags &flags) {
    const auto cfg = resolve(flags);
    auto outcome = qgen::run_experiment(cfg, std::cerr);
    const auto &r = outcome.result;
    if (r.aborted()) {
        std::cerr << "qgen: " << *r.abort_reason << "\n"
                  << "qgen: partial trace (" << r.records.size() << " epochs) written to "
                  << outcome.out_dir.string() << "\n";
        return kAbort;
    }
    if (!r.records.empty()) {
        const auto &last = r.records.back();
        std::cout << "final KL " << qgen::format_double(last.kl) << " after " << last.epoch
                  << " epochs; artifacts in " << outcome.out_dir.string() << "\n";
    } else {
        std::cout << "no epochs run; artifacts in " << outcome.out_dir.string() << "\n";
    }
    return kOk;
}

int cmd_gradcheck(const CommonFlags &flags) {
    const auto cfg = resolve(flags);
    const auto report = qgen::gradcheck(cfg);
    for (const auto &e : report.entries) {
        std::cout << std::left << std::setw(22) << e.component;
        if (e.checked == 0) {
            std::cout << (report.domain_error ? "not checked\n" : "no derivatives (vacuous pass)\n");
        } else {
            std::cout << "max |analytic - fd| = " << std::scientific << std::setprecision(3)
                      << e.max_discrepancy << std::defaultfloat << " over " << e.checked
                      << (e.max_discrepancy < report.tolerance ? "  ok" : "  FAIL") << "\n";
        }
    }
    if (report.domain_error) {
        std::cout << "domain: " << *report.domain_error << "\n";
    }
    const bool ok = report.passed();
    std::cout << (ok ? "gradcheck passed" : "gradcheck failed") << " (tolerance "
              << report.tolerance << ")\n";
    return ok ? kOk : kAbort;
}

int cmd_sample(const std::string &checkpoint, std::size_t count, std::uint64_t seed,
               const std::string &mode, const std::optional<std::string> &out) {
    std::ifstream in(checkpoint, std::ios::binary);
    if (!in) {
        throw qgen::ConfigError("cannot read checkpoint " + checkpoint);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const auto ckpt = qgen::parse_checkpoint(buf.str());
    const auto text = qgen::sample_lines(ckpt, count, seed, qgen::parse_mode(mode));
    if (out) {
        std::ofstream f(*out, std::ios::binary | std::ios::trunc);
        f << text;
        if (!f) {
            throw qgen::Error("cannot write " + *out);
        }
    } else {
        std::cout << text;
    }
    return kOk;
}

void add_common(CLI::App *cmd, CommonFlags &f) {
    cmd->add_option("--config", f.config, "experiment config file")->required();
    cmd->add_option("--seed", f.seed, "master seed (overrides the config)");
    cmd->add_option("--epochs", f.epochs, "number of epochs (overrides the config)");
    cmd->add_option("--mode", f.mode, "exact or shots:<n>");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--set", f.sets, "key=value override, repeatable");
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Variational quantum generator training and diagnostics"};
    app.set_version_flag("--version", QGEN_VERSION);
    app.require_subcommand(1);

    CommonFlags run_flags, check_flags;
    auto *run = app.add_subcommand("run", "train a generator and write its artifacts");
    add_common(run, run_flags);
    auto *check = app.add_subcommand("gradcheck", "compare gradients against finite differences");
    add_common(check, check_flags);

    std::string checkpoint;
    std::size_t count = 1000;
    std::uint64_t seed = 7;
    std::string mode = "exact";
    std::optional<std::string> sample_out;
    auto *sample = app.add_subcommand("sample", "draw samples from a trained generator");
    sample->add_option("--checkpoint", checkpoint, "checkpoint.json from a run")->required();
    sample->add_option("--count", count, "number of samples");
    sample->add_option("--seed", seed, "noise seed");
    sample->add_option("--mode", mode, "exact or shots:<n>");
    sample->add_option("--out", sample_out, "output file (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*run) {
            return cmd_run(run_flags);
        }
        if (*check) {
            return cmd_gradcheck(check_flags);
        }
        return cmd_sample(checkpoint, count, seed, mode, sample_out);
    } catch (const qgen::ConfigError &e) {
        std::cerr << "qgen: " << e.what() << "\n";
        return kUsage;
    } catch (const qgen::ParseError &e) {
        std::cerr << "qgen: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception &e) {
        std::cerr << "qgen: " << e.what() << "\n";
        return kAbort;
    }
}
