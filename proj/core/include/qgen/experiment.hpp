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
 * Experiment plumbing behind the command-line tool: the flat key-value
 * configuration, model construction, and the run / gradcheck / sample drivers.
 *
 * Config files hold one `section.key = value` per line; `#` starts a comment
 * and list values are comma separated. Unknown keys are errors. The manifest a
 * run emits is itself a complete config.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "qgen/circuits.hpp"
#include "qgen/models.hpp"
#include "qgen/training.hpp"

namespace qgen {

enum class AnsatzKind { XXRot, BBlock, None };

struct ExperimentConfig {
    TrainConfig train;

    // Generator: one noise component written onto `gen_copies` qubits.
    std::size_t gen_copies = 2;
    AnsatzKind gen_ansatz = AnsatzKind::XXRot;
    std::size_t gen_range = 1;
    EntanglerKind gen_entangler = EntanglerKind::CR3;
    bool gen_final_x = false;
    std::vector<double> gen_theta = kGeneratorInitTheta;
    std::vector<std::string> gen_paulis{"Z0"};
    std::optional<Activation> gen_post; // absent: raw expectations
    std::vector<double> gen_post_weights;
    std::vector<double> gen_post_bias;

    // Real-data source: the two-qubit reference circuit.
    std::vector<double> data_theta = kDataSourceTheta;
    std::vector<std::string> data_paulis{"X0"};

    // Discriminator: MLP hidden sizes for the classical scheme, B(n, r)
    // block settings for the quantum one.
    std::vector<std::size_t> disc_hidden{16, 16};
    std::size_t disc_copies = 3;
    std::size_t disc_range = 1;
    EntanglerKind disc_entangler = EntanglerKind::CPhase;
    bool disc_final_x = true;
    std::size_t disc_readout = 0;
    std::vector<double> disc_theta; // empty: drawn uniformly in +-disc_init_range
    double disc_init_range = 3.141592653589793;

    std::string out_dir = "runs/out";

    std::size_t gradcheck_points = 10;
    std::vector<double> gradcheck_z; // empty: random points
};

/// Throws ConfigError with the 1-based line number on bad input.
[[nodiscard]] ExperimentConfig parse_config(std::string_view text);
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path &path);
/// Applies one `key=value` override.
void apply_override(ExperimentConfig &cfg, std::string_view assignment);
/// Every key with its resolved value; parse_config() reads it back exactly.
[[nodiscard]] std::string serialize_config(const ExperimentConfig &cfg);
[[nodiscard]] std::vector<std::string> config_keys();

[[nodiscard]] EvalMode parse_mode(std::string_view text);
[[nodiscard]] std::string mode_to_string(const EvalMode &mode);

struct Models {
    Generator generator;
    Discriminator discriminator;
    DataSource source;
};

/// Initial models; random initial values come from the "init" seed stream.
[[nodiscard]] Models build_models(const ExperimentConfig &cfg);

struct RunOutcome {
    TrainResult result;
    std::filesystem::path out_dir;
};

/// Trains and writes trace.csv, histograms.json, checkpoint.json and
/// manifest.cfg into cfg.out_dir. Progress lines go to `log`.
RunOutcome run_experiment(const ExperimentConfig &cfg, std::ostream &log);

[[nodiscard]] std::string trace_csv(std::span<const EpochRecord> records);
[[nodiscard]] std::string histograms_json(std::span<const Snapshot> snapshots);

struct GradcheckEntry {
    std::string component;
    std::size_t checked = 0; // derivatives compared
    double max_discrepancy = 0;
};

struct GradcheckReport {
    std::vector<GradcheckEntry> entries;
    std::optional<std::string> domain_error;
    double tolerance = 1e-5;
    [[nodiscard]] bool passed() const;
};

/// Compares tape / shift-rule derivatives against central finite differences
/// (step 1e-5) for each model component and both losses, in exact mode.
[[nodiscard]] GradcheckReport gradcheck(const ExperimentConfig &cfg);

/// `count` lines of "z_0,...,x_0,..." drawn from the checkpoint's generator.
[[nodiscard]] std::string sample_lines(const Checkpoint &ckpt, std::size_t count,
                                       std::uint64_t seed, const EvalMode &mode);

} // namespace qgen
