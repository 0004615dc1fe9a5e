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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dense_oracle.hpp"
#include "qgen/circuits.hpp"
#include "qgen/gradients.hpp"
#include "qgen/random.hpp"
#include "qgen/simulator.hpp"
#include "qgen/text.hpp"
#include "random_circuits.hpp"
#include "random_tapes.hpp"

namespace fs = std::filesystem;
using namespace qgen;
using testing_support::random_circuit;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string &name, const std::function<Verdict()> &check) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = check();
    } catch (const std::exception &e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    while (!v.detail.empty() && (v.detail.back() == ' ' || v.detail.back() == ';')) {
        v.detail.pop_back();
    }
    if (!v.pass) {
        ++failures;
    }
    std::printf("%s [%d] %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", id, name.c_str(),
                v.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

int qgen_cli(const std::string &args) {
    const std::string cmd = std::string(QGEN_BINARY) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct TraceRow {
    double c_d, c_g, kl;
};

std::vector<TraceRow> read_trace(const fs::path &p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    std::vector<TraceRow> rows;
    while (std::getline(in, line)) {
        std::vector<double> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            f.push_back(parse_double(cell).value_or(std::nan("")));
        }
        rows.push_back({f.at(1), f.at(2), f.at(3)});
    }
    return rows;
}

Verdict gradient_exactness() {
    Rng rng(1001);
    double worst = 0;
    std::size_t count = 0;
    for (int c = 0; c < 100; ++c) {
        auto rc = random_circuit(rng, 4, 12, 12, true);
        const auto p = testing_support::random_pauli(rng, rc.circuit.n_qubits());
        const auto grad = param_gradient(rc.circuit, p, rc.inputs, rc.params);
        const auto f = [&](const std::vector<double> &th) {
            return expectation(run(rc.circuit, rc.inputs, th), p);
        };
        for (std::size_t k = 0; k < rc.params.size(); ++k) {
            const double fd = testing_support::central_difference(f, rc.params, k, 1e-5);
            worst = std::max(worst, std::abs(grad[k] - fd));
            ++count;
        }
    }
    return {worst < 1e-6, std::to_string(count) + " derivatives, max |shift - fd| = " + num(worst)};
}

Verdict hybrid_chain_rule() {
    Rng rng(2002);
    double worst = 0;
    for (int t = 0; t < 50; ++t) {
        auto rt = testing_support::random_hybrid_tape(rng);
        worst = std::max(worst, testing_support::max_adjoint_error(rt, 1e-5));
    }
    return {worst < 1e-5, "50 tapes, max |adjoint - fd| = " + num(worst)};
}

Verdict oracle_equivalence() {
    Rng rng(3003);
    double amp = 0;
    double norm = 0;
    for (int c = 0; c < 500; ++c) {
        const auto rc = random_circuit(rng, 4, 12, 16, true);
        const auto n = rc.circuit.n_qubits();
        const auto psi = run(rc.circuit, rc.inputs, rc.params);
        const auto ref = oracle::run(n, resolve(rc.circuit, rc.inputs, rc.params));
        for (std::size_t i = 0; i < psi.size(); ++i) {
            amp = std::max(amp, std::abs(psi[i] - ref(static_cast<Eigen::Index>(i))));
        }
        norm = std::max(norm, std::abs(psi.norm_squared() - 1.0));
    }
    return {amp < 1e-10 && norm < 1e-12,
            "max amplitude error " + num(amp) + ", max norm error " + num(norm)};
}

struct SchemeRun {
    bool ok = false;
    std::string detail;
    std::vector<TraceRow> rows;
    double seconds = 0;
};

SchemeRun run_bundled(const std::string &name, const fs::path &work) {
    SchemeRun r;
    const fs::path cfg = fs::path(QGEN_CONFIG_DIR) / (name + ".cfg");
    const fs::path out = work / name;
    const int code = qgen_cli("run --config " + cfg.string() + " --mode exact --out " + out.string());
    if (code != 0) {
        r.detail = name + ": qgen run exited " + std::to_string(code);
        return r;
    }
    r.rows = read_trace(out / "trace.csv");
    if (r.rows.size() < 20) {
        r.detail = name + ": fewer than 20 epochs";
        return r;
    }
    r.ok = true;
    return r;
}

Verdict equilibrium(const std::vector<std::pair<std::string, SchemeRun>> &runs) {
    bool pass = true;
    std::string detail;
    for (const auto &[name, r] : runs) {
        if (!r.ok) {
            pass = false;
            detail += r.detail + "; ";
            continue;
        }
        double cd = 0;
        double cg = 0;
        for (std::size_t i = r.rows.size() - 20; i < r.rows.size(); ++i) {
            cd += r.rows[i].c_d / 20;
            cg += r.rows[i].c_g / 20;
        }
        const bool ok = cd >= 0.55 && cd <= 0.85 && cg >= 0.55 && cg <= 0.85;
        pass = pass && ok;
        detail += name + " C_d " + num(cd) + " C_g " + num(cg) + " in " + num(r.seconds) + " s; ";
    }
    return {pass, detail};
}

Verdict distribution(const std::vector<std::pair<std::string, SchemeRun>> &runs) {
    bool pass = true;
    std::string detail;
    for (const auto &[name, r] : runs) {
        if (!r.ok) {
            pass = false;
            detail += r.detail + "; ";
            continue;
        }
        const double first = r.rows.front().kl;
        const double last = r.rows.back().kl;
        pass = pass && last < 0.05 && first > 0.2;
        detail += name + " KL " + num(first) + " -> " + num(last) + "; ";
    }
    return {pass, detail};
}

Verdict shot_consistency() {
    const Circuit c = compose(product_encoder(1, 2), generator_ansatz_2q());
    const std::vector<double> z{0.3};
    const std::vector<double> theta{2.3, 2.3, 1.0};
    const auto state = run(c, z, theta);
    const auto p = PauliString::z(0);
    const double exact = expectation(state, p);
    const int n = 200;
    std::vector<double> est;
    for (int s = 0; s < n; ++s) {
        Rng rng(derive_seed(424242, "shots", static_cast<std::uint64_t>(s)));
        est.push_back(sample_expectation(state, p, 10000, rng));
    }
    const double mean = std::accumulate(est.begin(), est.end(), 0.0) / n;
    double var = 0;
    for (double e : est) {
        var += (e - mean) * (e - mean);
    }
    const double sd = std::sqrt(var / (n - 1));
    const double predicted = std::sqrt(1 - exact * exact) / 100;
    const double se = predicted / std::sqrt(double(n));
    const bool ok = std::abs(sd - predicted) <= 0.25 * predicted &&
                    std::abs(mean - exact) <= 4 * se;
    return {ok, "<P> " + num(exact) + ", sd " + num(sd) + " vs " + num(predicted) +
                    ", mean offset " + num(std::abs(mean - exact) / se) + " SE"};
}

Verdict bblock_structure() {
    for (std::size_t n = 2; n <= 8; ++n) {
        for (std::size_t r = 1; r < n; ++r) {
            const auto block = b_block(n, r, EntanglerKind::CPhase, false);
            std::vector<std::pair<std::size_t, std::size_t>> edges;
            for (const auto &op : block.ops()) {
                if (op.qubits.size() == 2) {
                    edges.emplace_back(op.qubits[0], op.qubits[1]);
                }
            }
            const std::size_t expected = n / std::gcd(n, r);
            if (edges.size() != expected) {
                return {false, "B(" + std::to_string(n) + "," + std::to_string(r) + ") has " +
                                   std::to_string(edges.size()) + " gates"};
            }
            if (std::gcd(n, r) != 1) {
                continue;
            }
            // Single n-cycle: every qubit has degree 2 and a walk visits all of them.
            std::vector<std::vector<std::size_t>> adj(n);
            for (auto [a, b] : edges) {
                adj[a].push_back(b);
                adj[b].push_back(a);
            }
            std::set<std::size_t> seen{0};
            std::vector<std::size_t> stack{0};
            bool degree_ok = true;
            while (!stack.empty()) {
                const auto v = stack.back();
                stack.pop_back();
                for (auto w : adj[v]) {
                    if (seen.insert(w).second) {
                        stack.push_back(w);
                    }
                }
            }
            for (const auto &a : adj) {
                degree_ok = degree_ok && a.size() == 2;
            }
            if (!degree_ok || seen.size() != n) {
                return {false, "B(" + std::to_string(n) + "," + std::to_string(r) +
                                   ") is not a single cycle"};
            }
        }
    }
    return {true, "2 <= n <= 8, 1 <= r < n"};
}

Verdict determinism(const fs::path &work) {
    std::string detail;
    bool pass = true;
    for (const std::string name : {"scheme1", "scheme2"}) {
        const fs::path cfg = fs::path(QGEN_CONFIG_DIR) / (name + ".cfg");
        const auto a = work / ("det_a_" + name);
        const auto b = work / ("det_b_" + name);
        if (qgen_cli("run --config " + cfg.string() + " --epochs 25 --out " + a.string()) != 0 ||
            qgen_cli("run --config " + (a / "manifest.cfg").string() + " --out " + b.string()) !=
                0) {
            return {false, name + ": run failed"};
        }
        const bool same = slurp(a / "trace.csv") == slurp(b / "trace.csv") &&
                          slurp(a / "checkpoint.json") == slurp(b / "checkpoint.json") &&
                          !slurp(a / "trace.csv").empty();
        pass = pass && same;
        detail += name + (same ? " identical; " : " differs; ");
    }
    return {pass, detail};
}

} // namespace

int main() {
    const fs::path work = fs::temp_directory_path() / ("qgen_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(work);

    report(1, "gradient exactness", gradient_exactness);
    report(2, "hybrid chain rule", hybrid_chain_rule);
    report(3, "simulator oracle equivalence", oracle_equivalence);

    std::vector<std::pair<std::string, SchemeRun>> runs;
    for (const std::string name : {"scheme1", "scheme2"}) {
        const auto t0 = std::chrono::steady_clock::now();
        auto r = run_bundled(name, work);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.seconds = secs;
        if (secs > 300) {
            r.ok = false;
            r.detail = name + ": took " + num(secs) + " s";
        }
        runs.emplace_back(name, std::move(r));
    }
    report(4, "equilibrium reproduction", [&] { return equilibrium(runs); });
    report(5, "distribution learning", [&] { return distribution(runs); });
    report(6, "shot-mode consistency", shot_consistency);
    report(7, "B(n,r) structure", bblock_structure);
    report(8, "determinism", [&] { return determinism(work); });

    fs::remove_all(work);
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
