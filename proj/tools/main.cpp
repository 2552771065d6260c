// Copyright 2026 The Statewalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "statewalk/config.hpp"

namespace {

using namespace statewalk;

struct CommonFlags {
    std::string config_path;
    cli::Overrides overrides;
};

void attach_common_flags(CLI::App *cmd, CommonFlags &flags, bool with_walk) {
    cmd->add_option("--config", flags.config_path, "JSON configuration document");
    cmd->add_option("--seed", flags.overrides.seed, "master seed (overrides the document)");
    cmd->add_option("--out", flags.overrides.out_dir, "output directory");
    cmd->add_option("--threads", flags.overrides.threads, "worker threads (0 = auto)");
    if (with_walk) {
        cmd->add_option("--trials", flags.overrides.trials, "number of walk trials");
        cmd->add_option("--epsilon", flags.overrides.epsilon, "detector radius (rad)");
        cmd->add_option("--dt", flags.overrides.dt, "walk step dt");
        cmd->add_option("--gue-scale", flags.overrides.gue_scale, "GUE scale s");
        cmd->add_option("--max-steps", flags.overrides.max_steps, "censoring cap");
    }
}

nlohmann::json load_document(const std::string &path) {
    if (path.empty()) {
        return nlohmann::json::object();
    }
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("config: cannot open " + path);
    }
    nlohmann::json document;
    try {
        in >> document;
    } catch (const nlohmann::json::parse_error &error) {
        throw ValidationError(std::string("config: ") + error.what());
    }
    return document;
}

int run_scenario(const std::string &name, const CommonFlags &flags) {
    const auto document = load_document(flags.config_path);
    const auto run_config = cli::parse_and_validate(name, document, flags.overrides);
    const auto report = cli::run(run_config);
    const auto files = cli::emit(report, run_config, run_config.out_dir);

    std::printf("scenario %s (seed %llu)\n", report.scenario.c_str(),
                static_cast<unsigned long long>(report.seed));
    for (const auto &flag : report.flags) {
        std::printf("  [%s] %s: %.6g %s %.6g\n", flag.pass ? "pass" : "FAIL", flag.name.c_str(),
                    flag.value, flag.comparison.c_str(), flag.threshold);
    }
    for (const auto &[metric, value] : report.metrics) {
        std::printf("  %s = %.6g\n", metric.c_str(), value);
    }
    for (const auto &file : files) {
        std::printf("  wrote %s\n", file.c_str());
    }
    return 0;
}

// ---------------------------------------------------------------------------
// selftest: quick library-level property checks, seconds not minutes.

int selftest() {
    int failures = 0;
    auto check = [&](bool pass, const char *name) {
        std::printf("[%s] %s\n", pass ? "pass" : "FAIL", name);
        if (!pass) {
            ++failures;
        }
    };

    rng::Xoshiro256 gen(99);
    auto random_state = [&](Eigen::Index n) {
        StateVector v(n);
        for (Eigen::Index k = 0; k < n; ++k) {
            v[k] = Complex(gen.next_normal(), gen.next_normal());
        }
        return normalize(v);
    };

    {
        bool ok = true;
        for (Eigen::Index n : {2, 8}) {
            for (int rep = 0; rep < 200; ++rep) {
                const Ray a(random_state(n)), b(random_state(n)), c(random_state(n));
                const double ab = fs_distance(a, b);
                ok = ok && std::abs(ab - fs_distance(b, a)) < 1e-12;
                ok = ok && fs_distance(a, c) <= ab + fs_distance(b, c) + 1e-10;
                const double theta = gen.next_double() * 6.28;
                ok = ok &&
                     std::abs(fs_distance(Ray(std::exp(Complex(0, theta)) * a.representative()),
                                          b) -
                              ab) < 1e-12;
            }
        }
        check(ok, "fs_distance: symmetry, triangle inequality, phase invariance");
    }
    {
        bool ok = true;
        for (int rep = 0; rep < 100; ++rep) {
            const Ray base(random_state(6));
            const StateVector v = random_state(6);
            const auto t = tangent_project(base, v);
            ok = ok && std::abs(inner(base.representative(), t.direction)) < 1e-12;
            ok = ok && (tangent_project(base, t.direction).direction - t.direction).norm() < 1e-12;
        }
        check(ok, "tangent_project: orthogonality and idempotence");
    }
    {
        const packets::Grid grid{256, -16.0, 16.0, 1};
        const double sigma = 0.8;
        bool ok = true;
        for (double sep : {0.5, 2.0, 5.0}) {
            const StateVector a = packets::make_position_packet(grid, {-0.5 * sep}, sigma);
            const StateVector b = packets::make_position_packet(grid, {0.5 * sep}, sigma);
            ok = ok &&
                 std::abs(std::abs(inner(a, b)) - packets::overlap_displaced(sep, sigma)) < 1e-8;
        }
        ok = ok && std::abs(packets::overlap_centered(1.0, 1.0, 3) - 1.0) < 1e-14;
        const auto projection = packets::project_to_manifold(
            packets::make_position_packet(grid, {2.5}, sigma),
            packets::ManifoldSpec{packets::ManifoldKind::Position, sigma, grid, 1});
        ok = ok && projection.distance <= 1e-6 && std::abs(projection.params[0] - 2.5) < 1e-5;
        check(ok, "packets: closed-form overlaps match the grid; members project to themselves");
    }
    {
        gue::GueSampler a(6, 1.1, 7), b(6, 1.1, 7);
        bool ok = true;
        double trace_sq = 0.0;
        const int draws = 4000;
        for (int d = 0; d < draws; ++d) {
            const auto ha = a.sample();
            ok = ok && ha == b.sample();
            ok = ok && (ha - ha.adjoint()).cwiseAbs().maxCoeff() == 0.0;
            trace_sq += (ha * ha).trace().real();
        }
        trace_sq /= draws;
        ok = ok && std::abs(trace_sq - 36.0 * 1.21) / (36.0 * 1.21) < 0.1;
        check(ok, "gue: Hermiticity, seed determinism, E[Tr H^2] = N^2 s^2");
    }
    {
        bool ok = true;
        dynamics::StepConfig cfg;
        cfg.dt = 0.05;
        for (int n : {2, 8, 40}) {
            gue::GueSampler sampler(n, 1.0, 17 + n);
            StateVector psi = random_state(n);
            for (int rep = 0; rep < 10; ++rep) {
                psi = dynamics::random_step(psi, sampler, cfg);
                ok = ok && std::abs(psi.squaredNorm() - 1.0) < 1e-10;
            }
        }
        check(ok, "random_step: unitarity on every propagator path");
    }
    {
        const packets::Grid grid{512, -20.0, 20.0, 1};
        dynamics::GridHamiltonian free_h(grid, 1.0,
                                         [](const std::vector<double> &) { return 0.0; });
        const StateVector psi0 = packets::make_position_packet(grid, {0.0}, 1.0);
        const StateVector psi = dynamics::evolve_grid(psi0, free_h, 0.01, 200);
        double mean = 0.0, second = 0.0;
        for (int k = 0; k < grid.points_per_axis; ++k) {
            const double x = grid.node(k);
            mean += x * std::norm(psi[k]);
            second += x * x * std::norm(psi[k]);
        }
        const double variance = second - mean * mean;
        const double expected = 2.0;  // sigma^2 (1 + (t/(2 m sigma^2))^2) at t = 2
        check(std::abs(variance - expected) / expected < 1e-3,
              "evolve_grid: free spreading matches the analytic law");
    }
    {
        const auto detectors = measure::DetectorSet::full_basis(3, 0.15);
        StateVector psi0(3);
        psi0 << std::sqrt(0.5), std::sqrt(0.3), std::sqrt(0.2);
        dynamics::StepConfig cfg;
        cfg.dt = 0.05;
        const auto s1 = measure::run_trials(48, Ray(psi0), detectors, cfg, 4242, 100000, 1);
        const auto s2 = measure::run_trials(48, Ray(psi0), detectors, cfg, 4242, 100000, 2);
        bool ok = s1.counts == s2.counts && s1.censored == s2.censored;
        for (std::size_t i = 0; i < s1.outcomes.size(); ++i) {
            ok = ok && s1.outcomes[i].steps_taken == s2.outcomes[i].steps_taken;
        }
        check(ok, "run_trials: bit-identical across thread counts");
    }

    std::printf("%s\n",
                failures == 0 ? "selftest: all checks passed" : "selftest: FAILURES detected");
    return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{
        "statewalk: packet embeddings of classical space in state space and\n"
        "GUE-driven random walks of state, with measurement statistics"};
    app.require_subcommand(1);

    struct Entry {
        const char *name;
        const char *help;
        bool walk;
    };
    const std::vector<Entry> entries = {
        {"born", "full-basis hitting statistics against Born weights", true},
        {"double-slit", "two-packet superposition, which-slit and plate detection", true},
        {"box-escape", "free spreading against near and far packet rays", false},
        {"epr", "pair-state geometry and position-measurement walk", true},
        {"cat", "particle-device coupling with and without the device constraint", false},
        {"newton", "constrained phase-space evolution against Runge-Kutta", false},
        {"drift", "hit statistics with and without a width-direction drift", true},
    };

    std::map<std::string, CommonFlags> flag_sets;
    for (const auto &entry : entries) {
        CLI::App *cmd = app.add_subcommand(entry.name, entry.help);
        attach_common_flags(cmd, flag_sets[entry.name], entry.walk);
    }
    CLI::App *selftest_cmd = app.add_subcommand("selftest", "run the quick property suites");

    CLI11_PARSE(app, argc, argv);

    try {
        if (selftest_cmd->parsed()) {
            return selftest();
        }
        for (const auto &entry : entries) {
            if (app.get_subcommand(entry.name)->parsed()) {
                return run_scenario(entry.name, flag_sets[entry.name]);
            }
        }
        return 1;
    } catch (const statewalk::ValidationError &error) {
        std::cerr << "validation error: " << error.what() << "\n";
        return 1;
    } catch (const std::exception &error) {
        std::cerr << "runtime error: " << error.what() << "\n";
        return 2;
    }
}
