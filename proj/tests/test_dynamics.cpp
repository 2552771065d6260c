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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "statewalk/dynamics.hpp"
#include "support/oracles.hpp"
#include "support/random_states.hpp"

using namespace statewalk;
using test_support::random_state;

namespace {

double grid_variance(const packets::Grid &grid, const StateVector &psi) {
    double mean = 0.0, second = 0.0;
    for (int k = 0; k < grid.points_per_axis; ++k) {
        const double x = grid.node(k);
        const double w = std::norm(psi[k]);
        mean += x * w;
        second += x * x * w;
    }
    return second - mean * mean;
}

double grid_mean(const packets::Grid &grid, const StateVector &psi) {
    double mean = 0.0;
    for (int k = 0; k < grid.points_per_axis; ++k) {
        mean += grid.node(k) * std::norm(psi[k]);
    }
    return mean;
}

}  // namespace

TEST_CASE("random_step: dt = 0 is the identity") {
    rng::Xoshiro256 gen(21);
    const StateVector psi = random_state(gen, 5);
    gue::GueSampler sampler(5, 1.0, 7);
    dynamics::StepConfig cfg;
    cfg.dt = 0.0;
    const StateVector out = dynamics::random_step(psi, sampler, cfg);
    CHECK((out - psi).norm() < 1e-14);
}

TEST_CASE("random_step: unitarity across all propagator paths") {
    rng::Xoshiro256 gen(22);
    dynamics::StepConfig cfg;
    cfg.dt = 0.07;
    for (int n : {2, 8, 40}) {
        gue::GueSampler sampler(n, 1.0, 100 + n);
        StateVector psi = random_state(gen, n);
        for (int step = 0; step < 20; ++step) {
            psi = dynamics::random_step(psi, sampler, cfg);
            CHECK(std::abs(psi.squaredNorm() - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("random_step: matches an eigendecomposition reference") {
    rng::Xoshiro256 gen(23);
    dynamics::StepConfig cfg;
    cfg.dt = 0.31;
    for (int n : {2, 8, 40}) {
        const StateVector psi = random_state(gen, n);

        gue::GueSampler reference_sampler(n, 1.2, 555);
        const gue::HermitianMatrix h = reference_sampler.sample();
        Eigen::SelfAdjointEigenSolver<gue::HermitianMatrix> solver(h);
        Eigen::VectorXcd rotated = solver.eigenvectors().adjoint() * psi;
        for (int k = 0; k < n; ++k) {
            rotated[k] *= std::exp(Complex(0.0, -solver.eigenvalues()[k] * cfg.dt));
        }
        const StateVector expected = solver.eigenvectors() * rotated;

        gue::GueSampler sampler(n, 1.2, 555);  // same seed -> same draw
        cfg.gue_scale = 1.2;
        const StateVector got = dynamics::random_step(psi, sampler, cfg);
        CHECK((got - expected).norm() < 1e-12);
    }
}

TEST_CASE("random_step: first-order mode converges to the exact step") {
    rng::Xoshiro256 gen(24);
    const StateVector psi = random_state(gen, 6);
    for (double dt : {0.02, 0.01}) {
        gue::GueSampler exact_sampler(6, 1.0, 808);
        gue::GueSampler euler_sampler(6, 1.0, 808);
        dynamics::StepConfig exact_cfg;
        exact_cfg.dt = dt;
        dynamics::StepConfig euler_cfg;
        euler_cfg.dt = dt;
        euler_cfg.first_order = true;
        const StateVector a = dynamics::random_step(psi, exact_sampler, exact_cfg);
        const StateVector b = dynamics::random_step(psi, euler_sampler, euler_cfg);
        CHECK((a - b).norm() < 40.0 * dt * dt);
    }
}

TEST_CASE("random_step: drift is injected along the tangent and renormalized") {
    rng::Xoshiro256 gen(25);
    const StateVector psi = random_state(gen, 4);
    StateVector pull = StateVector::Zero(4);
    pull[3] = 1.0;
    dynamics::StepConfig cfg;
    cfg.dt = 0.05;
    cfg.drift = [pull](const Ray &) { return pull; };  // not tangent; gets projected
    gue::GueSampler sampler(4, 1.0, 9);
    const StateVector out = dynamics::random_step(psi, sampler, cfg);
    CHECK(std::abs(out.squaredNorm() - 1.0) < 1e-10);
}

TEST_CASE("random_step: step-angle warning threshold") {
    dynamics::StepConfig cfg;
    cfg.dt = 0.02;
    cfg.gue_scale = 1.0;
    CHECK_FALSE(dynamics::step_angle_warning(cfg, 8));
    cfg.dt = 0.2;
    CHECK(dynamics::step_angle_warning(cfg, 8));
}

TEST_CASE("random_step: tangent steps are isotropic (reduced-size check)") {
    const int n = 8;
    const int draws = 20000;
    rng::Xoshiro256 gen(26);
    const StateVector psi = random_state(gen, n);
    const Ray base(psi);

    // Orthonormal complex tangent frame at psi.
    std::vector<StateVector> frame;
    for (int k = 0; k < n && static_cast<int>(frame.size()) < n - 1; ++k) {
        StateVector e = StateVector::Zero(n);
        e[k] = 1.0;
        StateVector t = tangent_project(base, e).direction;
        for (const auto &u : frame) {
            t -= u * u.dot(t);
        }
        if (t.norm() > 1e-8) {
            frame.push_back(normalize(t));
        }
    }
    REQUIRE(static_cast<int>(frame.size()) == n - 1);

    dynamics::StepConfig cfg;
    cfg.dt = 0.02 / std::sqrt(static_cast<double>(n));
    gue::GueSampler sampler(n, 1.0, 2718);
    const int real_dims = 2 * (n - 1);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(real_dims, real_dims);
    Eigen::VectorXd coords(real_dims);
    for (int d = 0; d < draws; ++d) {
        const StateVector stepped = dynamics::random_step(psi, sampler, cfg);
        const StateVector tangent = tangent_project(base, stepped).direction;
        for (std::size_t k = 0; k < frame.size(); ++k) {
            const Complex c = frame[k].dot(tangent);
            coords[2 * static_cast<int>(k)] = c.real();
            coords[2 * static_cast<int>(k) + 1] = c.imag();
        }
        cov += coords * coords.transpose();
    }
    cov /= draws;

    double diag_mean = 0.0;
    for (int i = 0; i < real_dims; ++i) {
        diag_mean += cov(i, i);
    }
    diag_mean /= real_dims;
    for (int i = 0; i < real_dims; ++i) {
        CHECK(std::abs(cov(i, i) - diag_mean) / diag_mean < 0.10);
        for (int j = i + 1; j < real_dims; ++j) {
            CHECK(std::abs(cov(i, j)) / diag_mean < 0.10);
        }
    }
}

TEST_CASE("evolve_grid: free-packet spreading follows the analytic law") {
    const packets::Grid grid{512, -20.0, 20.0, 1};
    const double sigma = 1.0, mass = 1.0, t_final = 2.0;
    dynamics::GridHamiltonian free_h(grid, mass, [](const std::vector<double> &) { return 0.0; });
    const StateVector psi0 = packets::make_position_packet(grid, {0.0}, sigma);
    const int steps = 200;
    const StateVector psi = dynamics::evolve_grid(psi0, free_h, t_final / steps, steps);
    CHECK(std::abs(psi.squaredNorm() - 1.0) < 1e-10);

    const double expected = oracles::free_spread_variance(sigma, t_final, mass);
    CHECK(std::abs(grid_variance(grid, psi) - expected) / expected < 1e-3);
}

TEST_CASE("evolve_grid: moving packet obeys Ehrenfest for free motion") {
    const packets::Grid grid{512, -20.0, 20.0, 1};
    const double sigma = 1.0, mass = 1.0, p = 2.0, t_final = 1.5;
    dynamics::GridHamiltonian free_h(grid, mass, [](const std::vector<double> &) { return 0.0; });
    const StateVector psi0 = packets::make_phase_packet(grid, {-3.0}, {p}, sigma);
    const StateVector psi = dynamics::evolve_grid(psi0, free_h, t_final / 150, 150);
    CHECK(std::abs(grid_mean(grid, psi) - (-3.0 + p * t_final / mass)) < grid.spacing());
}

TEST_CASE("evolve_grid: harmonic quarter period returns the mean to the center") {
    const packets::Grid grid{512, -20.0, 20.0, 1};
    const double mass = 1.0, omega = 1.0, amplitude = 3.0;
    dynamics::GridHamiltonian harmonic(grid, mass, [&](const std::vector<double> &x) {
        return 0.5 * mass * omega * omega * x[0] * x[0];
    });
    const StateVector psi0 = packets::make_position_packet(grid, {amplitude}, 1.0);
    const double quarter = 0.5 * std::numbers::pi / omega;
    const StateVector psi = dynamics::evolve_grid(psi0, harmonic, quarter / 400, 400);
    CHECK(std::abs(grid_mean(grid, psi)) < 0.01 * amplitude);
}

TEST_CASE("evolve_grid: halving dt reduces the error about fourfold") {
    const packets::Grid grid{256, -16.0, 16.0, 1};
    const double mass = 1.0, omega = 1.0;
    dynamics::GridHamiltonian harmonic(grid, mass, [&](const std::vector<double> &x) {
        return 0.5 * mass * omega * omega * x[0] * x[0];
    });
    const StateVector psi0 = packets::make_position_packet(grid, {2.0}, 1.0);
    const double t_final = 2.0;
    const double expected = oracles::harmonic_position(2.0, 0.0, mass, omega, t_final);

    auto error_at = [&](int steps) {
        const StateVector psi = dynamics::evolve_grid(psi0, harmonic, t_final / steps, steps);
        return std::abs(grid_mean(grid, psi) - expected);
    };
    const double coarse = error_at(40);
    const double fine = error_at(80);
    CHECK(coarse / fine > 3.5);
    CHECK(coarse / fine < 4.6);
}

TEST_CASE("evolve_grid: accelerating packet trips the band-edge guard") {
    const packets::Grid grid{64, -20.0, 20.0, 1};
    dynamics::GridHamiltonian pull(grid, 1.0,
                                   [](const std::vector<double> &x) { return -3.0 * x[0]; });
    const StateVector psi0 = packets::make_position_packet(grid, {-5.0}, 1.2);
    CHECK_THROWS_AS(dynamics::evolve_grid(psi0, pull, 0.05, 40), ResolutionError);
}

TEST_CASE("constrained_step: identity step leaves parameters in place") {
    const packets::Grid grid{256, -12.0, 12.0, 1};
    const packets::ManifoldSpec spec{packets::ManifoldKind::Position, 0.8, grid, 1};
    const StateVector member = packets::make_position_packet(grid, {1.1}, 0.8);
    const auto out = dynamics::constrained_step(
        member, [](const StateVector &psi) { return psi; }, spec, std::vector<double>{1.1});
    CHECK(out.params[0] == doctest::Approx(1.1).epsilon(1e-9));
    CHECK(out.distance <= 1e-8);
}

TEST_CASE("constrained_step: free phase-space evolution tracks Newton") {
    const packets::Grid grid{256, -20.0, 20.0, 1};
    const double sigma = 1.0, mass = 1.0, p0 = 1.2, a0 = -3.0;
    const packets::ManifoldSpec spec{packets::ManifoldKind::PhaseSpace, sigma, grid, 1};
    dynamics::GridHamiltonian free_h(grid, mass, [](const std::vector<double> &) { return 0.0; });

    StateVector state = packets::make_phase_packet(grid, {a0}, {p0}, sigma);
    std::vector<double> params{a0, p0};
    const double dt_macro = 0.05;
    const int macro_steps = 20;
    for (int k = 0; k < macro_steps; ++k) {
        auto moved = dynamics::constrained_step(
            state,
            [&](const StateVector &psi) { return dynamics::evolve_grid(psi, free_h, dt_macro, 1); },
            spec, params);
        state = std::move(moved.state);
        params = moved.params;
    }
    const double t_total = dt_macro * macro_steps;
    CHECK(std::abs(params[0] - (a0 + p0 * t_total / mass)) < 0.01 * std::abs(p0 * t_total));
    CHECK(std::abs(params[1] - p0) < 0.01 * p0);
}
