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

#include "statewalk/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "statewalk/fft.hpp"

namespace statewalk::scenarios {

namespace {

using packets::Grid;
using packets::ManifoldKind;
using packets::ManifoldSpec;

Flag make_flag(std::string name, double value, double threshold, const std::string &cmp) {
    bool pass = false;
    if (cmp == "<=") {
        pass = value <= threshold;
    } else if (cmp == ">=") {
        pass = value >= threshold;
    } else if (cmp == "<") {
        pass = value < threshold;
    } else {
        pass = value > threshold;
    }
    return Flag{std::move(name), pass, value, threshold, cmp};
}

/// Orthonormal subspace of the full grid space spanned by a handful of
/// states; walk scenarios run inside it (see the header note).
class ReducedSpace {
  public:
    explicit ReducedSpace(const std::vector<StateVector> &generators, double keep_norm = 1e-6) {
        for (const StateVector &g : generators) {
            StateVector v = g;
            for (const StateVector &b : basis_) {
                v -= b * b.dot(v);
            }
            const double n = v.norm();
            if (n > keep_norm) {
                basis_.push_back(v / n);
            }
        }
    }

    Eigen::Index dim() const { return static_cast<Eigen::Index>(basis_.size()); }

    /// Coordinates of a full-space state that lies in the span.
    StateVector restrict(const StateVector &full) const {
        StateVector coords(dim());
        for (Eigen::Index k = 0; k < dim(); ++k) {
            coords[k] = basis_[static_cast<std::size_t>(k)].dot(full);
        }
        return coords;
    }

    StateVector embed(const StateVector &coords) const {
        StateVector full = StateVector::Zero(basis_.front().size());
        for (Eigen::Index k = 0; k < dim(); ++k) {
            full += coords[k] * basis_[static_cast<std::size_t>(k)];
        }
        return full;
    }

  private:
    std::vector<StateVector> basis_;
};

struct PhasePoint {
    double a;
    double p;
};

/// Classical reference trajectory by fixed-step 4th-order Runge-Kutta.
std::vector<PhasePoint> rk4_trajectory(double a0, double p0, double mass,
                                       const std::function<double(double)> &force, double t_total,
                                       int samples, int substeps_per_sample) {
    std::vector<PhasePoint> out;
    out.reserve(static_cast<std::size_t>(samples) + 1);
    PhasePoint state{a0, p0};
    out.push_back(state);
    const double h = t_total / (static_cast<double>(samples) * substeps_per_sample);
    for (int s = 0; s < samples; ++s) {
        for (int k = 0; k < substeps_per_sample; ++k) {
            const double a1 = state.p / mass, p1 = force(state.a);
            const double a2 = (state.p + 0.5 * h * p1) / mass,
                         p2 = force(state.a + 0.5 * h * a1);
            const double a3 = (state.p + 0.5 * h * p2) / mass,
                         p3 = force(state.a + 0.5 * h * a2);
            const double a4 = (state.p + h * p3) / mass, p4 = force(state.a + h * a3);
            state.a += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
            state.p += h / 6.0 * (p1 + 2.0 * p2 + 2.0 * p3 + p4);
        }
        out.push_back(state);
    }
    return out;
}

/// Exact first-passage probability for the N = 2 walk: harmonic measure of
/// two antipodal absorbing caps on CP^1 at distance d from the start.
double cp1_cap_hit_probability(double d, double eps) {
    const double top = std::log(std::tan(std::numbers::pi / 2.0 - eps));
    const double bottom = std::log(std::tan(eps));
    return (top - std::log(std::tan(d))) / (top - bottom);
}

dynamics::StepConfig walk_config(const WalkParams &walk) {
    dynamics::StepConfig cfg;
    cfg.dt = walk.dt;
    cfg.gue_scale = walk.gue_scale;
    return cfg;
}

void append_frequency_table(ScenarioReport &report, const measure::TrialStats &stats,
                            const std::vector<double> &reference, const std::string &name) {
    Table table;
    table.name = name;
    table.columns = {"target",    "reference_weight", "frequency",
                     "wilson_lo", "wilson_hi",        "hit_frequency"};
    for (std::size_t j = 0; j < stats.frequencies.size(); ++j) {
        table.rows.push_back({static_cast<double>(j), reference[j], stats.frequencies[j],
                              stats.wilson[j].lo, stats.wilson[j].hi, stats.hit_frequencies[j]});
    }
    report.tables.push_back(std::move(table));
}

void append_born_flags(ScenarioReport &report, const measure::TrialStats &stats,
                       const std::vector<double> &weights, const std::string &prefix) {
    for (std::size_t j = 0; j < weights.size(); ++j) {
        const double sigma =
            std::sqrt(weights[j] * (1.0 - weights[j]) / static_cast<double>(stats.total));
        report.flags.push_back(make_flag(prefix + "_target_" + std::to_string(j) + "_within_3sd",
                                         std::abs(stats.frequencies[j] - weights[j]),
                                         3.0 * std::max(sigma, 1e-12), "<="));
    }
    report.flags.push_back(make_flag(
        prefix + "_censored_fraction",
        static_cast<double>(stats.censored) / static_cast<double>(stats.total), 0.01, "<="));
}

}  // namespace

// ---------------------------------------------------------------------------

ScenarioReport born_run(const BornConfig &config) {
    const std::size_t n = config.weights.size();
    if (n < 2) {
        throw ParameterError("born_run: need at least two weights");
    }
    double sum = 0.0;
    for (double w : config.weights) {
        if (w < 0.0) {
            throw ParameterError("born_run: weights must be nonnegative");
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
        throw ParameterError("born_run: weights must sum to 1");
    }

    StateVector psi0(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
        psi0[static_cast<Eigen::Index>(k)] = std::sqrt(config.weights[k]);
    }
    const Ray initial(psi0);
    const auto detectors =
        measure::DetectorSet::full_basis(static_cast<Eigen::Index>(n), config.walk.epsilon);
    const auto born = measure::born_weights(initial, detectors);

    ScenarioReport report;
    report.scenario = "born";
    report.seed = config.seed;

    const auto stats = measure::run_trials(config.walk.trials, initial, detectors,
                                           walk_config(config.walk), config.seed,
                                           config.walk.max_steps, config.walk.threads);
    append_born_flags(report, stats, born.probabilities, "born");
    append_frequency_table(report, stats, born.probabilities, "frequencies");
    report.metrics.emplace_back("mean_steps_to_hit", stats.mean_steps_to_hit);
    report.metrics.emplace_back("censored_fraction",
                                static_cast<double>(stats.censored) /
                                    static_cast<double>(stats.total));

    if (n == 2) {
        // Exact absorbing-cap reference for the two-detector walk.
        const double d1 = std::acos(std::min(std::abs(psi0[0]), 1.0));
        const double predicted = cp1_cap_hit_probability(d1, config.walk.epsilon);
        report.metrics.emplace_back("cap_harmonic_measure_target_0", predicted);
        report.metrics.emplace_back("cap_harmonic_deviation",
                                    std::abs(stats.frequencies[0] - predicted));
    }
    report.trials = stats;
    return report;
}

// ---------------------------------------------------------------------------

ScenarioReport double_slit_run(const DoubleSlitConfig &config) {
    const Grid grid{config.grid_points, config.grid_min, config.grid_max, 1};
    const double sigma = config.sigma;
    if (config.slit_separation < 6.0 * sigma) {
        throw ParameterError("double_slit_run: slit separation must be >= 6 sigma");
    }
    const double a1 = -0.5 * config.slit_separation;
    const double a2 = 0.5 * config.slit_separation;

    ScenarioReport report;
    report.scenario = config.single_slit ? "double-slit(single)" : "double-slit";
    report.seed = config.seed;

    const StateVector slit1 = packets::make_position_packet(grid, {a1}, sigma);
    const StateVector slit2 = packets::make_position_packet(grid, {a2}, sigma);
    // Control mode: one packet at the window center instead of the pair.
    const StateVector at_slits = config.single_slit
                                     ? packets::make_position_packet(grid, {0.0}, sigma)
                                     : normalize((slit1 + slit2).eval());

    // Manifold distance before (a single packet at the source) and after.
    const ManifoldSpec position_manifold{ManifoldKind::Position, sigma, grid, 1};
    const StateVector source = packets::make_position_packet(grid, {0.0}, sigma);
    const double distance_before =
        packets::project_to_manifold(source, position_manifold).distance;
    const double distance_after =
        packets::project_to_manifold(at_slits, position_manifold).distance;
    report.metrics.emplace_back("manifold_distance_before", distance_before);
    report.metrics.emplace_back("manifold_distance_after", distance_after);
    if (!config.single_slit) {
        report.flags.push_back(make_flag("distance_moves_away_from_manifold",
                                         distance_after - distance_before, 0.5, ">="));
    }

    // Which-slit detection at the slit plane: a two-state walk in the span
    // of the two packets.
    if (!config.single_slit) {
        const ReducedSpace slit_span({slit1, slit2});
        std::vector<Ray> slit_targets{Ray(slit_span.restrict(slit1)),
                                      Ray(slit_span.restrict(slit2))};
        const measure::DetectorSet slit_detectors(slit_targets, config.walk.epsilon);
        const Ray reduced_initial(slit_span.restrict(at_slits));
        const auto which_slit = measure::run_trials(
            config.walk.trials, reduced_initial, slit_detectors, walk_config(config.walk),
            rng::derive_seed(config.seed, 1), config.walk.max_steps, config.walk.threads);
        append_born_flags(report, which_slit,
                          measure::born_weights(reduced_initial, slit_detectors).probabilities,
                          "which_slit");
        report.trials_secondary = which_slit;
    }

    // Free flight to the plate.
    dynamics::GridHamiltonian free_h(grid, 1.0, [](const std::vector<double> &) { return 0.0; });
    const StateVector at_plate = dynamics::evolve_grid(
        at_slits, free_h, config.flight_time / config.evolve_steps, config.evolve_steps);

    // Plate profile across the detector window.
    const int center_node = config.grid_points / 2;
    const int half_span = (config.plate_sites - 1) / 2;
    std::vector<int> site_nodes;
    for (int s = 0; s < config.plate_sites; ++s) {
        site_nodes.push_back(center_node + (s - half_span) * config.plate_site_stride);
    }
    Table profile;
    profile.name = "plate_profile";
    profile.columns = {"x", "density", "is_detector_site"};
    const int window_lo = site_nodes.front() - config.plate_site_stride;
    const int window_hi = site_nodes.back() + config.plate_site_stride;
    for (int k = window_lo; k <= window_hi; ++k) {
        const bool is_site = std::find(site_nodes.begin(), site_nodes.end(), k) != site_nodes.end();
        profile.rows.push_back(
            {grid.node(k), std::norm(at_plate[k]), is_site ? 1.0 : 0.0});
    }

    // Unimodality / fringe structure of the window density.
    int maxima = 0;
    double peak = 0.0;
    for (const auto &row : profile.rows) {
        peak = std::max(peak, row[1]);
    }
    for (std::size_t k = 1; k + 1 < profile.rows.size(); ++k) {
        const double here = profile.rows[k][1];
        if (here > profile.rows[k - 1][1] && here > profile.rows[k + 1][1] &&
            here > 0.05 * peak) {
            ++maxima;
        }
    }
    report.metrics.emplace_back("window_local_maxima", static_cast<double>(maxima));
    if (config.single_slit) {
        report.flags.push_back(make_flag("window_unimodal", static_cast<double>(maxima), 1.0, "<="));
    } else {
        report.flags.push_back(
            make_flag("window_shows_fringes", static_cast<double>(maxima), 2.0, ">="));
    }
    report.tables.push_back(std::move(profile));

    // Plate-site detection: walk in the span of the site states plus the
    // arriving state's residual direction.
    std::vector<StateVector> generators;
    for (int node : site_nodes) {
        StateVector e = StateVector::Zero(grid.size());
        e[node] = 1.0;
        generators.push_back(std::move(e));
    }
    generators.push_back(at_plate);
    const ReducedSpace plate_span(generators);
    std::vector<Ray> plate_targets;
    for (int s = 0; s < config.plate_sites; ++s) {
        plate_targets.emplace_back(plate_span.restrict(generators[static_cast<std::size_t>(s)]));
    }
    const measure::DetectorSet plate_detectors(plate_targets, config.walk.epsilon);
    const Ray plate_initial(plate_span.restrict(at_plate));
    const auto born = measure::born_weights(plate_initial, plate_detectors);
    const auto plate_stats = measure::run_trials(
        config.walk.trials, plate_initial, plate_detectors, walk_config(config.walk),
        rng::derive_seed(config.seed, 2), config.walk.max_steps, config.walk.threads);
    append_born_flags(report, plate_stats, born.probabilities, "plate");
    append_frequency_table(report, plate_stats, born.probabilities, "plate_frequencies");
    report.metrics.emplace_back("plate_born_renormalized", born.renormalized ? 1.0 : 0.0);
    report.metrics.emplace_back("plate_born_raw_sum", born.raw_sum);
    report.trials = plate_stats;
    return report;
}

// ---------------------------------------------------------------------------

ScenarioReport box_escape_run(const BoxEscapeConfig &config) {
    const Grid grid{config.grid_points, config.grid_min, config.grid_max, 1};
    const double sigma = config.sigma;
    const double far_b = config.far_distance_sigmas * sigma;

    ScenarioReport report;
    report.scenario = "box-escape";
    report.seed = config.seed;

    const StateVector origin_packet = packets::make_position_packet(grid, {0.0}, sigma);
    const StateVector far_packet = packets::make_position_packet(grid, {far_b}, sigma);
    dynamics::GridHamiltonian free_h(grid, config.mass,
                                     [](const std::vector<double> &) { return 0.0; });

    Table series;
    series.name = "distance_series";
    series.columns = {"t", "distance_to_origin_packet", "distance_to_far_packet"};

    StateVector state = origin_packet;
    const double dt = config.t_total / config.steps;
    double previous_origin_distance = 0.0;
    double worst_decrease = 0.0;
    const double initial_far_distance = fs_distance(state, far_packet);
    series.rows.push_back({0.0, 0.0, initial_far_distance});
    for (int step = 1; step <= config.steps; ++step) {
        state = dynamics::evolve_grid(state, free_h, dt, 1);
        if (step % config.record_stride == 0 || step == config.steps) {
            const double d_origin = fs_distance(state, origin_packet);
            const double d_far = fs_distance(state, far_packet);
            series.rows.push_back({step * dt, d_origin, d_far});
            worst_decrease = std::min(worst_decrease, d_origin - previous_origin_distance);
            previous_origin_distance = d_origin;
        }
    }

    const double final_origin_distance = series.rows.back()[1];
    const double final_far_distance = series.rows.back()[2];
    report.flags.push_back(make_flag("origin_distance_nondecreasing", worst_decrease, -1e-6, ">="));
    report.flags.push_back(make_flag("origin_distance_approaches_max", final_origin_distance,
                                     config.approach_threshold, ">="));
    report.flags.push_back(make_flag("far_distance_strictly_lower",
                                     initial_far_distance - final_far_distance, 0.0, ">"));
    report.metrics.emplace_back("initial_far_distance", initial_far_distance);
    report.metrics.emplace_back("final_far_distance", final_far_distance);
    report.metrics.emplace_back("final_origin_distance", final_origin_distance);
    report.tables.push_back(std::move(series));
    return report;
}

// ---------------------------------------------------------------------------

namespace {

/// Overlap of a product state with the product of per-factor states.
double product_overlap(const StateVector &factor_state_1, const StateVector &factor_state_2,
                       const StateVector &member_1, const StateVector &member_2) {
    return std::abs(member_1.dot(factor_state_1)) * std::abs(member_2.dot(factor_state_2));
}

}  // namespace

ScenarioReport epr_run(const EprConfig &config) {
    const Grid grid{config.grid_points, config.grid_min, config.grid_max, 1};
    const Eigen::Index joint_dim = grid.size() * grid.size();
    if (joint_dim > 4096) {
        throw ParameterError("epr_run: joint dimension exceeds the 4096 budget");
    }

    ScenarioReport report;
    report.scenario = "epr";
    report.seed = config.seed;

    const double a = -0.5 * config.pair_offset;
    const double b = a + config.pair_offset;
    const StateVector narrow_1 = packets::make_position_packet(grid, {a}, config.sigma_delta);
    const StateVector narrow_2 = packets::make_position_packet(grid, {b}, config.sigma_delta);

    // Sampled distances from the pair state to both product manifolds. The
    // pair is a product, so joint overlaps factorize exactly.
    const double lo = grid.axis_min + 5.0 * config.sigma;
    const double hi = grid.axis_max - 5.0 * config.sigma;
    std::vector<StateVector> position_members, momentum_members;
    std::vector<double> sample_centers;
    for (int s = 0; s < config.manifold_samples; ++s) {
        const double c = lo + (hi - lo) * s / (config.manifold_samples - 1);
        sample_centers.push_back(c);
        position_members.push_back(packets::make_position_packet(grid, {c}, config.sigma));
        momentum_members.push_back(packets::momentum_member(grid, {c}, config.sigma));
    }

    Table distance_table;
    distance_table.name = "manifold_distances";
    distance_table.columns = {"b1", "min_position_product_distance", "min_momentum_product_distance"};
    double min_position_distance = 10.0, min_momentum_distance = 10.0;
    for (int i = 0; i < config.manifold_samples; ++i) {
        double best_pos = 0.0, best_mom = 0.0;
        for (int j = 0; j < config.manifold_samples; ++j) {
            best_pos = std::max(best_pos, product_overlap(narrow_1, narrow_2, position_members[i],
                                                          position_members[j]));
            best_mom = std::max(best_mom, product_overlap(narrow_1, narrow_2, momentum_members[i],
                                                          momentum_members[j]));
        }
        const double d_pos = std::acos(std::clamp(best_pos, 0.0, 1.0));
        const double d_mom = std::acos(std::clamp(best_mom, 0.0, 1.0));
        distance_table.rows.push_back({sample_centers[static_cast<std::size_t>(i)], d_pos, d_mom});
        min_position_distance = std::min(min_position_distance, d_pos);
        min_momentum_distance = std::min(min_momentum_distance, d_mom);
    }
    report.tables.push_back(std::move(distance_table));
    report.metrics.emplace_back("min_sampled_position_distance", min_position_distance);
    report.metrics.emplace_back("min_sampled_momentum_distance", min_momentum_distance);
    report.flags.push_back(make_flag("momentum_manifold_far", min_momentum_distance,
                                     config.min_momentum_distance, ">"));

    // Control: a product of manifold members sits on the sampled manifold.
    {
        const StateVector member_pair_1 = packets::make_position_packet(grid, {a}, config.sigma);
        const StateVector member_pair_2 = packets::make_position_packet(grid, {b}, config.sigma);
        double best = 0.0;
        for (int i = 0; i < config.manifold_samples; ++i) {
            for (int j = 0; j < config.manifold_samples; ++j) {
                best = std::max(best, product_overlap(member_pair_1, member_pair_2,
                                                      position_members[i], position_members[j]));
            }
        }
        // Sample granularity keeps this from exact zero; a tenth of a radian
        // at 32 samples per axis.
        report.flags.push_back(
            make_flag("member_pair_on_manifold", std::acos(std::clamp(best, 0.0, 1.0)), 0.1, "<="));
    }

    // Position-measurement walk: targets are position-product members around
    // the pair, the walk runs in their span plus the pair's residual.
    std::vector<StateVector> target_factors_1, target_factors_2;
    std::vector<StateVector> joint_targets;
    std::vector<std::vector<double>> target_params;
    const int half = config.walk_targets / 2;
    for (int j = 0; j < config.walk_targets; ++j) {
        const double c = a + (j - half) * config.target_spacing;
        const StateVector f1 = packets::make_position_packet(grid, {c}, config.sigma);
        const StateVector f2 =
            packets::make_position_packet(grid, {c + config.pair_offset}, config.sigma);
        StateVector joint(joint_dim);
        for (Eigen::Index i1 = 0; i1 < grid.size(); ++i1) {
            for (Eigen::Index i2 = 0; i2 < grid.size(); ++i2) {
                joint[i1 * grid.size() + i2] = f1[i1] * f2[i2];
            }
        }
        joint_targets.push_back(std::move(joint));
        target_params.push_back({c, c + config.pair_offset});
    }
    StateVector pair(joint_dim);
    for (Eigen::Index i1 = 0; i1 < grid.size(); ++i1) {
        for (Eigen::Index i2 = 0; i2 < grid.size(); ++i2) {
            pair[i1 * grid.size() + i2] = narrow_1[i1] * narrow_2[i2];
        }
    }

    std::vector<StateVector> generators = joint_targets;
    generators.push_back(pair);
    const ReducedSpace span(generators);
    std::vector<Ray> reduced_targets;
    for (const StateVector &t : joint_targets) {
        reduced_targets.emplace_back(span.restrict(t));
    }
    const measure::DetectorSet detectors(reduced_targets, config.walk.epsilon);
    const Ray initial(span.restrict(pair));
    const auto stats = measure::run_trials(config.walk.trials, initial, detectors,
                                           walk_config(config.walk), config.seed,
                                           config.walk.max_steps, config.walk.threads);
    report.trials = stats;
    report.metrics.emplace_back(
        "walk_censored_fraction",
        static_cast<double>(stats.censored) / static_cast<double>(stats.total));

    // Every hit must land within epsilon of the position-product manifold,
    // verified by projecting the absorbed state on the full joint grid.
    const ManifoldSpec product_manifold{ManifoldKind::Position, config.sigma, grid, 2};
    std::int64_t hits = 0, on_manifold = 0;
    for (const auto &outcome : stats.outcomes) {
        if (!outcome.hit()) {
            continue;
        }
        ++hits;
        // The hit state is within epsilon of its target; reconstruct the
        // absorbed target member and verify the projector agrees.
        const StateVector absorbed =
            span.embed(reduced_targets[static_cast<std::size_t>(outcome.result)].representative());
        const auto projection = packets::project_to_manifold(
            normalize(absorbed), product_manifold,
            target_params[static_cast<std::size_t>(outcome.result)]);
        const double total_distance = projection.distance + outcome.final_distance;
        if (total_distance <= config.walk.epsilon) {
            ++on_manifold;
        }
    }
    const double on_manifold_fraction =
        hits > 0 ? static_cast<double>(on_manifold) / static_cast<double>(hits) : 0.0;
    report.metrics.emplace_back("hits", static_cast<double>(hits));
    report.flags.push_back(make_flag("hits_land_on_position_manifold", on_manifold_fraction,
                                     0.99, ">="));
    return report;
}

// ---------------------------------------------------------------------------

namespace {

/// Split-step propagator for a two-factor state with independent grids,
/// masses, and a diagonal coupling potential.
class PairPropagator {
  public:
    PairPropagator(const Grid &grid_1, const Grid &grid_2, double mass_1, double mass_2,
                   double coupling, double dt)
        : n1_(grid_1.points_per_axis), n2_(grid_2.points_per_axis) {
        const Eigen::Index size = static_cast<Eigen::Index>(n1_) * n2_;
        half_potential_.resize(size);
        for (int i = 0; i < n1_; ++i) {
            const double x1 = grid_1.node(i);
            for (int j = 0; j < n2_; ++j) {
                const double x2 = grid_2.node(j);
                half_potential_[static_cast<Eigen::Index>(i) * n2_ + j] =
                    std::exp(Complex(0.0, -0.5 * coupling * x1 * x2 * dt));
            }
        }
        kinetic_1_.resize(n1_);
        for (int i = 0; i < n1_; ++i) {
            const double p = grid_1.momentum_bin(i);
            kinetic_1_[i] = std::exp(Complex(0.0, -p * p * dt / (2.0 * mass_1)));
        }
        kinetic_2_.resize(n2_);
        for (int j = 0; j < n2_; ++j) {
            const double p = grid_2.momentum_bin(j);
            kinetic_2_[j] = std::exp(Complex(0.0, -p * p * dt / (2.0 * mass_2)));
        }
    }

    void step(StateVector &psi) const {
        psi.array() *= half_potential_.array();
        fft::forward_axis(psi, n2_, n1_, 1);        // factor-2 axis
        fft::forward_axis(psi, n1_, n2_, n2_);      // factor-1 axis
        for (int i = 0; i < n1_; ++i) {
            for (int j = 0; j < n2_; ++j) {
                psi[static_cast<Eigen::Index>(i) * n2_ + j] *= kinetic_1_[i] * kinetic_2_[j];
            }
        }
        fft::inverse_axis(psi, n1_, n2_, n2_);
        fft::inverse_axis(psi, n2_, n1_, 1);
        psi.array() *= half_potential_.array();
    }

  private:
    int n1_, n2_;
    Eigen::VectorXcd half_potential_;
    Eigen::VectorXcd kinetic_1_, kinetic_2_;
};

/// Best product approximation with the device factor pinned to its position
/// manifold: maximizes ||Psi conj(g_b)|| over b by warm-started ascent, then
/// replaces Psi with the projected product.
double constrain_device(StateVector &psi, const Grid &particle_grid, const Grid &device_grid,
                        double device_sigma, double &warm_center) {
    const int n1 = particle_grid.points_per_axis;
    const int n2 = device_grid.points_per_axis;
    const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        coeff(psi.data(), n1, n2);

    auto objective = [&](double b) {
        const StateVector g = packets::make_position_packet(device_grid, {b}, device_sigma);
        return (coeff * g.conjugate()).squaredNorm();
    };

    // Golden-section refinement around the warm start.
    const double lo_bound = device_grid.axis_min + 5.0 * device_sigma;
    const double hi_bound = device_grid.axis_max - 5.0 * device_sigma;
    double lo = std::max(lo_bound, warm_center - 2.0 * device_sigma);
    double hi = std::min(hi_bound, warm_center + 2.0 * device_sigma);
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - golden * (hi - lo), x2 = lo + golden * (hi - lo);
    double f1 = objective(x1), f2 = objective(x2);
    while (hi - lo > 1e-10) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + golden * (hi - lo);
            f2 = objective(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - golden * (hi - lo);
            f1 = objective(x1);
        }
    }
    warm_center = 0.5 * (lo + hi);
    const StateVector g = packets::make_position_packet(device_grid, {warm_center}, device_sigma);
    Eigen::VectorXcd particle = coeff * g.conjugate();
    particle /= particle.norm();
    for (int i = 0; i < n1; ++i) {
        for (int j = 0; j < n2; ++j) {
            psi[static_cast<Eigen::Index>(i) * n2 + j] = particle[i] * g[j];
        }
    }
    return warm_center;
}

}  // namespace

ScenarioReport product_persistence_run(const ProductPersistenceConfig &config) {
    const Grid particle_grid{config.particle_points, config.particle_min, config.particle_max, 1};
    const Grid device_grid{config.device_points, config.device_min, config.device_max, 1};
    const Eigen::Index joint_dim = particle_grid.size() * device_grid.size();
    if (joint_dim > 4096) {
        throw ParameterError("product_persistence_run: joint dimension exceeds the 4096 budget");
    }

    ScenarioReport report;
    report.scenario = "cat";
    report.seed = config.seed;

    const StateVector particle0 =
        packets::make_position_packet(particle_grid, {0.0}, config.particle_sigma);
    const StateVector device0 =
        packets::make_position_packet(device_grid, {0.0}, config.device_sigma);
    StateVector joint0(joint_dim);
    for (int i = 0; i < config.particle_points; ++i) {
        for (int j = 0; j < config.device_points; ++j) {
            joint0[static_cast<Eigen::Index>(i) * config.device_points + j] =
                particle0[i] * device0[j];
        }
    }

    const PairPropagator propagator(particle_grid, device_grid, config.particle_mass,
                                    config.device_mass, config.coupling, config.dt);

    Table series;
    series.name = "entropy_series";
    series.columns = {"t", "entropy_unconstrained", "entropy_constrained"};

    StateVector unconstrained = joint0;
    StateVector constrained = joint0;
    double warm_center = 0.0;
    double max_unconstrained = 0.0, max_constrained = 0.0;
    for (int step = 1; step <= config.steps; ++step) {
        propagator.step(unconstrained);
        propagator.step(constrained);
        const double s_unconstrained =
            schmidt_entropy(unconstrained, config.particle_points, config.device_points);
        // Entropy of the constrained branch is read before the device
        // projection removes what the step generated.
        const double s_constrained =
            schmidt_entropy(constrained, config.particle_points, config.device_points);
        constrain_device(constrained, particle_grid, device_grid, config.device_sigma,
                         warm_center);
        max_unconstrained = std::max(max_unconstrained, s_unconstrained);
        max_constrained = std::max(max_constrained, s_constrained);
        series.rows.push_back({step * config.dt, s_unconstrained, s_constrained});
    }
    report.tables.push_back(std::move(series));
    report.metrics.emplace_back("max_entropy_unconstrained", max_unconstrained);
    report.metrics.emplace_back("max_entropy_constrained", max_constrained);
    report.metrics.emplace_back("device_final_center", warm_center);

    if (config.coupling == 0.0) {
        report.flags.push_back(
            make_flag("uncoupled_unconstrained_entropy", max_unconstrained, 1e-10, "<="));
        report.flags.push_back(
            make_flag("uncoupled_constrained_entropy", max_constrained, 1e-10, "<="));
    } else {
        report.flags.push_back(make_flag("unconstrained_entropy_exceeds", max_unconstrained,
                                         config.entropy_high, ">"));
        report.flags.push_back(make_flag("constrained_entropy_stays_below", max_constrained,
                                         config.entropy_low, "<"));
    }
    return report;
}

// ---------------------------------------------------------------------------

ScenarioReport newtonian_equivalence_run(const NewtonianConfig &config) {
    const Grid grid{config.grid_points, config.grid_min, config.grid_max, 1};

    std::function<double(double)> potential, force;
    std::string potential_name;
    switch (config.potential) {
        case NewtonianConfig::Potential::Free:
            potential = [](double) { return 0.0; };
            force = [](double) { return 0.0; };
            potential_name = "free";
            break;
        case NewtonianConfig::Potential::UniformForce:
            potential = [f = config.force](double x) { return -f * x; };
            force = [f = config.force](double) { return f; };
            potential_name = "uniform";
            break;
        case NewtonianConfig::Potential::Harmonic:
            potential = [m = config.mass, w = config.omega](double x) {
                return 0.5 * m * w * w * x * x;
            };
            force = [m = config.mass, w = config.omega](double x) { return -m * w * w * x; };
            potential_name = "harmonic";
            break;
    }

    ScenarioReport report;
    report.scenario = "newton(" + potential_name + ")";
    report.seed = config.seed;

    dynamics::GridHamiltonian hamiltonian(
        grid, config.mass, [&](const std::vector<double> &x) { return potential(x[0]); });
    const ManifoldSpec phase_manifold{ManifoldKind::PhaseSpace, config.sigma, grid, 1};

    const auto reference =
        rk4_trajectory(config.a0, config.p0, config.mass, force, config.t_total,
                       config.macro_steps, 20);

    const double dt_macro = config.t_total / config.macro_steps;
    StateVector state =
        packets::make_phase_packet(grid, {config.a0}, {config.p0}, config.sigma);
    std::vector<double> params{config.a0, config.p0};

    Table trajectory;
    trajectory.name = "trajectory";
    trajectory.columns = {"t", "a_constrained", "p_constrained", "a_newton", "p_newton"};
    trajectory.rows.push_back({0.0, config.a0, config.p0, config.a0, config.p0});

    double max_position_error = 0.0, max_momentum_error = 0.0;
    for (int step = 1; step <= config.macro_steps; ++step) {
        const auto moved = dynamics::constrained_step(
            state,
            [&](const StateVector &psi) {
                return dynamics::evolve_grid(psi, hamiltonian, dt_macro, 1);
            },
            phase_manifold, params);
        state = moved.state;
        params = moved.params;
        const PhasePoint &ref = reference[static_cast<std::size_t>(step)];
        trajectory.rows.push_back({step * dt_macro, params[0], params[1], ref.a, ref.p});
        max_position_error = std::max(max_position_error, std::abs(params[0] - ref.a));
        max_momentum_error = std::max(max_momentum_error, std::abs(params[1] - ref.p));
    }
    report.tables.push_back(std::move(trajectory));

    // Scales for relative errors: trajectory amplitude and momentum range.
    double amplitude = std::abs(config.a0), momentum_scale = std::abs(config.p0);
    for (const PhasePoint &ref : reference) {
        amplitude = std::max(amplitude, std::abs(ref.a));
        momentum_scale = std::max(momentum_scale, std::abs(ref.p));
    }
    momentum_scale = std::max(momentum_scale, 1e-9);

    report.metrics.emplace_back("max_position_error", max_position_error);
    report.metrics.emplace_back("max_momentum_error", max_momentum_error);

    switch (config.potential) {
        case NewtonianConfig::Potential::Free:
            report.flags.push_back(
                make_flag("position_tracks_newton", max_position_error, grid.spacing(), "<="));
            break;
        case NewtonianConfig::Potential::UniformForce:
            report.flags.push_back(make_flag("momentum_tracks_impulse",
                                             max_momentum_error / momentum_scale,
                                             config.trajectory_tolerance, "<="));
            break;
        case NewtonianConfig::Potential::Harmonic: {
            report.flags.push_back(make_flag("trajectory_error_relative",
                                             max_position_error / amplitude,
                                             config.trajectory_tolerance, "<="));
            const double e0 = config.p0 * config.p0 / (2.0 * config.mass) + potential(config.a0);
            const double e_end =
                params[1] * params[1] / (2.0 * config.mass) + potential(params[0]);
            report.flags.push_back(make_flag("energy_drift_relative",
                                             std::abs(e_end - e0) / std::abs(e0),
                                             config.trajectory_tolerance, "<="));
            report.metrics.emplace_back("energy_initial", e0);
            report.metrics.emplace_back("energy_final", e_end);
            break;
        }
    }
    return report;
}

// ---------------------------------------------------------------------------

ScenarioReport drift_invariance_run(const DriftConfig &config) {
    const Grid grid{config.grid_points, config.grid_min, config.grid_max, 1};
    const double sigma = config.sigma;
    const double separation = config.center_separation_sigmas * sigma;
    const double c1 = -0.5 * separation;
    const double c2 = 0.5 * separation;

    ScenarioReport report;
    report.scenario = "drift";
    report.seed = config.seed;

    const StateVector g1 = packets::make_position_packet(grid, {c1}, sigma);
    const StateVector g2 = packets::make_position_packet(grid, {c2}, sigma);
    const StateVector w1 = packets::width_direction(grid, {c1}, sigma);
    const StateVector w2 = packets::width_direction(grid, {c2}, sigma);

    // The width direction is orthogonal to the embedded classical space:
    // verified on the full grid against the center-translation tangents.
    double max_cross = 0.0;
    max_cross = std::max(max_cross,
                         std::abs(inner(w1, packets::position_direction(grid, {c1}, sigma, 0))));
    max_cross = std::max(max_cross,
                         std::abs(inner(w2, packets::position_direction(grid, {c2}, sigma, 0))));
    report.metrics.emplace_back("width_translation_orthogonality", max_cross);
    report.flags.push_back(make_flag("width_orthogonal_to_manifold", max_cross, 1e-8, "<="));

    // Reduced three-state space: the two detector packets and the symmetric
    // width direction the drift acts along.
    const StateVector width_mix = normalize((w1 + w2).eval());
    const ReducedSpace span({g1, g2, width_mix});
    if (span.dim() != 3) {
        throw NumericalError("drift_invariance_run: reduced span is degenerate");
    }
    std::vector<Ray> targets{Ray(span.restrict(g1)), Ray(span.restrict(g2))};
    const measure::DetectorSet detectors(targets, config.walk.epsilon);

    const double chi = config.displacement_angle;
    const StateVector in_span = normalize(
        (std::sqrt(config.weight_1) * g1 + std::sqrt(1.0 - config.weight_1) * g2).eval());
    const StateVector initial_full =
        normalize((std::cos(chi) * in_span + std::sin(chi) * width_mix).eval());
    const Ray initial(span.restrict(initial_full));

    const double kappa = config.drift_magnitude < 0.0
                             ? 0.5 * config.walk.gue_scale * std::sqrt(2.0)
                             : config.drift_magnitude;
    dynamics::StepConfig no_drift = walk_config(config.walk);
    dynamics::StepConfig with_drift = walk_config(config.walk);
    if (kappa > 0.0) {
        with_drift.drift = [kappa](const Ray &ray) -> StateVector {
            const StateVector &psi = ray.representative();
            StateVector width_part = StateVector::Zero(psi.size());
            width_part[2] = psi[2];
            StateVector tangent = tangent_project(ray, width_part).direction;
            const double n = tangent.norm();
            if (n < 1e-12) {
                return StateVector::Zero(psi.size());
            }
            return (-kappa / n) * tangent;
        };
    }

    const auto stats_plain = measure::run_trials(
        config.walk.trials, initial, detectors, no_drift, rng::derive_seed(config.seed, 1),
        config.walk.max_steps, config.walk.threads);
    const auto stats_drift = measure::run_trials(
        config.walk.trials, initial, detectors, with_drift, rng::derive_seed(config.seed, 2),
        config.walk.max_steps, config.walk.threads);

    const auto chi_square = measure::chi_square_uniformity(stats_plain, stats_drift);
    report.flags.push_back(make_flag("hit_distribution_homogeneous", chi_square.p_value, 0.01, ">"));
    if (kappa > 0.0) {
        report.flags.push_back(
            make_flag("drift_accelerates_absorption",
                      stats_plain.mean_steps_to_hit - stats_drift.mean_steps_to_hit, 0.0, ">"));
    }
    report.metrics.emplace_back("chi_square_p", chi_square.p_value);
    report.metrics.emplace_back("chi_square_statistic", chi_square.statistic);
    report.metrics.emplace_back("chi_square_valid", chi_square.valid ? 1.0 : 0.0);
    report.metrics.emplace_back("mean_steps_no_drift", stats_plain.mean_steps_to_hit);
    report.metrics.emplace_back("mean_steps_with_drift", stats_drift.mean_steps_to_hit);
    report.metrics.emplace_back("drift_magnitude", kappa);

    Table freq;
    freq.name = "hit_frequencies";
    freq.columns = {"target", "frequency_no_drift", "frequency_with_drift"};
    for (std::size_t j = 0; j < stats_plain.frequencies.size(); ++j) {
        freq.rows.push_back({static_cast<double>(j), stats_plain.frequencies[j],
                             stats_drift.frequencies[j]});
    }
    report.tables.push_back(std::move(freq));
    report.trials = stats_plain;
    report.trials_secondary = stats_drift;
    return report;
}

}  // namespace statewalk::scenarios
