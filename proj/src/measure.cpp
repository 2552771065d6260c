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

#include "statewalk/measure.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace statewalk::measure {

DetectorSet::DetectorSet(std::vector<Ray> targets, double epsilon)
    : targets_(std::move(targets)), epsilon_(epsilon) {
    if (targets_.empty()) {
        throw ParameterError("DetectorSet: empty detector set");
    }
    if (!(epsilon > 0.0)) {
        throw ParameterError("DetectorSet: epsilon must be positive");
    }
    for (std::size_t i = 0; i < targets_.size(); ++i) {
        if (targets_[i].dim() != targets_[0].dim()) {
            throw DimensionError("DetectorSet: targets of mixed dimension");
        }
        for (std::size_t j = i + 1; j < targets_.size(); ++j) {
            const double d = fs_distance(targets_[i], targets_[j]);
            if (d < 5.0 * epsilon) {
                throw ParameterError("DetectorSet: targets " + std::to_string(i) + " and " +
                                     std::to_string(j) + " are only " + std::to_string(d) +
                                     " rad apart; need >= 5 epsilon");
            }
        }
    }
    basis_index_.assign(targets_.size(), -1);
    for (std::size_t j = 0; j < targets_.size(); ++j) {
        const StateVector &rep = targets_[j].representative();
        int nonzero = -1;
        bool single = true;
        for (Eigen::Index k = 0; k < rep.size(); ++k) {
            if (std::abs(rep[k]) > 1e-15) {
                if (nonzero >= 0) {
                    single = false;
                    break;
                }
                nonzero = static_cast<int>(k);
            }
        }
        if (single && nonzero >= 0) {
            basis_index_[j] = nonzero;
        }
    }
}

DetectorSet DetectorSet::full_basis(Eigen::Index n, double epsilon) {
    std::vector<Ray> targets;
    targets.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        StateVector e = StateVector::Zero(n);
        e[k] = 1.0;
        targets.emplace_back(e);
    }
    return DetectorSet(std::move(targets), epsilon);
}

BornWeights born_weights(const Ray &psi0, const DetectorSet &detectors) {
    if (psi0.dim() != detectors.dim()) {
        throw DimensionError("born_weights: state and detector dimensions differ");
    }
    BornWeights out;
    out.probabilities.reserve(detectors.count());
    double sum = 0.0;
    for (const Ray &target : detectors.targets()) {
        const double w = std::norm(target.representative().dot(psi0.representative()));
        out.probabilities.push_back(w);
        sum += w;
    }
    out.raw_sum = sum;
    out.renormalized = std::abs(sum - 1.0) > 1e-9;
    if (out.renormalized) {
        if (sum <= 0.0) {
            throw DegenerateStateError("born_weights: state is orthogonal to every detector");
        }
        for (double &w : out.probabilities) {
            w /= sum;
        }
    }
    return out;
}

namespace {

/// Index of the first target whose epsilon-ball contains psi, or kCensored.
/// Works on squared overlap moduli (cos^2 of the FS distance) to avoid an
/// acos per target per step; basis-state targets read one amplitude.
int inside_index(const StateVector &psi, const DetectorSet &detectors, double cos_sq_eps) {
    const auto &targets = detectors.targets();
    for (std::size_t j = 0; j < targets.size(); ++j) {
        const int basis = detectors.basis_index(j);
        const double overlap_sq = basis >= 0
                                      ? std::norm(psi[basis])
                                      : std::norm(targets[j].representative().dot(psi));
        if (overlap_sq >= cos_sq_eps) {
            return static_cast<int>(j);
        }
    }
    return kCensored;
}

double nearest_distance(const StateVector &psi, const DetectorSet &detectors) {
    double best = 1e300;
    for (const Ray &target : detectors.targets()) {
        const double overlap =
            std::clamp(std::abs(target.representative().dot(psi)), 0.0, 1.0);
        best = std::min(best, std::acos(overlap));
    }
    return best;
}

}  // namespace

WalkOutcome run_walk(const Ray &psi0, const DetectorSet &detectors,
                     const dynamics::StepConfig &cfg, gue::GueSampler &sampler,
                     std::int64_t max_steps) {
    if (psi0.dim() != detectors.dim()) {
        throw DimensionError("run_walk: state and detector dimensions differ");
    }
    const double cos_eps = std::cos(detectors.epsilon());
    const double cos_sq_eps = cos_eps * cos_eps;

    int inside_count = 0;
    int first_inside = kCensored;
    for (std::size_t j = 0; j < detectors.count(); ++j) {
        if (std::abs(detectors.targets()[j].representative().dot(psi0.representative())) >=
            cos_eps) {
            ++inside_count;
            if (first_inside == kCensored) {
                first_inside = static_cast<int>(j);
            }
        }
    }
    if (inside_count >= 2) {
        throw ParameterError("run_walk: initial state is within epsilon of two targets");
    }
    if (inside_count == 1) {
        return WalkOutcome{first_inside, 0,
                           nearest_distance(psi0.representative(), detectors)};
    }

    StateVector psi = psi0.representative();
    dynamics::StepWorkspace workspace;
    for (std::int64_t step = 1; step <= max_steps; ++step) {
        dynamics::random_step_in_place(psi, sampler, cfg, workspace);
        const int hit = inside_index(psi, detectors, cos_sq_eps);
        if (hit != kCensored) {
            return WalkOutcome{hit, step, nearest_distance(psi, detectors)};
        }
    }
    return WalkOutcome{kCensored, max_steps, nearest_distance(psi, detectors)};
}

TrialStats run_trials(int n, const Ray &psi0, const DetectorSet &detectors,
                      const dynamics::StepConfig &cfg, std::uint64_t master_seed,
                      std::int64_t max_steps, int threads) {
    if (n < 1) {
        throw ParameterError("run_trials: need at least one trial");
    }
    if (threads <= 0) {
        threads = static_cast<int>(std::thread::hardware_concurrency());
        if (threads <= 0) {
            threads = 1;
        }
    }
    threads = std::min(threads, n);

    std::vector<WalkOutcome> outcomes(static_cast<std::size_t>(n));
    const int dim = static_cast<int>(psi0.dim());
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        try {
            for (;;) {
                const int trial = next.fetch_add(1);
                if (trial >= n) {
                    return;
                }
                gue::GueSampler sampler(
                    dim, cfg.gue_scale,
                    rng::derive_seed(master_seed, static_cast<std::uint64_t>(trial)));
                outcomes[static_cast<std::size_t>(trial)] =
                    run_walk(psi0, detectors, cfg, sampler, max_steps);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
            next.store(n);  // stop the other workers
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    TrialStats stats;
    stats.master_seed = master_seed;
    stats.total = n;
    stats.counts.assign(detectors.count(), 0);
    stats.outcomes = std::move(outcomes);
    double steps_sum = 0.0;
    std::int64_t hits = 0;
    for (const WalkOutcome &outcome : stats.outcomes) {
        if (outcome.hit()) {
            ++stats.counts[static_cast<std::size_t>(outcome.result)];
            steps_sum += static_cast<double>(outcome.steps_taken);
            ++hits;
        } else {
            ++stats.censored;
        }
    }
    stats.mean_steps_to_hit = hits > 0 ? steps_sum / static_cast<double>(hits) : 0.0;
    stats.frequencies.resize(detectors.count());
    stats.hit_frequencies.resize(detectors.count());
    stats.wilson.reserve(detectors.count());
    for (std::size_t j = 0; j < detectors.count(); ++j) {
        stats.frequencies[j] = static_cast<double>(stats.counts[j]) / static_cast<double>(n);
        stats.hit_frequencies[j] =
            hits > 0 ? static_cast<double>(stats.counts[j]) / static_cast<double>(hits) : 0.0;
        stats.wilson.push_back(stats::wilson_interval(stats.counts[j], stats.total));
    }
    return stats;
}

std::vector<double> constrained_position_walk(const std::vector<double> &start,
                                              const packets::ManifoldSpec &spec,
                                              const dynamics::StepConfig &cfg, int steps,
                                              gue::GueSampler &sampler,
                                              std::vector<double> *record) {
    if (spec.kind != packets::ManifoldKind::Position) {
        throw ParameterError("constrained_position_walk: spec must be a position manifold");
    }
    const double margin_lo = spec.grid.axis_min + 5.0 * spec.sigma;
    const double margin_hi = spec.grid.axis_max - 5.0 * spec.sigma;
    auto check_support = [&](const std::vector<double> &params) {
        for (double a : params) {
            // The projector clamps at the margin, so touching it means the
            // walker left the supported region.
            if (a <= margin_lo + 1e-9 || a >= margin_hi - 1e-9) {
                throw SupportError("constrained_position_walk: walker reached the grid margin");
            }
        }
    };
    check_support(start);

    std::vector<double> params = start;
    StateVector state = packets::manifold_member(spec, params);
    auto stepper = [&](const StateVector &psi) { return dynamics::random_step(psi, sampler, cfg); };
    for (int k = 0; k < steps; ++k) {
        dynamics::ConstrainedStep moved = dynamics::constrained_step(state, stepper, spec, params);
        params = moved.params;
        state = std::move(moved.state);
        check_support(params);
        if (record != nullptr) {
            record->insert(record->end(), params.begin(), params.end());
        }
    }
    return params;
}

ChiSquareResult chi_square_uniformity(const TrialStats &stats_a, const TrialStats &stats_b) {
    if (stats_a.counts.size() != stats_b.counts.size()) {
        throw DimensionError("chi_square_uniformity: detector sets differ");
    }
    const std::size_t k = stats_a.counts.size();
    double total_a = 0.0, total_b = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        total_a += static_cast<double>(stats_a.counts[j]);
        total_b += static_cast<double>(stats_b.counts[j]);
    }
    if (total_a == 0.0 || total_b == 0.0) {
        throw ParameterError("chi_square_uniformity: a run has no hits");
    }
    const double grand = total_a + total_b;
    double statistic = 0.0;
    int used = 0;
    bool valid = true;
    for (std::size_t j = 0; j < k; ++j) {
        const double column = static_cast<double>(stats_a.counts[j] + stats_b.counts[j]);
        if (column == 0.0) {
            continue;
        }
        ++used;
        const double e_a = total_a * column / grand;
        const double e_b = total_b * column / grand;
        if (e_a < 5.0 || e_b < 5.0) {
            valid = false;
        }
        const double d_a = static_cast<double>(stats_a.counts[j]) - e_a;
        const double d_b = static_cast<double>(stats_b.counts[j]) - e_b;
        statistic += d_a * d_a / e_a + d_b * d_b / e_b;
    }
    const int dof = std::max(used - 1, 1);
    return ChiSquareResult{stats::chi_square_sf(statistic, dof), statistic, dof, valid};
}

}  // namespace statewalk::measure
