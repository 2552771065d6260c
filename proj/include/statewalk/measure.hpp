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

/**
 * @file
 * Measurement as a random walk: absorbing detector neighborhoods, trial
 * execution, hitting statistics against Born weights, constrained classical
 * walks, and the accompanying statistical tests.
 */

#pragma once

#include <cstdint>
#include <vector>

#include "statewalk/dynamics.hpp"
#include "statewalk/stats.hpp"

namespace statewalk::measure {

/// Absorbing neighborhoods: a hit is the first entry of the walk into the
/// Fubini-Study epsilon-ball of any target.
class DetectorSet {
  public:
    /// Throws ParameterError unless epsilon > 0 and all pairwise target
    /// distances are >= 5 epsilon (unambiguous hits).
    DetectorSet(std::vector<Ray> targets, double epsilon);

    /// All computational basis states of dimension n as targets.
    static DetectorSet full_basis(Eigen::Index n, double epsilon);

    const std::vector<Ray> &targets() const { return targets_; }
    double epsilon() const { return epsilon_; }
    Eigen::Index dim() const { return targets_.front().dim(); }
    std::size_t count() const { return targets_.size(); }

    /// Index of the basis vector when target j is (a phase times) a
    /// computational basis state, else -1. Lets the walk loop test
    /// absorption with one amplitude read per target.
    int basis_index(std::size_t j) const { return basis_index_[j]; }

  private:
    std::vector<Ray> targets_;
    std::vector<int> basis_index_;
    double epsilon_;
};

constexpr int kCensored = -1;

struct WalkOutcome {
    int result;               // target index, or kCensored
    std::int64_t steps_taken;
    double final_distance;    // distance to the nearest target at stop time

    bool hit() const { return result != kCensored; }
};

/// Aggregated hitting statistics over independent trials.
struct TrialStats {
    std::vector<std::int64_t> counts;          // hits per target
    std::int64_t censored = 0;
    std::int64_t total = 0;
    std::vector<double> frequencies;           // counts / total (raw)
    std::vector<double> hit_frequencies;       // counts / hits (conditioned)
    std::vector<stats::Interval> wilson;       // 95% intervals on raw frequencies
    double mean_steps_to_hit = 0.0;
    std::uint64_t master_seed = 0;
    std::vector<WalkOutcome> outcomes;         // per-trial records, by trial id
};

struct BornWeights {
    std::vector<double> probabilities;
    bool renormalized;  // raw weights did not sum to 1; output was rescaled
    double raw_sum;
};

/// |<target_j, psi0>|^2, renormalized over the detector set when the raw
/// weights do not sum to 1 (partial detector sets); the rescaling is flagged.
BornWeights born_weights(const Ray &psi0, const DetectorSet &detectors);

/// Iterates random_step until the state first enters some target's
/// epsilon-ball (hit) or max_steps elapse (censored; a result, not an error).
/// Precondition: psi0 is not already within epsilon of two targets.
WalkOutcome run_walk(const Ray &psi0, const DetectorSet &detectors,
                     const dynamics::StepConfig &cfg, gue::GueSampler &sampler,
                     std::int64_t max_steps);

/// n independent walks with per-trial samplers derived from the master seed
/// (rng::derive_seed). Aggregation is order-independent and the result is a
/// pure function of (inputs, master_seed), regardless of thread count.
TrialStats run_trials(int n, const Ray &psi0, const DetectorSet &detectors,
                      const dynamics::StepConfig &cfg, std::uint64_t master_seed,
                      std::int64_t max_steps, int threads = 0);

/// Random walk constrained to the position manifold: repeated GUE step +
/// projection. Returns the final manifold parameters (the classical
/// position). Throws SupportError when the walker reaches the grid's
/// support margin. With record != nullptr, appends the parameters after
/// every step (steps x parameter_count, row-major).
std::vector<double> constrained_position_walk(const std::vector<double> &start,
                                              const packets::ManifoldSpec &spec,
                                              const dynamics::StepConfig &cfg, int steps,
                                              gue::GueSampler &sampler,
                                              std::vector<double> *record = nullptr);

struct ChiSquareResult {
    double p_value;
    double statistic;
    int dof;
    bool valid;  // false when some expected cell count < 5
};

/// Pearson chi-square homogeneity test over the hit counts of two runs with
/// the same detector set.
ChiSquareResult chi_square_uniformity(const TrialStats &stats_a, const TrialStats &stats_b);

}  // namespace statewalk::measure
