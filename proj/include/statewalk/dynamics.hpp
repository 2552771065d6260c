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
 * State propagation: exact unitary steps under fresh GUE draws, split-step
 * grid evolution under kinetic + potential Hamiltonians, drift injection,
 * and constrained (manifold-projected) stepping.
 */

#pragma once

#include <functional>
#include <optional>

#include "statewalk/gue.hpp"
#include "statewalk/hilbert.hpp"
#include "statewalk/packets.hpp"

namespace statewalk::dynamics {

/// Deterministic tangent-vector rule evaluated at the current ray; its output
/// is tangent-projected at the base before use, so the orthogonality
/// invariant holds regardless of what the rule returns.
using DriftRule = std::function<StateVector(const Ray &)>;

struct StepConfig {
    double dt;
    double hbar = 1.0;
    double gue_scale = 1.0;
    DriftRule drift;         // empty = no drift
    bool first_order = false;  // Euler + renormalize instead of the exact
                               // exponential; cross-check mode only
};

/// True when the effective step angle gue_scale*dt*sqrt(N) exceeds 0.3 rad
/// and the small-step reading of the walk is no longer trustworthy.
bool step_angle_warning(const StepConfig &cfg, int dimension);

/// One walk step: psi -> exp(-i H dt / hbar) psi for a fresh GUE draw H.
/// The exponential is applied exactly (closed form at N = 2, eigendecomposition
/// or a machine-precision expm-times-vector evaluation otherwise; all paths
/// agree to 1e-13 and preserve the norm to 1e-10). With a drift rule
/// configured, the drift tangent vector scaled by dt is added before
/// renormalization.
StateVector random_step(const StateVector &psi, gue::GueSampler &sampler, const StepConfig &cfg);

/// Reusable buffers for allocation-free stepping in hot walk loops.
struct StepWorkspace {
    gue::HermitianMatrix h;
    StateVector term, acc, scratch;
};

/// In-place variant of random_step with identical results (bit-for-bit given
/// the same sampler state).
void random_step_in_place(StateVector &psi, gue::GueSampler &sampler, const StepConfig &cfg,
                          StepWorkspace &workspace);

/// Kinetic + local-potential Hamiltonian sampled on a periodic grid.
struct GridHamiltonian {
    packets::Grid grid;
    double mass;
    Eigen::VectorXd potential;  // one value per grid node, row-major

    GridHamiltonian(const packets::Grid &g, double m,
                    const std::function<double(const std::vector<double> &)> &v);
};

/// Strang split-step propagation (half potential, full kinetic in Fourier
/// space, half potential), second order in dt; norm preserved to 1e-10.
/// dt budget: keep |V|_max dt and p_nyq^2 dt / (2m) well below 1 rad per step
/// for the O(dt^2) commutator error to stay in the small-coefficient regime.
/// Throws ResolutionError when spectral weight within 3 bins of the band
/// edge exceeds 1e-6.
StateVector evolve_grid(const StateVector &psi, const GridHamiltonian &h, double dt, int steps,
                        double hbar = 1.0);

using Stepper = std::function<StateVector(const StateVector &)>;

struct ConstrainedStep {
    StateVector state;           // the projected manifold member
    std::vector<double> params;  // its manifold parameters
    double distance;             // FS distance from the unconstrained step
};

/// Applies the underlying step, then projects back onto the manifold with
/// the previous parameters as warm start.
ConstrainedStep constrained_step(const StateVector &psi, const Stepper &step,
                                 const packets::ManifoldSpec &spec,
                                 const std::optional<std::vector<double>> &warm_start);

}  // namespace statewalk::dynamics
