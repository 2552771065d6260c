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
 * Gaussian packets on spatial grids: the embeddings of classical space and
 * phase space into the space of states, momentum (Fourier-image) packet
 * families, closed-form overlaps, and nearest-point projection onto the
 * embedded manifolds.
 *
 * A position packet of width sigma centered at a samples
 *   g_{a,sigma}(x) = (2 pi sigma^2)^{-dims/4} exp(-(x-a)^2 / (4 sigma^2)),
 * a phase-space packet additionally carries the plane-wave factor
 * exp(i p.x / hbar) with hbar = 1. |g|^2 has variance sigma^2 per axis.
 */

#pragma once

#include <optional>
#include <vector>

#include "statewalk/grid.hpp"
#include "statewalk/hilbert.hpp"

namespace statewalk::packets {

/// (center, momentum, width) parametrizing a packet. hbar = 1 throughout.
struct GaussianParams {
    std::vector<double> center;
    std::vector<double> momentum;
    double sigma;
};

enum class ManifoldKind {
    Position,    // rays of g_{a,sigma}; parameters: dims*factors centers
    PhaseSpace,  // rays of g_{a,sigma} e^{ipx}; parameters: (a, p) per factor
    Momentum,    // Fourier images of g_{b,sigma}; parameters: dims*factors centers
};

/// An embedded packet manifold: kind, width, underlying per-factor grid, and
/// number of tensor factors (particles).
struct ManifoldSpec {
    ManifoldKind kind;
    double sigma;
    Grid grid;
    int factors = 1;

    /// Number of real parameters: dims*factors for position/momentum kinds,
    /// 2*dims*factors for phase space.
    int parameter_count() const {
        const int per_factor = grid.dims * (kind == ManifoldKind::PhaseSpace ? 2 : 1);
        return per_factor * factors;
    }

    /// Joint state dimension grid.size()^factors.
    Eigen::Index state_size() const {
        Eigen::Index total = 1;
        for (int f = 0; f < factors; ++f) {
            total *= grid.size();
        }
        return total;
    }
};

/// Result of a nearest-point search on an embedded manifold.
struct Projection {
    std::vector<double> params;
    double distance;  // Fubini-Study distance at the optimum, radians
};

/// Normalized grid sample of g_{a,sigma}. Throws ParameterError for
/// sigma <= 0 and GridSupportError when the off-grid norm deficit exceeds
/// 1e-6 (packet support must stay ~5 sigma inside the boundary).
StateVector make_position_packet(const Grid &grid, const std::vector<double> &center,
                                 double sigma);

/// Normalized grid sample of g_{a,sigma} e^{ip.x}. In addition to the
/// position-packet checks, enforces the band limit
/// |p_i| < pi/dx - 3/(2 sigma) on each axis.
StateVector make_phase_packet(const Grid &grid, const std::vector<double> &center,
                              const std::vector<double> &momentum, double sigma);

/// Discrete-Fourier image of g_{b,sigma}: a state of well-defined momentum
/// (its momentum density is Gaussian of width 1/(2 sigma) over the FFTW-
/// ordered bins). The transform is unitary, so the result is normalized.
/// Amplitudes follow FFTW frequency order, so the member's position density
/// is a wide Gaussian wrapped around the grid origin.
StateVector momentum_member(const Grid &grid, const std::vector<double> &center, double sigma);

/// Inner product of two unit-norm radial Gaussian states with |.|^2 widths
/// d and sigma at a common center: (2 sigma d / (sigma^2 + d^2))^{dims/2}.
double overlap_centered(double d, double sigma, int dims);

/// |<g_{a,sigma}, g_{b,sigma}>| = exp(-||a-b||^2 / (8 sigma^2)).
double overlap_displaced(double separation, double sigma);

/// |<g_{a,s}, g_{b,d}>| for unequal widths:
/// prod_axis (2 s d/(s^2+d^2))^{1/2} * exp(-||a-b||^2 / (4 (s^2+d^2))).
double overlap_displaced_widths(double separation, double sigma_1, double sigma_2, int dims);

/// |<Omega(a,p), Omega(a,q)>| = exp(-sigma^2 ||p-q||^2 / 2).
double overlap_momentum_shift(double momentum_gap, double sigma);

/// Unit tangent at g_{a,sigma} along the width variation d/d sigma,
/// tangent-projected at the packet. Orthogonal to every center direction.
StateVector width_direction(const Grid &grid, const std::vector<double> &center, double sigma);

/// Unit tangent at g_{a,sigma} along center translation d/d a_axis.
StateVector position_direction(const Grid &grid, const std::vector<double> &center, double sigma,
                               int axis);

/// The manifold member at the given parameter vector (layout: factor-major;
/// phase space interleaves (a_0..a_{dims-1}, p_0..p_{dims-1}) per factor).
StateVector manifold_member(const ManifoldSpec &spec, const std::vector<double> &params);

/// Nearest-point projection: finds parameters locally maximizing
/// |<member(theta), psi>| by warm-started ascent (coarse grid scan when no
/// warm start), and returns them with the Fubini-Study distance at the
/// optimum. Convergence: parameter update < 1e-10 grid units; max 500
/// iterations, then ProjectionFailure carrying the best candidate.
Projection project_to_manifold(const StateVector &psi, const ManifoldSpec &spec,
                               const std::optional<std::vector<double>> &warm_start = {});

}  // namespace statewalk::packets
