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

#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Core>

#include "statewalk/errors.hpp"

namespace statewalk::packets {

/// Periodic spatial grid with n nodes per axis on [axis_min, axis_max).
/// Node coordinates are x_k = axis_min + k*dx. The amplitude convention is
/// c_k = psi(x_k) * dx^{dims/2}, so sum |c_k|^2 approximates the L2 norm.
/// States on a dims-dimensional grid are laid out row-major
/// (index = (i0*n + i1)*n + i2 for dims = 3).
struct Grid {
    int points_per_axis;
    double axis_min;
    double axis_max;
    int dims = 1;

    Grid(int n, double min, double max, int d = 1)
        : points_per_axis(n), axis_min(min), axis_max(max), dims(d) {
        if (n < 16) {
            throw ParameterError("Grid: points_per_axis must be >= 16");
        }
        if (!(max > min)) {
            throw ParameterError("Grid: axis_max must exceed axis_min");
        }
        if (d < 1 || d > 3) {
            throw ParameterError("Grid: dims must be 1, 2, or 3");
        }
    }

    double spacing() const { return (axis_max - axis_min) / points_per_axis; }
    double extent() const { return axis_max - axis_min; }

    /// Total state dimension n^dims.
    Eigen::Index size() const {
        Eigen::Index total = 1;
        for (int d = 0; d < dims; ++d) {
            total *= points_per_axis;
        }
        return total;
    }

    double node(int k) const { return axis_min + k * spacing(); }

    /// Largest representable momentum magnitude (band limit), pi/dx.
    double nyquist() const { return std::numbers::pi / spacing(); }

    /// Momentum of FFT bin j (FFTW frequency order), 2*pi*j'/(n*dx) with
    /// j' = j for j < n/2 and j' = j - n otherwise.
    double momentum_bin(int j) const {
        const int n = points_per_axis;
        const int signed_j = (j < (n + 1) / 2) ? j : j - n;
        return 2.0 * std::numbers::pi * signed_j / (n * spacing());
    }

    bool same_geometry(const Grid &other) const {
        return points_per_axis == other.points_per_axis && axis_min == other.axis_min &&
               axis_max == other.axis_max && dims == other.dims;
    }
};

}  // namespace statewalk::packets
