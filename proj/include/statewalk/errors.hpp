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

#include <stdexcept>
#include <string>
#include <vector>

namespace statewalk {

/// Base class for all statewalk errors.
struct Error : std::runtime_error {
    explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

/// Two objects that must share a dimension do not.
struct DimensionError : Error {
    using Error::Error;
};

/// A numeric parameter violates its precondition (sign, range, aliasing bound).
struct ParameterError : Error {
    using Error::Error;
};

/// A vector with (numerically) zero norm where a state was required.
struct DegenerateStateError : Error {
    using Error::Error;
};

/// A packet does not fit the grid: off-grid norm deficit above tolerance.
struct GridSupportError : Error {
    using Error::Error;
};

/// Spectral weight reached the band edge; the grid cannot resolve the state.
struct ResolutionError : Error {
    using Error::Error;
};

/// A constrained walker left the supported region of its grid.
struct SupportError : Error {
    using Error::Error;
};

/// Manifold projection did not converge. Carries the best candidate found.
struct ProjectionFailure : Error {
    std::vector<double> best_params;
    double best_distance;
    ProjectionFailure(const std::string &msg, std::vector<double> params, double distance)
        : Error(msg), best_params(std::move(params)), best_distance(distance) {}
};

/// Configuration rejected before any computation started.
struct ValidationError : Error {
    using Error::Error;
};

/// Linear-algebra backend failure (eigendecomposition did not converge).
struct NumericalError : Error {
    using Error::Error;
};

}  // namespace statewalk
