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

#include "statewalk/hilbert.hpp"

#include <algorithm>
#include <cmath>

namespace statewalk {

namespace {

void require_finite(const StateVector &psi, const char *what) {
    if (!psi.allFinite()) {
        throw ParameterError(std::string(what) + ": non-finite amplitude");
    }
}

void require_same_length(const StateVector &a, const StateVector &b, const char *what) {
    if (a.size() != b.size()) {
        throw DimensionError(std::string(what) + ": length mismatch (" +
                             std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
    }
}

}  // namespace

Complex inner(const StateVector &psi, const StateVector &phi) {
    require_same_length(psi, phi, "inner");
    return psi.dot(phi);  // Eigen's dot conjugates the first factor.
}

double norm(const StateVector &psi) {
    return psi.norm();
}

StateVector normalize(const StateVector &psi) {
    if (psi.size() < 2) {
        throw DimensionError("normalize: state length must be >= 2");
    }
    require_finite(psi, "normalize");
    const double n = psi.norm();
    if (n <= 0.0 || !std::isfinite(n)) {
        throw DegenerateStateError("normalize: zero-norm state");
    }
    return psi / n;
}

bool is_normalized(const StateVector &psi, double tol) {
    return std::abs(psi.squaredNorm() - 1.0) <= tol;
}

double fs_distance(const Ray &a, const Ray &b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("fs_distance: dimension mismatch");
    }
    const double overlap = std::abs(a.representative().dot(b.representative()));
    return std::acos(std::clamp(overlap, 0.0, 1.0));
}

double fs_distance(const StateVector &a, const StateVector &b) {
    return fs_distance(Ray(a), Ray(b));
}

TangentVector tangent_project(const Ray &base, const StateVector &v) {
    require_same_length(base.representative(), v, "tangent_project");
    require_finite(v, "tangent_project");
    const StateVector &rep = base.representative();
    StateVector direction = v - rep * rep.dot(v);
    return TangentVector{base, std::move(direction)};
}

double schmidt_entropy(const StateVector &psi, Eigen::Index dim_a, Eigen::Index dim_b) {
    if (dim_a < 2 || dim_b < 2 || psi.size() != dim_a * dim_b) {
        throw DimensionError("schmidt_entropy: length " + std::to_string(psi.size()) +
                             " does not factor as " + std::to_string(dim_a) + " x " +
                             std::to_string(dim_b));
    }
    if (!is_normalized(psi, 1e-9)) {
        throw ParameterError("schmidt_entropy: state must be normalized");
    }
    // Row-major reshape: amplitude of e_a (x) e_b sits at index a*dim_b + b.
    Eigen::MatrixXcd coeff =
        Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            psi.data(), dim_a, dim_b);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(coeff);
    const auto &singular = svd.singularValues();

    constexpr double kSingularFloor = 1e-14;
    double entropy = 0.0;
    for (Eigen::Index k = 0; k < singular.size(); ++k) {
        const double s = singular[k];
        if (s < kSingularFloor) {
            continue;
        }
        const double w = s * s;
        entropy -= w * std::log(w);
    }
    return std::max(entropy, 0.0);
}

}  // namespace statewalk
