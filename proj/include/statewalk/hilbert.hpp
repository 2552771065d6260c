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
 * Finite-dimensional Hilbert-space and projective-space primitives: inner
 * products, normalization, Fubini-Study distance, tangent-space projection,
 * and the Schmidt entropy of bipartite states.
 */

#pragma once

#include <complex>

#include <Eigen/Dense>

#include "statewalk/errors.hpp"

namespace statewalk {

using Complex = std::complex<double>;

/// Amplitudes over a declared basis. Convention: a "normalized" state has
/// sum |c_k|^2 = 1 within 1e-12.
using StateVector = Eigen::VectorXcd;

constexpr double kNormTolerance = 1e-12;

/// Hermitian pairing, conjugate-linear in the first argument:
/// inner(psi, phi) = sum_k conj(psi_k) phi_k.
Complex inner(const StateVector &psi, const StateVector &phi);

double norm(const StateVector &psi);

/// Returns psi / ||psi||. Throws DegenerateStateError on (numerically) zero
/// input, DimensionError below length 2.
StateVector normalize(const StateVector &psi);

bool is_normalized(const StateVector &psi, double tol = kNormTolerance);

/// A state modulo phase and normalization: the point of projective space all
/// distances are defined on. Holds one normalized representative.
class Ray {
  public:
    explicit Ray(const StateVector &representative) : rep_(normalize(representative)) {}

    const StateVector &representative() const { return rep_; }
    Eigen::Index dim() const { return rep_.size(); }

  private:
    StateVector rep_;
};

/// Fubini-Study distance arccos(|<a, b>|) in radians, in [0, pi/2].
/// The overlap modulus is clamped into [0, 1] before arccos so 1e-16
/// roundoff at coincident rays cannot produce NaN.
double fs_distance(const Ray &a, const Ray &b);

/// Distance between the rays of two (not necessarily normalized) states.
double fs_distance(const StateVector &a, const StateVector &b);

/// Element of the tangent space at a ray: direction orthogonal to the base.
struct TangentVector {
    Ray base;
    StateVector direction;
};

/// Removes the component of v along the base ray:
/// direction = v - base * <base, v>. Idempotent.
TangentVector tangent_project(const Ray &base, const StateVector &v);

/// Entanglement entropy of a normalized bipartite state, in nats.
/// Amplitudes are reshaped row-major into dim_a x dim_b (index = a*dim_b + b),
/// and the entropy of the squared singular values is returned with the
/// conventions 0 ln 0 = 0 and singular values below 1e-14 dropped.
/// Zero exactly for product states (within tolerance).
double schmidt_entropy(const StateVector &psi, Eigen::Index dim_a, Eigen::Index dim_b);

}  // namespace statewalk
