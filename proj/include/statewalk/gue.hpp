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
 * Seedable sampler of Gaussian-unitary-ensemble Hermitian matrices.
 *
 * Normalization convention: density proportional to exp(-Tr H^2 / (2 s^2)),
 * i.e. every independent real Gaussian degree of freedom has variance s^2:
 * diagonal entries are N(0, s^2) real, off-diagonal entries are
 * (X + iY)/sqrt(2) with X, Y ~ N(0, s^2), so E|H_jk|^2 = s^2 for every entry
 * and E[Tr H^2] = N^2 s^2.
 */

#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "statewalk/rng.hpp"

namespace statewalk::gue {

using HermitianMatrix = Eigen::MatrixXcd;

/// Single-owner mutable sampler state. Identical (seed, dimension, scale)
/// reproduce a bit-identical sample sequence; concurrent trials should each
/// derive their own sampler via rng::derive_seed.
class GueSampler {
  public:
    GueSampler(int dimension, double scale, std::uint64_t seed);

    /// One independent GUE draw. H = H^dagger holds exactly by construction.
    /// Fill order (fixed, part of the determinism contract): for each row j,
    /// the diagonal entry, then the off-diagonal pair (X, Y) for each k > j.
    HermitianMatrix sample();

    /// Identical draw semantics without the per-call allocation; `out` is
    /// resized if needed. sample() delegates here.
    void sample_into(HermitianMatrix &out);

    int dimension() const { return dimension_; }
    double scale() const { return scale_; }
    std::uint64_t seed() const { return seed_; }

  private:
    int dimension_;
    double scale_;
    std::uint64_t seed_;
    rng::Xoshiro256 generator_;
};

/// Comparison of empirical first and second entry moments of {H} against
/// {U H U^dagger}, each over `draws` fresh draws. The GUE distribution is
/// invariant under unitary conjugation, so both discrepancies should sit
/// within a few standard errors of zero.
struct InvarianceReport {
    double max_first_moment_dev;   // max_jk |mean H_jk - mean (UHU')_jk|
    double max_second_moment_dev;  // max_jk |mean|H_jk|^2 - mean|(UHU')_jk|^2|
    double first_moment_se;        // standard error scale for the first row
    double second_moment_se;       // standard error scale for the second row
};

/// Throws ParameterError unless U is unitary to 1e-12.
InvarianceReport unitary_invariance_check(GueSampler &sampler, const Eigen::MatrixXcd &unitary,
                                          int draws);

}  // namespace statewalk::gue
