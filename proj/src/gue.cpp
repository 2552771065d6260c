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

#include "statewalk/gue.hpp"

#include <cmath>

#include "statewalk/errors.hpp"

namespace statewalk::gue {

GueSampler::GueSampler(int dimension, double scale, std::uint64_t seed)
    : dimension_(dimension), scale_(scale), seed_(seed), generator_(seed) {
    if (dimension < 2) {
        throw ParameterError("GueSampler: dimension must be >= 2");
    }
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw ParameterError("GueSampler: scale must be positive");
    }
}

HermitianMatrix GueSampler::sample() {
    HermitianMatrix h;
    sample_into(h);
    return h;
}

void GueSampler::sample_into(HermitianMatrix &h) {
    const int n = dimension_;
    const double s = scale_;
    const double off_scale = s / std::sqrt(2.0);
    h.resize(n, n);
    for (int j = 0; j < n; ++j) {
        h(j, j) = s * generator_.next_normal();
        for (int k = j + 1; k < n; ++k) {
            const double x = generator_.next_normal();
            const double y = generator_.next_normal();
            h(j, k) = off_scale * std::complex<double>(x, y);
            h(k, j) = std::conj(h(j, k));
        }
    }
}

InvarianceReport unitary_invariance_check(GueSampler &sampler, const Eigen::MatrixXcd &unitary,
                                          int draws) {
    const int n = sampler.dimension();
    if (unitary.rows() != n || unitary.cols() != n) {
        throw DimensionError("unitary_invariance_check: matrix dimension mismatch");
    }
    const double unitarity_dev =
        (unitary.adjoint() * unitary - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (unitarity_dev > 1e-12) {
        throw ParameterError("unitary_invariance_check: matrix is not unitary to 1e-12");
    }
    if (draws < 2) {
        throw ParameterError("unitary_invariance_check: need at least 2 draws");
    }

    Eigen::MatrixXcd mean_plain = Eigen::MatrixXcd::Zero(n, n);
    Eigen::MatrixXcd mean_conj = Eigen::MatrixXcd::Zero(n, n);
    Eigen::MatrixXd sq_plain = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd sq_conj = Eigen::MatrixXd::Zero(n, n);
    for (int d = 0; d < draws; ++d) {
        const HermitianMatrix h = sampler.sample();
        const HermitianMatrix rotated = unitary * h * unitary.adjoint();
        mean_plain += h;
        mean_conj += rotated;
        sq_plain += h.cwiseAbs2();
        sq_conj += rotated.cwiseAbs2();
    }
    mean_plain /= draws;
    mean_conj /= draws;
    sq_plain /= draws;
    sq_conj /= draws;

    const double s = sampler.scale();
    InvarianceReport report;
    report.max_first_moment_dev = (mean_plain - mean_conj).cwiseAbs().maxCoeff();
    report.max_second_moment_dev = (sq_plain - sq_conj).cwiseAbs().maxCoeff();
    // Difference of two independent empirical means; Var|H_jk|^2 is 2 s^4 on
    // the diagonal and s^4 off it, so use the larger.
    report.first_moment_se = std::sqrt(2.0) * s / std::sqrt(static_cast<double>(draws));
    report.second_moment_se = 2.0 * s * s / std::sqrt(static_cast<double>(draws));
    return report;
}

}  // namespace statewalk::gue
