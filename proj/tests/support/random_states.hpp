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

#include <Eigen/Dense>

#include "statewalk/hilbert.hpp"
#include "statewalk/rng.hpp"

namespace test_support {

inline statewalk::StateVector random_state(statewalk::rng::Xoshiro256 &gen, Eigen::Index n) {
    statewalk::StateVector v(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        v[k] = statewalk::Complex(gen.next_normal(), gen.next_normal());
    }
    return statewalk::normalize(v);
}

/// Haar-ish random unitary: QR of a complex Gaussian matrix with the phase
/// convention fixed by the R diagonal.
inline Eigen::MatrixXcd random_unitary(statewalk::rng::Xoshiro256 &gen, Eigen::Index n) {
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            m(j, k) = statewalk::Complex(gen.next_normal(), gen.next_normal());
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < n; ++k) {
        const statewalk::Complex d = r(k, k);
        q.col(k) *= (std::abs(d) > 0) ? d / std::abs(d) : 1.0;
    }
    return q;
}

}  // namespace test_support
