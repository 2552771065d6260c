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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "statewalk/hilbert.hpp"
#include "support/random_states.hpp"

using namespace statewalk;
using test_support::random_state;
using test_support::random_unitary;

namespace {

StateVector basis(Eigen::Index n, Eigen::Index k) {
    StateVector e = StateVector::Zero(n);
    e[k] = 1.0;
    return e;
}

}  // namespace

TEST_CASE("inner: basis examples and conjugate symmetry") {
    const StateVector e1 = basis(2, 0);
    const StateVector e2 = basis(2, 1);
    CHECK(std::abs(inner(e1, e1) - Complex(1.0)) < 1e-15);
    CHECK(std::abs(inner(e1, e2)) < 1e-15);

    StateVector half(2);
    half << std::sqrt(0.5), std::sqrt(0.5);
    CHECK(std::abs(inner(half, e1) - Complex(std::sqrt(0.5))) < 1e-12);

    rng::Xoshiro256 gen(11);
    for (int rep = 0; rep < 50; ++rep) {
        const StateVector a = random_state(gen, 8);
        const StateVector b = random_state(gen, 8);
        CHECK(std::abs(inner(a, b) - std::conj(inner(b, a))) < 1e-14);
    }

    CHECK_THROWS_AS(inner(basis(2, 0), basis(3, 0)), DimensionError);
}

TEST_CASE("fs_distance: examples, symmetry, phase invariance") {
    const Ray e1{basis(2, 0)};
    const Ray e2{basis(2, 1)};
    StateVector half(2);
    half << std::sqrt(0.5), std::sqrt(0.5);

    CHECK(fs_distance(e1, e1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(fs_distance(e1, e2) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
    CHECK(fs_distance(Ray{half}, e1) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-12));

    rng::Xoshiro256 gen(12);
    for (int rep = 0; rep < 100; ++rep) {
        const Ray a{random_state(gen, 4)};
        const Ray b{random_state(gen, 4)};
        CHECK(std::abs(fs_distance(a, b) - fs_distance(b, a)) < 1e-12);

        const double theta = gen.next_double() * 2.0 * std::numbers::pi;
        const StateVector rotated = std::exp(Complex(0, theta)) * a.representative();
        CHECK(std::abs(fs_distance(Ray{rotated}, b) - fs_distance(a, b)) < 1e-12);
    }
}

TEST_CASE("fs_distance: metric axioms on random triples") {
    rng::Xoshiro256 gen(13);
    for (Eigen::Index n : {2, 8, 64}) {
        for (int rep = 0; rep < 1000; ++rep) {
            const Ray a{random_state(gen, n)};
            const Ray b{random_state(gen, n)};
            const Ray c{random_state(gen, n)};
            const double ab = fs_distance(a, b);
            const double bc = fs_distance(b, c);
            const double ac = fs_distance(a, c);
            CHECK(ab >= 0.0);
            CHECK(ab <= std::numbers::pi / 2 + 1e-12);
            CHECK(ac <= ab + bc + 1e-10);
        }
    }
}

TEST_CASE("fs_distance: clamp keeps coincident rays finite") {
    rng::Xoshiro256 gen(14);
    for (int rep = 0; rep < 20; ++rep) {
        const StateVector a = random_state(gen, 16);
        const double d = fs_distance(a, a);
        CHECK(std::isfinite(d));
        CHECK(d <= 1e-7);
    }
}

TEST_CASE("tangent_project: examples, idempotence, orthogonality") {
    const Ray e1{basis(2, 0)};
    const StateVector e2 = basis(2, 1);

    CHECK(tangent_project(e1, e1.representative()).direction.norm() < 1e-12);
    CHECK((tangent_project(e1, e2).direction - e2).norm() < 1e-12);

    StateVector sum = e1.representative() + e2;
    CHECK((tangent_project(e1, sum).direction - e2).norm() < 1e-12);

    rng::Xoshiro256 gen(15);
    for (int rep = 0; rep < 50; ++rep) {
        const Ray base{random_state(gen, 8)};
        StateVector v(8);
        for (int k = 0; k < 8; ++k) {
            v[k] = Complex(gen.next_normal(), gen.next_normal());
        }
        const TangentVector t = tangent_project(base, v);
        CHECK(std::abs(inner(base.representative(), t.direction)) < 1e-12);
        const TangentVector tt = tangent_project(base, t.direction);
        CHECK((tt.direction - t.direction).norm() < 1e-12);
    }
}

TEST_CASE("normalize: examples and degenerate input") {
    StateVector two(2);
    two << 2.0, 0.0;
    const StateVector unit = normalize(two);
    CHECK(std::abs(unit[0] - Complex(1.0)) < 1e-15);
    CHECK(std::abs(unit[1]) < 1e-15);

    StateVector ones(2);
    ones << 1.0, 1.0;
    const StateVector half = normalize(ones);
    CHECK(std::abs(half[0] - Complex(std::sqrt(0.5))) < 1e-12);

    StateVector zero = StateVector::Zero(2);
    CHECK_THROWS_AS(normalize(zero), DegenerateStateError);
}

TEST_CASE("schmidt_entropy: product, Bell, factorizable superposition") {
    // e1 (x) e1 on 2 x 2.
    StateVector product = StateVector::Zero(4);
    product[0] = 1.0;
    CHECK(schmidt_entropy(product, 2, 2) == doctest::Approx(0.0).epsilon(1e-12));

    StateVector bell = StateVector::Zero(4);
    bell[0] = std::sqrt(0.5);
    bell[3] = std::sqrt(0.5);
    CHECK(schmidt_entropy(bell, 2, 2) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    // (e1 (x) e1 + e1 (x) e2)/sqrt(2) factorizes.
    StateVector fact = StateVector::Zero(4);
    fact[0] = std::sqrt(0.5);
    fact[1] = std::sqrt(0.5);
    CHECK(schmidt_entropy(fact, 2, 2) == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS(schmidt_entropy(bell, 2, 3), DimensionError);
}

TEST_CASE("schmidt_entropy: invariant under local unitaries") {
    rng::Xoshiro256 gen(16);
    for (int rep = 0; rep < 10; ++rep) {
        const StateVector psi = random_state(gen, 12);  // 3 x 4 split
        const double base = schmidt_entropy(psi, 3, 4);

        const Eigen::MatrixXcd ua = random_unitary(gen, 3);
        const Eigen::MatrixXcd ub = random_unitary(gen, 4);
        Eigen::MatrixXcd coeff =
            Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                                           Eigen::RowMajor>>(psi.data(), 3, 4);
        Eigen::MatrixXcd rotated = ua * coeff * ub.transpose();
        StateVector phi(12);
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 4; ++b) {
                phi[a * 4 + b] = rotated(a, b);
            }
        }
        CHECK(schmidt_entropy(phi, 3, 4) == doctest::Approx(base).epsilon(1e-10));
    }
}
