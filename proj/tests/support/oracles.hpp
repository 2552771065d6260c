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

// Test-side oracles, independent of the library implementation paths they
// check: quadrature, closed-form reference laws, and exact small-case
// hitting probabilities.

#pragma once

#include <cmath>
#include <functional>
#include <numbers>

namespace oracles {

namespace detail {

inline double simpson(const std::function<double(double)> &f, double a, double b, double fa,
                      double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_step(const std::function<double(double)> &f, double a, double b, double fa,
                            double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(f, a, m, fa, flm, fm);
    const double right = simpson(f, m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
/// The range is pre-split into panels so narrow peaks cannot slip between
/// the probe points of a single top-level Simpson estimate.
inline double integrate(const std::function<double(double)> &f, double a, double b,
                        double tol = 1e-13) {
    constexpr int kPanels = 32;
    const double h = (b - a) / kPanels;
    double total = 0.0;
    for (int p = 0; p < kPanels; ++p) {
        const double lo = a + p * h;
        const double hi = lo + h;
        const double flo = f(lo);
        const double fhi = f(hi);
        const double fm = f(0.5 * (lo + hi));
        const double whole = detail::simpson(f, lo, hi, flo, fm, fhi);
        total += detail::adaptive_step(f, lo, hi, flo, fm, fhi, whole, tol / kPanels, 60);
    }
    return total;
}

/// Normalized 1D Gaussian state amplitude, |.|^2 variance sigma^2.
inline double gaussian_amplitude(double x, double center, double sigma) {
    const double u = (x - center) / (2.0 * sigma);
    return std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25) * std::exp(-u * u);
}

/// Overlap of two centered radial Gaussian states over R^dims by quadrature:
/// dims = 1 is a line integral, dims = 3 the radial integral with 4 pi r^2.
inline double centered_overlap_by_quadrature(double d, double sigma, int dims) {
    // The product Gaussian decays on the scale of the narrower factor; size
    // the integration window to that, not to the wider one.
    const double product_width = d * sigma / std::sqrt(d * d + sigma * sigma);
    const double span = 24.0 * product_width;
    if (dims == 1) {
        return integrate(
            [&](double x) {
                return gaussian_amplitude(x, 0.0, d) * gaussian_amplitude(x, 0.0, sigma);
            },
            -span, span);
    }
    // 3D radial: amplitudes are products over axes, i.e. the same exponent
    // with the cube of the 1D normalization.
    const double norm_d = std::pow(2.0 * std::numbers::pi * d * d, -0.75);
    const double norm_s = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.75);
    return integrate(
        [&](double r) {
            const double gd = norm_d * std::exp(-r * r / (4.0 * d * d));
            const double gs = norm_s * std::exp(-r * r / (4.0 * sigma * sigma));
            return 4.0 * std::numbers::pi * r * r * gd * gs;
        },
        0.0, span);
}

/// Overlap of two equal-width Gaussian states displaced by `separation`.
inline double displaced_overlap_by_quadrature(double separation, double sigma) {
    const double span = 12.0 * sigma + std::abs(separation);
    return integrate(
        [&](double x) {
            return gaussian_amplitude(x, 0.0, sigma) * gaussian_amplitude(x, separation, sigma);
        },
        -span, span);
}

/// |<Omega(a,p), Omega(a,0)>| by quadrature: modulus of the Gaussian density
/// characteristic function at p.
inline double momentum_shift_overlap_by_quadrature(double p, double sigma) {
    const double span = 14.0 * sigma;
    const double re = integrate(
        [&](double x) {
            const double g = gaussian_amplitude(x, 0.0, sigma);
            return g * g * std::cos(p * x);
        },
        -span, span);
    const double im = integrate(
        [&](double x) {
            const double g = gaussian_amplitude(x, 0.0, sigma);
            return g * g * std::sin(p * x);
        },
        -span, span);
    return std::hypot(re, im);
}

/// CDF of the Wigner semicircle law on [-2, 2].
inline double semicircle_cdf(double x) {
    if (x <= -2.0) {
        return 0.0;
    }
    if (x >= 2.0) {
        return 1.0;
    }
    return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * std::numbers::pi) +
           std::asin(0.5 * x) / std::numbers::pi;
}

/// Free-packet spreading law: variance of |psi(t)|^2 for an initial width-
/// sigma Gaussian under free evolution (hbar = 1).
inline double free_spread_variance(double sigma, double t, double mass) {
    const double ratio = t / (2.0 * mass * sigma * sigma);
    return sigma * sigma * (1.0 + ratio * ratio);
}

/// Exact first-hitting probability for isotropic Brownian motion on the
/// two-sphere that CP^1 is, absorbed at two antipodal caps of Fubini-Study
/// radius eps: the harmonic measure of the cap at distance d. Used to
/// cross-validate the N = 2 walk engine independently of any Born-weight
/// expectation.
inline double cp1_two_cap_hit_probability(double d, double eps) {
    const double top = std::log(std::tan(std::numbers::pi / 2.0 - eps));
    const double bottom = std::log(std::tan(eps));
    const double here = std::log(std::tan(d));
    return (top - here) / (top - bottom);
}

/// Classical harmonic-oscillator position at time t.
inline double harmonic_position(double a0, double p0, double mass, double omega, double t) {
    return a0 * std::cos(omega * t) + p0 / (mass * omega) * std::sin(omega * t);
}

}  // namespace oracles
