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

#include "statewalk/packets.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "statewalk/fft.hpp"

namespace statewalk::packets {

namespace {

using Eigen::Index;

constexpr double kDeficitTolerance = 1e-6;
constexpr double kSupportMarginSigmas = 5.0;

void check_packet_params(const Grid &grid, const std::vector<double> &center,
                         const std::vector<double> &momentum, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ParameterError("packet: sigma must be positive");
    }
    if (static_cast<int>(center.size()) != grid.dims) {
        throw DimensionError("packet: center needs one component per grid axis");
    }
    if (static_cast<int>(momentum.size()) != grid.dims) {
        throw DimensionError("packet: momentum needs one component per grid axis");
    }
    const double p_bound = grid.nyquist() - 1.5 / sigma;
    for (double p : momentum) {
        if (std::abs(p) >= p_bound) {
            throw ParameterError(
                "packet: momentum content |p| + 3/(2 sigma) exceeds the band limit pi/dx; "
                "lower |p|, raise sigma, or refine the grid");
        }
    }
}

/// Raw per-axis sample of (2 pi sigma^2)^{-1/4} exp(-(x-a)^2/(4 sigma^2)) e^{ipx},
/// scaled by dx^{1/2} so the squared norm approximates the unit L2 integral.
Eigen::VectorXcd axis_sample(const Grid &grid, double a, double p, double sigma) {
    const int n = grid.points_per_axis;
    const double dx = grid.spacing();
    const double amp = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25) * std::sqrt(dx);
    Eigen::VectorXcd values(n);
    for (int k = 0; k < n; ++k) {
        const double x = grid.node(k);
        const double u = (x - a) / (2.0 * sigma);
        values[k] = amp * std::exp(-u * u) * std::exp(Complex(0.0, p * x));
    }
    return values;
}

/// Tensor assembly of per-axis arrays into the row-major grid layout.
StateVector assemble_axes(const Grid &grid, const std::vector<Eigen::VectorXcd> &axes) {
    const int n = grid.points_per_axis;
    if (grid.dims == 1) {
        return axes[0];
    }
    StateVector out(grid.size());
    if (grid.dims == 2) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                out[static_cast<Index>(i) * n + j] = axes[0][i] * axes[1][j];
            }
        }
        return out;
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Complex ij = axes[0][i] * axes[1][j];
            for (int k = 0; k < n; ++k) {
                out[(static_cast<Index>(i) * n + j) * n + k] = ij * axes[2][k];
            }
        }
    }
    return out;
}

StateVector sample_packet(const Grid &grid, const std::vector<double> &center,
                          const std::vector<double> &momentum, double sigma,
                          bool check_support) {
    check_packet_params(grid, center, momentum, sigma);
    std::vector<Eigen::VectorXcd> axes;
    axes.reserve(static_cast<std::size_t>(grid.dims));
    double norm_sq = 1.0;
    for (int d = 0; d < grid.dims; ++d) {
        axes.push_back(axis_sample(grid, center[static_cast<std::size_t>(d)],
                                   momentum[static_cast<std::size_t>(d)], sigma));
        norm_sq *= axes.back().squaredNorm();
    }
    if (check_support && std::abs(1.0 - norm_sq) > kDeficitTolerance) {
        throw GridSupportError("packet: off-grid norm deficit " +
                               std::to_string(std::abs(1.0 - norm_sq)) +
                               " exceeds 1e-6; keep centers >= 5 sigma inside the grid");
    }
    return normalize(assemble_axes(grid, axes));
}

std::vector<double> zeros(int count) {
    return std::vector<double>(static_cast<std::size_t>(count), 0.0);
}

double domain_lo(const Grid &grid, double sigma) {
    return grid.axis_min + kSupportMarginSigmas * sigma;
}

double domain_hi(const Grid &grid, double sigma) {
    return grid.axis_max - kSupportMarginSigmas * sigma;
}

// ---------------------------------------------------------------------------
// Projection machinery.
//
// A factor member with parameters theta is a packet on the factor grid; the
// joint objective F(theta) = |<member(theta_0) (x) ... , psi>|^2 is optimized
// by alternating per-factor Newton ascent on F, each factor seeing psi
// contracted with the current members of the other factors.
// ---------------------------------------------------------------------------

/// Per-factor view of the manifold parameters.
struct FactorParams {
    std::vector<double> center;    // dims entries
    std::vector<double> momentum;  // dims entries (zero unless phase space)
};

FactorParams factor_params(const ManifoldSpec &spec, const std::vector<double> &params,
                           int factor) {
    const int dims = spec.grid.dims;
    const int per_factor = spec.parameter_count() / spec.factors;
    const auto *base = params.data() + static_cast<std::ptrdiff_t>(factor) * per_factor;
    FactorParams fp;
    fp.center.assign(base, base + dims);
    if (spec.kind == ManifoldKind::PhaseSpace) {
        fp.momentum.assign(base + dims, base + 2 * dims);
    } else {
        fp.momentum = zeros(dims);
    }
    return fp;
}

void store_factor_params(const ManifoldSpec &spec, std::vector<double> &params, int factor,
                         const FactorParams &fp) {
    const int dims = spec.grid.dims;
    const int per_factor = spec.parameter_count() / spec.factors;
    auto *base = params.data() + static_cast<std::ptrdiff_t>(factor) * per_factor;
    std::copy(fp.center.begin(), fp.center.end(), base);
    if (spec.kind == ManifoldKind::PhaseSpace) {
        std::copy(fp.momentum.begin(), fp.momentum.end(), base + dims);
    }
}

/// Member of the single-factor family (position/phase kinds; the momentum
/// kind is handled by transforming psi instead, see project_to_manifold).
StateVector factor_member(const ManifoldSpec &spec, const FactorParams &fp) {
    return sample_packet(spec.grid, fp.center, fp.momentum, spec.sigma, false);
}

/// Contract psi with the members of every factor except `skip`, giving the
/// effective single-factor vector that factor optimizes against.
Eigen::VectorXcd contract_others(const ManifoldSpec &spec, const StateVector &psi,
                                 const std::vector<StateVector> &members, int skip) {
    const Index m = spec.grid.size();
    if (spec.factors == 1) {
        return psi;
    }
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(m);
    const Index total = psi.size();
    std::vector<Index> idx(static_cast<std::size_t>(spec.factors));
    for (Index flat = 0; flat < total; ++flat) {
        Index rem = flat;
        for (int f = spec.factors - 1; f >= 0; --f) {
            idx[static_cast<std::size_t>(f)] = rem % m;
            rem /= m;
        }
        Complex weight = 1.0;
        for (int f = 0; f < spec.factors; ++f) {
            if (f == skip) {
                continue;
            }
            weight *= std::conj(members[static_cast<std::size_t>(f)][idx[static_cast<std::size_t>(f)]]);
        }
        out[idx[static_cast<std::size_t>(skip)]] += weight * psi[flat];
    }
    return out;
}

/// Raw member sample together with first and second parameter derivatives,
/// for Newton ascent on |<member, v>|^2. Grid renormalization of the member
/// is treated as parameter-independent (exact up to exp(-2 pi^2 sigma^2/dx^2)).
struct FactorDerivatives {
    Complex overlap;                      // O = <member, v>
    Eigen::VectorXd gradient;             // dF/dtheta_i
    Eigen::MatrixXd hessian;              // d2F/dtheta_i dtheta_j
    double value;                         // F = |O|^2
};

FactorDerivatives factor_derivatives(const ManifoldSpec &spec, const FactorParams &fp,
                                     const Eigen::VectorXcd &v) {
    const Grid &grid = spec.grid;
    const int dims = grid.dims;
    const bool with_momentum = spec.kind == ManifoldKind::PhaseSpace;
    const int n_params = dims * (with_momentum ? 2 : 1);
    const double sigma = spec.sigma;

    std::vector<Eigen::VectorXcd> axes(static_cast<std::size_t>(dims));
    double norm_sq = 1.0;
    for (int d = 0; d < dims; ++d) {
        axes[static_cast<std::size_t>(d)] =
            axis_sample(grid, fp.center[static_cast<std::size_t>(d)],
                        fp.momentum[static_cast<std::size_t>(d)], sigma);
        norm_sq *= axes[static_cast<std::size_t>(d)].squaredNorm();
    }
    const double inv_norm = 1.0 / std::sqrt(norm_sq);

    const int n = grid.points_per_axis;
    Eigen::VectorXd x_nodes(n);
    for (int k = 0; k < n; ++k) {
        x_nodes[k] = grid.node(k);
    }

    // Derivative axis arrays: first index = axis, second = derivative order
    // (0: value, 1: d/da, 2: d/dp, 3: d2/da2, 4: d2/dp2, 5: d2/dadp).
    std::vector<std::array<Eigen::VectorXcd, 6>> per_axis(static_cast<std::size_t>(dims));
    for (int d = 0; d < dims; ++d) {
        const double a = fp.center[static_cast<std::size_t>(d)];
        const auto &vals = axes[static_cast<std::size_t>(d)];
        auto &slot = per_axis[static_cast<std::size_t>(d)];
        slot[0] = vals;
        Eigen::VectorXcd dda(n), ddp(n), dda2(n), ddp2(n), ddadp(n);
        for (int k = 0; k < n; ++k) {
            const double x = x_nodes[k];
            const double u = (x - a) / (2.0 * sigma * sigma);
            const Complex val = vals[k];
            dda[k] = u * val;
            ddp[k] = Complex(0.0, x) * val;
            dda2[k] = (u * u - 1.0 / (2.0 * sigma * sigma)) * val;
            ddp2[k] = -x * x * val;
            ddadp[k] = u * Complex(0.0, x) * val;
        }
        slot[1] = std::move(dda);
        slot[2] = std::move(ddp);
        slot[3] = std::move(dda2);
        slot[4] = std::move(ddp2);
        slot[5] = std::move(ddadp);
    }

    // Overlap of a separable array (choice of derivative order per axis)
    // against v, reshaping v as an n^dims row-major tensor.
    auto separable_dot = [&](const std::vector<int> &orders) -> Complex {
        if (dims == 1) {
            return per_axis[0][static_cast<std::size_t>(orders[0])].dot(v) * inv_norm;
        }
        Complex sum = 0.0;
        if (dims == 2) {
            for (int i = 0; i < n; ++i) {
                const Complex ci = std::conj(per_axis[0][static_cast<std::size_t>(orders[0])][i]);
                for (int j = 0; j < n; ++j) {
                    sum += ci * std::conj(per_axis[1][static_cast<std::size_t>(orders[1])][j]) *
                           v[static_cast<Index>(i) * n + j];
                }
            }
            return sum * inv_norm;
        }
        for (int i = 0; i < n; ++i) {
            const Complex ci = std::conj(per_axis[0][static_cast<std::size_t>(orders[0])][i]);
            for (int j = 0; j < n; ++j) {
                const Complex cij = ci * std::conj(per_axis[1][static_cast<std::size_t>(orders[1])][j]);
                for (int k = 0; k < n; ++k) {
                    sum += cij * std::conj(per_axis[2][static_cast<std::size_t>(orders[2])][k]) *
                           v[(static_cast<Index>(i) * n + j) * n + k];
                }
            }
        }
        return sum * inv_norm;
    };

    // Map parameter index -> derivative orders per axis, matching the
    // FactorParams layout (centers first, then momenta).
    auto param_orders = [&](int param, int order_a, int order_p) {
        std::vector<int> orders(static_cast<std::size_t>(dims), 0);
        orders[static_cast<std::size_t>(param % dims)] = (param < dims) ? order_a : order_p;
        return orders;
    };

    FactorDerivatives out;
    const Complex overlap = separable_dot(std::vector<int>(static_cast<std::size_t>(dims), 0));
    out.overlap = overlap;
    out.value = std::norm(overlap);
    out.gradient.resize(n_params);
    out.hessian.resize(n_params, n_params);

    std::vector<Complex> first(static_cast<std::size_t>(n_params));
    for (int i = 0; i < n_params; ++i) {
        first[static_cast<std::size_t>(i)] = separable_dot(param_orders(i, 1, 2));
        out.gradient[i] = 2.0 * std::real(std::conj(overlap) * first[static_cast<std::size_t>(i)]);
    }
    for (int i = 0; i < n_params; ++i) {
        for (int j = i; j < n_params; ++j) {
            const int axis_i = i % dims;
            const int axis_j = j % dims;
            std::vector<int> orders(static_cast<std::size_t>(dims), 0);
            if (axis_i == axis_j) {
                int order;
                const bool i_is_a = i < dims;
                const bool j_is_a = j < dims;
                if (i_is_a && j_is_a) {
                    order = 3;
                } else if (!i_is_a && !j_is_a) {
                    order = 4;
                } else {
                    order = 5;
                }
                orders[static_cast<std::size_t>(axis_i)] = order;
            } else {
                orders[static_cast<std::size_t>(axis_i)] = (i < dims) ? 1 : 2;
                orders[static_cast<std::size_t>(axis_j)] = (j < dims) ? 1 : 2;
            }
            const Complex second = separable_dot(orders);
            const double h =
                2.0 * std::real(std::conj(first[static_cast<std::size_t>(i)]) *
                                    first[static_cast<std::size_t>(j)] +
                                std::conj(overlap) * second);
            out.hessian(i, j) = h;
            out.hessian(j, i) = h;
        }
    }
    return out;
}

double objective(const ManifoldSpec &spec, const FactorParams &fp, const Eigen::VectorXcd &v) {
    const StateVector member = factor_member(spec, fp);
    return std::norm(member.dot(v));
}

void clamp_factor(const ManifoldSpec &spec, FactorParams &fp) {
    const double lo = domain_lo(spec.grid, spec.sigma);
    const double hi = domain_hi(spec.grid, spec.sigma);
    for (double &a : fp.center) {
        a = std::clamp(a, lo, hi);
    }
    if (spec.kind == ManifoldKind::PhaseSpace) {
        const double p_bound = spec.grid.nyquist() - 1.5 / spec.sigma;
        for (double &p : fp.momentum) {
            p = std::clamp(p, -0.999 * p_bound, 0.999 * p_bound);
        }
    }
}

/// Newton ascent of one factor against its effective vector. Returns the
/// largest parameter update in grid units (dx for centers, dp for momenta).
double newton_sweep(const ManifoldSpec &spec, FactorParams &fp, const Eigen::VectorXcd &v) {
    const int dims = spec.grid.dims;
    const bool with_momentum = spec.kind == ManifoldKind::PhaseSpace;
    const int n_params = dims * (with_momentum ? 2 : 1);
    const double dx = spec.grid.spacing();
    const double dp = 2.0 * std::numbers::pi / (spec.grid.points_per_axis * dx);

    const FactorDerivatives d = factor_derivatives(spec, fp, v);

    // Flat plateau: the state is numerically orthogonal to the entire family
    // (distance = pi/2 to better than 1e-9), so parameters are immaterial
    // and the current point is the projection.
    if (d.value < 1e-18) {
        return 0.0;
    }

    Eigen::VectorXd step(n_params);

    bool newton_ok = false;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(-d.hessian);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
        step = ldlt.solve(d.gradient);
        newton_ok = step.allFinite();
    }
    if (!newton_ok) {
        // Away from the concave neighborhood: scaled gradient ascent.
        step = d.gradient;
        double scale = 0.0;
        for (int i = 0; i < n_params; ++i) {
            const double unit = (i < dims) ? spec.sigma : 0.5 / spec.sigma;
            scale = std::max(scale, std::abs(step[i]) / unit);
        }
        if (scale > 0.0) {
            step /= scale;
        }
    }

    // Cap: no center moves more than sigma, no momentum more than 1/(2 sigma).
    double cap = 1.0;
    for (int i = 0; i < n_params; ++i) {
        const double unit = (i < dims) ? spec.sigma : 0.5 / spec.sigma;
        cap = std::max(cap, std::abs(step[i]) / unit);
    }
    step /= cap;

    FactorParams trial = fp;
    double damping = 1.0;
    for (int attempt = 0; attempt < 25; ++attempt) {
        trial = fp;
        for (int i = 0; i < n_params; ++i) {
            double &slot = (i < dims) ? trial.center[static_cast<std::size_t>(i)]
                                      : trial.momentum[static_cast<std::size_t>(i - dims)];
            slot += damping * step[i];
        }
        clamp_factor(spec, trial);
        if (objective(spec, trial, v) >= d.value - 1e-15) {
            break;
        }
        damping *= 0.5;
    }

    double max_update = 0.0;
    for (int i = 0; i < dims; ++i) {
        max_update = std::max(
            max_update,
            std::abs(trial.center[static_cast<std::size_t>(i)] - fp.center[static_cast<std::size_t>(i)]) / dx);
    }
    if (with_momentum) {
        for (int i = 0; i < dims; ++i) {
            max_update = std::max(max_update,
                                  std::abs(trial.momentum[static_cast<std::size_t>(i)] -
                                           fp.momentum[static_cast<std::size_t>(i)]) /
                                      dp);
        }
    }
    fp = trial;
    return max_update;
}

/// Cold start for one factor: exhaustive scan of the overlap over grid-node
/// centers (and FFT momentum bins for the phase-space kind). Ties within
/// 1e-12 resolve to the smaller-lexicographic parameter vector.
FactorParams factor_cold_start(const ManifoldSpec &spec, const Eigen::VectorXcd &v) {
    const Grid &grid = spec.grid;
    const int dims = grid.dims;
    const double lo = domain_lo(grid, spec.sigma);
    const double hi = domain_hi(grid, spec.sigma);

    FactorParams best;
    best.center = zeros(dims);
    best.momentum = zeros(dims);
    double best_value = -1.0;

    if (dims == 1) {
        const int n = grid.points_per_axis;
        if (spec.kind != ManifoldKind::PhaseSpace) {
            for (int k = 0; k < n; ++k) {
                const double a = grid.node(k);
                if (a < lo || a > hi) {
                    continue;
                }
                FactorParams fp{{a}, zeros(1)};
                const double val = objective(spec, fp, v);
                if (val > best_value + 1e-12) {
                    best_value = val;
                    best = fp;
                }
            }
        } else {
            const double p_bound = grid.nyquist() - 1.5 / spec.sigma;
            for (int k = 0; k < n; ++k) {
                const double a = grid.node(k);
                if (a < lo || a > hi) {
                    continue;
                }
                // |<Omega(a, p_j), v>| over all bins j in one transform of
                // conj(g_a) .* v (the bin phases cancel in the modulus).
                const Eigen::VectorXcd g = axis_sample(grid, a, 0.0, spec.sigma);
                StateVector windowed(n);
                for (int i = 0; i < n; ++i) {
                    windowed[i] = std::conj(g[i]) * v[i];
                }
                const double inv_norm = 1.0 / g.norm();
                StateVector spectrum = fft::forward(windowed);
                for (int j = 0; j < n; ++j) {
                    const double p = grid.momentum_bin(j);
                    if (std::abs(p) >= p_bound) {
                        continue;
                    }
                    // forward() is unitary; undo its 1/sqrt(n) to recover the sum.
                    const double val =
                        std::norm(spectrum[j] * std::sqrt(static_cast<double>(n)) * inv_norm);
                    const bool better =
                        val > best_value + 1e-12 ||
                        (val > best_value - 1e-12 &&
                         std::make_pair(a, p) < std::make_pair(best.center[0], best.momentum[0]));
                    if (better) {
                        best_value = std::max(val, best_value);
                        best.center[0] = a;
                        best.momentum[0] = p;
                    }
                }
            }
        }
        return best;
    }

    // Multi-axis cold start: initialize centers (and momenta) from the
    // separable marginals of |v|^2, then let Newton refine.
    const int n = grid.points_per_axis;
    std::vector<Eigen::VectorXd> marginals(static_cast<std::size_t>(dims),
                                           Eigen::VectorXd::Zero(n));
    const Index total = grid.size();
    for (Index flat = 0; flat < total; ++flat) {
        const double w = std::norm(v[flat]);
        Index rem = flat;
        for (int d = dims - 1; d >= 0; --d) {
            marginals[static_cast<std::size_t>(d)][static_cast<int>(rem % n)] += w;
            rem /= n;
        }
    }
    for (int d = 0; d < dims; ++d) {
        const auto &m = marginals[static_cast<std::size_t>(d)];
        const double mass = m.sum();
        double mean = 0.0;
        for (int k = 0; k < n; ++k) {
            mean += grid.node(k) * m[k];
        }
        best.center[static_cast<std::size_t>(d)] = std::clamp(mass > 0 ? mean / mass : 0.0, lo, hi);
    }
    return best;
}

Projection project_impl(const StateVector &psi, const ManifoldSpec &spec,
                        const std::optional<std::vector<double>> &warm_start) {
    if (psi.size() != spec.state_size()) {
        throw DimensionError("project_to_manifold: state size does not match manifold spec");
    }
    if (!is_normalized(psi, 1e-9)) {
        throw ParameterError("project_to_manifold: state must be normalized");
    }
    if (warm_start && static_cast<int>(warm_start->size()) != spec.parameter_count()) {
        throw DimensionError("project_to_manifold: warm start has wrong parameter count");
    }

    std::vector<double> params(static_cast<std::size_t>(spec.parameter_count()), 0.0);
    std::vector<StateVector> members(static_cast<std::size_t>(spec.factors));

    if (warm_start) {
        params = *warm_start;
        for (int f = 0; f < spec.factors; ++f) {
            FactorParams fp = factor_params(spec, params, f);
            clamp_factor(spec, fp);
            store_factor_params(spec, params, f, fp);
            members[static_cast<std::size_t>(f)] = factor_member(spec, fp);
        }
    } else {
        // Init each factor from its marginal, then replace by a full scan.
        for (int f = 0; f < spec.factors; ++f) {
            members[static_cast<std::size_t>(f)] =
                normalize(StateVector::Ones(spec.grid.size()));
        }
        for (int f = 0; f < spec.factors; ++f) {
            const Eigen::VectorXcd v = contract_others(spec, psi, members, f);
            FactorParams fp = factor_cold_start(spec, v);
            store_factor_params(spec, params, f, fp);
            members[static_cast<std::size_t>(f)] = factor_member(spec, fp);
        }
    }

    constexpr int kMaxIterations = 500;
    constexpr double kTolGridUnits = 1e-10;
    double best_value = -1.0;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        double max_update = 0.0;
        for (int f = 0; f < spec.factors; ++f) {
            const Eigen::VectorXcd v = contract_others(spec, psi, members, f);
            FactorParams fp = factor_params(spec, params, f);
            max_update = std::max(max_update, newton_sweep(spec, fp, v));
            store_factor_params(spec, params, f, fp);
            members[static_cast<std::size_t>(f)] = factor_member(spec, fp);
        }
        Complex overlap = 1.0;
        {
            // Joint overlap via the factor-0 contraction.
            const Eigen::VectorXcd v = contract_others(spec, psi, members, 0);
            overlap = members[0].dot(v);
        }
        best_value = std::norm(overlap);
        if (max_update < kTolGridUnits) {
            return Projection{params, std::acos(std::clamp(std::abs(overlap), 0.0, 1.0))};
        }
    }
    throw ProjectionFailure("project_to_manifold: no convergence after 500 iterations", params,
                            std::acos(std::clamp(std::sqrt(std::max(best_value, 0.0)), 0.0, 1.0)));
}

}  // namespace

StateVector make_position_packet(const Grid &grid, const std::vector<double> &center,
                                 double sigma) {
    return sample_packet(grid, center, zeros(grid.dims), sigma, true);
}

StateVector make_phase_packet(const Grid &grid, const std::vector<double> &center,
                              const std::vector<double> &momentum, double sigma) {
    return sample_packet(grid, center, momentum, sigma, true);
}

StateVector momentum_member(const Grid &grid, const std::vector<double> &center, double sigma) {
    StateVector packet = make_position_packet(grid, center, sigma);
    const int n = grid.points_per_axis;
    int stride = 1;
    for (int axis = grid.dims - 1; axis >= 0; --axis) {
        fft::forward_axis(packet, n, static_cast<int>(packet.size()) / n, stride);
        stride *= n;
    }
    return packet;
}

double overlap_centered(double d, double sigma, int dims) {
    if (!(d > 0.0) || !(sigma > 0.0)) {
        throw ParameterError("overlap_centered: widths must be positive");
    }
    if (dims < 1 || dims > 3) {
        throw ParameterError("overlap_centered: dims must be 1, 2, or 3");
    }
    return std::pow(2.0 * sigma * d / (sigma * sigma + d * d), 0.5 * dims);
}

double overlap_displaced(double separation, double sigma) {
    if (!(sigma > 0.0)) {
        throw ParameterError("overlap_displaced: sigma must be positive");
    }
    const double r = separation / sigma;
    return std::exp(-r * r / 8.0);
}

double overlap_displaced_widths(double separation, double sigma_1, double sigma_2, int dims) {
    if (!(sigma_1 > 0.0) || !(sigma_2 > 0.0)) {
        throw ParameterError("overlap_displaced_widths: widths must be positive");
    }
    const double ss = sigma_1 * sigma_1 + sigma_2 * sigma_2;
    const double width_factor = std::pow(2.0 * sigma_1 * sigma_2 / ss, 0.5 * dims);
    return width_factor * std::exp(-separation * separation / (4.0 * ss));
}

double overlap_momentum_shift(double momentum_gap, double sigma) {
    if (!(sigma > 0.0)) {
        throw ParameterError("overlap_momentum_shift: sigma must be positive");
    }
    const double u = sigma * momentum_gap;
    return std::exp(-u * u / 2.0);
}

StateVector width_direction(const Grid &grid, const std::vector<double> &center, double sigma) {
    const StateVector packet = make_position_packet(grid, center, sigma);
    StateVector derivative(packet.size());
    const int n = grid.points_per_axis;
    const Index total = grid.size();
    for (Index flat = 0; flat < total; ++flat) {
        Index rem = flat;
        double r_sq = 0.0;
        for (int d = grid.dims - 1; d >= 0; --d) {
            const double x = grid.node(static_cast<int>(rem % n));
            const double delta = x - center[static_cast<std::size_t>(d)];
            r_sq += delta * delta;
            rem /= n;
        }
        derivative[flat] =
            packet[flat] * (r_sq / (2.0 * sigma * sigma * sigma) -
                            grid.dims / (2.0 * sigma));
    }
    return normalize(tangent_project(Ray(packet), derivative).direction);
}

StateVector position_direction(const Grid &grid, const std::vector<double> &center, double sigma,
                               int axis) {
    if (axis < 0 || axis >= grid.dims) {
        throw ParameterError("position_direction: axis out of range");
    }
    const StateVector packet = make_position_packet(grid, center, sigma);
    StateVector derivative(packet.size());
    const int n = grid.points_per_axis;
    const Index total = grid.size();
    for (Index flat = 0; flat < total; ++flat) {
        Index rem = flat;
        double x_axis = 0.0;
        for (int d = grid.dims - 1; d >= 0; --d) {
            if (d == axis) {
                x_axis = grid.node(static_cast<int>(rem % n));
            }
            rem /= n;
        }
        const double delta = x_axis - center[static_cast<std::size_t>(axis)];
        derivative[flat] = packet[flat] * delta / (2.0 * sigma * sigma);
    }
    return normalize(tangent_project(Ray(packet), derivative).direction);
}

StateVector manifold_member(const ManifoldSpec &spec, const std::vector<double> &params) {
    if (static_cast<int>(params.size()) != spec.parameter_count()) {
        throw DimensionError("manifold_member: wrong parameter count");
    }
    StateVector joint;
    for (int f = 0; f < spec.factors; ++f) {
        const FactorParams fp = factor_params(spec, params, f);
        StateVector factor;
        switch (spec.kind) {
            case ManifoldKind::Position:
                factor = make_position_packet(spec.grid, fp.center, spec.sigma);
                break;
            case ManifoldKind::PhaseSpace:
                factor = make_phase_packet(spec.grid, fp.center, fp.momentum, spec.sigma);
                break;
            case ManifoldKind::Momentum:
                factor = momentum_member(spec.grid, fp.center, spec.sigma);
                break;
        }
        if (f == 0) {
            joint = std::move(factor);
        } else {
            StateVector merged(joint.size() * factor.size());
            for (Index i = 0; i < joint.size(); ++i) {
                for (Index j = 0; j < factor.size(); ++j) {
                    merged[i * factor.size() + j] = joint[i] * factor[j];
                }
            }
            joint = std::move(merged);
        }
    }
    return joint;
}

Projection project_to_manifold(const StateVector &psi, const ManifoldSpec &spec,
                               const std::optional<std::vector<double>> &warm_start) {
    if (spec.kind != ManifoldKind::Momentum) {
        return project_impl(psi, spec, warm_start);
    }
    // <DFT(g_b) (x) ..., psi> = <g_b (x) ..., IDFT(psi)>: project the inverse
    // transform onto the position family instead.
    StateVector transformed = psi;
    const int n = spec.grid.points_per_axis;
    int stride = 1;
    const int axes_total = spec.grid.dims * spec.factors;
    for (int axis = axes_total - 1; axis >= 0; --axis) {
        fft::inverse_axis(transformed, n, static_cast<int>(transformed.size()) / n, stride);
        stride *= n;
    }
    ManifoldSpec position_spec = spec;
    position_spec.kind = ManifoldKind::Position;
    return project_impl(transformed, position_spec, warm_start);
}

}  // namespace statewalk::packets
