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

#include "statewalk/dynamics.hpp"

#include <cmath>

#include "statewalk/fft.hpp"

namespace statewalk::dynamics {

namespace {

/// exp(-i t H) psi for a 2x2 Hermitian H, in closed form: with
/// H = alpha I + M, M traceless, M^2 = omega^2 I,
/// exp(-i t H) = e^{-i alpha t} (cos(omega t) I - i sin(omega t)/omega M).
void propagate_2x2_in_place(const gue::HermitianMatrix &h, double t, StateVector &psi) {
    const double alpha = 0.5 * std::real(h(0, 0) + h(1, 1));
    const double delta = 0.5 * std::real(h(0, 0) - h(1, 1));
    const Complex c = h(0, 1);
    const double omega = std::sqrt(delta * delta + std::norm(c));
    const Complex phase = std::exp(Complex(0.0, -alpha * t));
    if (omega == 0.0) {
        psi *= phase;
        return;
    }
    const double cos_t = std::cos(omega * t);
    const Complex factor = Complex(0.0, -std::sin(omega * t) / omega);
    const Complex a0 = psi[0];
    const Complex a1 = psi[1];
    psi[0] = phase * (cos_t * a0 + factor * (delta * a0 + c * a1));
    psi[1] = phase * (cos_t * a1 + factor * (std::conj(c) * a0 - delta * a1));
}

/// Fixed-size Taylor kernel: the compiler unrolls the K x K products, which
/// dominates the walk cost at the dimensions the measurement runs live at.
template <int K>
void taylor_fixed(const gue::HermitianMatrix &h, double t_sub, int repeats, StateVector &psi) {
    using MatK = Eigen::Matrix<Complex, K, K>;
    using VecK = Eigen::Matrix<Complex, K, 1>;
    const MatK hk = h;
    VecK state = psi;
    VecK term, acc, scratch;
    const Complex factor(0.0, -t_sub);
    for (int rep = 0; rep < repeats; ++rep) {
        acc = state;
        term = state;
        for (int k = 1; k <= 60; ++k) {
            scratch.noalias() = hk * term;
            term = (factor / static_cast<double>(k)) * scratch;
            acc += term;
            if (term.squaredNorm() <= 1e-30 * acc.squaredNorm()) {
                break;
            }
        }
        state = acc;
    }
    psi = state;
}

/// exp(-i t H) psi by Taylor series with argument scaling; the series is
/// summed until terms fall below 1e-15 relative, so the result matches the
/// eigendecomposition route to machine precision while staying O(N^2) per
/// step. Used for small N where per-call eigensolver overhead dominates.
void propagate_taylor_in_place(const gue::HermitianMatrix &h, double t, StateVector &psi,
                               StepWorkspace &ws) {
    // Frobenius norm bounds the spectral radius; halve the argument until the
    // series converges in a dozen terms.
    const double scale_norm = std::sqrt(h.squaredNorm()) * std::abs(t);
    int doublings = 0;
    double halved = scale_norm;
    while (halved > 0.9 && doublings < 40) {
        halved *= 0.5;
        ++doublings;
    }
    const double t_sub = std::ldexp(t, -doublings);
    const int repeats = 1 << doublings;
    const Eigen::Index n = psi.size();
    switch (n) {
        case 3:
            return taylor_fixed<3>(h, t_sub, repeats, psi);
        case 4:
            return taylor_fixed<4>(h, t_sub, repeats, psi);
        case 5:
            return taylor_fixed<5>(h, t_sub, repeats, psi);
        case 6:
            return taylor_fixed<6>(h, t_sub, repeats, psi);
        case 7:
            return taylor_fixed<7>(h, t_sub, repeats, psi);
        case 8:
            return taylor_fixed<8>(h, t_sub, repeats, psi);
        default:
            break;
    }
    const Complex factor(0.0, -t_sub);
    ws.term.resize(n);
    ws.acc.resize(n);
    ws.scratch.resize(n);
    const Complex *hd = h.data();  // column-major
    for (int rep = 0; rep < repeats; ++rep) {
        ws.acc = psi;
        ws.term = psi;
        for (int k = 1; k <= 60; ++k) {
            // Manual matvec: at 9 <= N <= 32, Eigen's dynamic-size product
            // dispatch would dominate the per-term cost.
            Complex *out = ws.scratch.data();
            const Complex *in = ws.term.data();
            for (Eigen::Index i = 0; i < n; ++i) {
                out[i] = hd[i] * in[0];
            }
            for (Eigen::Index j = 1; j < n; ++j) {
                const Complex *col = hd + j * n;
                const Complex xj = in[j];
                for (Eigen::Index i = 0; i < n; ++i) {
                    out[i] += col[i] * xj;
                }
            }
            const Complex scale = factor / static_cast<double>(k);
            double term_norm = 0.0, acc_norm = 0.0;
            Complex *acc = ws.acc.data();
            Complex *term = ws.term.data();
            for (Eigen::Index i = 0; i < n; ++i) {
                term[i] = scale * out[i];
                acc[i] += term[i];
                term_norm += std::norm(term[i]);
                acc_norm += std::norm(acc[i]);
            }
            // ||term|| <= 1e-15 ||acc||: the truncated tail is below the
            // 1e-13 agreement bound against the eigendecomposition route.
            if (term_norm <= 1e-30 * acc_norm) {
                break;
            }
        }
        psi = ws.acc;
    }
}

StateVector propagate_eigen(const gue::HermitianMatrix &h, double t, const StateVector &psi) {
    Eigen::SelfAdjointEigenSolver<gue::HermitianMatrix> solver(h);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("random_step: eigendecomposition failed");
    }
    const auto &vectors = solver.eigenvectors();
    Eigen::VectorXcd rotated = vectors.adjoint() * psi;
    for (Eigen::Index k = 0; k < rotated.size(); ++k) {
        rotated[k] *= std::exp(Complex(0.0, -solver.eigenvalues()[k] * t));
    }
    return vectors * rotated;
}

void propagate_exact_in_place(const gue::HermitianMatrix &h, double t, StateVector &psi,
                              StepWorkspace &ws) {
    const Eigen::Index n = psi.size();
    if (n == 2) {
        propagate_2x2_in_place(h, t, psi);
    } else if (n <= 32) {
        propagate_taylor_in_place(h, t, psi, ws);
    } else {
        psi = propagate_eigen(h, t, psi);
    }
}

}  // namespace

bool step_angle_warning(const StepConfig &cfg, int dimension) {
    return cfg.gue_scale * cfg.dt * std::sqrt(static_cast<double>(dimension)) / cfg.hbar > 0.3;
}

void random_step_in_place(StateVector &psi, gue::GueSampler &sampler, const StepConfig &cfg,
                          StepWorkspace &ws) {
    if (sampler.dimension() != psi.size()) {
        throw DimensionError("random_step: sampler dimension does not match state");
    }
    if (!(cfg.dt >= 0.0) || !(cfg.hbar > 0.0)) {
        throw ParameterError("random_step: dt must be >= 0 and hbar > 0");
    }
    sampler.sample_into(ws.h);
    const double t = cfg.dt / cfg.hbar;
    if (cfg.first_order) {
        ws.scratch.resize(psi.size());
        ws.scratch.noalias() = ws.h * psi;
        psi -= Complex(0.0, t) * ws.scratch;
        psi /= psi.norm();
    } else {
        propagate_exact_in_place(ws.h, t, psi, ws);
    }
    if (cfg.drift) {
        const Ray here(psi);
        const StateVector tangent = tangent_project(here, cfg.drift(here)).direction;
        psi = normalize(here.representative() + cfg.dt * tangent);
    }
}

StateVector random_step(const StateVector &psi, gue::GueSampler &sampler, const StepConfig &cfg) {
    StateVector out = psi;
    StepWorkspace ws;
    random_step_in_place(out, sampler, cfg, ws);
    return out;
}

GridHamiltonian::GridHamiltonian(const packets::Grid &g, double m,
                                 const std::function<double(const std::vector<double> &)> &v)
    : grid(g), mass(m), potential(g.size()) {
    if (!(m > 0.0)) {
        throw ParameterError("GridHamiltonian: mass must be positive");
    }
    const int n = grid.points_per_axis;
    std::vector<double> coords(static_cast<std::size_t>(grid.dims));
    for (Eigen::Index flat = 0; flat < grid.size(); ++flat) {
        Eigen::Index rem = flat;
        for (int d = grid.dims - 1; d >= 0; --d) {
            coords[static_cast<std::size_t>(d)] = grid.node(static_cast<int>(rem % n));
            rem /= n;
        }
        const double value = v(coords);
        if (!std::isfinite(value)) {
            throw ParameterError("GridHamiltonian: potential is not finite on the grid");
        }
        potential[flat] = value;
    }
}

StateVector evolve_grid(const StateVector &psi, const GridHamiltonian &h, double dt, int steps,
                        double hbar) {
    const packets::Grid &grid = h.grid;
    if (psi.size() != grid.size()) {
        throw DimensionError("evolve_grid: state does not live on the Hamiltonian's grid");
    }
    if (!(dt > 0.0) || steps < 0) {
        throw ParameterError("evolve_grid: dt must be positive, steps >= 0");
    }

    const Eigen::Index size = grid.size();
    const int n = grid.points_per_axis;

    Eigen::VectorXcd half_potential(size);
    for (Eigen::Index k = 0; k < size; ++k) {
        half_potential[k] = std::exp(Complex(0.0, -0.5 * h.potential[k] * dt / hbar));
    }

    // Kinetic phase and band-edge mask per Fourier node (FFTW bin order).
    Eigen::VectorXcd kinetic(size);
    std::vector<bool> edge(static_cast<std::size_t>(size), false);
    for (Eigen::Index flat = 0; flat < size; ++flat) {
        Eigen::Index rem = flat;
        double p_sq = 0.0;
        bool near_edge = false;
        for (int d = grid.dims - 1; d >= 0; --d) {
            const int j = static_cast<int>(rem % n);
            const double p = grid.momentum_bin(j);
            p_sq += p * p;
            const int signed_j = (j < (n + 1) / 2) ? j : j - n;
            if (std::abs(signed_j) >= n / 2 - 3) {
                near_edge = true;
            }
            rem /= n;
        }
        kinetic[flat] = std::exp(Complex(0.0, -p_sq * dt / (2.0 * h.mass * hbar)));
        edge[static_cast<std::size_t>(flat)] = near_edge;
    }

    StateVector state = psi;
    const int lines = static_cast<int>(size) / n;
    for (int step = 0; step < steps; ++step) {
        state.array() *= half_potential.array();
        int stride = 1;
        for (int axis = grid.dims - 1; axis >= 0; --axis) {
            fft::forward_axis(state, n, lines, stride);
            stride *= n;
        }
        double edge_weight = 0.0;
        for (Eigen::Index k = 0; k < size; ++k) {
            if (edge[static_cast<std::size_t>(k)]) {
                edge_weight += std::norm(state[k]);
            }
            state[k] *= kinetic[k];
        }
        if (edge_weight > 1e-6) {
            throw ResolutionError("evolve_grid: spectral weight " + std::to_string(edge_weight) +
                                  " within 3 bins of the band edge; refine the grid");
        }
        stride = 1;
        for (int axis = grid.dims - 1; axis >= 0; --axis) {
            fft::inverse_axis(state, n, lines, stride);
            stride *= n;
        }
        state.array() *= half_potential.array();
    }
    return state;
}

ConstrainedStep constrained_step(const StateVector &psi, const Stepper &step,
                                 const packets::ManifoldSpec &spec,
                                 const std::optional<std::vector<double>> &warm_start) {
    const StateVector moved = step(psi);
    const packets::Projection projection = packets::project_to_manifold(moved, spec, warm_start);
    return ConstrainedStep{packets::manifold_member(spec, projection.params), projection.params,
                           projection.distance};
}

}  // namespace statewalk::dynamics
