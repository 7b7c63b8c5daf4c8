// Copyright 2026 The tcsim Authors
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

#include "tcsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "tcsim/error.hpp"
#include "tcsim/krylov.hpp"

namespace tcsim {

void DynamicsConfig::validate() const {
    if (!(coupling_scale > 0) || !(evolution_tolerance > 0) || krylov_dimension <= 0 || dense_threshold == 0) {
        fail(ErrorKind::InvalidArgument, "dynamics configuration values must all be positive");
    }
}

OperatorMatrix h_sideband(Sideband kind, int mode, const ModeTable &modes, const BasisPtr &basis,
                          const DynamicsConfig &cfg) {
    cfg.validate();
    const auto &fb = basis->full();
    if (fb.n_ions() != modes.n_ions) {
        fail(ErrorKind::InvalidArgument, "basis and mode table ion counts differ");
    }
    if (mode < 0 || mode >= modes.n_ions) {
        fail(ErrorKind::InvalidArgument, "mode index " + std::to_string(mode) + " out of range");
    }
    const size_t slot = fb.mode_slot(mode);
    const size_t stride = fb.stride(slot);
    const int cutoff = fb.cutoffs()[slot];
    const double scale = cfg.coupling_scale * std::sqrt(static_cast<double>(fb.n_ions()));

    std::vector<Eigen::Triplet<Complex>> t;
    t.reserve(fb.dimension() * static_cast<size_t>(fb.n_ions()));
    for (size_t i = 0; i < fb.dimension(); ++i) {
        const SpinConfig s = fb.spins_of(i);
        const int n = fb.occupation(i, slot);
        // Raising term from index i: sigma+ a (red) or sigma+ a^dagger (blue).
        int n_after;
        double boson;
        if (kind == Sideband::Red) {
            if (n == 0) {
                continue;
            }
            n_after = n - 1;
            boson = std::sqrt(static_cast<double>(n));
        } else {
            if (n == cutoff) {
                continue;
            }
            n_after = n + 1;
            boson = std::sqrt(static_cast<double>(n + 1));
        }
        const size_t phonon_shifted = i - static_cast<size_t>(n) * stride + static_cast<size_t>(n_after) * stride;
        for (int ion = 0; ion < fb.n_ions(); ++ion) {
            const SpinConfig bit = SpinConfig{1} << ion;
            const double b = modes.amplitude(ion, mode);
            if ((s & bit) || b == 0.0) {
                continue;
            }
            const size_t j = phonon_shifted + static_cast<size_t>(bit) * fb.phonon_dimension();
            const double v = scale * b * boson;
            t.emplace_back(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i), v);
            t.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j), v);
        }
    }
    SparseMatrix m(static_cast<Eigen::Index>(fb.dimension()), static_cast<Eigen::Index>(fb.dimension()));
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return {basis, std::move(m), true};
}

OperatorMatrix h_red(int mode, const ModeTable &modes, const BasisPtr &basis, const DynamicsConfig &cfg) {
    return h_sideband(Sideband::Red, mode, modes, basis, cfg);
}

OperatorMatrix h_blue(int mode, const ModeTable &modes, const BasisPtr &basis, const DynamicsConfig &cfg) {
    return h_sideband(Sideband::Blue, mode, modes, basis, cfg);
}

OperatorMatrix h_ladder(const SectorLadder &ladder, const DynamicsConfig &cfg) {
    cfg.validate();
    const int n_ions = ladder.n_ions();
    const auto dim = static_cast<Eigen::Index>(ladder.size());
    std::vector<Eigen::Triplet<Complex>> t;
    for (size_t i = 0; i + 1 < ladder.size(); ++i) {
        const auto &lo = ladder.slots()[i];
        // Red: the lower rung gives up a phonon. Blue: the upper rung holds one more.
        const int phonons = ladder.kind() == Sideband::Red ? lo.phonons : lo.phonons + 1;
        const double spin = std::sqrt(static_cast<double>(n_ions - lo.excitations) * (lo.excitations + 1));
        const double v = cfg.coupling_scale * std::sqrt(static_cast<double>(phonons)) * spin;
        t.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1), v);
        t.emplace_back(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i), v);
    }
    SparseMatrix m(dim, dim);
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return {make_basis(ladder), std::move(m), true};
}

OperatorMatrix h_red_ladder(int n_ions, int r, const DynamicsConfig &cfg) {
    return h_ladder(SectorLadder(n_ions, r, Sideband::Red), cfg);
}

OperatorMatrix h_blue_ladder(int n_ions, int b, const DynamicsConfig &cfg) {
    return h_ladder(SectorLadder(n_ions, b, Sideband::Blue), cfg);
}

Propagator::Propagator(OperatorMatrix h, const DynamicsConfig &cfg) : h_(std::move(h)), cfg_(cfg) {
    cfg_.validate();
    if (!h_.hermitian) {
        fail(ErrorKind::InvalidArgument, "time evolution requires a Hermitian operator");
    }
    dense_ = h_.dimension() < cfg_.dense_threshold;
    if (dense_) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h_.dense());
        if (es.info() != Eigen::Success) {
            fail(ErrorKind::SolverFailure, "dense diagonalization of the Hamiltonian failed");
        }
        energies_ = es.eigenvalues();
        eigenvectors_ = es.eigenvectors();
    }
}

QuantumState Propagator::evolve(const QuantumState &psi, double t) const {
    if (!same_basis(h_.basis, psi.basis_ptr())) {
        fail(ErrorKind::InvalidArgument, "state and Hamiltonian live on different bases");
    }
    if (t == 0.0) {
        return psi;
    }
    if (dense_) {
        Eigen::VectorXcd c = eigenvectors_.adjoint() * psi.amplitudes();
        for (Eigen::Index k = 0; k < c.size(); ++k) {
            c[k] *= std::exp(Complex(0.0, -energies_[k] * t));
        }
        return QuantumState(psi.basis_ptr(), eigenvectors_ * c);
    }
    KrylovOptions opts{cfg_.krylov_dimension, cfg_.evolution_tolerance};
    return QuantumState(psi.basis_ptr(), krylov_propagate(h_.entries, psi.amplitudes(), t, opts));
}

void Propagator::sample(const QuantumState &psi, std::span<const double> times,
                        const std::function<void(size_t, const QuantumState &)> &visit) const {
    if (dense_) {
        for (size_t i = 0; i < times.size(); ++i) {
            visit(i, evolve(psi, times[i]));
        }
        return;
    }
    QuantumState current = psi;
    double now = 0.0;
    for (size_t i = 0; i < times.size(); ++i) {
        current = evolve(current, times[i] - now);
        now = times[i];
        visit(i, current);
    }
}

QuantumState evolve(const OperatorMatrix &h, const QuantumState &psi0, double t, const DynamicsConfig &cfg) {
    return Propagator(h, cfg).evolve(psi0, t);
}

TransferEstimate two_level_transfer_time(const OperatorMatrix &h, const QuantumState &psi0) {
    const QuantumState start = psi0.normalized();
    const Eigen::VectorXcd &v0 = start.amplitudes();
    const Eigen::VectorXcd hv0 = h.apply(start).amplitudes();
    Eigen::VectorXcd u = hv0 - v0.dot(hv0) * v0;
    const double coupling = u.norm();
    const double scale = std::max(1.0, max_abs(h));
    if (coupling <= 1e-13 * scale) {
        fail(ErrorKind::Domain, "state is stationary under the Hamiltonian; no transfer partner");
    }
    const Eigen::VectorXcd v1 = u / coupling;
    const Eigen::VectorXcd hv1 = h.entries * v1;
    const Eigen::VectorXcd outside = hv1 - v0.dot(hv1) * v0 - v1.dot(hv1) * v1;
    TransferEstimate out;
    out.coupling = coupling;
    out.time = std::numbers::pi / (2.0 * coupling);
    out.leakage = outside.norm() / hv1.norm();
    return out;
}

namespace {

struct PeakSearch {
    const Propagator &prop;
    const QuantumState &target;
    Eigen::VectorXcd h_target;

    double population(const QuantumState &s) const {
        return std::norm(target.amplitudes().dot(s.amplitudes()));
    }
    // d/dt |<target|psi(t)>|^2 = 2 Re(conj(a) a'), a' = -i <h target|psi>.
    double slope(const QuantumState &s) const {
        const Complex a = target.amplitudes().dot(s.amplitudes());
        const Complex da = Complex(0.0, -1.0) * h_target.dot(s.amplitudes());
        return 2.0 * (std::conj(a) * da).real();
    }

    // Refine a bracketed maximum in [lo, hi]; `origin` is the state at time lo.
    Peak refine(const QuantumState &origin, double lo, double hi) const {
        const double a0 = lo;
        auto at = [&](double t) { return prop.evolve(origin, t - a0); };
        constexpr double inv_phi = 0.6180339887498949;
        double a = lo, b = hi;
        double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
        double fc = population(at(c)), fd = population(at(d));
        const double width_stop = 1e-4 * (hi - lo);
        while (b - a > width_stop) {
            if (fc >= fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = population(at(c));
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = population(at(d));
            }
        }
        // Polish on the derivative when it changes sign across the bracket.
        double sa = slope(at(a)), sb = slope(at(b));
        if (sa > 0 && sb < 0) {
            const double tol = 1e-13 * std::max(1.0, b);
            for (int it = 0; it < 200 && b - a > tol; ++it) {
                const double mid = 0.5 * (a + b);
                const double sm = slope(at(mid));
                if (sm > 0) {
                    a = mid;
                } else if (sm < 0) {
                    b = mid;
                } else {
                    a = b = mid;
                }
            }
        }
        const double t = 0.5 * (a + b);
        return {t, population(at(t))};
    }
};

}  // namespace

Peak peak_time(const Propagator &prop, const QuantumState &psi0, const QuantumState &target, double t_max, int n_grid) {
    if (!(t_max > 0)) {
        fail(ErrorKind::InvalidArgument, "peak search window must be positive");
    }
    if (n_grid < 16) {
        fail(ErrorKind::InvalidArgument, "peak search grid needs at least 16 points");
    }
    if (!same_basis(psi0.basis_ptr(), target.basis_ptr())) {
        fail(ErrorKind::InvalidArgument, "target and initial state live on different bases");
    }
    PeakSearch search{prop, target, prop.hamiltonian().entries * target.amplitudes()};

    std::vector<double> times(static_cast<size_t>(n_grid));
    for (int i = 0; i < n_grid; ++i) {
        times[static_cast<size_t>(i)] = t_max * i / (n_grid - 1);
    }
    std::vector<double> pop(times.size());
    prop.sample(psi0, times, [&](size_t i, const QuantumState &s) { pop[i] = search.population(s); });
    const double grid_max = *std::max_element(pop.begin(), pop.end());

    std::vector<Peak> peaks;
    for (size_t i = 1; i + 1 < pop.size(); ++i) {
        if (pop[i] >= pop[i - 1] && pop[i] >= pop[i + 1] && pop[i] >= grid_max - 0.05) {
            peaks.push_back(search.refine(prop.evolve(psi0, times[i - 1]), times[i - 1], times[i + 1]));
        }
    }
    if (pop.back() == grid_max) {
        peaks.push_back({times.back(), pop.back()});
    }
    if (peaks.empty()) {
        return {times.front(), pop.front()};
    }
    double best = 0.0;
    for (const auto &p : peaks) {
        best = std::max(best, p.population);
    }
    for (const auto &p : peaks) {
        if (p.population >= best - 1e-9) {
            return p;
        }
    }
    return peaks.front();
}

Peak peak_time(const OperatorMatrix &h, const QuantumState &psi0, const QuantumState &target, double t_max, int n_grid,
               const DynamicsConfig &cfg) {
    return peak_time(Propagator(h, cfg), psi0, target, t_max, n_grid);
}

double default_peak_window(int n_ions, int r, double coupling_scale) {
    return 3.0 * std::numbers::pi * std::sqrt(static_cast<double>(std::max(r, 1))) /
           (2.0 * coupling_scale * std::sqrt(static_cast<double>(n_ions)));
}

}  // namespace tcsim
