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

#include "tcsim/observables.hpp"

#include <algorithm>
#include <cmath>

#include "tcsim/error.hpp"

namespace tcsim {

std::vector<double> ladder_populations(const QuantumState &state, const SectorLadder &ladder) {
    const Eigen::VectorXcd amps = extract_ladder_amplitudes(state, ladder);
    std::vector<double> out(static_cast<size_t>(amps.size()));
    for (Eigen::Index i = 0; i < amps.size(); ++i) {
        out[static_cast<size_t>(i)] = std::norm(amps[i]);
    }
    return out;
}

double shannon_entropy(const std::vector<double> &probabilities) {
    double s = 0.0;
    for (double p : probabilities) {
        if (p > 1e-14) {
            s -= p * std::log2(p);
        }
    }
    return s;
}

double von_neumann_entropy(const DensityMatrix &rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.entries, Eigen::EigenvaluesOnly);
    const auto &ev = es.eigenvalues();
    return shannon_entropy(std::vector<double>(ev.begin(), ev.end()));
}

double entropy_spins(const QuantumState &state) {
    if (state.basis().is_ladder()) {
        return shannon_entropy(ladder_populations(state, state.basis().ladder()));
    }
    return von_neumann_entropy(partial_trace_spins(state));
}

double fidelity(const QuantumState &state, const QuantumState &target) {
    if (!same_basis(state.basis_ptr(), target.basis_ptr())) {
        fail(ErrorKind::InvalidArgument, "fidelity between states on different bases");
    }
    return std::clamp(std::norm(target.amplitudes().dot(state.amplitudes())), 0.0, 1.0);
}

std::vector<double> phonon_distribution(const QuantumState &state, int mode) {
    if (state.basis().is_ladder()) {
        if (mode != 0) {
            fail(ErrorKind::Domain, "ladder states only carry the COM mode");
        }
        const auto &ladder = state.basis().ladder();
        std::vector<double> out(static_cast<size_t>(ladder.max_phonons() + 1), 0.0);
        for (size_t i = 0; i < ladder.size(); ++i) {
            out[static_cast<size_t>(ladder.slots()[i].phonons)] += std::norm(state.amplitudes()[static_cast<Eigen::Index>(i)]);
        }
        return out;
    }
    const auto &fb = state.basis().full();
    const size_t slot = fb.mode_slot(mode);
    std::vector<double> out(static_cast<size_t>(fb.cutoffs()[slot] + 1), 0.0);
    for (size_t i = 0; i < fb.dimension(); ++i) {
        out[static_cast<size_t>(fb.occupation(i, slot))] += std::norm(state.amplitudes()[static_cast<Eigen::Index>(i)]);
    }
    return out;
}

DensityMatrix partial_transpose_second(const DensityMatrix &rho) {
    if (rho.entries.rows() != 4 || rho.entries.cols() != 4) {
        fail(ErrorKind::InvalidArgument, "partial transpose expects a two-qubit (4x4) density matrix");
    }
    Eigen::MatrixXcd out(4, 4);
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            // Swap the second-qubit bits of row and column.
            const int row = (a & 1) | (b & 2);
            const int col = (b & 1) | (a & 2);
            out(a, b) = rho.entries(row, col);
        }
    }
    return {out};
}

double pairwise_negativity(const DensityMatrix &rho) {
    if (rho.entries.rows() != 4 || rho.entries.cols() != 4) {
        fail(ErrorKind::InvalidArgument, "negativity expects a two-qubit (4x4) density matrix");
    }
    if (!is_physical(rho)) {
        fail(ErrorKind::Domain, "negativity of a non-physical density matrix");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(partial_transpose_second(rho).entries, Eigen::EigenvaluesOnly);
    double neg = 0.0;
    for (double e : es.eigenvalues()) {
        if (e < 0) {
            neg -= e;
        }
    }
    return neg;
}

DensityMatrix dicke_two_qubit_reduction(int n_ions, int k) {
    if (n_ions < 2) {
        fail(ErrorKind::InvalidArgument, "two-qubit reduction needs at least two ions");
    }
    if (k < 0 || k > n_ions) {
        fail(ErrorKind::InvalidArgument, "Dicke excitation out of range");
    }
    // Fraction of weight-k configurations with the pair in each local state.
    const double n = n_ions;
    const double pairs = n * (n - 1);
    const double both_down = (n - k) * (n - k - 1) / pairs;
    const double one_up = k * (n - k) / pairs;
    const double both_up = k * (k - 1.0) / pairs;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
    m(0, 0) = both_down;
    m(1, 1) = m(2, 2) = m(1, 2) = m(2, 1) = one_up;
    m(3, 3) = both_up;
    return {m};
}

}  // namespace tcsim
