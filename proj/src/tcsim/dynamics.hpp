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

#ifndef TCSIM_DYNAMICS_HPP
#define TCSIM_DYNAMICS_HPP

#include <functional>
#include <optional>
#include <span>

#include "tcsim/operators.hpp"

namespace tcsim {

struct DynamicsConfig {
    /// Per-ion sideband coupling; time is measured in units of 1/coupling_scale.
    double coupling_scale = 1.0;
    double evolution_tolerance = 1e-10;
    int krylov_dimension = 30;
    /// Hamiltonians smaller than this are exponentiated densely.
    size_t dense_threshold = 512;

    void validate() const;
};

/// Red sideband on mode j:
///   H = c sqrt(N) sum_n b_nj (sigma+^n a_j + sigma-^n a_j^dagger)
/// with c the coupling scale. The sqrt(N) makes the COM case equal to
/// c (L+ a + L- a^dagger) with L+ = sum_n sigma+^n.
OperatorMatrix h_red(int mode, const ModeTable &modes, const BasisPtr &basis, const DynamicsConfig &cfg = {});
/// Blue sideband: c sqrt(N) sum_n b_nj (sigma+^n a_j^dagger + sigma-^n a_j).
OperatorMatrix h_blue(int mode, const ModeTable &modes, const BasisPtr &basis, const DynamicsConfig &cfg = {});
OperatorMatrix h_sideband(Sideband kind, int mode, const ModeTable &modes, const BasisPtr &basis,
                          const DynamicsConfig &cfg = {});

/// COM sideband Hamiltonian restricted to a symmetric ladder: tridiagonal,
/// coupling between rungs k and k+1 equal to c sqrt(n) sqrt((N-k)(k+1)), where
/// n is the phonon number of the rung that loses the phonon (red) or of the
/// lower rung plus one (blue).
OperatorMatrix h_ladder(const SectorLadder &ladder, const DynamicsConfig &cfg = {});
OperatorMatrix h_red_ladder(int n_ions, int r, const DynamicsConfig &cfg = {});
OperatorMatrix h_blue_ladder(int n_ions, int b, const DynamicsConfig &cfg = {});

/// Time evolution exp(-i h t) for a fixed Hermitian h. Small problems cache a
/// dense eigendecomposition; larger ones use Krylov propagation per call.
class Propagator {
   public:
    explicit Propagator(OperatorMatrix h, const DynamicsConfig &cfg = {});

    QuantumState evolve(const QuantumState &psi, double t) const;
    const OperatorMatrix &hamiltonian() const {
        return h_;
    }
    bool is_dense() const {
        return dense_;
    }

    /// Visits the state at each of `times` (ascending), starting from psi at t = 0.
    void sample(const QuantumState &psi, std::span<const double> times,
                const std::function<void(size_t, const QuantumState &)> &visit) const;

   private:
    OperatorMatrix h_;
    DynamicsConfig cfg_;
    bool dense_ = false;
    Eigen::VectorXd energies_;
    Eigen::MatrixXcd eigenvectors_;
};

QuantumState evolve(const OperatorMatrix &h, const QuantumState &psi0, double t, const DynamicsConfig &cfg = {});

struct TransferEstimate {
    double time = 0.0;      // duration of a full transfer psi0 -> psi1
    double leakage = 0.0;   // weight of h psi1 outside span{psi0, psi1}, relative
    double coupling = 0.0;  // |<psi1|h|psi0>|
};

/// Treats {psi0, psi1 ~ h psi0} as a two-level system and reports the full
/// transfer time together with how far h leaks out of that pair.
TransferEstimate two_level_transfer_time(const OperatorMatrix &h, const QuantumState &psi0);

struct Peak {
    double time = 0.0;
    double population = 0.0;
};

/// First time in (0, t_max] at which |<target|psi(t)>|^2 reaches its global
/// maximum. A coarse grid is refined by golden-section search and finished by
/// bisection on the sign of the derivative.
Peak peak_time(const Propagator &prop, const QuantumState &psi0, const QuantumState &target, double t_max,
               int n_grid = 512);
Peak peak_time(const OperatorMatrix &h, const QuantumState &psi0, const QuantumState &target, double t_max,
               int n_grid = 512, const DynamicsConfig &cfg = {});

/// Scan window heuristic for ladder peaks: 3 * pi sqrt(r) / (2 c sqrt(N)).
double default_peak_window(int n_ions, int r, double coupling_scale = 1.0);

}  // namespace tcsim

#endif
