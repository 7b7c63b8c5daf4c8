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

#ifndef TCSIM_OPERATORS_HPP
#define TCSIM_OPERATORS_HPP

#include <Eigen/Sparse>

#include "tcsim/ionchain.hpp"
#include "tcsim/statespace.hpp"

namespace tcsim {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

/// Sparse operator bound to the basis it acts on.
struct OperatorMatrix {
    BasisPtr basis;
    SparseMatrix entries;
    bool hermitian = false;

    size_t dimension() const {
        return static_cast<size_t>(entries.rows());
    }
    QuantumState apply(const QuantumState &state) const;
    Eigen::MatrixXcd dense() const {
        return Eigen::MatrixXcd(entries);
    }
};

/// Largest entry magnitude.
double max_abs(const SparseMatrix &m);
inline double max_abs(const OperatorMatrix &op) {
    return max_abs(op.entries);
}
double hermiticity_defect(const OperatorMatrix &op);

OperatorMatrix operator+(const OperatorMatrix &a, const OperatorMatrix &b);
OperatorMatrix operator-(const OperatorMatrix &a, const OperatorMatrix &b);
OperatorMatrix operator*(const OperatorMatrix &a, const OperatorMatrix &b);
OperatorMatrix operator*(Complex s, const OperatorMatrix &a);

/// ab - ba.
OperatorMatrix commutator(const OperatorMatrix &a, const OperatorMatrix &b);

/// Mode-weighted raising operator L+^j = sum_n b_nj sigma+^n, with the
/// orthonormal amplitudes of `modes`. Phonon factors are left untouched.
OperatorMatrix l_plus(int mode, const ModeTable &modes, const BasisPtr &basis);
OperatorMatrix l_minus(int mode, const ModeTable &modes, const BasisPtr &basis);
/// L_z = sum_n s_z^n with spin-1/2 eigenvalues, so the spectrum is -N/2..N/2.
OperatorMatrix l_z(const BasisPtr &basis);

/// L^2(j) = L_z^2 + (K+ K- + K- K+)/2 with the collectively normalized
/// K+- = sqrt(N) L+-^j. For the COM mode K+- = sum_n sigma+-^n, so L^2(0) is
/// the total-spin Casimir with eigenvalues l(l+1).
OperatorMatrix l_squared(int mode, const ModeTable &modes, const BasisPtr &basis);

/// a_m^dagger a_m for one active mode.
OperatorMatrix phonon_number(int mode, const BasisPtr &basis);

/// R = sum_m n_m + L_z + N/2 (red sideband charge), summed over active modes.
OperatorMatrix conserved_r(const BasisPtr &basis);
/// B = sum_m n_m - L_z + N/2 (blue sideband charge), summed over active modes.
OperatorMatrix conserved_b(const BasisPtr &basis);

/// <psi|op|psi> for a normalized state.
Complex expectation(const OperatorMatrix &op, const QuantumState &state);

}  // namespace tcsim

#endif
