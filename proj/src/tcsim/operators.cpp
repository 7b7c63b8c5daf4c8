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

#include "tcsim/operators.hpp"

#include <bit>
#include <cmath>
#include <vector>

#include "tcsim/error.hpp"

namespace tcsim {

namespace {

using Triplet = Eigen::Triplet<Complex>;

SparseMatrix from_triplets(size_t dim, const std::vector<Triplet> &triplets) {
    SparseMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    return m;
}

const FullBasis &spin_basis(const BasisPtr &basis, const ModeTable &modes, int mode) {
    const auto &fb = basis->full();
    if (fb.n_ions() != modes.n_ions) {
        fail(ErrorKind::InvalidArgument, "basis has " + std::to_string(fb.n_ions()) + " ions but mode table has " +
                                             std::to_string(modes.n_ions));
    }
    if (mode < 0 || mode >= modes.n_ions) {
        fail(ErrorKind::InvalidArgument, "mode index " + std::to_string(mode) + " out of range");
    }
    return fb;
}

void require_same_basis(const OperatorMatrix &a, const OperatorMatrix &b) {
    if (!same_basis(a.basis, b.basis)) {
        fail(ErrorKind::InvalidArgument, "operators act on different bases");
    }
}

// Diagonal operator from a per-index function.
template <typename F>
OperatorMatrix diagonal(const BasisPtr &basis, F &&value) {
    const size_t dim = basis->dimension();
    std::vector<Triplet> t;
    t.reserve(dim);
    for (size_t i = 0; i < dim; ++i) {
        const double v = value(i);
        if (v != 0.0) {
            t.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i), v);
        }
    }
    return {basis, from_triplets(dim, t), true};
}

double total_phonons(const FullBasis &fb, size_t index) {
    double n = 0.0;
    for (size_t s = 0; s < fb.active_modes().size(); ++s) {
        n += fb.occupation(index, s);
    }
    return n;
}

}  // namespace

QuantumState OperatorMatrix::apply(const QuantumState &state) const {
    if (!same_basis(basis, state.basis_ptr())) {
        fail(ErrorKind::InvalidArgument, "operator and state live on different bases");
    }
    return QuantumState(state.basis_ptr(), entries * state.amplitudes());
}

double max_abs(const SparseMatrix &m) {
    double out = 0.0;
    for (Eigen::Index k = 0; k < m.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
            out = std::max(out, std::abs(it.value()));
        }
    }
    return out;
}

double hermiticity_defect(const OperatorMatrix &op) {
    return max_abs(SparseMatrix(op.entries - SparseMatrix(op.entries.adjoint())));
}

OperatorMatrix operator+(const OperatorMatrix &a, const OperatorMatrix &b) {
    require_same_basis(a, b);
    return {a.basis, a.entries + b.entries, a.hermitian && b.hermitian};
}

OperatorMatrix operator-(const OperatorMatrix &a, const OperatorMatrix &b) {
    require_same_basis(a, b);
    return {a.basis, a.entries - b.entries, a.hermitian && b.hermitian};
}

OperatorMatrix operator*(const OperatorMatrix &a, const OperatorMatrix &b) {
    require_same_basis(a, b);
    return {a.basis, SparseMatrix(a.entries * b.entries), false};
}

OperatorMatrix operator*(Complex s, const OperatorMatrix &a) {
    return {a.basis, s * a.entries, a.hermitian && s.imag() == 0.0};
}

OperatorMatrix commutator(const OperatorMatrix &a, const OperatorMatrix &b) {
    require_same_basis(a, b);
    SparseMatrix ab = a.entries * b.entries;
    SparseMatrix ba = b.entries * a.entries;
    return {a.basis, SparseMatrix(ab - ba), false};
}

OperatorMatrix l_plus(int mode, const ModeTable &modes, const BasisPtr &basis) {
    const auto &fb = spin_basis(basis, modes, mode);
    const size_t pd = fb.phonon_dimension();
    std::vector<Triplet> t;
    t.reserve(fb.dimension() * static_cast<size_t>(fb.n_ions()) / 2);
    for (SpinConfig s = 0; s < fb.spin_dimension(); ++s) {
        for (int n = 0; n < fb.n_ions(); ++n) {
            const SpinConfig bit = SpinConfig{1} << n;
            const double b = modes.amplitude(n, mode);
            if ((s & bit) || b == 0.0) {
                continue;
            }
            for (size_t p = 0; p < pd; ++p) {
                t.emplace_back(static_cast<Eigen::Index>((s | bit) * pd + p), static_cast<Eigen::Index>(s * pd + p), b);
            }
        }
    }
    return {basis, from_triplets(fb.dimension(), t), false};
}

OperatorMatrix l_minus(int mode, const ModeTable &modes, const BasisPtr &basis) {
    OperatorMatrix up = l_plus(mode, modes, basis);
    return {basis, SparseMatrix(up.entries.adjoint()), false};
}

OperatorMatrix l_z(const BasisPtr &basis) {
    const auto &fb = basis->full();
    return diagonal(basis, [&](size_t i) { return std::popcount(fb.spins_of(i)) - 0.5 * fb.n_ions(); });
}

OperatorMatrix l_squared(int mode, const ModeTable &modes, const BasisPtr &basis) {
    const double scale = std::sqrt(static_cast<double>(modes.n_ions));
    const OperatorMatrix up = Complex(scale) * l_plus(mode, modes, basis);
    const OperatorMatrix down = Complex(scale) * l_minus(mode, modes, basis);
    const OperatorMatrix z = l_z(basis);
    OperatorMatrix out = z * z + Complex(0.5) * (up * down + down * up);
    out.entries.prune(Complex(0.0), 1e-300);
    out.hermitian = true;
    return out;
}

OperatorMatrix phonon_number(int mode, const BasisPtr &basis) {
    const auto &fb = basis->full();
    const size_t slot = fb.mode_slot(mode);
    return diagonal(basis, [&](size_t i) { return static_cast<double>(fb.occupation(i, slot)); });
}

OperatorMatrix conserved_r(const BasisPtr &basis) {
    const auto &fb = basis->full();
    if (fb.active_modes().empty()) {
        fail(ErrorKind::Domain, "conserved charges need at least one phonon mode");
    }
    return diagonal(basis, [&](size_t i) { return total_phonons(fb, i) + std::popcount(fb.spins_of(i)); });
}

OperatorMatrix conserved_b(const BasisPtr &basis) {
    const auto &fb = basis->full();
    if (fb.active_modes().empty()) {
        fail(ErrorKind::Domain, "conserved charges need at least one phonon mode");
    }
    return diagonal(basis, [&](size_t i) {
        return total_phonons(fb, i) - std::popcount(fb.spins_of(i)) + static_cast<double>(fb.n_ions());
    });
}

Complex expectation(const OperatorMatrix &op, const QuantumState &state) {
    return state.amplitudes().dot(op.apply(state).amplitudes());
}

}  // namespace tcsim
