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

#include <cmath>

#include "gtest/gtest.h"
#include "oracle.hpp"
#include "tcsim/error.hpp"

using namespace tcsim;

namespace {

std::vector<double> column(const ModeTable &m, int j) {
    std::vector<double> w(m.n_ions);
    for (int i = 0; i < m.n_ions; ++i) {
        w[i] = m.amplitude(i, j);
    }
    return w;
}

double max_diff(const OperatorMatrix &a, const Eigen::MatrixXcd &b) {
    return (a.dense() - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(operators, l_plus_two_ions) {
    auto modes = normal_modes(2);
    auto basis = make_basis(FullBasis(2));
    auto down = basis_state(basis, 0);
    auto com = l_plus(0, modes, basis).apply(down);
    EXPECT_NEAR(com.amplitudes()[1].real(), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(com.amplitudes()[2].real(), 1.0 / std::sqrt(2.0), 1e-15);
    auto stretch = l_plus(1, modes, basis).apply(down);
    EXPECT_NEAR(std::abs(stretch.amplitudes()[1]), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR((stretch.amplitudes()[1] + stretch.amplitudes()[2]).real(), 0.0, 1e-15);
}

TEST(operators, match_kronecker_oracle) {
    for (int n = 2; n <= 5; ++n) {
        auto modes = normal_modes(n);
        std::vector<int> cutoffs{2, 1};
        auto basis = make_basis(FullBasis(n, {0, n - 1}, cutoffs));
        const auto ph = oracle::identity(oracle::phonon_dim(cutoffs));
        for (int j = 0; j < n; ++j) {
            Eigen::MatrixXcd lp = oracle::kron(oracle::collective_plus(column(modes, j)), ph);
            EXPECT_LT(max_diff(l_plus(j, modes, basis), lp), 1e-15);
            EXPECT_LT(max_diff(l_minus(j, modes, basis), lp.adjoint()), 1e-15);
        }
        Eigen::MatrixXcd lz = Eigen::MatrixXcd::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
        for (int i = 0; i < n; ++i) {
            Eigen::MatrixXcd sz = Eigen::MatrixXcd::Zero(2, 2);
            sz(0, 0) = -0.5;
            sz(1, 1) = 0.5;
            lz += oracle::on_ion(sz, i, n);
        }
        EXPECT_LT(max_diff(l_z(basis), oracle::kron(lz, ph)), 1e-15);
        Eigen::MatrixXcd a1 = oracle::kron(oracle::identity(Eigen::Index{1} << n), oracle::on_mode(oracle::annihilation(1), 1, cutoffs));
        EXPECT_LT(max_diff(phonon_number(n - 1, basis), a1.adjoint() * a1), 1e-15);
    }
}

TEST(operators, lz_on_ground) {
    auto basis = make_basis(FullBasis(4));
    EXPECT_NEAR(expectation(l_z(basis), basis_state(basis, 0)).real(), -2.0, 1e-15);
}

TEST(operators, l_squared_two_ions) {
    auto modes = normal_modes(2);
    auto basis = make_basis(FullBasis(2));
    auto l2 = l_squared(0, modes, basis);
    EXPECT_NEAR(expectation(l2, basis_state(basis, 0)).real(), 2.0, 1e-14);
    Eigen::VectorXcd singlet = Eigen::VectorXcd::Zero(4);
    singlet[1] = 1.0 / std::sqrt(2.0);
    singlet[2] = -1.0 / std::sqrt(2.0);
    QuantumState s(basis, singlet);
    EXPECT_LT(l2.apply(s).norm(), 1e-14);
}

TEST(operators, l_squared_three_ion_spectrum) {
    auto modes = normal_modes(3);
    auto basis = make_basis(FullBasis(3));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(l_squared(0, modes, basis).dense());
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(es.eigenvalues()[i], 0.75, 1e-12);
        EXPECT_NEAR(es.eigenvalues()[4 + i], 3.75, 1e-12);
    }
}

TEST(operators, algebra_identities) {
    for (int n = 2; n <= 6; ++n) {
        auto modes = normal_modes(n);
        auto basis = make_basis(FullBasis(n));
        auto lz = l_z(basis);
        for (int j = 0; j < n; ++j) {
            auto lp = l_plus(j, modes, basis);
            auto lm = l_minus(j, modes, basis);
            EXPECT_LT(max_abs(commutator(lz, lp) - lp), 1e-12);
            EXPECT_LT(max_abs(commutator(lz, lm) + lm), 1e-12);
            EXPECT_LT(max_abs(commutator(lz, l_squared(j, modes, basis))), 1e-12);
            EXPECT_LT(hermiticity_defect(l_squared(j, modes, basis)), 1e-14);
        }
        auto l2com = l_squared(0, modes, basis);
        EXPECT_LT(max_abs(commutator(l_plus(0, modes, basis), l2com)), 1e-12);
        for (int j = 1; j < n; ++j) {
            for (int k = 1; k < n; ++k) {
                if (j != k) {
                    EXPECT_GT(max_abs(commutator(l_plus(j, modes, basis), l_squared(k, modes, basis))), 1e-6);
                    EXPECT_GT(max_abs(commutator(l_minus(j, modes, basis), l_squared(k, modes, basis))), 1e-6);
                }
            }
        }
    }
}

TEST(operators, noncommuting_value_three_ions) {
    auto modes = normal_modes(3);
    auto basis = make_basis(FullBasis(3));
    EXPECT_GT(max_abs(commutator(l_plus(1, modes, basis), l_squared(0, modes, basis))), 1e-6);
}

TEST(operators, irradiance_orthogonality) {
    for (int n = 2; n <= 8; ++n) {
        auto modes = normal_modes(n);
        auto basis = make_basis(FullBasis(n));
        auto down = basis_state(basis, 0);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                auto v = l_minus(i, modes, basis).apply(l_plus(j, modes, basis).apply(down));
                EXPECT_NEAR(v.norm(), i == j ? 1.0 : 0.0, 1e-12) << n << " " << i << " " << j;
            }
        }
    }
}

TEST(operators, conserved_charges) {
    auto basis = make_basis(FullBasis(3, {0}, {2}));
    std::vector<int> zero{0}, one{1};
    EXPECT_EQ(expectation(conserved_r(basis), product_state(basis, 0, zero)).real(), 0.0);
    EXPECT_EQ(expectation(conserved_b(basis), product_state(basis, 0b111, zero)).real(), 0.0);
    auto w1 = with_phonons(dicke_state(3, 1), basis, one);
    EXPECT_NEAR(expectation(conserved_r(basis), w1).real(), 2.0, 1e-14);
    auto r = conserved_r(basis).dense();
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
        EXPECT_GE(r(i, i).real(), 0.0);
        EXPECT_EQ(r(i, i).real(), std::round(r(i, i).real()));
    }
    EXPECT_THROW(conserved_r(make_basis(FullBasis(3))), Error);
    EXPECT_THROW(conserved_b(make_basis(FullBasis(3))), Error);
}

TEST(operators, errors) {
    auto modes = normal_modes(3);
    EXPECT_THROW(l_plus(3, modes, make_basis(FullBasis(3))), Error);
    EXPECT_THROW(l_plus(0, modes, make_basis(FullBasis(4))), Error);
    auto a = l_z(make_basis(FullBasis(2)));
    auto b = l_z(make_basis(FullBasis(3)));
    EXPECT_THROW(commutator(a, b), Error);
}
