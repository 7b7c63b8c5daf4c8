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

#include <cmath>

#include "gtest/gtest.h"
#include "tcsim/dynamics.hpp"
#include "tcsim/error.hpp"

using namespace tcsim;

namespace {

// Reduced state of ions (first, second) by explicit summation over the other spins.
DensityMatrix brute_force_pair(const QuantumState &spins, int first, int second) {
    const int n = spins.basis().n_ions();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(4, 4);
    const SpinConfig mask = (SpinConfig{1} << first) | (SpinConfig{1} << second);
    for (SpinConfig rest = 0; rest < (SpinConfig{1} << n); ++rest) {
        if (rest & mask) {
            continue;
        }
        for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) {
                SpinConfig sa = rest | (SpinConfig(a & 1) << first) | (SpinConfig(a >> 1) << second);
                SpinConfig sb = rest | (SpinConfig(b & 1) << first) | (SpinConfig(b >> 1) << second);
                rho(a, b) += spins.amplitudes()[static_cast<Eigen::Index>(sa)] *
                             std::conj(spins.amplitudes()[static_cast<Eigen::Index>(sb)]);
            }
        }
    }
    return {rho};
}

}  // namespace

TEST(observables, shannon_and_von_neumann) {
    EXPECT_EQ(shannon_entropy({1.0, 0.0}), 0.0);
    EXPECT_NEAR(shannon_entropy({0.5, 0.5}), 1.0, 1e-15);
    EXPECT_NEAR(shannon_entropy({0.25, 0.25, 0.25, 0.25}), 2.0, 1e-15);
    DensityMatrix mixed{Eigen::MatrixXcd::Identity(4, 4) * 0.25};
    EXPECT_NEAR(von_neumann_entropy(mixed), 2.0, 1e-14);
}

TEST(observables, entropy_of_entangled_spin_phonon_state) {
    auto basis = make_basis(FullBasis(1, {0}, {1}));
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
    v[0 * 2 + 1] = std::sqrt(0.3);
    v[1 * 2 + 0] = std::sqrt(0.7);
    QuantumState psi(basis, v);
    EXPECT_NEAR(entropy_spins(psi), shannon_entropy({0.3, 0.7}), 1e-13);
}

TEST(observables, ladder_entropy_matches_full_partial_trace) {
    for (int n : {2, 3, 5}) {
        const int r = 3;
        auto ladder = sector_ladder(n, r);
        auto lbasis = make_basis(ladder);
        auto fbasis = make_basis(FullBasis(n, {0}, {r}));
        auto psi = evolve(h_ladder(ladder), basis_state(lbasis, 0), 0.37);
        auto full = embed_ladder_state(ladder, psi.amplitudes(), fbasis);
        EXPECT_NEAR(entropy_spins(psi), entropy_spins(full), 1e-11);
        auto pops = ladder_populations(full, ladder);
        auto lpops = ladder_populations(psi, ladder);
        for (size_t i = 0; i < pops.size(); ++i) {
            EXPECT_NEAR(pops[i], lpops[i], 1e-14);
        }
        auto dist = phonon_distribution(full, 0);
        auto ldist = phonon_distribution(psi, 0);
        ASSERT_EQ(dist.size(), ldist.size());
        for (size_t i = 0; i < dist.size(); ++i) {
            EXPECT_NEAR(dist[i], ldist[i], 1e-14);
        }
    }
}

TEST(observables, fidelity) {
    auto basis = make_basis(FullBasis(2));
    Eigen::VectorXcd plus = Eigen::VectorXcd::Zero(4);
    plus[0] = plus[1] = 1.0 / std::sqrt(2.0);
    QuantumState a(basis, plus);
    EXPECT_NEAR(fidelity(a, basis_state(basis, 0)), 0.5, 1e-15);
    EXPECT_NEAR(fidelity(a, a), 1.0, 1e-15);
    EXPECT_THROW(fidelity(a, basis_state(make_basis(FullBasis(3)), 0)), Error);
}

TEST(observables, negativity_of_bell_and_product) {
    Eigen::MatrixXcd bell = Eigen::MatrixXcd::Zero(4, 4);
    bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
    EXPECT_NEAR(pairwise_negativity({bell}), 0.5, 1e-14);
    Eigen::MatrixXcd product = Eigen::MatrixXcd::Zero(4, 4);
    product(1, 1) = 1.0;
    EXPECT_NEAR(pairwise_negativity({product}), 0.0, 1e-15);
    EXPECT_THROW(pairwise_negativity({Eigen::MatrixXcd::Identity(4, 4)}), Error);
    EXPECT_THROW(pairwise_negativity({Eigen::MatrixXcd::Identity(3, 3) / 3.0}), Error);
}

TEST(observables, partial_transpose_is_involution) {
    Eigen::MatrixXcd m(4, 4);
    for (int i = 0; i < 16; ++i) {
        m(i / 4, i % 4) = Complex(i, -i);
    }
    auto once = partial_transpose_second({m});
    EXPECT_EQ(once.entries(0, 3), m(2, 1));
    EXPECT_EQ(partial_transpose_second(once).entries, m);
}

TEST(observables, dicke_reduction_matches_brute_force) {
    for (int n : {3, 6}) {
        for (int k = 0; k <= n; ++k) {
            auto d = dicke_state(n, k);
            auto closed = dicke_two_qubit_reduction(n, k);
            for (auto [i, j] : {std::pair{0, 1}, std::pair{1, n - 1}}) {
                auto brute = brute_force_pair(d, i, j);
                EXPECT_LT((closed.entries - brute.entries).cwiseAbs().maxCoeff(), 1e-14) << n << " " << k;
            }
        }
    }
}

TEST(observables, dicke_negativity_closed_form) {
    const int n = 10;
    for (int k = 0; k <= n; ++k) {
        const double pairs = n * (n - 1.0);
        const double a = (n - k) * (n - k - 1.0) / pairs;
        const double b = k * (n - k) / pairs;
        const double c = k * (k - 1.0) / pairs;
        const double expected = std::max(0.0, (std::sqrt((a - c) * (a - c) + 4 * b * b) - (a + c)) / 2);
        EXPECT_NEAR(pairwise_negativity(dicke_two_qubit_reduction(n, k)), expected, 1e-14);
    }
    EXPECT_NEAR(pairwise_negativity(dicke_two_qubit_reduction(10, 5)), 1.0 / 18.0, 1e-14);
}

TEST(observables, dicke_negativity_monotone_and_symmetric) {
    for (int n = 2; n <= 12; ++n) {
        double previous = -1.0;
        for (int k = 0; 2 * k <= n; ++k) {
            double v = pairwise_negativity(dicke_two_qubit_reduction(n, k));
            EXPECT_GE(v, previous - 1e-15);
            EXPECT_NEAR(v, pairwise_negativity(dicke_two_qubit_reduction(n, n - k)), 1e-12);
            previous = v;
        }
    }
}

TEST(observables, errors) {
    EXPECT_THROW(dicke_two_qubit_reduction(1, 0), Error);
    EXPECT_THROW(dicke_two_qubit_reduction(4, 5), Error);
    auto lbasis = make_basis(sector_ladder(3, 1));
    EXPECT_THROW(phonon_distribution(basis_state(lbasis, 0), 1), Error);
}
