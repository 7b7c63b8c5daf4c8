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

#ifndef TCSIM_OBSERVABLES_HPP
#define TCSIM_OBSERVABLES_HPP

#include <vector>

#include "tcsim/statespace.hpp"

namespace tcsim {

/// |amplitude|^2 per ladder rung. Full-basis states are projected onto the embedded rungs.
std::vector<double> ladder_populations(const QuantumState &state, const SectorLadder &ladder);

/// Von Neumann entropy in bits; eigenvalues below 1e-14 are dropped.
double von_neumann_entropy(const DensityMatrix &rho);
/// Shannon entropy in bits of a probability vector, same cutoff.
double shannon_entropy(const std::vector<double> &probabilities);

/// Entropy of the reduced spin state. On a ladder the rungs are already a
/// Schmidt basis (distinct phonon numbers, orthogonal Dicke states).
double entropy_spins(const QuantumState &state);

/// |<target|state>|^2.
double fidelity(const QuantumState &state, const QuantumState &target);

/// Occupation probabilities of one mode, index = phonon number.
std::vector<double> phonon_distribution(const QuantumState &state, int mode);

/// Pair of qubits in the order (first, second); index = q_first + 2 q_second.
DensityMatrix partial_transpose_second(const DensityMatrix &rho);

/// Sum of |negative eigenvalues| of the partial transpose, i.e. (||rho^T2||_1 - 1)/2.
double pairwise_negativity(const DensityMatrix &rho);

/// Reduced state of any two qubits of the Dicke state W_k^N.
DensityMatrix dicke_two_qubit_reduction(int n_ions, int k);

}  // namespace tcsim

#endif
