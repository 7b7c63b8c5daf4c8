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

#ifndef TCSIM_IONCHAIN_HPP
#define TCSIM_IONCHAIN_HPP

#include <Eigen/Dense>
#include <vector>

namespace tcsim {

/// Equilibrium of N ions in a harmonic axial trap with Coulomb repulsion.
/// Lengths are in units of (e^2 / 4 pi eps0 m nu_com^2)^(1/3).
struct ChainGeometry {
    int n_ions = 0;
    std::vector<double> positions;  // ascending, centred on the origin
};

/// Axial normal modes. Mode 0 is the centre-of-mass mode; frequencies are in
/// units of the COM frequency. amplitudes(n, j) is the weight of ion n in
/// mode j, with orthonormal columns.
struct ModeTable {
    int n_ions = 0;
    std::vector<double> frequencies;
    Eigen::MatrixXd amplitudes;

    double amplitude(int ion, int mode) const {
        return amplitudes(ion, mode);
    }
};

struct ChainSolverOptions {
    double residual_tolerance = 1e-12;
    int max_iterations = 200;
};

ChainGeometry equilibrium_positions(int n_ions, const ChainSolverOptions &options = {});

/// Largest per-ion force imbalance at the given positions.
double force_residual(const std::vector<double> &positions);

ModeTable normal_modes(int n_ions, const ChainSolverOptions &options = {});

}  // namespace tcsim

#endif
