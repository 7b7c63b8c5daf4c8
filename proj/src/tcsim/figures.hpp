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

#ifndef TCSIM_FIGURES_HPP
#define TCSIM_FIGURES_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "tcsim/ionchain.hpp"
#include "tcsim/statespace.hpp"

namespace tcsim {

/// Named columns of doubles, written as CSV with a header row.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void write_csv(std::ostream &out) const;
    void write_csv(const std::string &path) const;
};

struct TrajectoryOptions {
    double t_max = 0.0;  // <= 0 selects 3 pi sqrt(r) / (2 sqrt(N))
    int steps = 600;
    bool populations = true;
    bool entropy = false;
};

/// COM red-sideband evolution of |d...d>|r> on its ladder, one row per time
/// point: t, then the population of every rung, then the spin entropy in bits.
Table ladder_trajectory(int n_ions, int r, const TrajectoryOptions &options = {});

/// Data behind the four figure scenarios:
///   1: N=100, r=40 rung populations    2: same run, spin entropy
///   3: N=4, r=2 rung populations        4: N=10, r=5 rung populations
Table figure_table(int id, double t_max = 0.0, int steps = 600);

/// Frequencies and amplitude matrix: columns mode, frequency, b_0 .. b_{N-1}.
Table modes_table(const ModeTable &modes);

}  // namespace tcsim

#endif
