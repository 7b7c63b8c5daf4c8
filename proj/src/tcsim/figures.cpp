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

#include "tcsim/figures.hpp"

#include <fstream>
#include <ostream>

#include "tcsim/dynamics.hpp"
#include "tcsim/error.hpp"
#include "tcsim/observables.hpp"

namespace tcsim {

void Table::write_csv(std::ostream &out) const {
    for (size_t c = 0; c < columns.size(); ++c) {
        out << (c ? "," : "") << columns[c];
    }
    out << "\n";
    for (const auto &row : rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            out << (c ? "," : "") << format_double17(row[c]);
        }
        out << "\n";
    }
}

void Table::write_csv(const std::string &path) const {
    std::ofstream out(path);
    if (!out) {
        fail(ErrorKind::Io, "cannot open '" + path + "' for writing");
    }
    write_csv(out);
    out.flush();
    if (!out) {
        fail(ErrorKind::Io, "write to '" + path + "' failed");
    }
}

Table ladder_trajectory(int n_ions, int r, const TrajectoryOptions &options) {
    if (options.steps < 2) {
        fail(ErrorKind::InvalidArgument, "trajectory needs at least two time points");
    }
    const SectorLadder ladder(n_ions, r, Sideband::Red);
    const double t_max = options.t_max > 0 ? options.t_max : default_peak_window(n_ions, r);

    Table table;
    table.columns.push_back("t");
    if (options.populations) {
        for (size_t i = 0; i < ladder.size(); ++i) {
            table.columns.push_back("pop_m" + format_double(ladder.m(i)) + "_n" + std::to_string(ladder.slots()[i].phonons));
        }
    }
    if (options.entropy) {
        table.columns.push_back("entropy_spins");
    }

    const Propagator prop(h_ladder(ladder));
    const QuantumState start = basis_state(make_basis(ladder), 0);
    std::vector<double> times(static_cast<size_t>(options.steps));
    for (int i = 0; i < options.steps; ++i) {
        times[static_cast<size_t>(i)] = t_max * i / (options.steps - 1);
    }
    table.rows.resize(times.size());
    prop.sample(start, times, [&](size_t i, const QuantumState &s) {
        auto &row = table.rows[i];
        row.push_back(times[i]);
        const auto pops = ladder_populations(s, ladder);
        if (options.populations) {
            row.insert(row.end(), pops.begin(), pops.end());
        }
        if (options.entropy) {
            row.push_back(shannon_entropy(pops));
        }
    });
    return table;
}

Table figure_table(int id, double t_max, int steps) {
    TrajectoryOptions opts;
    opts.t_max = t_max;
    opts.steps = steps;
    switch (id) {
        case 1:
            return ladder_trajectory(100, 40, opts);
        case 2:
            opts.populations = false;
            opts.entropy = true;
            return ladder_trajectory(100, 40, opts);
        case 3:
            return ladder_trajectory(4, 2, opts);
        case 4:
            return ladder_trajectory(10, 5, opts);
        default:
            fail(ErrorKind::InvalidArgument, "unknown figure id " + std::to_string(id) + " (expected 1-4)");
    }
}

Table modes_table(const ModeTable &modes) {
    Table table;
    table.columns = {"mode", "frequency"};
    for (int n = 0; n < modes.n_ions; ++n) {
        table.columns.push_back("b_" + std::to_string(n));
    }
    for (int j = 0; j < modes.n_ions; ++j) {
        std::vector<double> row{static_cast<double>(j), modes.frequencies[static_cast<size_t>(j)]};
        for (int n = 0; n < modes.n_ions; ++n) {
            row.push_back(modes.amplitude(n, j));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace tcsim
