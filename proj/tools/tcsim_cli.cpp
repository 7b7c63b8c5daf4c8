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

// Command-line front end. Talks to the simulator only through the C API.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tcsim/tcsim.h"

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kIo = 3, kPhysics = 4 };

int exit_code_for(tcs_status status) {
    switch (status) {
        case TCS_OK:
            return kOk;
        case TCS_ERR_INVALID_ARGUMENT:
        case TCS_ERR_PARSE:
            return kUsage;
        case TCS_ERR_IO:
            return kIo;
        default:
            return kPhysics;
    }
}

int report(tcs_status status) {
    if (status != TCS_OK) {
        std::cerr << "tcsim: " << tcs_last_error() << "\n";
    }
    return exit_code_for(status);
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct TableDeleter {
    void operator()(tcs_table *t) const {
        tcs_table_free(t);
    }
};
struct ModesDeleter {
    void operator()(tcs_modes *m) const {
        tcs_modes_free(m);
    }
};
struct ResultDeleter {
    void operator()(tcs_result *r) const {
        tcs_result_free(r);
    }
};
using TablePtr = std::unique_ptr<tcs_table, TableDeleter>;

// Writes the table to `path` (or stdout when empty) plus a manifest beside it.
int emit_table(tcs_table *table, const std::string &path, const std::string &command,
               const std::vector<std::pair<std::string, std::string>> &params) {
    if (path.empty()) {
        std::cout << tcs_table_csv(table);
        return kOk;
    }
    if (tcs_status s = tcs_table_write_csv(table, path.c_str()); s != TCS_OK) {
        return report(s);
    }
    std::ofstream manifest(path + ".manifest.txt");
    if (!manifest) {
        std::cerr << "tcsim: cannot write manifest for '" << path << "'\n";
        return kIo;
    }
    manifest << "tool: tcsim " << tcs_version() << "\n";
    manifest << "command: " << command << "\n";
    for (const auto &[key, value] : params) {
        manifest << "param." << key << ": " << value << "\n";
    }
    manifest << "output: " << path << "\n";
    manifest << "rows: " << tcs_table_rows(table) << "\n";
    manifest << "columns: " << tcs_table_columns(table) << "\n";
    return manifest ? kOk : kIo;
}

void print_result(const tcs_result *result, const std::string &label) {
    std::cout << "protocol: " << label << "\n";
    std::cout << "basis: " << tcs_result_basis(result) << "\n";
    std::cout << "failed: " << (tcs_result_failed(result) ? "yes" : "no") << "\n";
    std::cout << "success_probability: " << num(tcs_result_success_probability(result)) << "\n";
    if (tcs_result_has_fidelity(result)) {
        std::cout << "target_fidelity: " << num(tcs_result_fidelity(result)) << "\n";
    }
    std::cout << "steps:\n";
    for (size_t i = 0; i < tcs_result_step_count(result); ++i) {
        std::cout << "  " << i + 1 << ". " << tcs_result_step_description(result, i);
        if (double d = tcs_result_step_duration(result, i); !std::isnan(d)) {
            std::cout << "  duration=" << num(d);
        }
        if (double l = tcs_result_step_leakage(result, i); !std::isnan(l)) {
            std::cout << "  leakage=" << num(l);
        }
        std::cout << "  p=" << num(tcs_result_step_probability(result, i)) << "\n";
    }
    if (tcs_result_diagnostic_count(result) > 0) {
        std::cout << "diagnostics:\n";
        for (size_t i = 0; i < tcs_result_diagnostic_count(result); ++i) {
            std::cout << "  " << tcs_result_diagnostic_name(result, i) << ": "
                      << num(tcs_result_diagnostic_value(result, i)) << "\n";
        }
    }
}

std::string joined_args(int argc, char **argv) {
    std::ostringstream out;
    for (int i = 0; i < argc; ++i) {
        out << (i ? " " : "") << argv[i];
    }
    return out.str();
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Collective spin-phonon dynamics of trapped-ion chains under red/blue sideband pulses"};
    app.set_version_flag("--version", std::string("tcsim ") + tcs_version());
    app.require_subcommand(1);

    int n_ions = 0;
    std::string output;
    auto *modes_cmd = app.add_subcommand("modes", "Axial normal modes of an N-ion chain as CSV");
    modes_cmd->add_option("-n,--ions", n_ions, "Number of ions")->required();
    modes_cmd->add_option("-o,--output", output, "CSV output path (stdout if omitted)");

    int figure_id = 0;
    double t_max = 0.0;
    int steps = 600;
    auto *figure_cmd = app.add_subcommand("figure", "Population / entropy trajectories of the figure scenarios");
    figure_cmd->add_option("id", figure_id, "Figure id 1-4")->required();
    figure_cmd->add_option("-o,--output", output, "CSV output path (stdout if omitted)");
    figure_cmd->add_option("--tmax", t_max, "End of the time window (default 3 pi sqrt(r) / (2 sqrt(N)))");
    figure_cmd->add_option("--steps", steps, "Number of time points");

    int r = 1;
    bool with_entropy = false;
    auto *traj_cmd = app.add_subcommand("trajectory", "COM red-sideband ladder trajectory from |d...d>|r>");
    traj_cmd->add_option("-n,--ions", n_ions, "Number of ions")->required();
    traj_cmd->add_option("-r,--excitations", r, "Initial phonon number")->required();
    traj_cmd->add_option("-o,--output", output, "CSV output path (stdout if omitted)");
    traj_cmd->add_option("--tmax", t_max, "End of the time window");
    traj_cmd->add_option("--steps", steps, "Number of time points");
    traj_cmd->add_flag("--entropy", with_entropy, "Append the spin entropy column");

    std::string protocol;
    int k = 0;
    int mode = 1;
    double coupling = 1.0;
    std::string representation = "auto";
    std::string save_path;
    auto *protocol_cmd = app.add_subcommand("protocol", "Run a builtin preparation scheme or a protocol file");
    protocol_cmd->add_option("protocol", protocol, "w1, w2, irradiant, ghz4, wk-postselect, fock-blue, or a file")
        ->required();
    protocol_cmd->add_option("-n,--ions", n_ions, "Number of ions");
    protocol_cmd->add_option("-k", k, "Dicke excitation for wk-postselect");
    protocol_cmd->add_option("-j,--mode", mode, "Mode index for irradiant");
    protocol_cmd->add_option("--lambda", coupling, "Coupling scale");
    protocol_cmd->add_option("--repr", representation, "auto, full or ladder")
        ->check(CLI::IsMember({"auto", "full", "ladder"}));
    protocol_cmd->add_option("--save", save_path, "Write the final state to this file");
    protocol_cmd->add_flag("--seedless", "Accepted for compatibility; runs are always deterministic");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kUsage;
    }
    const std::string command = joined_args(argc, argv);

    if (*modes_cmd) {
        tcs_modes *raw = nullptr;
        if (tcs_status s = tcs_modes_compute(n_ions, &raw); s != TCS_OK) {
            return report(s);
        }
        std::unique_ptr<tcs_modes, ModesDeleter> modes(raw);
        tcs_table *table = nullptr;
        if (tcs_status s = tcs_modes_table(modes.get(), &table); s != TCS_OK) {
            return report(s);
        }
        TablePtr owned(table);
        return emit_table(table, output, command, {{"n_ions", std::to_string(n_ions)}});
    }

    if (*figure_cmd || *traj_cmd) {
        tcs_table *table = nullptr;
        tcs_status s = *figure_cmd ? tcs_figure_compute(figure_id, t_max, steps, &table)
                                   : tcs_trajectory_compute(n_ions, r, t_max, steps, with_entropy ? 1 : 0, &table);
        if (s != TCS_OK) {
            return report(s);
        }
        TablePtr owned(table);
        std::vector<std::pair<std::string, std::string>> params{{"tmax", num(t_max)}, {"steps", std::to_string(steps)}};
        if (*figure_cmd) {
            params.insert(params.begin(), {"figure", std::to_string(figure_id)});
        } else {
            params.insert(params.begin(), {{"n_ions", std::to_string(n_ions)}, {"r", std::to_string(r)}});
        }
        return emit_table(table, output, command, params);
    }

    tcs_protocol_params params{};
    params.n_ions = n_ions;
    params.k = k;
    params.mode = mode;
    params.coupling_scale = coupling;
    params.representation = representation == "full"     ? TCS_REPR_FULL
                            : representation == "ladder" ? TCS_REPR_LADDER
                                                         : TCS_REPR_AUTO;
    tcs_result *raw = nullptr;
    const bool builtin = tcs_protocol_is_builtin(protocol.c_str()) != 0;
    tcs_status s = builtin ? tcs_protocol_run_builtin(protocol.c_str(), &params, &raw)
                           : tcs_protocol_run_file(protocol.c_str(), &params, &raw);
    if (s != TCS_OK) {
        return report(s);
    }
    std::unique_ptr<tcs_result, ResultDeleter> result(raw);
    std::string label = protocol;
    if (n_ions > 0) {
        label += " (N=" + std::to_string(n_ions) + ")";
    }
    print_result(result.get(), label);
    if (!save_path.empty()) {
        if (tcs_status st = tcs_result_save_state(result.get(), save_path.c_str()); st != TCS_OK) {
            return report(st);
        }
    }
    return kOk;
}
