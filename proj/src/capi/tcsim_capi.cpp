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

#include "tcsim/tcsim.h"

#include <cmath>
#include <exception>
#include <limits>
#include <new>
#include <sstream>
#include <string>

#include "tcsim/error.hpp"
#include "tcsim/figures.hpp"
#include "tcsim/ionchain.hpp"
#include "tcsim/protocols.hpp"
#include "tcsim/version.hpp"

struct tcs_modes {
    tcsim::ModeTable value;
};

struct tcs_table {
    tcsim::Table value;
    std::string csv;
};

struct tcs_result {
    tcsim::ProtocolResult value;
    std::string basis;
};

namespace {

thread_local std::string last_error;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

tcs_status to_status(tcsim::ErrorKind kind) {
    switch (kind) {
        case tcsim::ErrorKind::InvalidArgument:
            return TCS_ERR_INVALID_ARGUMENT;
        case tcsim::ErrorKind::Parse:
            return TCS_ERR_PARSE;
        case tcsim::ErrorKind::Io:
            return TCS_ERR_IO;
        case tcsim::ErrorKind::Domain:
            return TCS_ERR_DOMAIN;
        case tcsim::ErrorKind::SolverFailure:
            return TCS_ERR_SOLVER;
    }
    return TCS_ERR_INTERNAL;
}

template <typename F>
tcs_status guarded(F &&body) noexcept {
    try {
        last_error.clear();
        body();
        return TCS_OK;
    } catch (const tcsim::Error &e) {
        last_error = e.what();
        return to_status(e.kind());
    } catch (const std::bad_alloc &) {
        last_error = "out of memory";
        return TCS_ERR_INTERNAL;
    } catch (const std::exception &e) {
        last_error = e.what();
        return TCS_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return TCS_ERR_INTERNAL;
    }
}

void require_out(const void *out) {
    if (out == nullptr) {
        tcsim::fail(tcsim::ErrorKind::InvalidArgument, "output pointer is null");
    }
}

tcsim::BuiltinOptions builtin_options(const tcs_protocol_params *params) {
    tcsim::BuiltinOptions opts;
    if (params != nullptr) {
        if (params->coupling_scale > 0) {
            opts.dynamics.coupling_scale = params->coupling_scale;
        }
        switch (params->representation) {
            case TCS_REPR_FULL:
                opts.representation = tcsim::Representation::Full;
                break;
            case TCS_REPR_LADDER:
                opts.representation = tcsim::Representation::Ladder;
                break;
            default:
                opts.representation = tcsim::Representation::Auto;
        }
    }
    return opts;
}

tcs_result *wrap(tcsim::ProtocolResult r) {
    auto *out = new tcs_result{std::move(r), {}};
    out->basis = out->value.final_state.basis().describe();
    return out;
}

const tcsim::StepRecord *step_at(const tcs_result *result, size_t step) {
    if (result == nullptr || step >= result->value.step_log.size()) {
        return nullptr;
    }
    return &result->value.step_log[step];
}

}  // namespace

extern "C" {

const char *tcs_version(void) {
    return TCSIM_VERSION_STRING;
}

const char *tcs_last_error(void) {
    return last_error.c_str();
}

tcs_status tcs_modes_compute(int n_ions, tcs_modes **out) {
    return guarded([&] {
        require_out(out);
        *out = new tcs_modes{tcsim::normal_modes(n_ions)};
    });
}

void tcs_modes_free(tcs_modes *modes) {
    delete modes;
}

int tcs_modes_count(const tcs_modes *modes) {
    return modes ? modes->value.n_ions : 0;
}

double tcs_modes_frequency(const tcs_modes *modes, int mode) {
    if (!modes || mode < 0 || mode >= modes->value.n_ions) {
        return kNaN;
    }
    return modes->value.frequencies[static_cast<size_t>(mode)];
}

double tcs_modes_amplitude(const tcs_modes *modes, int ion, int mode) {
    if (!modes || mode < 0 || mode >= modes->value.n_ions || ion < 0 || ion >= modes->value.n_ions) {
        return kNaN;
    }
    return modes->value.amplitude(ion, mode);
}

tcs_status tcs_modes_table(const tcs_modes *modes, tcs_table **out) {
    return guarded([&] {
        require_out(out);
        require_out(modes);
        *out = new tcs_table{tcsim::modes_table(modes->value), {}};
    });
}

tcs_status tcs_figure_compute(int id, double t_max, int steps, tcs_table **out) {
    return guarded([&] {
        require_out(out);
        *out = new tcs_table{tcsim::figure_table(id, t_max, steps > 0 ? steps : 600), {}};
    });
}

tcs_status tcs_trajectory_compute(int n_ions, int r, double t_max, int steps, int with_entropy, tcs_table **out) {
    return guarded([&] {
        require_out(out);
        tcsim::TrajectoryOptions opts;
        opts.t_max = t_max;
        opts.steps = steps > 0 ? steps : 600;
        opts.entropy = with_entropy != 0;
        *out = new tcs_table{tcsim::ladder_trajectory(n_ions, r, opts), {}};
    });
}

void tcs_table_free(tcs_table *table) {
    delete table;
}

size_t tcs_table_rows(const tcs_table *table) {
    return table ? table->value.rows.size() : 0;
}

size_t tcs_table_columns(const tcs_table *table) {
    return table ? table->value.columns.size() : 0;
}

const char *tcs_table_column_name(const tcs_table *table, size_t column) {
    if (!table || column >= table->value.columns.size()) {
        return nullptr;
    }
    return table->value.columns[column].c_str();
}

double tcs_table_value(const tcs_table *table, size_t row, size_t column) {
    if (!table || row >= table->value.rows.size() || column >= table->value.rows[row].size()) {
        return kNaN;
    }
    return table->value.rows[row][column];
}

tcs_status tcs_table_write_csv(const tcs_table *table, const char *path) {
    return guarded([&] {
        require_out(table);
        if (path == nullptr) {
            tcsim::fail(tcsim::ErrorKind::InvalidArgument, "path is null");
        }
        table->value.write_csv(std::string(path));
    });
}

const char *tcs_table_csv(tcs_table *table) {
    if (!table) {
        return nullptr;
    }
    std::ostringstream out;
    table->value.write_csv(out);
    table->csv = out.str();
    return table->csv.c_str();
}

int tcs_protocol_is_builtin(const char *name) {
    return name != nullptr && tcsim::is_builtin(name);
}

tcs_status tcs_protocol_run_builtin(const char *name, const tcs_protocol_params *params, tcs_result **out) {
    return guarded([&] {
        require_out(out);
        if (name == nullptr || params == nullptr) {
            tcsim::fail(tcsim::ErrorKind::InvalidArgument, "protocol name and parameters are required");
        }
        *out = wrap(tcsim::run_builtin(name, params->n_ions, params->k, params->mode, builtin_options(params)));
    });
}

tcs_status tcs_protocol_run_text(const char *text, const tcs_protocol_params *params, tcs_result **out) {
    return guarded([&] {
        require_out(out);
        if (text == nullptr) {
            tcsim::fail(tcsim::ErrorKind::InvalidArgument, "protocol text is null");
        }
        const auto script = tcsim::parse_protocol(text);
        std::optional<int> ions;
        if (params != nullptr && params->n_ions > 0) {
            ions = params->n_ions;
        }
        *out = wrap(tcsim::run_script(script, ions, builtin_options(params).dynamics));
    });
}

tcs_status tcs_protocol_run_file(const char *path, const tcs_protocol_params *params, tcs_result **out) {
    return guarded([&] {
        require_out(out);
        if (path == nullptr) {
            tcsim::fail(tcsim::ErrorKind::InvalidArgument, "protocol path is null");
        }
        const auto script = tcsim::parse_protocol_file(path);
        std::optional<int> ions;
        if (params != nullptr && params->n_ions > 0) {
            ions = params->n_ions;
        }
        *out = wrap(tcsim::run_script(script, ions, builtin_options(params).dynamics));
    });
}

void tcs_result_free(tcs_result *result) {
    delete result;
}

int tcs_result_failed(const tcs_result *result) {
    return result ? static_cast<int>(result->value.failed) : 1;
}

double tcs_result_success_probability(const tcs_result *result) {
    return result ? result->value.success_probability : kNaN;
}

int tcs_result_has_fidelity(const tcs_result *result) {
    return result && result->value.target_fidelity.has_value();
}

double tcs_result_fidelity(const tcs_result *result) {
    return result && result->value.target_fidelity ? *result->value.target_fidelity : kNaN;
}

size_t tcs_result_step_count(const tcs_result *result) {
    return result ? result->value.step_log.size() : 0;
}

const char *tcs_result_step_description(const tcs_result *result, size_t step) {
    const auto *s = step_at(result, step);
    return s ? s->description.c_str() : nullptr;
}

double tcs_result_step_duration(const tcs_result *result, size_t step) {
    const auto *s = step_at(result, step);
    return s && s->duration ? *s->duration : kNaN;
}

double tcs_result_step_leakage(const tcs_result *result, size_t step) {
    const auto *s = step_at(result, step);
    return s && s->leakage ? *s->leakage : kNaN;
}

double tcs_result_step_probability(const tcs_result *result, size_t step) {
    const auto *s = step_at(result, step);
    return s ? s->branch_probability : kNaN;
}

size_t tcs_result_diagnostic_count(const tcs_result *result) {
    return result ? result->value.diagnostics.size() : 0;
}

const char *tcs_result_diagnostic_name(const tcs_result *result, size_t index) {
    if (!result || index >= result->value.diagnostics.size()) {
        return nullptr;
    }
    return result->value.diagnostics[index].first.c_str();
}

double tcs_result_diagnostic_value(const tcs_result *result, size_t index) {
    if (!result || index >= result->value.diagnostics.size()) {
        return kNaN;
    }
    return result->value.diagnostics[index].second;
}

const char *tcs_result_basis(const tcs_result *result) {
    return result ? result->basis.c_str() : nullptr;
}

tcs_status tcs_result_save_state(const tcs_result *result, const char *path) {
    return guarded([&] {
        require_out(result);
        if (path == nullptr) {
            tcsim::fail(tcsim::ErrorKind::InvalidArgument, "path is null");
        }
        tcsim::save_state(path, result->value.final_state);
    });
}

}  // extern "C"
