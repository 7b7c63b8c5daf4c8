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

/* C interface to the tcsim trapped-ion Tavis-Cummings simulator.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns a tcs_status; on
 * failure tcs_last_error() describes the problem for the calling thread.
 */

#ifndef TCSIM_TCSIM_H
#define TCSIM_TCSIM_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(TCSIM_BUILDING)
#define TCSIM_API __declspec(dllexport)
#else
#define TCSIM_API __declspec(dllimport)
#endif
#else
#define TCSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tcs_status {
    TCS_OK = 0,
    TCS_ERR_INVALID_ARGUMENT = 1,
    TCS_ERR_PARSE = 2,
    TCS_ERR_IO = 3,
    TCS_ERR_DOMAIN = 4,
    TCS_ERR_SOLVER = 5,
    TCS_ERR_INTERNAL = 6
} tcs_status;

typedef struct tcs_modes tcs_modes;
typedef struct tcs_table tcs_table;
typedef struct tcs_result tcs_result;

typedef enum tcs_representation {
    TCS_REPR_AUTO = 0,
    TCS_REPR_FULL = 1,
    TCS_REPR_LADDER = 2
} tcs_representation;

/* Parameters for builtin and file protocols. Zero-initialize and set what you need. */
typedef struct tcs_protocol_params {
    int n_ions;                        /* chain length (-n) */
    int k;                             /* Dicke excitation for wk-postselect (-k) */
    int mode;                          /* mode index for irradiant (-j) */
    double coupling_scale;             /* <= 0 selects 1 */
    tcs_representation representation; /* full space or symmetric ladder */
} tcs_protocol_params;

TCSIM_API const char *tcs_version(void);
/* Message for the most recent failure on this thread; empty if none. */
TCSIM_API const char *tcs_last_error(void);

/* Normal modes. */
TCSIM_API tcs_status tcs_modes_compute(int n_ions, tcs_modes **out);
TCSIM_API void tcs_modes_free(tcs_modes *modes);
TCSIM_API int tcs_modes_count(const tcs_modes *modes);
TCSIM_API double tcs_modes_frequency(const tcs_modes *modes, int mode);
TCSIM_API double tcs_modes_amplitude(const tcs_modes *modes, int ion, int mode);
TCSIM_API tcs_status tcs_modes_table(const tcs_modes *modes, tcs_table **out);

/* Tables (figure data, mode tables). */
TCSIM_API tcs_status tcs_figure_compute(int id, double t_max, int steps, tcs_table **out);
TCSIM_API tcs_status tcs_trajectory_compute(int n_ions, int r, double t_max, int steps, int with_entropy,
                                            tcs_table **out);
TCSIM_API void tcs_table_free(tcs_table *table);
TCSIM_API size_t tcs_table_rows(const tcs_table *table);
TCSIM_API size_t tcs_table_columns(const tcs_table *table);
TCSIM_API const char *tcs_table_column_name(const tcs_table *table, size_t column);
TCSIM_API double tcs_table_value(const tcs_table *table, size_t row, size_t column);
TCSIM_API tcs_status tcs_table_write_csv(const tcs_table *table, const char *path);
/* CSV text of the table; owned by the table and valid until it is freed. */
TCSIM_API const char *tcs_table_csv(tcs_table *table);

/* Protocols. */
TCSIM_API int tcs_protocol_is_builtin(const char *name);
TCSIM_API tcs_status tcs_protocol_run_builtin(const char *name, const tcs_protocol_params *params, tcs_result **out);
TCSIM_API tcs_status tcs_protocol_run_text(const char *text, const tcs_protocol_params *params, tcs_result **out);
TCSIM_API tcs_status tcs_protocol_run_file(const char *path, const tcs_protocol_params *params, tcs_result **out);
TCSIM_API void tcs_result_free(tcs_result *result);
TCSIM_API int tcs_result_failed(const tcs_result *result);
TCSIM_API double tcs_result_success_probability(const tcs_result *result);
TCSIM_API int tcs_result_has_fidelity(const tcs_result *result);
TCSIM_API double tcs_result_fidelity(const tcs_result *result);
TCSIM_API size_t tcs_result_step_count(const tcs_result *result);
TCSIM_API const char *tcs_result_step_description(const tcs_result *result, size_t step);
/* NaN when the step has no duration or leakage. */
TCSIM_API double tcs_result_step_duration(const tcs_result *result, size_t step);
TCSIM_API double tcs_result_step_leakage(const tcs_result *result, size_t step);
TCSIM_API double tcs_result_step_probability(const tcs_result *result, size_t step);
TCSIM_API size_t tcs_result_diagnostic_count(const tcs_result *result);
TCSIM_API const char *tcs_result_diagnostic_name(const tcs_result *result, size_t index);
TCSIM_API double tcs_result_diagnostic_value(const tcs_result *result, size_t index);
TCSIM_API const char *tcs_result_basis(const tcs_result *result);
TCSIM_API tcs_status tcs_result_save_state(const tcs_result *result, const char *path);

#ifdef __cplusplus
}
#endif

#endif
