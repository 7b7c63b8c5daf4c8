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
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"

TEST(capi, version_and_errors) {
    EXPECT_STREQ(tcs_version(), "0.1.0");
    tcs_modes *m = nullptr;
    EXPECT_EQ(tcs_modes_compute(0, &m), TCS_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(m, nullptr);
    EXPECT_NE(std::string(tcs_last_error()).find("positive"), std::string::npos);
    EXPECT_EQ(tcs_modes_compute(3, nullptr), TCS_ERR_INVALID_ARGUMENT);
}

TEST(capi, modes) {
    tcs_modes *m = nullptr;
    ASSERT_EQ(tcs_modes_compute(2, &m), TCS_OK);
    EXPECT_EQ(tcs_modes_count(m), 2);
    EXPECT_DOUBLE_EQ(tcs_modes_frequency(m, 0), 1.0);
    EXPECT_NEAR(tcs_modes_frequency(m, 1), std::sqrt(3.0), 1e-12);
    EXPECT_NEAR(tcs_modes_amplitude(m, 1, 0), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_TRUE(std::isnan(tcs_modes_frequency(m, 5)));
    tcs_table *t = nullptr;
    ASSERT_EQ(tcs_modes_table(m, &t), TCS_OK);
    EXPECT_EQ(tcs_table_rows(t), 2u);
    EXPECT_EQ(tcs_table_columns(t), 4u);
    EXPECT_STREQ(tcs_table_column_name(t, 1), "frequency");
    std::string csv = tcs_table_csv(t);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "mode,frequency,b_0,b_1");
    tcs_table_free(t);
    tcs_modes_free(m);
    tcs_modes_free(nullptr);
    EXPECT_EQ(tcs_modes_count(nullptr), 0);
}

TEST(capi, figure_rows_sum_to_one) {
    tcs_table *t = nullptr;
    ASSERT_EQ(tcs_figure_compute(3, 0.0, 50, &t), TCS_OK);
    EXPECT_EQ(tcs_table_rows(t), 50u);
    ASSERT_EQ(tcs_table_columns(t), 4u);
    for (size_t r = 0; r < tcs_table_rows(t); ++r) {
        double s = 0;
        for (size_t c = 1; c < 4; ++c) {
            s += tcs_table_value(t, r, c);
        }
        EXPECT_NEAR(s, 1.0, 1e-10);
    }
    EXPECT_TRUE(std::isnan(tcs_table_value(t, 99, 0)));
    EXPECT_EQ(tcs_table_write_csv(t, "/nonexistent/dir/x.csv"), TCS_ERR_IO);
    tcs_table_free(t);
    EXPECT_EQ(tcs_figure_compute(9, 0.0, 10, &t), TCS_ERR_INVALID_ARGUMENT);
}

TEST(capi, trajectory) {
    tcs_table *t = nullptr;
    ASSERT_EQ(tcs_trajectory_compute(5, 2, 1.0, 11, 1, &t), TCS_OK);
    EXPECT_EQ(tcs_table_columns(t), 5u);
    EXPECT_STREQ(tcs_table_column_name(t, 4), "entropy_spins");
    EXPECT_DOUBLE_EQ(tcs_table_value(t, 10, 0), 1.0);
    tcs_table_free(t);
}

TEST(capi, builtin_protocol) {
    tcs_protocol_params p{};
    p.n_ions = 10;
    p.k = 5;
    p.coupling_scale = 1.0;
    p.representation = TCS_REPR_AUTO;
    tcs_result *r = nullptr;
    ASSERT_EQ(tcs_protocol_run_builtin("wk-postselect", &p, &r), TCS_OK);
    EXPECT_FALSE(tcs_result_failed(r));
    ASSERT_TRUE(tcs_result_has_fidelity(r));
    EXPECT_NEAR(tcs_result_fidelity(r), 1.0, 1e-10);
    EXPECT_EQ(tcs_result_step_count(r), 2u);
    EXPECT_STREQ(tcs_result_step_description(r, 1), "measure-phonon 0 0");
    EXPECT_TRUE(std::isnan(tcs_result_step_leakage(r, 1)));
    EXPECT_NEAR(tcs_result_step_probability(r, 1), tcs_result_success_probability(r), 1e-15);
    EXPECT_EQ(tcs_result_diagnostic_count(r), 2u);
    EXPECT_STREQ(tcs_result_diagnostic_name(r, 0), "peak_time");
    const std::string path = ::testing::TempDir() + "capi_state.txt";
    EXPECT_EQ(tcs_result_save_state(r, path.c_str()), TCS_OK);
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    EXPECT_EQ(first, "tcsim-state 1");
    tcs_result_free(r);
}

TEST(capi, protocol_errors) {
    tcs_protocol_params p{};
    p.n_ions = 3;
    p.coupling_scale = 1.0;
    tcs_result *r = nullptr;
    EXPECT_EQ(tcs_protocol_run_text("ions 3\nbogus\n", &p, &r), TCS_ERR_PARSE);
    EXPECT_NE(std::string(tcs_last_error()).find("line 2"), std::string::npos);
    EXPECT_EQ(tcs_protocol_run_text("cutoff 0\ninject 0\n", &p, &r), TCS_ERR_DOMAIN);
    EXPECT_EQ(tcs_protocol_run_file("/nonexistent.txt", &p, &r), TCS_ERR_IO);
    EXPECT_EQ(tcs_protocol_run_builtin("nope", &p, &r), TCS_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(r, nullptr);
    ASSERT_EQ(tcs_protocol_run_text("inject 0\npulse red 0 auto\n", &p, &r), TCS_OK);
    EXPECT_FALSE(tcs_result_has_fidelity(r));
    EXPECT_NE(std::string(tcs_result_basis(r)).find("N=3"), std::string::npos);
    tcs_result_free(r);
    EXPECT_TRUE(tcs_protocol_is_builtin("ghz4"));
    EXPECT_FALSE(tcs_protocol_is_builtin(nullptr));
}
