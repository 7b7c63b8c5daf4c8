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

#include "tcsim/protocols.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "gtest/gtest.h"
#include "tcsim/error.hpp"
#include "tcsim/observables.hpp"

using namespace tcsim;

namespace {

BuiltinOptions with_repr(Representation r) {
    BuiltinOptions o;
    o.representation = r;
    return o;
}

ErrorKind kind_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const Error &e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::InvalidArgument;
}

std::string message_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const Error &e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(protocols, w1_in_both_representations) {
    for (int n = 2; n <= 10; ++n) {
        for (auto repr : {Representation::Full, Representation::Ladder}) {
            auto r = prepare_w1(n, with_repr(repr));
            ASSERT_TRUE(r.target_fidelity);
            EXPECT_NEAR(*r.target_fidelity, 1.0, 1e-10) << n;
            EXPECT_EQ(r.success_probability, 1.0);
            EXPECT_FALSE(r.failed);
            ASSERT_EQ(r.step_log.size(), 2u);
            EXPECT_NEAR(*r.step_log[1].duration, std::numbers::pi / (2 * std::sqrt(n)), 1e-12);
            EXPECT_LT(*r.step_log[1].leakage, 1e-12);
            EXPECT_EQ(r.final_state.basis().is_ladder(), repr == Representation::Ladder);
        }
    }
}

TEST(protocols, auto_representation_switches_on_size) {
    EXPECT_FALSE(prepare_w1(8).final_state.basis().is_ladder());
    EXPECT_TRUE(prepare_w1(20).final_state.basis().is_ladder());
}

TEST(protocols, coupling_scale_rescales_time) {
    BuiltinOptions o;
    o.dynamics.coupling_scale = 2.5;
    auto r = prepare_w1(5, o);
    EXPECT_NEAR(*r.step_log[1].duration, std::numbers::pi / (2 * std::sqrt(5.0) * 2.5), 1e-12);
    EXPECT_NEAR(*r.target_fidelity, 1.0, 1e-10);
    auto a = postselect_wk(6, 3);
    auto b = postselect_wk(6, 3, o);
    EXPECT_NEAR(*b.diagnostic("peak_time") * 2.5, *a.diagnostic("peak_time"), 1e-9);
    EXPECT_NEAR(b.success_probability, a.success_probability, 1e-10);
}

TEST(protocols, coupling_scale_leaves_final_state_unchanged) {
    BuiltinOptions o;
    o.dynamics.coupling_scale = 0.4;
    for (auto name : {"w1", "w2", "irradiant", "ghz4", "wk-postselect", "fock-blue"}) {
        auto a = run_builtin(name, 4, 2, 2);
        auto b = run_builtin(name, 4, 2, 2, o);
        EXPECT_LT((a.final_state.amplitudes() - b.final_state.amplitudes()).norm(), 1e-10) << name;
        for (size_t i = 0; i < a.step_log.size(); ++i) {
            if (a.step_log[i].duration) {
                EXPECT_NEAR(b.step_log[i].duration.value_or(0.0) * 0.4, *a.step_log[i].duration, 1e-10) << name;
            }
        }
    }
}

TEST(protocols, postselection_is_exact_up_to_twelve_ions) {
    for (int n = 1; n <= 12; ++n) {
        for (int k = 1; k <= n; ++k) {
            auto r = postselect_wk(n, k);
            EXPECT_NEAR(*r.target_fidelity, 1.0, 1e-10) << n << " " << k;
            EXPECT_GT(r.success_probability, 0.0);
        }
    }
}

TEST(protocols, w2_climbs_to_two_excitations) {
    for (int n = 3; n <= 6; ++n) {
        auto r = prepare_w2(n);
        EXPECT_NEAR(*r.target_fidelity, 1.0, 1e-10) << n;
        EXPECT_LT(*r.diagnostic("stage2_lowering_residual"), 1e-12);
        EXPECT_LT(*r.step_log[4].leakage, 1e-12);
        auto spins = spin_component(r.final_state, std::vector<int>{0});
        auto lz = l_z(spins.basis_ptr());
        EXPECT_NEAR(expectation(lz, spins).real(), 2 - n / 2.0, 1e-10);
    }
    auto phases = w2_phases(4);
    EXPECT_NEAR(phases[1], std::numbers::pi / 2, 1e-15);
    EXPECT_NEAR(*prepare_w2(4).diagnostic("product_phase_target_fidelity"), 0.0, 1e-12);
    EXPECT_EQ(kind_of([] { prepare_w2(2); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([] { prepare_w2(4, with_repr(Representation::Ladder)); }), ErrorKind::InvalidArgument);
}

TEST(protocols, irradiant_states) {
    for (int n = 2; n <= 6; ++n) {
        for (int j = 1; j < n; ++j) {
            auto r = prepare_irradiant(n, j);
            EXPECT_NEAR(*r.target_fidelity, 1.0, 1e-10);
            EXPECT_LT(*r.diagnostic("irradiance_residual"), 1e-12);
        }
    }
    auto epr = prepare_irradiant(2, 1);
    auto spins = spin_component(epr.final_state, std::vector<int>{0});
    EXPECT_NEAR(std::abs(spins.amplitudes()[1]), 1 / std::sqrt(2.0), 1e-10);
    EXPECT_NEAR(std::abs(spins.amplitudes()[1] + spins.amplitudes()[2]), 0.0, 1e-10);
    EXPECT_EQ(kind_of([] { prepare_irradiant(4, 0); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([] { prepare_irradiant(4, 4); }), ErrorKind::InvalidArgument);
}

TEST(protocols, ghz4_matches_ideal_product) {
    auto r = prepare_ghz4();
    auto modes = normal_modes(4);
    auto b = [&](int ion) { return modes.amplitude(ion, 3); };
    double norm2 = 0.0;
    for (int a = 0; a < 4; ++a) {
        for (int c = a + 1; c < 4; ++c) {
            norm2 += std::pow(b(a) + b(c), 2);
        }
    }
    const double overlap = ((b(0) + b(2)) - (b(1) + b(3))) / std::sqrt(2.0);
    const double closed_form = overlap * overlap / norm2;
    EXPECT_NEAR(*r.target_fidelity, closed_form, 1e-10);
    EXPECT_NEAR(*r.target_fidelity, 0.787491484879, 1e-9);
    EXPECT_NEAR(*r.diagnostic("ideal_product_fidelity"), closed_form, 1e-12);
    EXPECT_LT(*r.diagnostic("stage1_leakage"), 1e-12);
    EXPECT_LT(*r.diagnostic("stage2_leakage"), 1e-12);
    auto target = ghz4_target_spins();
    EXPECT_NEAR(target.norm(), 1.0, 1e-15);
    EXPECT_EQ(kind_of([] { run_builtin("ghz4", 5, 0, 1); }), ErrorKind::InvalidArgument);
}

TEST(protocols, postselected_dicke) {
    for (auto [n, k] : {std::pair{4, 2}, std::pair{10, 5}, std::pair{6, 1}}) {
        auto full = postselect_wk(n, k, with_repr(Representation::Full));
        auto ladder = postselect_wk(n, k, with_repr(Representation::Ladder));
        EXPECT_NEAR(*full.target_fidelity, 1.0, 1e-10);
        EXPECT_NEAR(*ladder.target_fidelity, 1.0, 1e-10);
        EXPECT_NEAR(full.success_probability, *full.diagnostic("ladder_peak_population"), 1e-8);
        EXPECT_NEAR(full.success_probability, ladder.success_probability, 1e-10);
    }
    EXPECT_NEAR(postselect_wk(4, 2).success_probability, 48.0 / 49.0, 1e-10);
    EXPECT_EQ(kind_of([] { postselect_wk(4, 0); }), ErrorKind::InvalidArgument);
    BuiltinOptions small;
    small.cutoff = 1;
    EXPECT_EQ(kind_of([&] { postselect_wk(4, 2, small); }), ErrorKind::Domain);
}

TEST(protocols, fock_state_from_blue_sideband) {
    auto r = fock_via_blue(4);
    EXPECT_NEAR(*r.target_fidelity, 1.0, 1e-10);
    auto dist = phonon_distribution(r.final_state, 0);
    EXPECT_NEAR(dist[4], 1.0, 1e-10);
    EXPECT_NEAR(r.success_probability, *r.diagnostic("ladder_peak_population"), 1e-8);
    auto lr = fock_via_blue(4, with_repr(Representation::Ladder));
    EXPECT_NEAR(lr.success_probability, r.success_probability, 1e-10);
    BuiltinOptions small;
    small.cutoff = 3;
    EXPECT_EQ(kind_of([&] { fock_via_blue(4, small); }), ErrorKind::Domain);
}

TEST(protocols, deterministic) {
    auto a = prepare_ghz4();
    auto b = prepare_ghz4();
    EXPECT_EQ(a.final_state.amplitudes(), b.final_state.amplitudes());
    auto c = postselect_wk(10, 5);
    auto d = postselect_wk(10, 5);
    EXPECT_EQ(c.success_probability, d.success_probability);
}

TEST(protocols, inject_on_ladder_moves_sector) {
    auto start = make_basis(sector_ladder(3, 0));
    std::vector<ProtocolStep> steps{InjectPhonon{0}, Pulse{Sideband::Red, 0, std::nullopt}};
    auto r = run_protocol(steps, basis_state(start, 0), std::nullopt);
    EXPECT_EQ(r.final_state.basis().ladder().charge(), 1);
    EXPECT_NEAR(std::norm(r.final_state.amplitudes()[1]), 1.0, 1e-12);
    std::vector<ProtocolStep> wrong{InjectPhonon{0}, Pulse{Sideband::Blue, 0, 1.0}};
    EXPECT_EQ(kind_of([&] { run_protocol(wrong, basis_state(start, 0), std::nullopt); }), ErrorKind::Domain);
    std::vector<ProtocolStep> phase{LocalPhase{{0, 1, 2}}};
    EXPECT_EQ(kind_of([&] { run_protocol(phase, basis_state(start, 0), std::nullopt); }), ErrorKind::Domain);
}

TEST(protocols, failed_branch_skips_remaining_steps) {
    auto basis = make_basis(FullBasis(2, {0}, {2}));
    std::vector<ProtocolStep> steps{MeasurePhonon{0, 1}, InjectPhonon{0}, Pulse{Sideband::Red, 0, std::nullopt}};
    auto r = run_protocol(steps, product_state(basis, 0, std::vector<int>{0}), std::nullopt);
    EXPECT_TRUE(r.failed);
    EXPECT_EQ(r.success_probability, 0.0);
    ASSERT_EQ(r.step_log.size(), 3u);
    EXPECT_NE(r.step_log[1].description.find("skipped"), std::string::npos);
    EXPECT_EQ(r.step_log[2].branch_probability, 0.0);
}

TEST(protocols, cutoff_overflow_is_domain_error) {
    auto basis = make_basis(FullBasis(2, {0}, {1}));
    std::vector<ProtocolStep> steps{InjectPhonon{0}, InjectPhonon{0}};
    EXPECT_EQ(kind_of([&] { run_protocol(steps, product_state(basis, 0, std::vector<int>{0}), std::nullopt); }),
              ErrorKind::Domain);
}

TEST(protocols, step_descriptions) {
    EXPECT_EQ(describe(InjectPhonon{2}), "inject 2");
    EXPECT_EQ(describe(Pulse{Sideband::Blue, 1, std::nullopt}), "pulse blue 1 auto");
    EXPECT_EQ(describe(MeasurePhonon{0, 3}), "measure-phonon 0 3");
    EXPECT_EQ(describe(MeasureSpins{0b0101, 4}), "measure-spins 1010");
}

TEST(protocols, script_reproduces_builtin) {
    auto script = parse_protocol(
        "# single excitation\n"
        "ions 6\n"
        "target dicke 1\n"
        "inject 0\n"
        "pulse red 0 auto   # full transfer\n");
    ASSERT_EQ(script.steps.size(), 2u);
    EXPECT_EQ(script.step_lines, (std::vector<int>{4, 5}));
    auto r = run_script(script, std::nullopt);
    EXPECT_NEAR(*r.target_fidelity, 1.0, 1e-10);
    EXPECT_NEAR(*r.step_log[1].duration, *prepare_w1(6).step_log[1].duration, 1e-14);
}

TEST(protocols, script_w2_with_phases) {
    auto r = run_script(parse_protocol("ions 4\ninject 0\npulse red 0 auto\nphase 0, 1.5707963267948966, "
                                       "3.141592653589793, 4.71238898038469\ninject 0\npulse red 0 auto\n"),
                        std::nullopt);
    EXPECT_NEAR(r.final_state.amplitudes().norm(), 1.0, 1e-12);
    auto builtin = prepare_w2(4);
    EXPECT_NEAR(std::abs(r.final_state.amplitudes().dot(builtin.final_state.amplitudes())), 1.0, 1e-10);
}

TEST(protocols, script_fock_with_spin_measurement) {
    auto r = run_script(parse_protocol("ions 2\npulse blue 0 0.9\nmeasure-spins uu\n"), std::nullopt);
    EXPECT_FALSE(r.failed);
    EXPECT_NEAR(phonon_distribution(r.final_state, 0)[2], 1.0, 1e-12);
    EXPECT_EQ(r.final_state.basis().full().cutoffs(), (std::vector<int>{4}));
}

TEST(protocols, parse_errors_name_lines) {
    const std::pair<const char *, const char *> cases[] = {
        {"ions 3\nfrobnicate 2\n", "line 2:"},
        {"ions 3\ninject\n", "line 2:"},
        {"inject 0\npulse green 0 auto\n", "line 2:"},
        {"\n\npulse red 0 -1\n", "line 3:"},
        {"pulse red x auto\n", "line 1:"},
        {"ions 0\n", "line 1:"},
        {"phase 0,abc\n", "line 1:"},
        {"measure-spins 01x\n", "line 1:"},
        {"target dicke\n", "line 1:"},
    };
    for (auto [text, where] : cases) {
        auto msg = message_of([&] { parse_protocol(text); });
        EXPECT_NE(msg.find(where), std::string::npos) << text << " -> " << msg;
        EXPECT_EQ(kind_of([&] { parse_protocol(text); }), ErrorKind::Parse);
    }
}

TEST(protocols, run_script_validation) {
    auto s = parse_protocol("ions 3\ninject 0\ninject 5\n");
    auto msg = message_of([&] { run_script(s, std::nullopt); });
    EXPECT_NE(msg.find("line 3:"), std::string::npos) << msg;
    auto phases = parse_protocol("ions 3\nphase 0,1\n");
    EXPECT_EQ(kind_of([&] { run_script(phases, std::nullopt); }), ErrorKind::Parse);
    EXPECT_EQ(kind_of([] { run_script(parse_protocol("inject 0\n"), std::nullopt); }), ErrorKind::InvalidArgument);
    EXPECT_NO_THROW(run_script(parse_protocol("inject 0\n"), 3));
    auto overflow = parse_protocol("ions 2\ncutoff 1\ninject 0\ninject 0\n");
    EXPECT_EQ(kind_of([&] { run_script(overflow, std::nullopt); }), ErrorKind::Domain);
    EXPECT_EQ(kind_of([] { parse_protocol_file("/nonexistent/protocol.txt"); }), ErrorKind::Io);
}

TEST(protocols, builtin_registry) {
    for (auto name : {"w1", "w2", "irradiant", "ghz4", "wk-postselect", "fock-blue"}) {
        EXPECT_TRUE(is_builtin(name));
    }
    EXPECT_FALSE(is_builtin("w3"));
    EXPECT_EQ(kind_of([] { run_builtin("w3", 4, 0, 1); }), ErrorKind::InvalidArgument);
    EXPECT_NEAR(*run_builtin("wk-postselect", 4, 2, 0).target_fidelity, 1.0, 1e-10);
}
