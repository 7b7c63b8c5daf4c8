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

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>

#include "tcsim/error.hpp"
#include "tcsim/observables.hpp"

namespace tcsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string bits_text(SpinConfig spins, int n_ions) {
    std::string s;
    for (int n = 0; n < n_ions; ++n) {
        s += (spins >> n) & 1 ? '1' : '0';
    }
    return s;
}

QuantumState inject_phonon(const QuantumState &state, int mode) {
    const auto &basis = state.basis();
    if (basis.is_ladder()) {
        if (mode != 0) {
            fail(ErrorKind::Domain, "ladder states only carry the COM mode");
        }
        const auto &old = basis.ladder();
        SectorLadder next(old.n_ions(), old.charge() + 1, old.kind());
        const int first = next.slots().front().excitations;
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(next.size()));
        for (size_t i = 0; i < old.size(); ++i) {
            const auto &slot = old.slots()[i];
            v[slot.excitations - first] = std::sqrt(slot.phonons + 1.0) * state.amplitudes()[static_cast<Eigen::Index>(i)];
        }
        QuantumState out(make_basis(next), std::move(v));
        if (out.norm() == 0.0) {
            fail(ErrorKind::Domain, "phonon injection produced the zero vector");
        }
        return out.normalized();
    }
    const auto &fb = basis.full();
    const size_t slot = fb.mode_slot(mode);
    const int cutoff = fb.cutoffs()[slot];
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(state.amplitudes().size());
    for (size_t i = 0; i < fb.dimension(); ++i) {
        const Complex a = state.amplitudes()[static_cast<Eigen::Index>(i)];
        if (a == Complex(0.0)) {
            continue;
        }
        const int n = fb.occupation(i, slot);
        if (n == cutoff) {
            fail(ErrorKind::Domain, "phonon injection into mode " + std::to_string(mode) + " overflows its cutoff " +
                                        std::to_string(cutoff));
        }
        v[static_cast<Eigen::Index>(i + fb.stride(slot))] = std::sqrt(n + 1.0) * a;
    }
    QuantumState out(state.basis_ptr(), std::move(v));
    if (out.norm() == 0.0) {
        fail(ErrorKind::Domain, "phonon injection produced the zero vector");
    }
    return out.normalized();
}

QuantumState apply_local_phase(const QuantumState &state, const std::vector<double> &phases) {
    const auto &fb = state.basis().full();
    if (static_cast<int>(phases.size()) != fb.n_ions()) {
        fail(ErrorKind::InvalidArgument, "local phase needs one phase per ion");
    }
    QuantumState out = state;
    for (size_t i = 0; i < fb.dimension(); ++i) {
        const SpinConfig s = fb.spins_of(i);
        double phi = 0.0;
        for (int n = 0; n < fb.n_ions(); ++n) {
            if ((s >> n) & 1) {
                phi += phases[static_cast<size_t>(n)];
            }
        }
        out.amplitudes()[static_cast<Eigen::Index>(i)] *= std::polar(1.0, phi);
    }
    return out;
}

class PropagatorCache {
   public:
    explicit PropagatorCache(const DynamicsConfig &cfg) : cfg_(cfg) {
    }

    const Propagator &get(Sideband kind, int mode, const BasisPtr &basis) {
        for (const auto &e : entries_) {
            if (e.kind == kind && e.mode == mode && same_basis(e.basis, basis)) {
                return *e.prop;
            }
        }
        OperatorMatrix h = build(kind, mode, basis);
        entries_.push_back({kind, mode, basis, std::make_unique<Propagator>(std::move(h), cfg_)});
        return *entries_.back().prop;
    }

   private:
    OperatorMatrix build(Sideband kind, int mode, const BasisPtr &basis) {
        if (basis->is_ladder()) {
            const auto &ladder = basis->ladder();
            if (mode != 0 || kind != ladder.kind()) {
                fail(ErrorKind::Domain, std::string("a ") + sideband_name(ladder.kind()) +
                                            " ladder only supports COM pulses of the same sideband");
            }
            return h_ladder(ladder, cfg_);
        }
        const int n = basis->n_ions();
        if (!modes_ || modes_->n_ions != n) {
            modes_ = normal_modes(n);
        }
        return h_sideband(kind, mode, *modes_, basis, cfg_);
    }

    struct Entry {
        Sideband kind;
        int mode;
        BasisPtr basis;
        std::unique_ptr<Propagator> prop;
    };
    DynamicsConfig cfg_;
    std::optional<ModeTable> modes_;
    std::vector<Entry> entries_;
};

}  // namespace

std::string describe(const ProtocolStep &step) {
    return std::visit(
        overloaded{
            [](const InjectPhonon &s) { return "inject " + std::to_string(s.mode); },
            [](const Pulse &s) {
                return std::string("pulse ") + sideband_name(s.kind) + " " + std::to_string(s.mode) + " " +
                       (s.duration ? format_double(*s.duration) : std::string("auto"));
            },
            [](const LocalPhase &s) {
                std::string out = "phase ";
                for (size_t i = 0; i < s.phases.size(); ++i) {
                    out += (i ? "," : "") + format_double(s.phases[i]);
                }
                return out;
            },
            [](const MeasurePhonon &s) {
                return "measure-phonon " + std::to_string(s.mode) + " " + std::to_string(s.occupation);
            },
            [](const MeasureSpins &s) {
                const int width = s.n_ions > 0 ? s.n_ions : std::max(1, static_cast<int>(std::bit_width(s.spins)));
                return "measure-spins " + bits_text(s.spins, width);
            },
        },
        step);
}

std::optional<double> ProtocolResult::diagnostic(std::string_view name) const {
    for (const auto &[key, value] : diagnostics) {
        if (key == name) {
            return value;
        }
    }
    return std::nullopt;
}

ProtocolResult run_protocol(std::span<const ProtocolStep> steps, const QuantumState &initial,
                            const std::optional<QuantumState> &target, const DynamicsConfig &cfg) {
    cfg.validate();
    ProtocolResult result{initial, 1.0, std::nullopt, false, {}, {}};
    QuantumState state = initial;
    PropagatorCache cache(cfg);

    auto measured = [&](StepRecord &rec, Measurement m) {
        rec.branch_probability = m.probability;
        result.success_probability *= m.probability;
        if (m.null) {
            result.failed = true;
            result.success_probability = 0.0;
        }
        state = std::move(m.state);
    };

    for (const auto &step : steps) {
        StepRecord rec{describe(step), std::nullopt, std::nullopt, 1.0};
        if (result.failed) {
            rec.description += " (skipped)";
            rec.branch_probability = 0.0;
            result.step_log.push_back(std::move(rec));
            continue;
        }
        std::visit(overloaded{
                       [&](const InjectPhonon &s) { state = inject_phonon(state, s.mode); },
                       [&](const Pulse &s) {
                           const Propagator &prop = cache.get(s.kind, s.mode, state.basis_ptr());
                           double duration;
                           if (s.duration) {
                               duration = *s.duration;
                               if (!(duration > 0)) {
                                   fail(ErrorKind::InvalidArgument, "pulse duration must be positive");
                               }
                           } else {
                               const TransferEstimate est = two_level_transfer_time(prop.hamiltonian(), state);
                               duration = est.time;
                               rec.leakage = est.leakage;
                           }
                           rec.duration = duration;
                           state = prop.evolve(state, duration);
                       },
                       [&](const LocalPhase &s) {
                           if (state.basis().is_ladder()) {
                               fail(ErrorKind::Domain, "local phases break the ladder symmetry; use a full basis");
                           }
                           state = apply_local_phase(state, s.phases);
                       },
                       [&](const MeasurePhonon &s) { measured(rec, project_phonon_number(state, s.mode, s.occupation)); },
                       [&](const MeasureSpins &s) { measured(rec, project_spin_config(state, s.spins)); },
                   },
                   step);
        result.step_log.push_back(std::move(rec));
    }
    result.final_state = state;
    if (target) {
        result.target_fidelity = result.failed ? 0.0 : fidelity(state, *target);
    }
    return result;
}

namespace {

QuantumState ladder_slot(const BasisPtr &basis, int excitations) {
    const auto &ladder = basis->ladder();
    for (size_t i = 0; i < ladder.size(); ++i) {
        if (ladder.slots()[i].excitations == excitations) {
            return basis_state(basis, i);
        }
    }
    fail(ErrorKind::Domain, "ladder has no rung with " + std::to_string(excitations) + " excitations");
}

bool use_ladder(const BuiltinOptions &options, int n_ions, int cutoff) {
    switch (options.representation) {
        case Representation::Full:
            return false;
        case Representation::Ladder:
            return true;
        case Representation::Auto:
            break;
    }
    if (n_ions > 24) {
        return true;
    }
    return (size_t{1} << n_ions) * static_cast<size_t>(cutoff + 1) > options.full_dimension_limit;
}

int resolve_cutoff(const BuiltinOptions &options, int needed, int fallback) {
    const int cutoff = options.cutoff.value_or(fallback);
    if (cutoff < needed) {
        fail(ErrorKind::Domain, "Fock cutoff " + std::to_string(cutoff) + " is below the " + std::to_string(needed) +
                                    " phonons this protocol reaches");
    }
    return cutoff;
}

void require_full_representation(const BuiltinOptions &options, const char *name) {
    if (options.representation == Representation::Ladder) {
        fail(ErrorKind::InvalidArgument, std::string(name) + " needs the full spin-phonon space");
    }
}

// Normalized spin part of a state whose phonons are all in the vacuum.
QuantumState vacuum_spin_part(const QuantumState &state) {
    const std::vector<int> zeros(state.basis().full().active_modes().size(), 0);
    return spin_component(state, zeros);
}

}  // namespace

ProtocolResult prepare_w1(int n_ions, const BuiltinOptions &options) {
    if (n_ions < 2) {
        fail(ErrorKind::InvalidArgument, "W state preparation needs at least two ions");
    }
    const std::vector<ProtocolStep> steps{InjectPhonon{0}, Pulse{Sideband::Red, 0, std::nullopt}};
    const int cutoff = resolve_cutoff(options, 1, 3);
    if (use_ladder(options, n_ions, cutoff)) {
        auto start = make_basis(SectorLadder(n_ions, 0, Sideband::Red));
        auto end = make_basis(SectorLadder(n_ions, 1, Sideband::Red));
        return run_protocol(steps, basis_state(start, 0), ladder_slot(end, 1), options.dynamics);
    }
    auto basis = make_basis(FullBasis(n_ions, {0}, {cutoff}));
    const std::vector<int> vac{0};
    return run_protocol(steps, product_state(basis, 0, vac), with_phonons(dicke_state(n_ions, 1), basis, vac),
                        options.dynamics);
}

std::vector<double> w2_phases(int n_ions) {
    std::vector<double> phases(static_cast<size_t>(n_ions));
    for (int n = 0; n < n_ions; ++n) {
        phases[static_cast<size_t>(n)] = 2.0 * std::numbers::pi * n / n_ions;
    }
    return phases;
}

std::vector<ProtocolStep> w2_steps(int n_ions) {
    return {InjectPhonon{0}, Pulse{Sideband::Red, 0, std::nullopt}, LocalPhase{w2_phases(n_ions)}, InjectPhonon{0},
            Pulse{Sideband::Red, 0, std::nullopt}};
}

ProtocolResult prepare_w2(int n_ions, const BuiltinOptions &options) {
    if (n_ions < 3) {
        fail(ErrorKind::InvalidArgument, "second Dicke state preparation needs at least three ions");
    }
    require_full_representation(options, "prepare_w2");
    const int cutoff = resolve_cutoff(options, 2, 4);
    auto basis = make_basis(FullBasis(n_ions, {0}, {cutoff}));
    const std::vector<int> vac{0};
    const std::vector<double> phi = w2_phases(n_ions);

    // The pulse maps sum_n e^{i phi_n}|n> onto L+ of itself: pair (a,b) carries e^{i phi_a} + e^{i phi_b}.
    auto spins = make_basis(FullBasis(n_ions));
    Eigen::VectorXcd climbed = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(spins->dimension()));
    Eigen::VectorXcd product_phase = climbed;
    for (int a = 0; a < n_ions; ++a) {
        for (int b = a + 1; b < n_ions; ++b) {
            const auto idx = static_cast<Eigen::Index>((SpinConfig{1} << a) | (SpinConfig{1} << b));
            climbed[idx] = std::polar(1.0, phi[static_cast<size_t>(a)]) + std::polar(1.0, phi[static_cast<size_t>(b)]);
            product_phase[idx] = std::polar(1.0, phi[static_cast<size_t>(a)] + phi[static_cast<size_t>(b)]);
        }
    }
    const QuantumState target = with_phonons(QuantumState(spins, climbed).normalized(), basis, vac);
    const QuantumState alt_target = with_phonons(QuantumState(spins, product_phase).normalized(), basis, vac);

    const auto steps = w2_steps(n_ions);
    ProtocolResult result = run_protocol(steps, product_state(basis, 0, vac), target, options.dynamics);

    // Stage-two check: the phased one-excitation state has no symmetric component.
    const auto stage = run_protocol(std::span(steps).first(3), product_state(basis, 0, vac), std::nullopt, options.dynamics);
    const ModeTable modes = normal_modes(n_ions);
    const QuantumState phased = vacuum_spin_part(stage.final_state);
    result.diagnostics.emplace_back("stage2_lowering_residual", l_minus(0, modes, spins).apply(phased).norm());
    result.diagnostics.emplace_back("product_phase_target_fidelity",
                                    result.failed ? 0.0 : fidelity(result.final_state, alt_target));
    return result;
}

ProtocolResult prepare_irradiant(int n_ions, int mode, const BuiltinOptions &options) {
    if (n_ions < 2) {
        fail(ErrorKind::InvalidArgument, "irradiant states need at least two ions");
    }
    if (mode < 1 || mode >= n_ions) {
        fail(ErrorKind::InvalidArgument,
             "irradiant preparation needs a non-COM mode 1.." + std::to_string(n_ions - 1) + ", got " + std::to_string(mode));
    }
    require_full_representation(options, "prepare_irradiant");
    const int cutoff = resolve_cutoff(options, 1, 3);
    auto basis = make_basis(FullBasis(n_ions, {mode}, {cutoff}));
    const std::vector<int> vac{0};
    const ModeTable modes = normal_modes(n_ions);
    auto spins = make_basis(FullBasis(n_ions));
    const QuantumState raised = l_plus(mode, modes, spins).apply(basis_state(spins, 0)).normalized();

    const std::vector<ProtocolStep> steps{InjectPhonon{mode}, Pulse{Sideband::Red, mode, std::nullopt}};
    ProtocolResult result =
        run_protocol(steps, product_state(basis, 0, vac), with_phonons(raised, basis, vac), options.dynamics);
    const QuantumState spin = vacuum_spin_part(result.final_state);
    const double weight = spin.norm();
    result.diagnostics.emplace_back("irradiance_residual",
                                    weight > 0 ? l_minus(0, modes, spins).apply(spin).norm() / weight : 0.0);
    return result;
}

QuantumState ghz4_target_spins() {
    auto spins = make_basis(FullBasis(4));
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(16);
    v[0b0101] = 1.0 / std::numbers::sqrt2;   // ions 0 and 2 up
    v[0b1010] = -1.0 / std::numbers::sqrt2;  // ions 1 and 3 up
    return QuantumState(spins, v);
}

ProtocolResult prepare_ghz4(const BuiltinOptions &options, bool com_first) {
    require_full_representation(options, "prepare_ghz4");
    const int cutoff = resolve_cutoff(options, 1, 3);
    auto basis = make_basis(FullBasis(4, {0, 3}, {cutoff, cutoff}));
    const std::vector<int> vac{0, 0};
    std::vector<ProtocolStep> steps{InjectPhonon{3}, Pulse{Sideband::Red, 3, std::nullopt}, InjectPhonon{0},
                                    Pulse{Sideband::Red, 0, std::nullopt}};
    if (com_first) {
        std::swap(steps[0], steps[2]);
        std::swap(steps[1], steps[3]);
    }
    ProtocolResult result =
        run_protocol(steps, product_state(basis, 0, vac), with_phonons(ghz4_target_spins(), basis, vac), options.dynamics);

    // Fidelity of the ideal product L+^0 L+^3 |dddd>, for comparison with the simulated one.
    const ModeTable modes = normal_modes(4);
    auto spins = make_basis(FullBasis(4));
    const QuantumState ideal =
        l_plus(0, modes, spins).apply(l_plus(3, modes, spins).apply(basis_state(spins, 0))).normalized();
    result.diagnostics.emplace_back("stage1_leakage", result.step_log[1].leakage.value_or(0.0));
    result.diagnostics.emplace_back("stage2_leakage", result.step_log[3].leakage.value_or(0.0));
    result.diagnostics.emplace_back("ideal_product_fidelity", fidelity(ideal, ghz4_target_spins()));
    return result;
}

ProtocolResult postselect_wk(int n_ions, int k, const BuiltinOptions &options) {
    if (k < 1 || k > n_ions) {
        fail(ErrorKind::InvalidArgument, "postselected Dicke excitation must be in 1.." + std::to_string(n_ions));
    }
    const auto &cfg = options.dynamics;
    auto ladder_basis = make_basis(SectorLadder(n_ions, k, Sideband::Red));
    const QuantumState start = basis_state(ladder_basis, 0);
    const QuantumState edge = ladder_slot(ladder_basis, std::min(k, n_ions));
    const Peak peak = peak_time(h_ladder(ladder_basis->ladder(), cfg), start, edge,
                                default_peak_window(n_ions, k, cfg.coupling_scale), 512, cfg);

    const std::vector<ProtocolStep> steps{Pulse{Sideband::Red, 0, peak.time}, MeasurePhonon{0, 0}};
    const int cutoff = resolve_cutoff(options, k, k + 2);
    ProtocolResult result = [&] {
        if (use_ladder(options, n_ions, cutoff)) {
            return run_protocol(steps, start, edge, cfg);
        }
        auto basis = make_basis(FullBasis(n_ions, {0}, {cutoff}));
        const std::vector<int> vac{0};
        const std::vector<int> loaded{k};
        return run_protocol(steps, product_state(basis, 0, loaded), with_phonons(dicke_state(n_ions, k), basis, vac), cfg);
    }();
    result.diagnostics.emplace_back("peak_time", peak.time);
    result.diagnostics.emplace_back("ladder_peak_population", peak.population);
    return result;
}

ProtocolResult fock_via_blue(int n_ions, const BuiltinOptions &options) {
    if (n_ions < 1) {
        fail(ErrorKind::InvalidArgument, "Fock preparation needs at least one ion");
    }
    const auto &cfg = options.dynamics;
    auto ladder_basis = make_basis(SectorLadder(n_ions, n_ions, Sideband::Blue));
    const QuantumState start = ladder_slot(ladder_basis, 0);
    const QuantumState edge = ladder_slot(ladder_basis, n_ions);
    const Peak peak = peak_time(h_ladder(ladder_basis->ladder(), cfg), start, edge,
                                default_peak_window(n_ions, n_ions, cfg.coupling_scale), 512, cfg);

    const SpinConfig all_up = (SpinConfig{1} << n_ions) - 1;
    const std::vector<ProtocolStep> steps{Pulse{Sideband::Blue, 0, peak.time}, MeasureSpins{all_up, n_ions}};
    const int cutoff = resolve_cutoff(options, n_ions, n_ions + 2);
    ProtocolResult result = [&] {
        if (use_ladder(options, n_ions, cutoff)) {
            return run_protocol(steps, start, edge, cfg);
        }
        auto basis = make_basis(FullBasis(n_ions, {0}, {cutoff}));
        const std::vector<int> vac{0};
        const std::vector<int> filled{n_ions};
        return run_protocol(steps, product_state(basis, 0, vac), product_state(basis, all_up, filled), cfg);
    }();
    result.diagnostics.emplace_back("peak_time", peak.time);
    result.diagnostics.emplace_back("ladder_peak_population", peak.population);
    return result;
}

bool is_builtin(std::string_view name) {
    return name == "w1" || name == "w2" || name == "irradiant" || name == "ghz4" || name == "wk-postselect" ||
           name == "fock-blue";
}

ProtocolResult run_builtin(std::string_view name, int n_ions, int k, int mode, const BuiltinOptions &options) {
    if (name == "w1") {
        return prepare_w1(n_ions, options);
    }
    if (name == "w2") {
        return prepare_w2(n_ions, options);
    }
    if (name == "irradiant") {
        return prepare_irradiant(n_ions, mode, options);
    }
    if (name == "ghz4") {
        if (n_ions != 4) {
            fail(ErrorKind::InvalidArgument, "ghz4 is defined for exactly four ions");
        }
        return prepare_ghz4(options);
    }
    if (name == "wk-postselect") {
        return postselect_wk(n_ions, k, options);
    }
    if (name == "fock-blue") {
        return fock_via_blue(n_ions, options);
    }
    fail(ErrorKind::InvalidArgument, "unknown builtin protocol '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Protocol files.

namespace {

[[noreturn]] void parse_error(int line, const std::string &message) {
    fail(ErrorKind::Parse, "line " + std::to_string(line) + ": " + message);
}

int parse_int(const std::string &token, int line) {
    int v = 0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
        parse_error(line, "expected an integer, got '" + token + "'");
    }
    return v;
}

double parse_real(const std::string &token, int line) {
    double v = 0.0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size() || !std::isfinite(v)) {
        parse_error(line, "expected a finite number, got '" + token + "'");
    }
    return v;
}

SpinConfig parse_bits(const std::string &token, int line) {
    if (token.empty() || token.size() > 30) {
        parse_error(line, "spin configuration must list 1..30 ions");
    }
    SpinConfig s = 0;
    for (size_t n = 0; n < token.size(); ++n) {
        const char c = token[n];
        if (c == '1' || c == 'u') {
            s |= SpinConfig{1} << n;
        } else if (c != '0' && c != 'd') {
            parse_error(line, "spin configuration characters must be 0/1 or d/u");
        }
    }
    return s;
}

void expect_args(const std::vector<std::string> &f, size_t n, int line, const char *usage) {
    if (f.size() != n + 1) {
        parse_error(line, std::string("usage: ") + usage);
    }
}

}  // namespace

ProtocolScript parse_protocol(std::string_view text) {
    ProtocolScript script;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    std::vector<size_t> spin_widths;  // ion counts implied by bit strings, checked later
    while (std::getline(in, raw)) {
        ++line;
        if (auto hash = raw.find('#'); hash != std::string::npos) {
            raw.erase(hash);
        }
        std::istringstream ss(raw);
        std::vector<std::string> f;
        for (std::string tok; ss >> tok;) {
            f.push_back(tok);
        }
        if (f.empty()) {
            continue;
        }
        const std::string &cmd = f[0];
        if (cmd == "ions") {
            expect_args(f, 1, line, "ions <N>");
            script.n_ions = parse_int(f[1], line);
            if (*script.n_ions < 1) {
                parse_error(line, "ion count must be positive");
            }
        } else if (cmd == "modes") {
            if (f.size() < 2) {
                parse_error(line, "usage: modes <m> [<m> ...]");
            }
            script.modes.clear();
            for (size_t i = 1; i < f.size(); ++i) {
                script.modes.push_back(parse_int(f[i], line));
            }
        } else if (cmd == "cutoff") {
            expect_args(f, 1, line, "cutoff <c>");
            script.cutoff = parse_int(f[1], line);
            if (*script.cutoff < 0) {
                parse_error(line, "cutoff must be nonnegative");
            }
        } else if (cmd == "target") {
            if (f.size() != 3 || (f[1] != "dicke" && f[1] != "spins")) {
                parse_error(line, "usage: target dicke <k> | target spins <bits>");
            }
            if (f[1] == "dicke") {
                script.target_dicke = parse_int(f[2], line);
                script.target_spins.reset();
            } else {
                script.target_spins = parse_bits(f[2], line);
                script.target_dicke.reset();
                spin_widths.push_back(f[2].size());
            }
        } else if (cmd == "inject") {
            expect_args(f, 1, line, "inject <mode>");
            script.steps.push_back(InjectPhonon{parse_int(f[1], line)});
            script.step_lines.push_back(line);
        } else if (cmd == "pulse") {
            expect_args(f, 3, line, "pulse <red|blue> <mode> <auto|duration>");
            if (f[1] != "red" && f[1] != "blue") {
                parse_error(line, "pulse sideband must be 'red' or 'blue'");
            }
            Pulse p{f[1] == "red" ? Sideband::Red : Sideband::Blue, parse_int(f[2], line), std::nullopt};
            if (f[3] != "auto") {
                p.duration = parse_real(f[3], line);
                if (!(*p.duration > 0)) {
                    parse_error(line, "pulse duration must be positive");
                }
            }
            script.steps.push_back(p);
            script.step_lines.push_back(line);
        } else if (cmd == "phase") {
            std::string joined;
            for (size_t i = 1; i < f.size(); ++i) {
                joined += f[i];
            }
            LocalPhase lp;
            std::istringstream ps(joined);
            for (std::string tok; std::getline(ps, tok, ',');) {
                lp.phases.push_back(parse_real(tok, line));
            }
            if (lp.phases.empty()) {
                parse_error(line, "usage: phase <phi_0>,<phi_1>,...");
            }
            script.steps.push_back(std::move(lp));
            script.step_lines.push_back(line);
        } else if (cmd == "measure-phonon") {
            expect_args(f, 2, line, "measure-phonon <mode> <n>");
            script.steps.push_back(MeasurePhonon{parse_int(f[1], line), parse_int(f[2], line)});
            script.step_lines.push_back(line);
        } else if (cmd == "measure-spins") {
            expect_args(f, 1, line, "measure-spins <bits>");
            script.steps.push_back(MeasureSpins{parse_bits(f[1], line), static_cast<int>(f[1].size())});
            script.step_lines.push_back(line);
            spin_widths.push_back(f[1].size());
        } else {
            parse_error(line, "unknown directive '" + cmd + "'");
        }
    }
    if (script.n_ions) {
        for (size_t w : spin_widths) {
            if (static_cast<int>(w) != *script.n_ions) {
                fail(ErrorKind::Parse, "spin configuration length does not match 'ions " + std::to_string(*script.n_ions) + "'");
            }
        }
    }
    return script;
}

ProtocolScript parse_protocol_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::Io, "cannot open protocol file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_protocol(ss.str());
}

ProtocolResult run_script(const ProtocolScript &script, std::optional<int> default_ions, const DynamicsConfig &cfg) {
    const int n_ions = script.n_ions.value_or(default_ions.value_or(0));
    if (n_ions < 1) {
        fail(ErrorKind::InvalidArgument, "protocol needs an ion count (an 'ions' line or -n)");
    }

    std::set<int> referenced;
    std::vector<int> injects(static_cast<size_t>(n_ions), 0);
    std::vector<bool> blue(static_cast<size_t>(n_ions), false);
    auto check_mode = [&](int mode, int line) {
        if (mode < 0 || mode >= n_ions) {
            parse_error(line, "mode " + std::to_string(mode) + " out of range for " + std::to_string(n_ions) + " ions");
        }
        referenced.insert(mode);
    };
    for (size_t i = 0; i < script.steps.size(); ++i) {
        const int line = script.step_lines[i];
        std::visit(overloaded{
                       [&](const InjectPhonon &s) {
                           check_mode(s.mode, line);
                           ++injects[static_cast<size_t>(s.mode)];
                       },
                       [&](const Pulse &s) {
                           check_mode(s.mode, line);
                           if (s.kind == Sideband::Blue) {
                               blue[static_cast<size_t>(s.mode)] = true;
                           }
                       },
                       [&](const LocalPhase &s) {
                           if (static_cast<int>(s.phases.size()) != n_ions) {
                               parse_error(line, "phase needs " + std::to_string(n_ions) + " values");
                           }
                       },
                       [&](const MeasurePhonon &s) { check_mode(s.mode, line); },
                       [&](const MeasureSpins &s) {
                           if (s.spins >> n_ions) {
                               parse_error(line, "spin configuration longer than the chain");
                           }
                       },
                   },
                   script.steps[i]);
    }

    std::vector<int> modes = script.modes;
    for (int m : modes) {
        if (m < 0 || m >= n_ions) {
            fail(ErrorKind::Parse, "mode " + std::to_string(m) + " out of range for " + std::to_string(n_ions) + " ions");
        }
    }
    if (modes.empty()) {
        modes.assign(referenced.begin(), referenced.end());
    }
    if (modes.empty()) {
        modes.push_back(0);
    }
    std::vector<int> cutoffs;
    for (int m : modes) {
        const auto mi = static_cast<size_t>(m);
        cutoffs.push_back(script.cutoff.value_or(injects[mi] + (blue[mi] ? n_ions : 0) + 2));
    }
    auto basis = make_basis(FullBasis(n_ions, modes, cutoffs));
    const std::vector<int> vac(modes.size(), 0);

    std::optional<QuantumState> target;
    if (script.target_dicke) {
        target = with_phonons(dicke_state(n_ions, *script.target_dicke), basis, vac);
    } else if (script.target_spins) {
        if (*script.target_spins >> n_ions) {
            fail(ErrorKind::Parse, "target spin configuration longer than the chain");
        }
        target = product_state(basis, *script.target_spins, vac);
    }
    return run_protocol(script.steps, product_state(basis, 0, vac), target, cfg);
}

}  // namespace tcsim
