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

#ifndef TCSIM_PROTOCOLS_HPP
#define TCSIM_PROTOCOLS_HPP

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "tcsim/dynamics.hpp"

namespace tcsim {

/// Ideal a^dagger on one mode followed by renormalization.
struct InjectPhonon {
    int mode = 0;
};

/// Sideband pulse. Without an explicit duration the pulse is sized for a full
/// two-level transfer from the state it acts on.
struct Pulse {
    Sideband kind = Sideband::Red;
    int mode = 0;
    std::optional<double> duration;
};

/// Multiplies each excited ion n by exp(i phases[n]).
struct LocalPhase {
    std::vector<double> phases;
};

/// Projective phonon-number measurement, keeping `occupation`.
struct MeasurePhonon {
    int mode = 0;
    int occupation = 0;
};

/// Projective spin measurement, keeping one configuration.
struct MeasureSpins {
    SpinConfig spins = 0;
    int n_ions = 0;  // for display only; 0 prints up to the highest excited ion
};

using ProtocolStep = std::variant<InjectPhonon, Pulse, LocalPhase, MeasurePhonon, MeasureSpins>;

std::string describe(const ProtocolStep &step);

struct StepRecord {
    std::string description;
    std::optional<double> duration;
    std::optional<double> leakage;
    double branch_probability = 1.0;
};

struct ProtocolResult {
    QuantumState final_state;
    double success_probability = 1.0;
    std::optional<double> target_fidelity;
    bool failed = false;
    std::vector<StepRecord> step_log;
    /// Named protocol-specific checks (residuals, alternative fidelities).
    std::vector<std::pair<std::string, double>> diagnostics;

    std::optional<double> diagnostic(std::string_view name) const;
};

/// Applies `steps` in order. A zero-probability measurement marks the result
/// failed with probability 0 and leaves the remaining steps unexecuted (they
/// are still logged). Ladder states support pulses on mode 0 of the matching
/// sideband, phonon injection (which moves to the next ladder), and
/// measurements.
ProtocolResult run_protocol(std::span<const ProtocolStep> steps, const QuantumState &initial,
                            const std::optional<QuantumState> &target, const DynamicsConfig &cfg = {});

enum class Representation { Auto, Full, Ladder };

struct BuiltinOptions {
    DynamicsConfig dynamics;
    Representation representation = Representation::Auto;
    /// Fock cutoff for full-space runs; defaults to the protocol's excitation count + 2.
    std::optional<int> cutoff;
    /// Auto picks the full space up to this dimension.
    size_t full_dimension_limit = 16384;
};

ProtocolResult prepare_w1(int n_ions, const BuiltinOptions &options = {});

/// Phases 2 pi n / N used to rotate W_1 out of the symmetric multiplet.
std::vector<double> w2_phases(int n_ions);
std::vector<ProtocolStep> w2_steps(int n_ions);
ProtocolResult prepare_w2(int n_ions, const BuiltinOptions &options = {});

ProtocolResult prepare_irradiant(int n_ions, int mode, const BuiltinOptions &options = {});

/// Four ions: red pulse on mode 3 with one phonon there, then a phonon into
/// the COM mode and a COM red pulse. `com_first` swaps the two stages.
ProtocolResult prepare_ghz4(const BuiltinOptions &options = {}, bool com_first = false);
/// (|udud> - |dudu>)/sqrt(2) on a spin-only basis of four ions.
QuantumState ghz4_target_spins();

ProtocolResult postselect_wk(int n_ions, int k, const BuiltinOptions &options = {});
ProtocolResult fock_via_blue(int n_ions, const BuiltinOptions &options = {});

/// Parsed protocol file. Grammar, one directive per line, '#' starts a comment:
///   ions <N>
///   modes <m> [<m> ...]
///   cutoff <c>
///   target dicke <k> | target spins <bits>
///   inject <mode>
///   pulse <red|blue> <mode> <auto|duration>
///   phase <phi_0>,<phi_1>,...
///   measure-phonon <mode> <n>
///   measure-spins <bits>
/// Bit strings list ion 0 first, using 0/1 or d/u.
struct ProtocolScript {
    std::optional<int> n_ions;
    std::vector<int> modes;
    std::optional<int> cutoff;
    std::optional<int> target_dicke;
    std::optional<SpinConfig> target_spins;
    std::vector<ProtocolStep> steps;
    std::vector<int> step_lines;
};

ProtocolScript parse_protocol(std::string_view text);
ProtocolScript parse_protocol_file(const std::string &path);

/// Runs a script from |d...d>|0...0>. `default_ions` applies when the script has no `ions` line.
ProtocolResult run_script(const ProtocolScript &script, std::optional<int> default_ions,
                          const DynamicsConfig &cfg = {});

/// Names accepted by run_builtin: w1, w2, irradiant, ghz4, wk-postselect, fock-blue.
ProtocolResult run_builtin(std::string_view name, int n_ions, int k, int mode, const BuiltinOptions &options = {});
bool is_builtin(std::string_view name);

}  // namespace tcsim

#endif
