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

#ifndef TCSIM_STATESPACE_HPP
#define TCSIM_STATESPACE_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace tcsim {

using Complex = std::complex<double>;
using SpinConfig = std::uint64_t;  // bit n set <=> ion n excited; ion 0 is the least significant bit

enum class Sideband { Red, Blue };

const char *sideband_name(Sideband sideband);

/// Product space of N spins and a set of truncated phonon modes.
///
/// Index layout: index = spins * phonon_dimension + phonon_index, where the
/// phonon index is mixed radix over the active modes in the order given, the
/// last active mode varying fastest.
class FullBasis {
   public:
    explicit FullBasis(int n_ions, std::vector<int> active_modes = {}, std::vector<int> cutoffs = {});

    int n_ions() const {
        return n_ions_;
    }
    const std::vector<int> &active_modes() const {
        return active_modes_;
    }
    const std::vector<int> &cutoffs() const {
        return cutoffs_;
    }
    size_t spin_dimension() const {
        return size_t{1} << n_ions_;
    }
    size_t phonon_dimension() const {
        return phonon_dimension_;
    }
    size_t dimension() const {
        return spin_dimension() * phonon_dimension_;
    }

    bool has_mode(int mode) const;
    /// Position of `mode` among the active modes; throws a domain error if inactive.
    size_t mode_slot(int mode) const;
    int cutoff_of(int mode) const {
        return cutoffs_[mode_slot(mode)];
    }
    size_t stride(size_t slot) const {
        return strides_[slot];
    }

    size_t index(SpinConfig spins, std::span<const int> occupations) const;
    SpinConfig spins_of(size_t index) const {
        return static_cast<SpinConfig>(index / phonon_dimension_);
    }
    size_t phonon_index_of(size_t index) const {
        return index % phonon_dimension_;
    }
    int occupation(size_t index, size_t slot) const {
        return static_cast<int>((index % phonon_dimension_) / strides_[slot] % static_cast<size_t>(cutoffs_[slot] + 1));
    }

    bool operator==(const FullBasis &other) const {
        return n_ions_ == other.n_ions_ && active_modes_ == other.active_modes_ && cutoffs_ == other.cutoffs_;
    }

   private:
    int n_ions_;
    std::vector<int> active_modes_;
    std::vector<int> cutoffs_;
    std::vector<size_t> strides_;
    size_t phonon_dimension_ = 1;
};

/// One rung of a sector ladder: the symmetric Dicke state with `excitations`
/// spins up, times `phonons` quanta in the centre-of-mass mode.
struct LadderSlot {
    int excitations;
    int phonons;
    bool operator==(const LadderSlot &) const = default;
};

/// The symmetric (l = N/2) part of one invariant subspace of the COM sideband
/// Hamiltonian. For Red the conserved charge is r = n + k; for Blue it is
/// b = n - k + N. Slots are ordered by increasing spin excitation k.
class SectorLadder {
   public:
    SectorLadder(int n_ions, int charge, Sideband kind = Sideband::Red);

    int n_ions() const {
        return n_ions_;
    }
    int charge() const {
        return charge_;
    }
    Sideband kind() const {
        return kind_;
    }
    const std::vector<LadderSlot> &slots() const {
        return slots_;
    }
    size_t size() const {
        return slots_.size();
    }
    /// L_z eigenvalue of slot i.
    double m(size_t i) const {
        return slots_[i].excitations - 0.5 * n_ions_;
    }
    int max_phonons() const;

    bool operator==(const SectorLadder &other) const {
        return n_ions_ == other.n_ions_ && charge_ == other.charge_ && kind_ == other.kind_;
    }

   private:
    int n_ions_;
    int charge_;
    Sideband kind_;
    std::vector<LadderSlot> slots_;
};

/// Red-sideband ladder at excitation number r.
SectorLadder sector_ladder(int n_ions, int r);

class Basis {
   public:
    Basis(FullBasis full) : value_(std::move(full)) {
    }
    Basis(SectorLadder ladder) : value_(std::move(ladder)) {
    }

    bool is_ladder() const {
        return std::holds_alternative<SectorLadder>(value_);
    }
    const FullBasis &full() const;
    const SectorLadder &ladder() const;
    size_t dimension() const;
    int n_ions() const;
    std::string describe() const;

    bool operator==(const Basis &other) const {
        return value_ == other.value_;
    }

   private:
    std::variant<FullBasis, SectorLadder> value_;
};

using BasisPtr = std::shared_ptr<const Basis>;

BasisPtr make_basis(FullBasis full);
BasisPtr make_basis(SectorLadder ladder);
bool same_basis(const BasisPtr &a, const BasisPtr &b);

/// Complex amplitude vector bound to a basis. Normalization is the caller's
/// responsibility; measurement results expose their pre-normalization weight.
class QuantumState {
   public:
    QuantumState(BasisPtr basis, Eigen::VectorXcd amplitudes);

    const Basis &basis() const {
        return *basis_;
    }
    const BasisPtr &basis_ptr() const {
        return basis_;
    }
    const Eigen::VectorXcd &amplitudes() const {
        return amplitudes_;
    }
    Eigen::VectorXcd &amplitudes() {
        return amplitudes_;
    }
    size_t dimension() const {
        return static_cast<size_t>(amplitudes_.size());
    }
    double norm() const {
        return amplitudes_.norm();
    }
    QuantumState normalized() const;

   private:
    BasisPtr basis_;
    Eigen::VectorXcd amplitudes_;
};

QuantumState basis_state(const BasisPtr &basis, size_t index);
QuantumState product_state(const FullBasis &basis, SpinConfig spins, std::span<const int> occupations);
QuantumState product_state(const BasisPtr &basis, SpinConfig spins, std::span<const int> occupations);

/// Symmetric Dicke state with k of n_ions spins excited, on a spin-only basis.
QuantumState dicke_state(int n_ions, int k);

/// Tensor a spin-only state with the Fock state |occupations> of `basis`.
QuantumState with_phonons(const QuantumState &spin_state, const BasisPtr &basis, std::span<const int> occupations);

/// Spin-only vector of the component with the given phonon occupations (not renormalized).
QuantumState spin_component(const QuantumState &state, std::span<const int> occupations);

QuantumState embed_ladder_state(const SectorLadder &ladder, const Eigen::VectorXcd &amplitudes, const BasisPtr &target);
Eigen::VectorXcd extract_ladder_amplitudes(const QuantumState &state, const SectorLadder &ladder);

struct DensityMatrix {
    Eigen::MatrixXcd entries;

    Eigen::Index dimension() const {
        return entries.rows();
    }
};

/// Hermiticity, unit trace, and positivity within the given tolerances.
bool is_physical(const DensityMatrix &rho, double tolerance = 1e-12, double eigen_floor = -1e-10);

DensityMatrix pure_density_matrix(const QuantumState &state);
/// Reduced state of the spins (phonons traced out), over the 2^N spin configurations.
DensityMatrix partial_trace_spins(const QuantumState &state);
/// Reduced state of the phonon modes (spins traced out).
DensityMatrix partial_trace_phonons(const QuantumState &state);

struct Measurement {
    double probability = 0.0;
    QuantumState state;  // renormalized conditional state; all zeros when null
    bool null = false;
};

Measurement project_phonon_number(const QuantumState &state, int mode, int occupation);
Measurement project_spin_config(const QuantumState &state, SpinConfig spins);

void write_state(std::ostream &out, const QuantumState &state);
QuantumState read_state(std::istream &in);
void save_state(const std::string &path, const QuantumState &state);
QuantumState load_state(const std::string &path);

/// Shortest round-trip decimal text of a double, independent of locale.
std::string format_double(double value);
/// Fixed 17-significant-digit text, independent of locale.
std::string format_double17(double value);

}  // namespace tcsim

#endif
