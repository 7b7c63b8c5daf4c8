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

#include "tcsim/statespace.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "tcsim/error.hpp"

namespace tcsim {

namespace {

double binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0.0;
    }
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

void require_full(const QuantumState &state, const char *what) {
    if (state.basis().is_ladder()) {
        fail(ErrorKind::Domain, std::string(what) + " requires a full spin-phonon basis");
    }
}

}  // namespace

const char *sideband_name(Sideband sideband) {
    return sideband == Sideband::Red ? "red" : "blue";
}

FullBasis::FullBasis(int n_ions, std::vector<int> active_modes, std::vector<int> cutoffs)
    : n_ions_(n_ions), active_modes_(std::move(active_modes)), cutoffs_(std::move(cutoffs)) {
    if (n_ions < 1 || n_ions > 30) {
        fail(ErrorKind::InvalidArgument, "full basis supports 1..30 ions, got " + std::to_string(n_ions));
    }
    if (active_modes_.size() != cutoffs_.size()) {
        fail(ErrorKind::InvalidArgument, "one cutoff is required per active mode");
    }
    for (size_t i = 0; i < active_modes_.size(); ++i) {
        if (active_modes_[i] < 0 || active_modes_[i] >= n_ions) {
            fail(ErrorKind::InvalidArgument, "mode index " + std::to_string(active_modes_[i]) + " out of range");
        }
        if (cutoffs_[i] < 0) {
            fail(ErrorKind::InvalidArgument, "Fock cutoff must be nonnegative");
        }
        if (std::count(active_modes_.begin(), active_modes_.end(), active_modes_[i]) != 1) {
            fail(ErrorKind::InvalidArgument, "mode " + std::to_string(active_modes_[i]) + " listed twice");
        }
    }
    strides_.assign(active_modes_.size(), 1);
    for (size_t i = active_modes_.size(); i-- > 0;) {
        strides_[i] = phonon_dimension_;
        phonon_dimension_ *= static_cast<size_t>(cutoffs_[i] + 1);
    }
}

bool FullBasis::has_mode(int mode) const {
    return std::find(active_modes_.begin(), active_modes_.end(), mode) != active_modes_.end();
}

size_t FullBasis::mode_slot(int mode) const {
    auto it = std::find(active_modes_.begin(), active_modes_.end(), mode);
    if (it == active_modes_.end()) {
        fail(ErrorKind::Domain, "mode " + std::to_string(mode) + " is not active in the basis");
    }
    return static_cast<size_t>(it - active_modes_.begin());
}

size_t FullBasis::index(SpinConfig spins, std::span<const int> occupations) const {
    if (occupations.size() != active_modes_.size()) {
        fail(ErrorKind::InvalidArgument, "occupation tuple length does not match the active modes");
    }
    if (spins >= spin_dimension()) {
        fail(ErrorKind::InvalidArgument, "spin configuration out of range");
    }
    size_t p = 0;
    for (size_t i = 0; i < occupations.size(); ++i) {
        if (occupations[i] < 0 || occupations[i] > cutoffs_[i]) {
            fail(ErrorKind::Domain, "occupation " + std::to_string(occupations[i]) + " exceeds the cutoff of mode " +
                                        std::to_string(active_modes_[i]));
        }
        p += static_cast<size_t>(occupations[i]) * strides_[i];
    }
    return static_cast<size_t>(spins) * phonon_dimension_ + p;
}

SectorLadder::SectorLadder(int n_ions, int charge, Sideband kind) : n_ions_(n_ions), charge_(charge), kind_(kind) {
    if (n_ions < 1) {
        fail(ErrorKind::InvalidArgument, "ladder needs at least one ion");
    }
    if (charge < 0) {
        fail(ErrorKind::InvalidArgument, "ladder charge must be nonnegative");
    }
    if (kind == Sideband::Red) {
        for (int k = 0; k <= std::min(charge, n_ions); ++k) {
            slots_.push_back({k, charge - k});
        }
    } else {
        for (int k = std::max(0, n_ions - charge); k <= n_ions; ++k) {
            slots_.push_back({k, k + charge - n_ions});
        }
    }
}

int SectorLadder::max_phonons() const {
    int n = 0;
    for (const auto &s : slots_) {
        n = std::max(n, s.phonons);
    }
    return n;
}

SectorLadder sector_ladder(int n_ions, int r) {
    return SectorLadder(n_ions, r, Sideband::Red);
}

const FullBasis &Basis::full() const {
    if (const auto *f = std::get_if<FullBasis>(&value_)) {
        return *f;
    }
    fail(ErrorKind::Domain, "operation requires a full spin-phonon basis");
}

const SectorLadder &Basis::ladder() const {
    if (const auto *l = std::get_if<SectorLadder>(&value_)) {
        return *l;
    }
    fail(ErrorKind::Domain, "operation requires a sector ladder basis");
}

size_t Basis::dimension() const {
    return is_ladder() ? ladder().size() : full().dimension();
}

int Basis::n_ions() const {
    return is_ladder() ? ladder().n_ions() : full().n_ions();
}

std::string Basis::describe() const {
    std::ostringstream out;
    if (is_ladder()) {
        const auto &l = ladder();
        out << sideband_name(l.kind()) << " ladder N=" << l.n_ions() << " charge=" << l.charge();
    } else {
        const auto &f = full();
        out << "full N=" << f.n_ions() << " modes={";
        for (size_t i = 0; i < f.active_modes().size(); ++i) {
            out << (i ? "," : "") << f.active_modes()[i] << ":" << f.cutoffs()[i];
        }
        out << "}";
    }
    return out.str();
}

BasisPtr make_basis(FullBasis full) {
    return std::make_shared<const Basis>(std::move(full));
}

BasisPtr make_basis(SectorLadder ladder) {
    return std::make_shared<const Basis>(std::move(ladder));
}

bool same_basis(const BasisPtr &a, const BasisPtr &b) {
    return a == b || (a && b && *a == *b);
}

QuantumState::QuantumState(BasisPtr basis, Eigen::VectorXcd amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
    if (!basis_) {
        fail(ErrorKind::InvalidArgument, "state requires a basis");
    }
    if (static_cast<size_t>(amplitudes_.size()) != basis_->dimension()) {
        fail(ErrorKind::InvalidArgument, "amplitude vector does not match the basis dimension");
    }
}

QuantumState QuantumState::normalized() const {
    const double n = norm();
    if (n == 0.0) {
        fail(ErrorKind::Domain, "cannot normalize the zero vector");
    }
    return QuantumState(basis_, amplitudes_ / n);
}

QuantumState basis_state(const BasisPtr &basis, size_t index) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->dimension()));
    if (index >= basis->dimension()) {
        fail(ErrorKind::InvalidArgument, "basis index out of range");
    }
    v[static_cast<Eigen::Index>(index)] = 1.0;
    return QuantumState(basis, std::move(v));
}

QuantumState product_state(const BasisPtr &basis, SpinConfig spins, std::span<const int> occupations) {
    return basis_state(basis, basis->full().index(spins, occupations));
}

QuantumState product_state(const FullBasis &basis, SpinConfig spins, std::span<const int> occupations) {
    return product_state(make_basis(basis), spins, occupations);
}

QuantumState dicke_state(int n_ions, int k) {
    if (k < 0 || k > n_ions) {
        fail(ErrorKind::InvalidArgument,
             "Dicke excitation " + std::to_string(k) + " outside 0.." + std::to_string(n_ions));
    }
    auto basis = make_basis(FullBasis(n_ions));
    const double amp = 1.0 / std::sqrt(binomial(n_ions, k));
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->dimension()));
    for (SpinConfig s = 0; s < basis->dimension(); ++s) {
        if (std::popcount(s) == k) {
            v[static_cast<Eigen::Index>(s)] = amp;
        }
    }
    return QuantumState(basis, std::move(v));
}

QuantumState with_phonons(const QuantumState &spin_state, const BasisPtr &basis, std::span<const int> occupations) {
    require_full(spin_state, "with_phonons");
    const auto &fb = basis->full();
    if (spin_state.basis().full().n_ions() != fb.n_ions() || !spin_state.basis().full().active_modes().empty()) {
        fail(ErrorKind::InvalidArgument, "with_phonons expects a spin-only state with matching ion count");
    }
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(fb.dimension()));
    const size_t offset = fb.index(0, occupations);
    for (size_t s = 0; s < fb.spin_dimension(); ++s) {
        v[static_cast<Eigen::Index>(s * fb.phonon_dimension() + offset)] = spin_state.amplitudes()[static_cast<Eigen::Index>(s)];
    }
    return QuantumState(basis, std::move(v));
}

QuantumState spin_component(const QuantumState &state, std::span<const int> occupations) {
    require_full(state, "spin_component");
    const auto &fb = state.basis().full();
    const size_t offset = fb.index(0, occupations);
    Eigen::VectorXcd v(static_cast<Eigen::Index>(fb.spin_dimension()));
    for (size_t s = 0; s < fb.spin_dimension(); ++s) {
        v[static_cast<Eigen::Index>(s)] = state.amplitudes()[static_cast<Eigen::Index>(s * fb.phonon_dimension() + offset)];
    }
    return QuantumState(make_basis(FullBasis(fb.n_ions())), std::move(v));
}

namespace {

// Visits the nonzero entries of every embedded ladder slot: f(slot, full_index, amplitude).
template <typename F>
void for_each_embedded_entry(const SectorLadder &ladder, const FullBasis &fb, F &&f) {
    if (fb.n_ions() != ladder.n_ions()) {
        fail(ErrorKind::InvalidArgument, "ladder and basis ion counts differ");
    }
    const size_t com = fb.mode_slot(0);
    if (fb.cutoffs()[com] < ladder.max_phonons()) {
        fail(ErrorKind::Domain, "COM cutoff " + std::to_string(fb.cutoffs()[com]) + " is below the ladder's " +
                                    std::to_string(ladder.max_phonons()) + " phonons");
    }
    std::vector<int> occ(fb.active_modes().size(), 0);
    for (size_t i = 0; i < ladder.size(); ++i) {
        const auto &slot = ladder.slots()[i];
        occ[com] = slot.phonons;
        const size_t offset = fb.index(0, occ);
        const double amp = 1.0 / std::sqrt(binomial(fb.n_ions(), slot.excitations));
        for (SpinConfig s = 0; s < fb.spin_dimension(); ++s) {
            if (std::popcount(s) == slot.excitations) {
                f(i, s * fb.phonon_dimension() + offset, amp);
            }
        }
    }
}

}  // namespace

QuantumState embed_ladder_state(const SectorLadder &ladder, const Eigen::VectorXcd &amplitudes, const BasisPtr &target) {
    if (static_cast<size_t>(amplitudes.size()) != ladder.size()) {
        fail(ErrorKind::InvalidArgument, "ladder amplitude count mismatch");
    }
    const auto &fb = target->full();
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(fb.dimension()));
    for_each_embedded_entry(ladder, fb, [&](size_t slot, size_t index, double amp) {
        v[static_cast<Eigen::Index>(index)] += amp * amplitudes[static_cast<Eigen::Index>(slot)];
    });
    return QuantumState(target, std::move(v));
}

Eigen::VectorXcd extract_ladder_amplitudes(const QuantumState &state, const SectorLadder &ladder) {
    if (state.basis().is_ladder()) {
        if (!(state.basis().ladder() == ladder)) {
            fail(ErrorKind::InvalidArgument, "state lives on a different ladder");
        }
        return state.amplitudes();
    }
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(ladder.size()));
    for_each_embedded_entry(ladder, state.basis().full(), [&](size_t slot, size_t index, double amp) {
        out[static_cast<Eigen::Index>(slot)] += amp * state.amplitudes()[static_cast<Eigen::Index>(index)];
    });
    return out;
}

bool is_physical(const DensityMatrix &rho, double tolerance, double eigen_floor) {
    const auto &m = rho.entries;
    if (m.rows() != m.cols() || m.rows() == 0) {
        return false;
    }
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tolerance) {
        return false;
    }
    if (std::abs(m.trace() - Complex(1.0)) > tolerance) {
        return false;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= eigen_floor;
}

DensityMatrix pure_density_matrix(const QuantumState &state) {
    return {state.amplitudes() * state.amplitudes().adjoint()};
}

namespace {

// Amplitudes viewed as a (spin x phonon) matrix.
Eigen::MatrixXcd spin_phonon_matrix(const QuantumState &state) {
    const auto &fb = state.basis().full();
    const auto rows = static_cast<Eigen::Index>(fb.spin_dimension());
    const auto cols = static_cast<Eigen::Index>(fb.phonon_dimension());
    return Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        state.amplitudes().data(), rows, cols);
}

}  // namespace

DensityMatrix partial_trace_spins(const QuantumState &state) {
    require_full(state, "partial trace");
    const Eigen::MatrixXcd m = spin_phonon_matrix(state);
    return {m * m.adjoint()};
}

DensityMatrix partial_trace_phonons(const QuantumState &state) {
    require_full(state, "partial trace");
    const Eigen::MatrixXcd m = spin_phonon_matrix(state);
    return {m.transpose() * m.conjugate()};
}

namespace {

Measurement finish_projection(const QuantumState &state, Eigen::VectorXcd projected) {
    const double weight = projected.squaredNorm();
    Measurement out{std::min(weight, 1.0), QuantumState(state.basis_ptr(), projected), false};
    if (weight == 0.0) {
        out.null = true;
    } else {
        out.state.amplitudes() /= std::sqrt(weight);
    }
    return out;
}

}  // namespace

Measurement project_phonon_number(const QuantumState &state, int mode, int occupation) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(state.amplitudes().size());
    if (state.basis().is_ladder()) {
        if (mode != 0) {
            fail(ErrorKind::Domain, "ladder states only carry the COM mode");
        }
        const auto &ladder = state.basis().ladder();
        for (size_t i = 0; i < ladder.size(); ++i) {
            if (ladder.slots()[i].phonons == occupation) {
                v[static_cast<Eigen::Index>(i)] = state.amplitudes()[static_cast<Eigen::Index>(i)];
            }
        }
        return finish_projection(state, std::move(v));
    }
    const auto &fb = state.basis().full();
    const size_t slot = fb.mode_slot(mode);
    if (occupation < 0 || occupation > fb.cutoffs()[slot]) {
        fail(ErrorKind::Domain, "occupation " + std::to_string(occupation) + " outside the mode's Fock cutoff");
    }
    for (size_t i = 0; i < fb.dimension(); ++i) {
        if (fb.occupation(i, slot) == occupation) {
            v[static_cast<Eigen::Index>(i)] = state.amplitudes()[static_cast<Eigen::Index>(i)];
        }
    }
    return finish_projection(state, std::move(v));
}

Measurement project_spin_config(const QuantumState &state, SpinConfig spins) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(state.amplitudes().size());
    if (state.basis().is_ladder()) {
        const auto &ladder = state.basis().ladder();
        const int k = std::popcount(spins);
        if (spins >= (SpinConfig{1} << ladder.n_ions())) {
            fail(ErrorKind::InvalidArgument, "spin configuration out of range");
        }
        if (k != 0 && k != ladder.n_ions()) {
            fail(ErrorKind::Domain, "ladder states can only be projected onto all-down or all-up spins");
        }
        for (size_t i = 0; i < ladder.size(); ++i) {
            if (ladder.slots()[i].excitations == k) {
                v[static_cast<Eigen::Index>(i)] = state.amplitudes()[static_cast<Eigen::Index>(i)];
            }
        }
        return finish_projection(state, std::move(v));
    }
    const auto &fb = state.basis().full();
    if (spins >= fb.spin_dimension()) {
        fail(ErrorKind::InvalidArgument, "spin configuration out of range");
    }
    const auto p = static_cast<Eigen::Index>(fb.phonon_dimension());
    v.segment(static_cast<Eigen::Index>(spins) * p, p) = state.amplitudes().segment(static_cast<Eigen::Index>(spins) * p, p);
    return finish_projection(state, std::move(v));
}

std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string format_double17(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

// Text format:
//   tcsim-state 1
//   ions <N>
//   modes <m...>        | ladder <red|blue> <charge>
//   cutoffs <c...>
//   entries <count>
//   <index> <real> <imag>     (one line per nonzero amplitude)
void write_state(std::ostream &out, const QuantumState &state) {
    const auto &basis = state.basis();
    out << "tcsim-state 1\n";
    out << "ions " << basis.n_ions() << "\n";
    if (basis.is_ladder()) {
        out << "ladder " << sideband_name(basis.ladder().kind()) << " " << basis.ladder().charge() << "\n";
    } else {
        out << "modes";
        for (int m : basis.full().active_modes()) {
            out << " " << m;
        }
        out << "\ncutoffs";
        for (int c : basis.full().cutoffs()) {
            out << " " << c;
        }
        out << "\n";
    }
    const auto &a = state.amplitudes();
    out << "entries " << (a.array() != Complex(0.0)).count() << "\n";
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a[i] != Complex(0.0)) {
            out << i << " " << format_double(a[i].real()) << " " << format_double(a[i].imag()) << "\n";
        }
    }
}

namespace {

double parse_double(const std::string &token, int line) {
    double v = 0.0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
        fail(ErrorKind::Parse, "state file line " + std::to_string(line) + ": bad number '" + token + "'");
    }
    return v;
}

long long parse_int(const std::string &token, int line) {
    long long v = 0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
        fail(ErrorKind::Parse, "state file line " + std::to_string(line) + ": bad integer '" + token + "'");
    }
    return v;
}

std::vector<std::string> read_fields(std::istream &in, int &line, const char *keyword) {
    std::string text;
    if (!std::getline(in, text)) {
        fail(ErrorKind::Parse, "state file ended before '" + std::string(keyword) + "'");
    }
    ++line;
    std::istringstream ss(text);
    std::vector<std::string> fields;
    for (std::string f; ss >> f;) {
        fields.push_back(f);
    }
    if (fields.empty() || fields[0] != keyword) {
        fail(ErrorKind::Parse, "state file line " + std::to_string(line) + ": expected '" + keyword + "'");
    }
    fields.erase(fields.begin());
    return fields;
}

}  // namespace

QuantumState read_state(std::istream &in) {
    int line = 0;
    auto header = read_fields(in, line, "tcsim-state");
    if (header.size() != 1 || header[0] != "1") {
        fail(ErrorKind::Parse, "unsupported state file version");
    }
    auto ions = read_fields(in, line, "ions");
    if (ions.size() != 1) {
        fail(ErrorKind::Parse, "state file line 2: expected one ion count");
    }
    const int n = static_cast<int>(parse_int(ions[0], line));

    std::streampos mark = in.tellg();
    std::string peek;
    std::getline(in, peek);
    in.seekg(mark);
    BasisPtr basis;
    if (peek.rfind("ladder", 0) == 0) {
        auto f = read_fields(in, line, "ladder");
        if (f.size() != 2 || (f[0] != "red" && f[0] != "blue")) {
            fail(ErrorKind::Parse, "state file line " + std::to_string(line) + ": expected 'ladder <red|blue> <charge>'");
        }
        basis = make_basis(SectorLadder(n, static_cast<int>(parse_int(f[1], line)), f[0] == "red" ? Sideband::Red : Sideband::Blue));
    } else {
        auto modes = read_fields(in, line, "modes");
        auto cutoffs = read_fields(in, line, "cutoffs");
        std::vector<int> m, c;
        for (const auto &t : modes) {
            m.push_back(static_cast<int>(parse_int(t, line)));
        }
        for (const auto &t : cutoffs) {
            c.push_back(static_cast<int>(parse_int(t, line)));
        }
        basis = make_basis(FullBasis(n, m, c));
    }
    auto entries = read_fields(in, line, "entries");
    if (entries.size() != 1) {
        fail(ErrorKind::Parse, "state file line " + std::to_string(line) + ": expected one entry count");
    }
    const long long count = parse_int(entries[0], line);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->dimension()));
    for (long long e = 0; e < count; ++e) {
        std::string text;
        if (!std::getline(in, text)) {
            fail(ErrorKind::Parse, "state file truncated: expected " + std::to_string(count) + " entries");
        }
        ++line;
        std::istringstream ss(text);
        std::string a, b, c, extra;
        if (!(ss >> a >> b >> c) || (ss >> extra)) {
            fail(ErrorKind::Parse, "state file line " + std::to_string(line) + ": expected 'index real imag'");
        }
        const long long idx = parse_int(a, line);
        if (idx < 0 || static_cast<size_t>(idx) >= basis->dimension()) {
            fail(ErrorKind::Parse, "state file line " + std::to_string(line) + ": index out of range");
        }
        v[static_cast<Eigen::Index>(idx)] = Complex(parse_double(b, line), parse_double(c, line));
    }
    return QuantumState(basis, std::move(v));
}

void save_state(const std::string &path, const QuantumState &state) {
    std::ofstream out(path);
    if (!out) {
        fail(ErrorKind::Io, "cannot open '" + path + "' for writing");
    }
    write_state(out, state);
    if (!out) {
        fail(ErrorKind::Io, "write to '" + path + "' failed");
    }
}

QuantumState load_state(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::Io, "cannot open '" + path + "' for reading");
    }
    return read_state(in);
}

}  // namespace tcsim
