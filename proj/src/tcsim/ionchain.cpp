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

#include "tcsim/ionchain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tcsim/error.hpp"

namespace tcsim {

namespace {

// Net force on each ion: harmonic restoring force plus pairwise Coulomb push.
Eigen::VectorXd forces(const Eigen::VectorXd &u) {
    const auto n = u.size();
    Eigen::VectorXd f(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double acc = -u[i];
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            const double d = u[i] - u[j];
            acc += (d > 0 ? 1.0 : -1.0) / (d * d);
        }
        f[i] = acc;
    }
    return f;
}

// Hessian of the potential energy (the negative force Jacobian).
Eigen::MatrixXd hessian(const Eigen::VectorXd &u) {
    const auto n = u.size();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        h(i, i) = 1.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            const double c = 2.0 / std::pow(std::abs(u[i] - u[j]), 3);
            h(i, i) += c;
            h(i, j) = -c;
        }
    }
    return h;
}

bool strictly_ascending(const Eigen::VectorXd &u) {
    for (Eigen::Index i = 1; i < u.size(); ++i) {
        if (!(u[i] > u[i - 1])) {
            return false;
        }
    }
    return true;
}

}  // namespace

double force_residual(const std::vector<double> &positions) {
    const Eigen::Map<const Eigen::VectorXd> u(positions.data(), static_cast<Eigen::Index>(positions.size()));
    return positions.empty() ? 0.0 : forces(u).cwiseAbs().maxCoeff();
}

ChainGeometry equilibrium_positions(int n_ions, const ChainSolverOptions &options) {
    if (n_ions < 1) {
        fail(ErrorKind::InvalidArgument, "number of ions must be positive, got " + std::to_string(n_ions));
    }
    ChainGeometry geometry{n_ions, std::vector<double>(static_cast<size_t>(n_ions), 0.0)};
    if (n_ions == 1) {
        return geometry;
    }

    // Uniform initial guess using the empirical minimum-spacing scaling 2.018 N^-0.559.
    const double spacing = 2.018 / std::pow(n_ions, 0.559);
    Eigen::VectorXd u(n_ions);
    for (int i = 0; i < n_ions; ++i) {
        u[i] = (i - 0.5 * (n_ions - 1)) * spacing;
    }

    Eigen::VectorXd f = forces(u);
    double residual = f.cwiseAbs().maxCoeff();
    for (int iter = 0; iter < options.max_iterations && residual > options.residual_tolerance; ++iter) {
        // Newton step on F(u) = 0 with Jacobian -H.
        const Eigen::VectorXd step = hessian(u).ldlt().solve(f);
        double scale = 1.0;
        for (int k = 0; k < 60; ++k) {
            Eigen::VectorXd trial = u + scale * step;
            if (strictly_ascending(trial)) {
                Eigen::VectorXd ft = forces(trial);
                const double r = ft.cwiseAbs().maxCoeff();
                if (r < residual || scale < 1e-12) {
                    u = std::move(trial);
                    f = std::move(ft);
                    residual = r;
                    break;
                }
            }
            scale *= 0.5;
        }
    }
    if (!(residual <= options.residual_tolerance)) {
        std::ostringstream msg;
        msg << "equilibrium solve for " << n_ions << " ions did not converge: residual " << residual << " after "
            << options.max_iterations << " iterations";
        fail(ErrorKind::SolverFailure, msg.str());
    }

    // The exact equilibrium is reflection symmetric; remove round-off drift.
    for (int i = 0; i < n_ions / 2; ++i) {
        const double a = 0.5 * (u[n_ions - 1 - i] - u[i]);
        u[i] = -a;
        u[n_ions - 1 - i] = a;
    }
    if (n_ions % 2 == 1) {
        u[n_ions / 2] = 0.0;
    }
    std::copy(u.begin(), u.end(), geometry.positions.begin());
    return geometry;
}

ModeTable normal_modes(int n_ions, const ChainSolverOptions &options) {
    const ChainGeometry geometry = equilibrium_positions(n_ions, options);
    const Eigen::Map<const Eigen::VectorXd> u(geometry.positions.data(), n_ions);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hessian(u));
    if (solver.info() != Eigen::Success) {
        fail(ErrorKind::SolverFailure, "Hessian diagonalization failed");
    }

    ModeTable table;
    table.n_ions = n_ions;
    table.amplitudes = solver.eigenvectors();
    table.frequencies.resize(static_cast<size_t>(n_ions));
    for (int j = 0; j < n_ions; ++j) {
        table.frequencies[static_cast<size_t>(j)] = std::sqrt(std::max(0.0, solver.eigenvalues()[j]));
        // Sign convention: first nonzero component positive.
        for (int n = 0; n < n_ions; ++n) {
            const double b = table.amplitudes(n, j);
            if (std::abs(b) > 1e-12) {
                if (b < 0) {
                    table.amplitudes.col(j) *= -1.0;
                }
                break;
            }
        }
    }

    // The COM mode is exact: unit frequency, uniform amplitude.
    table.frequencies[0] = 1.0;
    table.amplitudes.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(n_ions)));
    return table;
}

}  // namespace tcsim
