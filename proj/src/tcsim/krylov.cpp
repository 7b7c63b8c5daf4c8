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

#include "tcsim/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

#include "tcsim/error.hpp"

namespace tcsim {

Eigen::VectorXcd krylov_propagate(const Eigen::SparseMatrix<std::complex<double>> &h, const Eigen::VectorXcd &v,
                                  double t, const KrylovOptions &options) {
    using Complex = std::complex<double>;
    const double total = std::abs(t);
    const double direction = t < 0 ? -1.0 : 1.0;
    const double norm0 = v.norm();
    if (total == 0.0 || norm0 == 0.0) {
        return v;
    }
    const Eigen::Index dim = v.size();
    const int m = static_cast<int>(std::min<Eigen::Index>(options.subspace_dimension, dim));
    const double abs_tol = options.tolerance * norm0;

    Eigen::MatrixXcd basis(dim, m);
    std::vector<double> alpha(static_cast<size_t>(m)), beta(static_cast<size_t>(m));
    Eigen::VectorXcd w = v;
    double done = 0.0;
    double step = total;

    while (done < total) {
        const double nrm = w.norm();
        basis.col(0) = w / nrm;
        int size = m;
        bool invariant = false;
        for (int k = 0; k < m; ++k) {
            Eigen::VectorXcd u = h * basis.col(k);
            alpha[static_cast<size_t>(k)] = basis.col(k).dot(u).real();
            // Full reorthogonalization.
            for (int pass = 0; pass < 2; ++pass) {
                for (int i = 0; i <= k; ++i) {
                    u -= basis.col(i).dot(u) * basis.col(i);
                }
            }
            beta[static_cast<size_t>(k)] = u.norm();
            if (beta[static_cast<size_t>(k)] < 1e-13 * (1.0 + std::abs(alpha[static_cast<size_t>(k)]))) {
                size = k + 1;
                invariant = true;
                break;
            }
            if (k + 1 < m) {
                basis.col(k + 1) = u / beta[static_cast<size_t>(k)];
            }
        }

        Eigen::VectorXd diag(size), sub(std::max(size - 1, 0));
        for (int k = 0; k < size; ++k) {
            diag[k] = alpha[static_cast<size_t>(k)];
            if (k + 1 < size) {
                sub[k] = beta[static_cast<size_t>(k)];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        const Eigen::MatrixXd &q = es.eigenvectors();
        const Eigen::VectorXd &e = es.eigenvalues();

        step = std::min(step, total - done);
        Eigen::VectorXcd coeff;
        double error = 0.0;
        for (;;) {
            Eigen::VectorXcd phase(size);
            for (int k = 0; k < size; ++k) {
                phase[k] = std::exp(Complex(0.0, -direction * e[k] * step)) * q(0, k);
            }
            coeff = q.cast<Complex>() * phase;
            error = invariant ? 0.0 : beta[static_cast<size_t>(size - 1)] * std::abs(coeff[size - 1]) * nrm;
            const double allowed = abs_tol * step / total;
            if (error <= allowed) {
                break;
            }
            const double shrink = std::clamp(0.9 * std::pow(allowed / error, 1.0 / size), 0.1, 0.9);
            step *= shrink;
            if (step < 1e-13 * total) {
                std::ostringstream msg;
                msg << "Krylov propagation stalled at t=" << done << " of " << total << ": achieved residual "
                    << error << " exceeds tolerance " << allowed;
                fail(ErrorKind::SolverFailure, msg.str());
            }
        }
        w = nrm * (basis.leftCols(size) * coeff);
        done += step;
        if (total - done < 1e-15 * total) {
            done = total;
        }
        step *= 2.0;
    }
    return w;
}

}  // namespace tcsim
