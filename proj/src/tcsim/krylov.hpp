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

#ifndef TCSIM_KRYLOV_HPP
#define TCSIM_KRYLOV_HPP

#include <Eigen/Sparse>
#include <complex>

namespace tcsim {

struct KrylovOptions {
    int subspace_dimension = 30;
    double tolerance = 1e-10;  // bound on the propagated-vector error, relative to its norm
};

/// exp(-i h t) v for Hermitian sparse h by restarted Lanczos propagation with
/// adaptive sub-steps. Throws SolverFailure if the step size collapses.
Eigen::VectorXcd krylov_propagate(const Eigen::SparseMatrix<std::complex<double>> &h, const Eigen::VectorXcd &v,
                                  double t, const KrylovOptions &options = {});

}  // namespace tcsim

#endif
