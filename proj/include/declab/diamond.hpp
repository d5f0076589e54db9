// Copyright 2026 The declab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/**
 * @file diamond.hpp
 * Diamond norm of a Hermiticity-preserving map given by its Choi matrix.
 *
 * The map is passed in the unit-trace Choi normalization of quantum.hpp.
 * The SDP below works with J_w = d_in * J, the Choi matrix of the map applied
 * to the unnormalized vector sum_i |ii>:
 *
 *   max Re tr(J_w^dagger X)
 *   s.t. [[rho0 (x) I, X], [X^dagger, rho1 (x) I]] >= 0,  tr rho0 = tr rho1 = 1.
 *
 * Before solving, the block matrix is split along the connected components of
 * the sparsity pattern of J_w, closed under the input-index structure of
 * rho (x) I. The split is exact: pinching a feasible point onto those
 * components keeps it feasible and leaves the objective unchanged.
 */

#include "declab/linalg.hpp"
#include "declab/sdp.hpp"

namespace declab {

struct DiamondNormResult {
  double value = 0.0;
  double dual_value = 0.0;
  SdpStatus status = SdpStatus::optimal;
  int iterations = 0;
  int components = 0;
  int constraints = 0;
};

DiamondNormResult diamond_norm_detailed(const ComplexMatrix& delta_choi, int d_in,
                                        int d_out, double gap_tol = 1e-7);

/// Throws NumericalError unless the solver reports an optimal status.
double diamond_norm(const ComplexMatrix& delta_choi, int d_in, int d_out,
                    double gap_tol = 1e-7);

}  // namespace declab
