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
 * @file sdp.hpp
 * Primal-dual interior-point solver for block-diagonal complex Hermitian SDPs.
 *
 * Standard form (minimize):   min <C, X>  s.t.  <A_i, X> = b_i,  X >= 0
 *                  dual:      max b^T y   s.t.  C - sum_i y_i A_i >= 0
 * Maximization problems report the dual as
 *                             min b^T y   s.t.  sum_i y_i A_i - C >= 0.
 * <A, X> = Re tr(A X). Every matrix is block diagonal with the same blocks.
 */

#include <vector>

#include "declab/linalg.hpp"

namespace declab {

/// One stored entry of a Hermitian constraint matrix. An off-diagonal entry
/// (row, col, v) also places conj(v) at (col, row); diagonal values must be real.
struct SdpEntry {
  int block = 0;
  int row = 0;
  int col = 0;
  Complex value;
};

struct SdpConstraint {
  std::vector<SdpEntry> entries;
  double rhs = 0.0;
};

enum class SdpSense { minimize, maximize };
enum class SdpStatus { optimal, max_iterations, infeasible };

const char* status_name(SdpStatus s);

struct SdpProblem {
  std::vector<int> block_sizes;
  /// Hermitian cost, one dense matrix per block.
  std::vector<ComplexMatrix> objective;
  std::vector<SdpConstraint> constraints;
  SdpSense sense = SdpSense::minimize;

  /// Throws DimensionError or NumericalError on malformed data.
  void validate() const;
};

/// Per-iterate record, in the internal minimization form.
struct SdpIterate {
  double primal = 0.0;
  double dual = 0.0;
  double primal_infeasibility = 0.0;  ///< ||b - A(X)|| / (1 + ||b||)
  double dual_infeasibility = 0.0;    ///< ||C - A^T y - S||_F / (1 + ||C||_F)
  double complementarity = 0.0;       ///< <X, S>
  /// primal - dual - (<X, S> + <R_d, X> - y^T r_p); zero up to rounding.
  double identity_residual = 0.0;
};

struct SdpSolution {
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;
  SdpStatus status = SdpStatus::max_iterations;
  int iterations = 0;
  std::vector<ComplexMatrix> x;
  /// Dual slack in the caller's sense (always PSD at optimality).
  std::vector<ComplexMatrix> s;
  Eigen::VectorXd y;
  std::vector<SdpIterate> history;
};

struct SdpOptions {
  double gap_tol = 1e-7;
  int max_iterations = 500;
};

SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& opts = {});

/// <A_i, X> for every constraint.
Eigen::VectorXd apply_constraints(const SdpProblem& p,
                                  const std::vector<ComplexMatrix>& x);
/// sum_i y_i A_i.
std::vector<ComplexMatrix> adjoint_constraints(const SdpProblem& p,
                                               const Eigen::VectorXd& y);

/// Appends the constraint Re X(r, c) = value (or X(r, r) = value).
void add_real_part_constraint(SdpProblem& p, int block, int r, int c, double value);
/// Appends the constraint -Im X(r, c) = value, r != c.
void add_imag_part_constraint(SdpProblem& p, int block, int r, int c, double value);

}  // namespace declab
