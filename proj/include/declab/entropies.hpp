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
 * @file entropies.hpp
 * Conditional min- and collision entropies, H_0, H_max and the purified
 * distance. All logarithms are base 2.
 */

#include <optional>
#include <vector>

#include "declab/linalg.hpp"
#include "declab/quantum.hpp"

namespace declab {

/// Subsystems forming A and B; subsystems in neither are traced out.
struct Cut {
  std::vector<int> a;
  std::vector<int> b;
};

/// Parses "0,1|2" style cuts.
Cut parse_cut(const std::string& text);

/// rho restricted to a (x) b, with factors reordered to (A, B).
struct BipartiteMatrix {
  ComplexMatrix matrix;
  int d_a = 1;
  int d_b = 1;
};
BipartiteMatrix bipartite_view(const QuantumState& rho, const Cut& cut);

struct EntropyResult {
  double value = 0.0;
  /// Normalized sigma_B achieving the value.
  std::optional<ComplexMatrix> optimizer;
  /// Solver gap (min-entropy) or final step size (collision entropy).
  std::optional<double> certificate;
  int iterations = 0;
};

/// -log2 min{ tr sigma : I (x) sigma >= rho_AB }, solved as an SDP.
EntropyResult h_min_cond(const QuantumState& rho, const Cut& cut, double gap_tol = 1e-9);
EntropyResult h_min_cond(const BipartiteMatrix& rho, double gap_tol = 1e-9);

enum class CollisionMode { plugin, optimized };

/// sup over sigma of -log2 tr[((I (x) sigma^{-1/4}) rho (I (x) sigma^{-1/4}))^2].
/// Plugin mode fixes sigma = rho_B; optimized mode runs projected gradient
/// descent on the collision term from rho_B and from I/d_B and keeps the best.
EntropyResult h_2_cond(const QuantumState& rho, const Cut& cut,
                       CollisionMode mode = CollisionMode::optimized);
EntropyResult h_2_cond(const BipartiteMatrix& rho, CollisionMode mode = CollisionMode::optimized);

/// tr[((I (x) sigma^{-1/4}) rho (I (x) sigma^{-1/4}))^2] for a given sigma.
double collision_term(const BipartiteMatrix& rho, const ComplexMatrix& sigma);

/// log2 of the rank of rho (eigenvalues above 1e-10 d).
double h_0(const QuantumState& rho);
double h_0(const ComplexMatrix& rho);
/// 2 log2 tr sqrt(rho), over the same support as h_0.
double h_max(const QuantumState& rho);
double h_max(const ComplexMatrix& rho);
/// -log2 of the largest eigenvalue.
double h_min(const ComplexMatrix& rho);

/// sqrt(1 - F^2) with F = ||sqrt(rho) sqrt(sigma)||_1 + sqrt((1 - tr rho)(1 - tr sigma)).
double purified_distance(const QuantumState& rho, const QuantumState& sigma);

}  // namespace declab
