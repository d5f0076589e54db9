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
 * @file applications.hpp
 * Coherent-state-merging rates, the partial-trace decoupling threshold and
 * the relative-thermalisation condition. Smoothed entropies are replaced by
 * their unsmoothed values; results carry a `surrogate` flag saying so.
 */

#include <optional>

#include "declab/quantum.hpp"

namespace declab {

struct MergingRates {
  double e_gain = 0.0;  ///< entanglement gain lower bound (ebits)
  double q_cost = 0.0;  ///< communication cost upper bound (qubits)
  double epsilon = 0.0;
  double delta = 0.0;
  double delta_prime = 0.0;
  int ell = 0;
  double h_min_ar = 0.0;
  double h_0_a = 0.0;
  bool surrogate = true;
};

/// psi_ABR is a pure state with dims (d_A, d_B, d_R); 0 < delta < 1.
MergingRates merging_rates(const QuantumState& psi_abr, int ell, double delta);
/// The same formulas from precomputed entropies.
MergingRates merging_rates_from_entropies(double h_min_ar, double h_0_a, int d_a, int ell,
                                          double delta);

/// 1/2 (h_min_ar + log2 d_A) + log2 epsilon + log2(1 + 8 d_A^{2 - ell}).
double corollary6_threshold(double h_min_ar, int d_a, int ell, double epsilon);

struct ThermalisationVerdict {
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
  double fraction_bound = 0.0;
  double h_min_se_given_r = 0.0;
  double h_min_e = 0.0;
  double h_max_s = 0.0;
  double k = 0.0;
  bool surrogate = true;
};

/// rho_xir has dims (dim Xi, d_R). `isometry` embeds Xi into S (x) E
/// (d_S d_E x dim Xi); without it Xi = S (x) E.
ThermalisationVerdict thermalisation_check(const QuantumState& rho_xir, int d_s, int d_e,
                                           int d_r, int ell, double eps1, double eps2,
                                           double eps3, double delta_target,
                                           const std::optional<ComplexMatrix>& isometry = {});

}  // namespace declab
