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
 * @file decoupling.hpp
 * Decoupling error ||T(U rho_AR U^dagger) - tau_B (x) rho_R||_1 with
 * tau_B = tr_A J(T), its Monte-Carlo and exact-moment evaluation, and the
 * closed-form bounds it is compared against.
 */

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "declab/entropies.hpp"
#include "declab/quantum.hpp"
#include "declab/random_unitaries.hpp"

namespace declab {

enum class EnsembleKind { haar, d_ell, rqc, diag_zx_once };

struct Ensemble {
  EnsembleKind kind = EnsembleKind::haar;
  int ell = 1;     ///< d_ell only
  int length = 0;  ///< rqc only
};

/// "haar", "d_ell(2)", "rqc(40)", "diag_zx_once".
std::string ensemble_name(const Ensemble& e);
Ensemble parse_ensemble(const std::string& text);

/// One draw. d_ell draws come from sample_d_ell with the same engine, so a
/// circuit dump with the same streams reproduces the Monte-Carlo unitaries.
ComplexMatrix sample_ensemble(const Ensemble& e, int n_qubits, Engine& eng);

struct DecouplingInstance {
  QuantumState rho_ar;  ///< dims (d_A, d_R)
  Channel channel;      ///< A -> B
  Ensemble ensemble;
  int samples = 1000;
  /// Sample i uses stream rng.stream_index + i.
  RngSpec rng;
};

/// Phi_{A1 R} (x) |0><0|_{A2}, ordered A1 A2 R, with dims (d1 d2, d1).
QuantumState prop1_state(int d1, int d2);
/// The same state with the channel tr_{A2}.
DecouplingInstance prop1_instance(int d1, int d2, const Ensemble& e, int samples,
                                  const RngSpec& rng);
/// Haar-random pure state on A (x) R with dims (d_a, d_r).
QuantumState random_pure_state(int d_a, int d_r, Engine& eng);

/// Caches tau_B (x) rho_R for repeated evaluation.
class DecouplingEvaluator {
 public:
  explicit DecouplingEvaluator(const DecouplingInstance& inst);
  double error(const ComplexMatrix& u) const;
  int d_a() const { return d_a_; }
  int d_r() const { return d_r_; }

 private:
  Channel channel_;
  ComplexMatrix rho_;
  int d_a_;
  int d_r_;
  ComplexMatrix target_;
};

double error_of_unitary(const DecouplingInstance& inst, const ComplexMatrix& u);

/// Order-independent sum by recursive halving.
double pairwise_sum(const double* values, std::size_t n);

struct SampleStats {
  double mean = 0.0;
  double std_error = 0.0;  ///< sample standard deviation / sqrt(n)
  std::size_t n = 0;
};
SampleStats summarize(const std::vector<double>& values);

struct McResult {
  SampleStats error;
  SampleStats squared_error;
  std::vector<double> samples;
};

McResult mc_decoupling(const DecouplingInstance& inst);

/// sum_{a a' b b'} m[(b b'), (a a')] tr[(rho_{ab} (x) rho_{a'b'}) n], where
/// rho_{ab} is the d_r x d_r block of rho at block position (a, b). Equals
/// tr[(rho (x) rho') (m (x) n)] with the tensor factors regrouped.
double contract_pair(const ComplexMatrix& rho, int d_a, int d_r, const ComplexMatrix& m,
                     const ComplexMatrix& n);

/// Operators entering the second-moment bound.
struct SquareBoundTerms {
  ComplexMatrix xi;  ///< Phi - I / d_A^2 on A (x) A
  ComplexMatrix m;   ///< T~*^{(x)2}(F_BB'), T~*(Y) = T*(s_B^{-1/4} Y s_B^{-1/4})
  ComplexMatrix n;   ///< E~*^{(x)2}(F_RR') with J(E) = rho_AR
  int d_a = 0;
  ComplexMatrix sigma_b;
  ComplexMatrix sigma_r;
};

/// Missing sigmas default to the collision-entropy optimizers of J(T) (A|B)
/// and rho_AR (A|R).
SquareBoundTerms square_bound_terms(const DecouplingInstance& inst,
                                    const std::optional<ComplexMatrix>& sigma_b = {},
                                    const std::optional<ComplexMatrix>& sigma_r = {});

/// tr[(R^ell (x) id)(xi (x) xi) (m (x) n)], an upper bound on E[error^2].
double exact_square_bound(const DecouplingInstance& inst, int ell,
                          const std::optional<ComplexMatrix>& sigma_b = {},
                          const std::optional<ComplexMatrix>& sigma_r = {});
double exact_square_bound(const SquareBoundTerms& terms, int ell);
/// The same kernel with R^ell replaced by the Haar twirl.
double haar_square_kernel(const SquareBoundTerms& terms);

enum class BoundKind {
  haar_eq8,
  two_design_eq9,
  rqc_eq10,
  theorem4_h2,
  theorem4_smooth,
  theorem5_tail
};

std::string bound_name(BoundKind k);
BoundKind parse_bound(const std::string& text);
/// Parameter names each bound reads.
std::vector<std::string> bound_parameters(BoundKind k);

/// Named parameters: h_ar, h_ab (entropies of rho_AR and J(T), bits), d_a,
/// ell, epsilon, delta, eta, n_qubits, poly_inv, k. Throws
/// std::invalid_argument naming any missing parameter.
double bound_evaluate(BoundKind which, const std::map<std::string, double>& params);

/// sqrt(1 + 8 d^{2 - ell}).
double d_ell_coefficient(int d_a, int ell);
/// 1 / (2^11 (2 ell + 1)^3 k^4 pi^2).
double concentration_chi(int ell, double k);

struct Prop1Record {
  int d1 = 0;
  int d2 = 0;
  double closed_form = 0.0;
  std::optional<double> exact_twirl;
  double mc_mean = 0.0;
  double mc_std = 0.0;
  double lower_bound = 0.0;
  double haar_bound = 0.0;
  std::optional<SampleStats> haar_mc;
};

/// E tr[(tr_{A2} U rho U^dagger)^2] for U = D^X D^Z from the exact twirls.
double prop1_exact_second_moment(int d1, int d2);

Prop1Record prop1_quantities(int d1, int d2, int samples, const RngSpec& rng,
                             bool with_haar_mc = false);

struct ConcentrationRecord {
  int ell = 0;
  double eta = 0.0;
  int samples = 0;
  double h_min_ar = 0.0;
  double h_min_ab = 0.0;
  double delta = 0.0;      ///< sqrt(1 + 8 d^{2-ell}) 2^{-(H_min + H_min)/2}
  double threshold = 0.0;  ///< 2 delta + eta
  int exceed_count = 0;
  double empirical_fraction = 0.0;
  double k = 0.0;
  double tail_bound = 0.0;
  double slack = 0.0;  ///< 3 binomial standard deviations at the tail value
  bool pass = false;
};

/// Draws `samples` unitaries from D[ell] (instance rng streams) and counts
/// errors above 2 delta + eta.
ConcentrationRecord concentration_experiment(const DecouplingInstance& inst, int ell,
                                             double eta, int samples);

}  // namespace declab
