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

#include "declab/applications.hpp"

#include <cmath>
#include <stdexcept>

#include "declab/decoupling.hpp"
#include "declab/entropies.hpp"

namespace declab {

namespace {

double log_correction(int d_a, int ell) {
  return std::log2(1.0 + 8.0 * std::pow(static_cast<double>(d_a), 2.0 - ell));
}

}  // namespace

MergingRates merging_rates_from_entropies(double h_min_ar, double h_0_a, int d_a, int ell,
                                          double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("merging_rates: delta must lie in (0, 1)");
  }
  if (ell < 1) throw std::invalid_argument("merging_rates: ell must be >= 1");
  MergingRates r;
  r.delta = delta;
  r.ell = ell;
  r.h_min_ar = h_min_ar;
  r.h_0_a = h_0_a;
  r.delta_prime = delta + std::sqrt(4.0 * std::sqrt(delta) - 4.0 * delta);
  r.epsilon = 2.0 * std::sqrt(9.0 * r.delta_prime) + 2.0 * std::sqrt(delta);
  const double corr = std::log2(r.delta_prime) + log_correction(d_a, ell);
  r.e_gain = 0.5 * (h_min_ar + h_0_a) + corr;
  r.q_cost = 0.5 * (-h_min_ar + h_0_a) - corr;
  return r;
}

MergingRates merging_rates(const QuantumState& psi_abr, int ell, double delta) {
  const Dims& dims = psi_abr.dims();
  if (dims.size() != 3) throw DimensionError("merging_rates: psi must have dims (d_A, d_B, d_R)");
  const ComplexMatrix& m = psi_abr.matrix();
  const double purity = (m * m).trace().real();
  if (std::abs(purity - 1.0) > 1e-8) {
    throw NumericalError("merging_rates: psi_ABR is not pure (purity " +
                         std::to_string(purity) + ")");
  }
  const double h_ar = h_min_cond(psi_abr, Cut{{0}, {2}}).value;
  const double h0 = h_0(psi_abr.marginal({0}));
  return merging_rates_from_entropies(h_ar, h0, dims[0], ell, delta);
}

double corollary6_threshold(double h_min_ar, int d_a, int ell, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("corollary6_threshold: epsilon must be > 0");
  if (ell < 1) throw std::invalid_argument("corollary6_threshold: ell must be >= 1");
  return 0.5 * (h_min_ar + std::log2(static_cast<double>(d_a))) + std::log2(epsilon) +
         log_correction(d_a, ell);
}

ThermalisationVerdict thermalisation_check(const QuantumState& rho_xir, int d_s, int d_e,
                                           int d_r, int ell, double eps1, double eps2,
                                           double eps3, double delta_target,
                                           const std::optional<ComplexMatrix>& isometry) {
  if (!(eps2 >= 0.0 && eps3 >= 0.0 && eps1 > eps2 + eps3)) {
    throw std::invalid_argument("thermalisation_check: need eps1 > eps2 + eps3 >= 0");
  }
  if (!(delta_target - 24.0 * eps1 > 0.0)) {
    throw std::invalid_argument(
        "thermalisation_check: delta - 24 eps1 must be positive, the condition is unsatisfiable");
  }
  if (ell < 1) throw std::invalid_argument("thermalisation_check: ell must be >= 1");
  const int d_se = d_s * d_e;
  const Dims& dims = rho_xir.dims();
  if (dims.size() != 2 || dims[1] != d_r) {
    throw DimensionError("thermalisation_check: rho must have dims (dim Xi, d_R)");
  }
  const int d_xi = dims[0];
  if (!isometry && d_xi != d_se) {
    throw DimensionError("thermalisation_check: without an isometry dim Xi must equal d_S d_E");
  }
  const ComplexMatrix v =
      isometry ? *isometry : ComplexMatrix(ComplexMatrix::Identity(d_se, d_xi));
  if (v.rows() != d_se || v.cols() != d_xi) {
    throw DimensionError("thermalisation_check: isometry must be (d_S d_E) x dim Xi");
  }
  if (max_abs_entry(v.adjoint() * v - ComplexMatrix::Identity(d_xi, d_xi)) > 1e-10) {
    throw NumericalError("thermalisation_check: embedding is not an isometry");
  }

  const ComplexMatrix lift = kron(v, ComplexMatrix::Identity(d_r, d_r));
  const QuantumState rho_ser(lift * rho_xir.matrix() * lift.adjoint(), {d_s, d_e, d_r});
  const ComplexMatrix pi_se = v * v.adjoint() / static_cast<double>(d_xi);
  const ComplexMatrix pi_e = partial_trace(pi_se, {d_s, d_e}, {0});
  const ComplexMatrix pi_s = partial_trace(pi_se, {d_s, d_e}, {1});

  ThermalisationVerdict out;
  out.h_min_se_given_r = h_min_cond(rho_ser, Cut{{0, 1}, {2}}).value;
  out.h_min_e = h_min(pi_e);
  out.h_max_s = h_max(pi_s);
  out.lhs = out.h_min_se_given_r + out.h_min_e - out.h_max_s;
  const double x = eps1 - eps2 - eps3;
  const double denom = (1.0 - std::sqrt(1.0 - x * x)) * (delta_target - 24.0 * eps1);
  out.rhs = 2.0 * std::log2(2.0 * d_ell_coefficient(d_s, ell) / denom);
  out.satisfied = out.lhs >= out.rhs;

  const ComplexMatrix rho_s = rho_ser.marginal({0}).matrix();
  out.k = d_s * operator_norm(rho_s);
  out.fraction_bound = std::min(
      2.0, 2.0 * std::exp(-concentration_chi(ell, out.k) * d_s * std::pow(delta_target, 4)));
  return out;
}

}  // namespace declab
