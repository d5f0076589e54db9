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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "declab/decoupling.hpp"
#include "declab/diamond.hpp"
#include "declab/entropies.hpp"
#include "declab/applications.hpp"
#include "declab/quantum.hpp"
#include "declab/random_unitaries.hpp"

using namespace declab;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

const Cut kAB{{0}, {1}};
constexpr int kSamples = 10000;

Ensemble d_ell(int ell) { return Ensemble{EnsembleKind::d_ell, ell, 0}; }

std::string rational_weight(int n_qubits, int ell) {
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::cpp_rational;
  const cpp_int d = cpp_int(1) << n_qubits;
  const cpp_int num = boost::multiprecision::pow(d, ell + 1) + boost::multiprecision::pow(d, ell) - 2;
  const cpp_int den = boost::multiprecision::pow(d, 2 * ell) * (d - 1);
  const cpp_rational p(num, den);
  return boost::multiprecision::numerator(p).str() + "/" + boost::multiprecision::denominator(p).str();
}

void lemma5(Verdict& v) {
  for (int n = 1; n <= 2; ++n) {
    for (int ell = 1; ell <= 3; ++ell) {
      const Lemma5Result r = lemma5_decompose(n, ell);
      const std::string expect = rational_weight(n, ell);
      v.detail << " N=" << n << ",l=" << ell << ":p=" << r.p_ell_exact;
      v.require(r.p_ell_exact == expect, "p_ell " + r.p_ell_exact + " != " + expect);
      v.require(r.min_choi_eigenvalue >= -1e-9, "Choi eigenvalue");
      v.require(r.trace_residual <= 1e-9, "trace preservation");
      v.require(r.unital_residual <= 1e-9, "unitality");
      v.require(r.decomposition_residual <= 1e-9, "decomposition");
    }
  }
}

void design_interval(Verdict& v) {
  for (int n = 1; n <= 2; ++n) {
    for (int ell = 1; ell <= 2; ++ell) {
      const MomentSuperOp r = map_r_pow(n, ell);
      const int dd = r.d * r.d;
      const ComplexMatrix choi = superop_to_choi(r.matrix - map_twirl_haar(n).matrix, dd, dd);
      const DiamondNormResult res = diamond_norm_detailed(choi, dd, dd, 1e-7);
      const double scale = 2.0 * std::exp2(-static_cast<double>(ell * n));
      const double dm1 = std::exp2(n) - 1.0;
      const double lo = scale * (1.0 - 1.0 / dm1), hi = scale * (1.0 + 2.0 / dm1);
      v.detail << " N=" << n << ",l=" << ell << ":" << res.value << " in [" << lo << "," << hi << "]";
      v.require(res.status == SdpStatus::optimal, "solver status");
      v.require(res.value >= lo - 1e-6 && res.value <= hi + 1e-6, "interval");
    }
  }
}

void prop1(Verdict& v) {
  const int pairs[4][2] = {{2, 2}, {2, 4}, {4, 2}, {4, 4}};
  for (const auto& p : pairs) {
    const Prop1Record r = prop1_quantities(p[0], p[1], kSamples, {101, 0});
    v.detail << " (" << p[0] << "," << p[1] << "):mc=" << r.mc_mean << ">=" << r.lower_bound;
    v.require(r.exact_twirl.has_value() && std::abs(*r.exact_twirl - r.closed_form) <= 1e-9,
              "exact twirl vs closed form");
    v.require(r.mc_mean >= r.lower_bound - 3.0 * r.mc_std, "MC mean vs lower bound");
  }
  const Prop1Record sep = prop1_quantities(2, 8, kSamples, {102, 0}, true);
  v.detail << " (2,8):zx=" << sep.mc_mean << ",haar=" << sep.haar_mc->mean;
  v.require(sep.mc_mean > sep.haar_mc->mean, "separation from Haar");
}

struct Criterion4Row {
  double mean = 0.0;
  double std_error = 0.0;
  double exact = 0.0;
};

std::vector<DecouplingInstance> decoupling_instances() {
  std::vector<DecouplingInstance> out{prop1_instance(2, 4, d_ell(1), kSamples, {200, 0})};
  Engine eng = make_engine({201, 0});
  for (int i = 0; i < 5; ++i) {
    out.push_back({random_pure_state(8, 2, eng), partial_trace_channel({2, 4}, {1}), d_ell(1),
                   kSamples, {202 + static_cast<std::uint64_t>(i), 0}});
  }
  return out;
}

std::vector<std::vector<Criterion4Row>> g_rows;

void theorem4(Verdict& v) {
  g_rows.clear();
  for (auto inst : decoupling_instances()) {
    const Channel& c = inst.channel;
    const double h_ar = h_2_cond(inst.rho_ar, kAB).value;
    const double h_ab = h_2_cond(QuantumState(c.choi(), {c.d_in(), c.d_out()}), kAB).value;
    const SquareBoundTerms terms = square_bound_terms(inst);
    std::vector<Criterion4Row> rows;
    for (int ell = 1; ell <= 3; ++ell) {
      inst.ensemble = d_ell(ell);
      const McResult mc = mc_decoupling(inst);
      const double bound = bound_evaluate(
          BoundKind::theorem4_h2, {{"h_ar", h_ar}, {"h_ab", h_ab}, {"d_a", 8}, {"ell", ell}});
      v.require(mc.error.mean <= bound + 3.0 * mc.error.std_error, "Theorem-4 bound");
      rows.push_back({mc.error.mean, mc.error.std_error, exact_square_bound(terms, ell)});
      if (g_rows.empty() && ell == 1) v.detail << " prop1 l=1: " << mc.error.mean << "<=" << bound;
    }
    g_rows.push_back(rows);
  }
  v.detail << " instances=" << g_rows.size() << " ell=1..3";
}

void jensen(Verdict& v) {
  if (g_rows.empty()) theorem4(v);
  double worst = -INFINITY;
  for (const auto& rows : g_rows) {
    for (const auto& r : rows) {
      const double slack = r.exact + 3.0 * 2.0 * r.mean * r.std_error - r.mean * r.mean;
      worst = std::max(worst, -slack);
      v.require(slack >= 0.0, "(mean)^2 vs exact square bound");
    }
  }
  v.detail << " max (mean^2 - exact - 3 sigma) = " << worst;
}

void entropy_oracles(Verdict& v) {
  Engine eng = make_engine({300, 0});
  for (int d : {2, 4, 8}) {
    const double phi = h_min_cond(max_entangled(d), kAB).value;
    const ComplexMatrix sigma = random_density(2, 2, eng);
    const QuantumState prod(kron(ComplexMatrix::Identity(d, d) / static_cast<double>(d), sigma), {d, 2});
    const double mixed = h_min_cond(prod, kAB).value;
    v.detail << " d=" << d << ":" << phi << "," << mixed;
    v.require(std::abs(phi + std::log2(d)) <= 1e-6, "H_min(Phi_d)");
    v.require(std::abs(mixed - std::log2(d)) <= 1e-6, "H_min(I/d x sigma)");
  }
  double worst = INFINITY;
  for (int t = 0; t < 100; ++t) {
    const QuantumState rho(random_density(4, 1 + t % 4, eng), {2, 2});
    const double gap = h_2_cond(rho, kAB).value - h_min_cond(rho, kAB).value;
    worst = std::min(worst, gap);
    v.require(gap >= -1e-6, "H_2 >= H_min");
  }
  v.detail << " min(H2-Hmin) over 100 states=" << worst;
}

void twirls(Verdict& v) {
  const double tol = 5.0 / std::sqrt(static_cast<double>(kSamples));
  Engine eng = make_engine({400, 0});
  double worst = 0.0;
  for (int d : {2, 4}) {
    for (int t = 0; t < 10; ++t) {
      ComplexMatrix x = random_ginibre(d * d, d * d, eng);
      x /= x.norm();
      const ComplexMatrix exact_z = twirl2_diag(x, Basis::Z);
      const ComplexMatrix exact_x = twirl2_diag(x, Basis::X);
      const ComplexMatrix exact_h = twirl2_haar(x);
      ComplexMatrix mc_z = ComplexMatrix::Zero(d * d, d * d), mc_x = mc_z, mc_h = mc_z;
      for (int s = 0; s < kSamples; ++s) {
        const ComplexMatrix dz = sample_diag(Basis::Z, d, eng).matrix();
        const ComplexMatrix dx = sample_diag(Basis::X, d, eng).matrix();
        const ComplexMatrix u = sample_haar(d, eng);
        const ComplexMatrix kz = kron(dz, dz), kx = kron(dx, dx), ku = kron(u, u);
        mc_z += kz * x * kz.adjoint();
        mc_x += kx * x * kx.adjoint();
        mc_h += ku * x * ku.adjoint();
      }
      const double n = kSamples;
      for (double e : {max_abs_entry(mc_z / n - exact_z), max_abs_entry(mc_x / n - exact_x),
                       max_abs_entry(mc_h / n - exact_h)}) {
        worst = std::max(worst, e);
        v.require(e <= tol, "entrywise Monte-Carlo agreement");
      }
    }
  }
  v.detail << " max entry deviation " << worst << " <= " << tol;
}

void concentration(Verdict& v) {
  Engine eng = make_engine({500, 0});
  const DecouplingInstance inst{random_pure_state(8, 2, eng), partial_trace_channel({2, 4}, {1}),
                                d_ell(2), 1000, {501, 0}};
  for (double eta : {0.3, 0.5}) {
    const ConcentrationRecord r = concentration_experiment(inst, 2, eta, 1000);
    v.detail << " eta=" << eta << ":fraction=" << r.empirical_fraction << ",tail=" << r.tail_bound;
    v.require(r.pass, "empirical tail vs bound");
  }
}

void appendix_properties(Verdict& v) {
  Engine eng = make_engine({600, 0});
  int cj = 0, swap = 0, lemma7 = 0, chain = 0;
  double lemma7_ratio = 0.0;
  for (int t = 0; t < 50; ++t) {
    // CJ roundtrip: J^{-1}(J(T)) applied to a state equals the Kraus action
    const int d_in = 2 + t % 3, d_out = 2 + (t / 3) % 3;
    const ComplexMatrix iso = sample_haar(d_out * 3, eng).leftCols(d_in);
    std::vector<ComplexMatrix> kraus;
    for (int k = 0; k < 3; ++k) kraus.push_back(iso.middleRows(k * d_out, d_out));
    const Channel ch = j_map(kraus);
    const ComplexMatrix rho = random_density(d_in, d_in, eng);
    ComplexMatrix direct = ComplexMatrix::Zero(d_out, d_out);
    for (const auto& k : kraus) direct += k * rho * k.adjoint();
    cj += max_abs_entry(j_inv_apply(ch, rho) - direct) <= 1e-10;

    const int d = 1 + t % 4;
    const ComplexMatrix x = random_ginibre(d, d, eng), y = random_ginibre(d, d, eng);
    swap += std::abs((kron(x, y) * swap_operator(d)).trace() - (x * y).trace()) <= 1e-10;

    // ||C*^{(x)2}(F)||_inf <= d_A tr J(C)^2 as printed, on a random CP map
    const ComplexMatrix g = random_ginibre(d_in * d_out, 1 + t % 4, eng);
    ComplexMatrix j = g * g.adjoint();
    j /= j.trace().real();
    const Channel c(j, d_in, d_out, false);
    const double lhs = operator_norm(c.adjoint_tensor2_apply(swap_operator(d_out)));
    const double rhs = d_in * (j * j).trace().real();
    lemma7 += lhs <= rhs + 1e-8;
    lemma7_ratio = std::max(lemma7_ratio, lhs / rhs);

    const int m = 2 + t % 3;
    ComplexVector phi = ComplexVector::Zero(m * m);
    for (int i = 0; i < m; ++i) phi(i * m + i) = 1.0 / std::sqrt(static_cast<double>(m));
    const ComplexMatrix id = ComplexMatrix::Identity(m, m);
    const ComplexMatrix u = sample_haar(m, eng), up = sample_haar(m, eng);
    const ComplexMatrix w = sample_haar(m, eng), wp = sample_haar(m, eng);
    auto dist = [&](const ComplexMatrix& a, const ComplexMatrix& b) {
      return (kron(a - b, id) * phi).norm();
    };
    chain += dist(u * up, w * wp) <= dist(u, w) + dist(up, wp) + 1e-10;
  }
  v.detail << " CJ " << cj << "/50, swap " << swap << "/50, adjoint-swap bound " << lemma7
           << "/50 (max lhs/rhs " << lemma7_ratio << "), chain rule " << chain << "/50";
  v.require(cj == 50, "CJ roundtrip");
  v.require(swap == 50, "swap trick");
  v.require(lemma7 == 50, "||C*(x)2(F)||_inf <= d_A tr J(C)^2");
  v.require(chain == 50, "chain rule");
}

void corollary6(Verdict& v) {
  const double eps = 0.25;
  const int ell = 2, d_a = 16;
  Engine eng = make_engine({700, 0});
  const QuantumState rho = random_pure_state(d_a, 4, eng);
  const double h = h_min_cond(rho, kAB).value;
  const double threshold = corollary6_threshold(h, d_a, ell, eps);
  int d_a1 = 0;
  for (int cand = 1; cand <= d_a; cand *= 2) {
    if (std::log2(cand) <= threshold) d_a1 = cand;
  }
  v.detail << " H_min(A|R)=" << h << " threshold=" << threshold << " d_A1=" << d_a1;
  if (d_a1 < 1) {
    v.require(false, "no admissible d_A1");
    return;
  }
  const DecouplingInstance inst{rho, partial_trace_channel({d_a1, d_a / d_a1}, {1}), d_ell(ell),
                                kSamples, {701, 0}};
  const McResult mc = mc_decoupling(inst);
  v.detail << " mean=" << mc.error.mean << " std=" << mc.error.std_error << " 9eps=" << 9 * eps;
  v.require(mc.error.mean <= 9.0 * eps + 3.0 * mc.error.std_error, "mean <= 9 eps + 3 std");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
      {"lemma 5 decomposition", lemma5},
      {"design diamond-norm interval", design_interval},
      {"proposition 1 exact and sampled", prop1},
      {"theorem 4 bound", theorem4},
      {"jensen and exact kernel", jensen},
      {"entropy oracles", entropy_oracles},
      {"twirl correctness", twirls},
      {"concentration tail", concentration},
      {"appendix property suite", appendix_properties},
      {"corollary 6 end-to-end", corollary6},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " [exception: " << e.what() << "]";
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !v.pass;
    std::printf("criterion %zu %s: %s (%.1f s)%s\n", i + 1, criteria[i].first.c_str(),
                v.pass ? "PASS" : "FAIL", secs, v.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed ? 1 : 0;
}
