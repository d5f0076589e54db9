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

#include "declab/decoupling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <regex>
#include <stdexcept>

namespace declab {

std::string ensemble_name(const Ensemble& e) {
  switch (e.kind) {
    case EnsembleKind::haar:
      return "haar";
    case EnsembleKind::d_ell:
      return "d_ell(" + std::to_string(e.ell) + ")";
    case EnsembleKind::rqc:
      return "rqc(" + std::to_string(e.length) + ")";
    case EnsembleKind::diag_zx_once:
      return "diag_zx_once";
  }
  return "unknown";
}

Ensemble parse_ensemble(const std::string& text) {
  static const std::regex with_arg(R"(^\s*(d_ell|rqc)\s*\(\s*(\d{1,6})\s*\)\s*$)");
  std::smatch m;
  Ensemble e;
  if (std::regex_match(text, m, with_arg)) {
    const int v = std::stoi(m[2]);
    if (m[1] == "d_ell") {
      if (v < 1) throw std::invalid_argument("ensemble d_ell needs ell >= 1");
      e.kind = EnsembleKind::d_ell;
      e.ell = v;
    } else {
      e.kind = EnsembleKind::rqc;
      e.length = v;
    }
    return e;
  }
  if (text == "haar") return e;
  if (text == "diag_zx_once") {
    e.kind = EnsembleKind::diag_zx_once;
    return e;
  }
  throw std::invalid_argument("unknown ensemble '" + text +
                              "' (expected haar, d_ell(L), rqc(L) or diag_zx_once)");
}

ComplexMatrix sample_ensemble(const Ensemble& e, int n_qubits, Engine& eng) {
  const int d = 1 << n_qubits;
  switch (e.kind) {
    case EnsembleKind::haar:
      return sample_haar(d, eng);
    case EnsembleKind::d_ell:
      return sample_d_ell(n_qubits, e.ell, eng).matrix();
    case EnsembleKind::rqc:
      return sample_rqc(n_qubits, e.length, eng);
    case EnsembleKind::diag_zx_once: {
      const DiagUnitary z = sample_diag(Basis::Z, d, eng);
      const DiagUnitary x = sample_diag(Basis::X, d, eng);
      return x.matrix() * z.matrix();
    }
  }
  throw std::logic_error("sample_ensemble: unhandled ensemble");
}

QuantumState prop1_state(int d1, int d2) {
  if (!is_power_of_two(d1) || !is_power_of_two(d2)) {
    throw DimensionError("prop1_state: dimensions must be powers of two");
  }
  ComplexMatrix zero = ComplexMatrix::Zero(d2, d2);
  zero(0, 0) = 1.0;
  // Phi_{A1 R} (x) |0><0|_{A2} is ordered A1 R A2; move A2 next to A1.
  const ComplexMatrix a1_r_a2 = kron(max_entangled(d1).matrix(), zero);
  ComplexMatrix ordered = permute_subsystems(a1_r_a2, {d1, d1, d2}, {0, 2, 1});
  return QuantumState(std::move(ordered), {d1 * d2, d1});
}

DecouplingInstance prop1_instance(int d1, int d2, const Ensemble& e, int samples,
                                  const RngSpec& rng) {
  return DecouplingInstance{prop1_state(d1, d2), partial_trace_channel({d1, d2}, {1}), e,
                            samples, rng};
}

QuantumState random_pure_state(int d_a, int d_r, Engine& eng) {
  const ComplexVector v = random_pure_vector(d_a * d_r, eng);
  return QuantumState(v * v.adjoint(), {d_a, d_r});
}

namespace {

void check_instance(const DecouplingInstance& inst) {
  const Dims& dims = inst.rho_ar.dims();
  if (dims.size() != 2) throw DimensionError("decoupling: rho_AR must have dims (d_A, d_R)");
  if (dims[0] != inst.channel.d_in()) {
    throw DimensionError("decoupling: channel input dimension " +
                         std::to_string(inst.channel.d_in()) + " != d_A " +
                         std::to_string(dims[0]));
  }
}

}  // namespace

DecouplingEvaluator::DecouplingEvaluator(const DecouplingInstance& inst)
    : channel_(inst.channel), rho_(inst.rho_ar.matrix()) {
  check_instance(inst);
  d_a_ = inst.rho_ar.dims()[0];
  d_r_ = inst.rho_ar.dims()[1];
  const int d_b = channel_.d_out();
  const ComplexMatrix tau_b = partial_trace(channel_.choi(), {d_a_, d_b}, {0});
  const ComplexMatrix rho_r = partial_trace(rho_, {d_a_, d_r_}, {0});
  target_ = kron(tau_b, rho_r);
}

double DecouplingEvaluator::error(const ComplexMatrix& u) const {
  if (u.rows() != d_a_ || u.cols() != d_a_) {
    throw DimensionError("error_of_unitary: unitary must act on A");
  }
  const ComplexMatrix full = kron(u, ComplexMatrix::Identity(d_r_, d_r_));
  const ComplexMatrix rotated = full * rho_ * full.adjoint();
  const ComplexMatrix out = channel_.apply_on_first(hermitian_part(rotated), d_r_);
  return trace_norm(hermitian_part(out - target_));
}

double error_of_unitary(const DecouplingInstance& inst, const ComplexMatrix& u) {
  return DecouplingEvaluator(inst).error(u);
}

double pairwise_sum(const double* values, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += values[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values, half) + pairwise_sum(values + half, n - half);
}

SampleStats summarize(const std::vector<double>& values) {
  SampleStats st;
  st.n = values.size();
  if (st.n == 0) return st;
  st.mean = pairwise_sum(values.data(), st.n) / static_cast<double>(st.n);
  if (st.n < 2) return st;
  std::vector<double> dev(st.n);
  for (std::size_t i = 0; i < st.n; ++i) dev[i] = (values[i] - st.mean) * (values[i] - st.mean);
  const double var = pairwise_sum(dev.data(), st.n) / static_cast<double>(st.n - 1);
  st.std_error = std::sqrt(var / static_cast<double>(st.n));
  return st;
}

McResult mc_decoupling(const DecouplingInstance& inst) {
  if (inst.samples < 2) throw std::invalid_argument("mc_decoupling: samples must be >= 2");
  const DecouplingEvaluator eval(inst);
  const int n_qubits = log2_exact(eval.d_a());
  McResult res;
  res.samples.resize(inst.samples);
  for (int i = 0; i < inst.samples; ++i) {
    Engine eng = make_engine({inst.rng.master_seed, inst.rng.stream_index + i});
    res.samples[i] = eval.error(sample_ensemble(inst.ensemble, n_qubits, eng));
  }
  std::vector<double> sq(res.samples.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = res.samples[i] * res.samples[i];
  res.error = summarize(res.samples);
  res.squared_error = summarize(sq);
  return res;
}

double contract_pair(const ComplexMatrix& rho, int d_a, int d_r, const ComplexMatrix& m,
                     const ComplexMatrix& n) {
  const int da2 = d_a * d_a, dr2 = d_r * d_r;
  if (rho.rows() != d_a * d_r || rho.cols() != d_a * d_r || m.rows() != da2 ||
      m.cols() != da2 || n.rows() != dr2 || n.cols() != dr2) {
    throw DimensionError("contract_pair: inconsistent sizes");
  }
  // q[a * d_a + b](l, k) = sum_{ij} rho_ab(i, j) n[(j, l), (i, k)]
  std::vector<ComplexMatrix> q(static_cast<std::size_t>(da2));
  for (int a = 0; a < d_a; ++a) {
    for (int b = 0; b < d_a; ++b) {
      const auto x = rho.block(a * d_r, b * d_r, d_r, d_r);
      ComplexMatrix qab = ComplexMatrix::Zero(d_r, d_r);
      for (int i = 0; i < d_r; ++i) {
        for (int j = 0; j < d_r; ++j) {
          const Complex xij = x(i, j);
          if (xij == Complex(0.0)) continue;
          for (int l = 0; l < d_r; ++l) {
            for (int k = 0; k < d_r; ++k) qab(l, k) += xij * n(j * d_r + l, i * d_r + k);
          }
        }
      }
      q[a * d_a + b] = std::move(qab);
    }
  }
  Complex total = 0.0;
  for (int a = 0; a < d_a; ++a) {
    for (int ap = 0; ap < d_a; ++ap) {
      for (int b = 0; b < d_a; ++b) {
        for (int bp = 0; bp < d_a; ++bp) {
          const Complex w = m(b * d_a + bp, a * d_a + ap);
          if (w == Complex(0.0)) continue;
          const auto y = rho.block(ap * d_r, bp * d_r, d_r, d_r);
          total += w * (q[a * d_a + b].transpose().array() * y.array()).sum();
        }
      }
    }
  }
  return total.real();
}

namespace {

void guard_doubled_space(int d, const char* what) {
  const long long n = static_cast<long long>(d) * d;
  if (n * n > kMomentEntryLimit) {
    throw DimensionError(std::string(what) + ": d = " + std::to_string(d) +
                         " exceeds the 2^24 entry limit on d^2 x d^2 operators");
  }
}

ComplexMatrix weighted_swap_image(const Channel& ch, const ComplexMatrix& sigma) {
  const int d = ch.d_out();
  const ComplexMatrix q = pinv_quarter_root(sigma);
  const ComplexMatrix qq = kron(q, q);
  return ch.adjoint_tensor2_apply(qq * swap_operator(d) * qq);
}

}  // namespace

SquareBoundTerms square_bound_terms(const DecouplingInstance& inst,
                                    const std::optional<ComplexMatrix>& sigma_b,
                                    const std::optional<ComplexMatrix>& sigma_r) {
  check_instance(inst);
  const int d_a = inst.rho_ar.dims()[0];
  const int d_r = inst.rho_ar.dims()[1];
  const int d_b = inst.channel.d_out();
  guard_doubled_space(d_a, "exact_square_bound");
  guard_doubled_space(d_b, "exact_square_bound");
  guard_doubled_space(d_r, "exact_square_bound");

  SquareBoundTerms t;
  t.d_a = d_a;
  t.sigma_b = sigma_b ? *sigma_b
                      : *h_2_cond(BipartiteMatrix{inst.channel.choi(), d_a, d_b}).optimizer;
  t.sigma_r = sigma_r ? *sigma_r
                      : *h_2_cond(BipartiteMatrix{inst.rho_ar.matrix(), d_a, d_r}).optimizer;
  if (t.sigma_b.rows() != d_b || t.sigma_r.rows() != d_r) {
    throw DimensionError("exact_square_bound: sigma has the wrong size");
  }
  const Channel enc(inst.rho_ar.matrix(), d_a, d_r, false);
  t.m = weighted_swap_image(inst.channel, t.sigma_b);
  t.n = weighted_swap_image(enc, t.sigma_r);
  t.xi = max_entangled(d_a).matrix() -
         ComplexMatrix::Identity(d_a * d_a, d_a * d_a) / static_cast<double>(d_a * d_a);
  return t;
}

double exact_square_bound(const SquareBoundTerms& terms, int ell) {
  if (ell < 1) throw std::invalid_argument("exact_square_bound: ell must be >= 1");
  return contract_pair(terms.xi, terms.d_a, terms.d_a, apply_r_pow(terms.m, ell), terms.n);
}

double haar_square_kernel(const SquareBoundTerms& terms) {
  return contract_pair(terms.xi, terms.d_a, terms.d_a, twirl2_haar(terms.m), terms.n);
}

double exact_square_bound(const DecouplingInstance& inst, int ell,
                          const std::optional<ComplexMatrix>& sigma_b,
                          const std::optional<ComplexMatrix>& sigma_r) {
  return exact_square_bound(square_bound_terms(inst, sigma_b, sigma_r), ell);
}

std::string bound_name(BoundKind k) {
  switch (k) {
    case BoundKind::haar_eq8:
      return "haar_eq8";
    case BoundKind::two_design_eq9:
      return "two_design_eq9";
    case BoundKind::rqc_eq10:
      return "rqc_eq10";
    case BoundKind::theorem4_h2:
      return "theorem4_h2";
    case BoundKind::theorem4_smooth:
      return "theorem4_smooth";
    case BoundKind::theorem5_tail:
      return "theorem5_tail";
  }
  return "unknown";
}

BoundKind parse_bound(const std::string& text) {
  for (BoundKind k : {BoundKind::haar_eq8, BoundKind::two_design_eq9, BoundKind::rqc_eq10,
                      BoundKind::theorem4_h2, BoundKind::theorem4_smooth,
                      BoundKind::theorem5_tail}) {
    if (bound_name(k) == text) return k;
  }
  throw std::invalid_argument("unknown bound '" + text + "'");
}

std::vector<std::string> bound_parameters(BoundKind k) {
  switch (k) {
    case BoundKind::haar_eq8:
      return {"h_ar", "h_ab", "epsilon"};
    case BoundKind::two_design_eq9:
      return {"h_ar", "h_ab", "epsilon", "delta", "d_a"};
    case BoundKind::rqc_eq10:
      return {"h_ar", "h_ab", "eta", "n_qubits", "poly_inv"};
    case BoundKind::theorem4_h2:
      return {"h_ar", "h_ab", "d_a", "ell"};
    case BoundKind::theorem4_smooth:
      return {"h_ar", "h_ab", "d_a", "ell", "epsilon"};
    case BoundKind::theorem5_tail:
      return {"d_a", "ell", "eta", "k"};
  }
  return {};
}

double d_ell_coefficient(int d_a, int ell) {
  return std::sqrt(1.0 + 8.0 * std::pow(static_cast<double>(d_a), 2.0 - ell));
}

double concentration_chi(int ell, double k) {
  const double base = 2.0 * ell + 1.0;
  return 1.0 / (2048.0 * base * base * base * std::pow(k, 4) * std::numbers::pi *
                std::numbers::pi);
}

double bound_evaluate(BoundKind which, const std::map<std::string, double>& params) {
  std::vector<std::string> missing;
  for (const auto& name : bound_parameters(which)) {
    if (!params.count(name)) missing.push_back(name);
  }
  if (!missing.empty()) {
    std::string msg = "bound " + bound_name(which) + " is missing parameter(s):";
    for (const auto& m : missing) msg += " " + m;
    throw std::invalid_argument(msg);
  }
  auto get = [&](const char* k) { return params.at(k); };
  auto entropic = [&] { return std::exp2(-0.5 * (get("h_ar") + get("h_ab"))); };
  switch (which) {
    case BoundKind::haar_eq8:
      return entropic() + 12.0 * get("epsilon");
    case BoundKind::two_design_eq9: {
      const double d = get("d_a"), delta = get("delta"), eps = get("epsilon");
      return std::sqrt(1.0 + 4.0 * delta * std::pow(d, 4)) * entropic() + 8.0 * d * delta * eps +
             12.0 * eps;
    }
    case BoundKind::rqc_eq10:
      return std::sqrt(get("poly_inv") + std::exp2(2.0 * get("eta") * get("n_qubits") -
                                                   get("h_ar") - get("h_ab")));
    case BoundKind::theorem4_h2:
    case BoundKind::theorem4_smooth: {
      const double coef = std::sqrt(1.0 + 8.0 * std::pow(get("d_a"), 2.0 - get("ell")));
      const double eps = which == BoundKind::theorem4_smooth ? get("epsilon") : 0.0;
      return coef * entropic() + 12.0 * eps;
    }
    case BoundKind::theorem5_tail: {
      const double chi = concentration_chi(static_cast<int>(std::lround(get("ell"))), get("k"));
      return 2.0 * std::exp(-chi * get("d_a") * std::pow(get("eta"), 4));
    }
  }
  throw std::logic_error("bound_evaluate: unhandled bound");
}

double prop1_exact_second_moment(int d1, int d2) {
  const int d_a = d1 * d2;
  guard_doubled_space(d_a, "prop1_quantities");
  const ComplexMatrix f_then_id =
      kron(swap_operator(d1), ComplexMatrix::Identity(d2 * d2, d2 * d2));
  const ComplexMatrix m = permute_subsystems(f_then_id, {d1, d1, d2, d2}, {0, 2, 1, 3});
  const ComplexMatrix twirled = twirl2_diag(twirl2_diag(m, Basis::X), Basis::Z);
  return contract_pair(prop1_state(d1, d2).matrix(), d_a, d1, twirled, swap_operator(d1));
}

Prop1Record prop1_quantities(int d1, int d2, int samples, const RngSpec& rng,
                             bool with_haar_mc) {
  Prop1Record rec;
  rec.d1 = d1;
  rec.d2 = d2;
  const double da = static_cast<double>(d1) * d2;
  rec.closed_form = 1.0 / d1 + 1.0 / d2 - 1.0 / da;
  rec.lower_bound = (rec.closed_form - 1.0 / (static_cast<double>(d1) * d1)) / std::sqrt(2.0);
  rec.haar_bound = d1 / std::sqrt(static_cast<double>(d2));
  const long long n = static_cast<long long>(d1) * d2 * d1 * d2;
  if (n * n <= kMomentEntryLimit) rec.exact_twirl = prop1_exact_second_moment(d1, d2);

  Ensemble zx;
  zx.kind = EnsembleKind::diag_zx_once;
  const McResult mc = mc_decoupling(prop1_instance(d1, d2, zx, samples, rng));
  rec.mc_mean = mc.error.mean;
  rec.mc_std = mc.error.std_error;
  if (with_haar_mc) {
    rec.haar_mc = mc_decoupling(prop1_instance(d1, d2, Ensemble{}, samples, rng)).error;
  }
  return rec;
}

ConcentrationRecord concentration_experiment(const DecouplingInstance& inst, int ell,
                                             double eta, int samples) {
  if (samples < 1) throw std::invalid_argument("concentration_experiment: samples must be >= 1");
  if (ell < 1) throw std::invalid_argument("concentration_experiment: ell must be >= 1");
  if (eta < 0.0) throw std::invalid_argument("concentration_experiment: eta must be >= 0");
  const DecouplingEvaluator eval(inst);
  const int d_a = eval.d_a();
  const int d_b = inst.channel.d_out();
  ConcentrationRecord rec;
  rec.ell = ell;
  rec.eta = eta;
  rec.samples = samples;
  rec.h_min_ar = h_min_cond(BipartiteMatrix{inst.rho_ar.matrix(), d_a, eval.d_r()}).value;
  rec.h_min_ab = h_min_cond(BipartiteMatrix{inst.channel.choi(), d_a, d_b}).value;
  rec.delta = d_ell_coefficient(d_a, ell) * std::exp2(-0.5 * (rec.h_min_ar + rec.h_min_ab));
  rec.threshold = 2.0 * rec.delta + eta;
  const ComplexMatrix rho_a = partial_trace(inst.rho_ar.matrix(), {d_a, eval.d_r()}, {1});
  rec.k = d_a * operator_norm(rho_a);
  rec.tail_bound = bound_evaluate(
      BoundKind::theorem5_tail,
      {{"d_a", d_a}, {"ell", ell}, {"eta", eta}, {"k", rec.k}});

  const int n_qubits = log2_exact(d_a);
  for (int i = 0; i < samples; ++i) {
    Engine eng = make_engine({inst.rng.master_seed, inst.rng.stream_index + i});
    const ComplexMatrix u = sample_d_ell(n_qubits, ell, eng).matrix();
    if (eval.error(u) > rec.threshold) ++rec.exceed_count;
  }
  rec.empirical_fraction = static_cast<double>(rec.exceed_count) / samples;
  const double p = std::min(rec.tail_bound, 1.0);
  rec.slack = 3.0 * std::sqrt(p * (1.0 - p) / samples);
  rec.pass = rec.empirical_fraction <= rec.tail_bound + rec.slack;
  return rec;
}

}  // namespace declab
