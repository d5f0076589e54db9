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

#include "declab/cli/runner.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "declab/applications.hpp"
#include "declab/decoupling.hpp"
#include "declab/diamond.hpp"
#include "declab/entropies.hpp"
#include "declab/io.hpp"
#include "declab/random_unitaries.hpp"

namespace declab::cli {

namespace {

using S = Subcommand;

const double kNan = std::nan("");

std::string fmt(double x) { return format_real(x); }
std::string fmt(bool b) { return b ? "true" : "false"; }
std::string fmt(const std::optional<double>& x) { return format_real(x ? *x : kNan); }

class Csv {
 public:
  explicit Csv(std::ostream& os) : os_(os) {}
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
    os_ << '\n';
  }

 private:
  std::ostream& os_;
};

std::vector<std::string> header_cells(S s) {
  switch (s) {
    case S::decouple_mc:
    case S::decouple_exact:
      return {"instance_id", "ensemble",   "ell",
              "samples",     "seed",       "mean_error",
              "std_error",   "bound_theorem4", "bound_haar",
              "exact_square_bound", "lambda_rate"};
    case S::design_delta:
      return {"n_qubits", "ell", "diamond_norm", "dual_value", "interval_lo", "interval_hi",
              "status", "iterations", "pass"};
    case S::moments_lemma5:
      return {"n_qubits", "ell", "p_ell", "p_ell_exact", "min_choi_eigenvalue", "trace_residual",
              "unital_residual", "decomposition_residual", "pass"};
    case S::entropy:
      return {"quantity", "d_a", "d_b", "value", "certificate", "iterations"};
    case S::prop1:
      return {"d1", "d2", "closed_form", "exact_twirl", "mc_mean", "mc_std", "lower_bound",
              "haar_bound", "haar_mc_mean", "haar_mc_std", "samples", "seed", "pass"};
    case S::apps_merging:
      return {"ell", "delta", "delta_prime", "merging_epsilon", "h_min_ar", "h_0_a", "e_gain",
              "q_cost", "cor6_epsilon", "cor6_threshold", "surrogate", "seed"};
    case S::apps_therm:
      return {"d_s", "d_e", "d_r", "ell", "eps1", "eps2", "eps3", "delta_target",
              "h_min_se_given_r", "h_min_e", "h_max_s", "lhs", "rhs", "satisfied", "k",
              "fraction_bound", "surrogate", "seed"};
  }
  return {};
}

Engine instance_engine(const ExperimentConfig& c) {
  return make_engine({c.get_seed(), kInstanceStream});
}

int as_int(const ExperimentConfig& c, const char* key, long long fallback) {
  return static_cast<int>(c.get_int(key, fallback));
}

QuantumState load_state(const ExperimentConfig& c) {
  return QuantumState(load_matrix(c.get_string("state_file", "")), c.get_dims("dims"));
}

struct BuiltInstance {
  DecouplingInstance inst;
  std::string id;
};

BuiltInstance build_decoupling(const ExperimentConfig& c, const Ensemble& e, int samples) {
  const RngSpec rng{c.get_seed(), 0};
  const std::string kind = c.get_string("instance", "prop1");
  if (kind == "prop1") {
    const int d1 = as_int(c, "d1", 2), d2 = as_int(c, "d2", 2);
    return {prop1_instance(d1, d2, e, samples, rng),
            c.get_string("instance_id",
                         "prop1_" + std::to_string(d1) + "x" + std::to_string(d2))};
  }
  std::optional<QuantumState> rho;
  std::string id;
  if (kind == "random_pure") {
    const int n = as_int(c, "n_qubits", 1);
    Engine eng = instance_engine(c);
    rho = random_pure_state(1 << n, as_int(c, "d_r", 1), eng);
    id = "random_pure_n" + std::to_string(n) + "_r" + std::to_string(as_int(c, "d_r", 1));
  } else {
    rho = load_state(c);
    id = "file";
  }
  const int d_a = rho->dims()[0];
  if (!is_power_of_two(d_a)) throw DimensionError("d_A must be a power of two");
  const std::string ch = c.get_string("channel", "partial_trace");
  std::optional<Channel> channel;
  if (ch == "identity") {
    channel = identity_channel(d_a);
  } else if (ch == "depolarizing") {
    channel = depolarizing_channel(d_a, c.get_real("depolarizing_p", 0.5));
  } else {
    const int d_b = as_int(c, "d_b", 1);
    if (d_a % d_b != 0) {
      throw DimensionError("d_b = " + std::to_string(d_b) + " does not divide d_A = " +
                           std::to_string(d_a));
    }
    channel = partial_trace_channel({d_b, d_a / d_b}, {1});
  }
  return {DecouplingInstance{*rho, *channel, e, samples, rng}, c.get_string("instance_id", id)};
}

int run_decouple(const ExperimentConfig& c, RunIo& io, bool with_mc) {
  Ensemble e;
  const std::string ens_text = c.get_string("ensemble", "d_ell");
  if (ens_text == "d_ell") {
    e.kind = EnsembleKind::d_ell;
    e.ell = as_int(c, "ell", 1);
  } else {
    e = parse_ensemble(ens_text);
  }
  const int ell = e.kind == EnsembleKind::d_ell ? e.ell : as_int(c, "ell", 1);
  const int samples = with_mc ? as_int(c, "samples", 1000) : 0;

  const BuiltInstance b = build_decoupling(c, e, std::max(samples, 2));
  const DecouplingInstance& inst = b.inst;
  const int d_a = inst.rho_ar.dims()[0], d_r = inst.rho_ar.dims()[1];
  const int d_b = inst.channel.d_out();

  if (io.circuits) {
    if (!with_mc || e.kind != EnsembleKind::d_ell) {
      throw std::invalid_argument("--dump-circuits needs decouple-mc with a d_ell ensemble");
    }
    const int n = log2_exact(d_a);
    for (int i = 0; i < samples; ++i) {
      Engine eng = make_engine({inst.rng.master_seed, inst.rng.stream_index + i});
      write_circuit(*io.circuits, sample_d_ell(n, ell, eng), static_cast<std::uint64_t>(i));
    }
  }

  const BipartiteMatrix ar{inst.rho_ar.matrix(), d_a, d_r};
  const BipartiteMatrix ab{inst.channel.choi(), d_a, d_b};
  const EntropyResult h2_ar = h_2_cond(ar), h2_ab = h_2_cond(ab);
  const double theorem4 =
      bound_evaluate(BoundKind::theorem4_h2,
                     {{"h_ar", h2_ar.value}, {"h_ab", h2_ab.value}, {"d_a", d_a}, {"ell", ell}});
  const double haar = bound_evaluate(
      BoundKind::haar_eq8,
      {{"h_ar", h_min_cond(ar).value}, {"h_ab", h_min_cond(ab).value}, {"epsilon", 0.0}});
  std::optional<double> exact;
  try {
    exact = exact_square_bound(inst, ell, h2_ab.optimizer, h2_ar.optimizer);
  } catch (const DimensionError&) {
    // beyond the memory guard: column stays nan
  }

  SampleStats stats{kNan, kNan, 0};
  if (with_mc) stats = mc_decoupling(inst).error;

  bool pass = true;
  std::string checks;
  if (with_mc && e.kind == EnsembleKind::d_ell) {
    pass = stats.mean <= theorem4 + 3.0 * stats.std_error;
    checks = "mean <= theorem4 + 3 std";
    if (exact) {
      pass = pass && stats.mean * stats.mean <= *exact + 3.0 * 2.0 * stats.mean * stats.std_error;
      checks += ", mean^2 <= exact square bound + 3 err";
    }
  } else if (with_mc && e.kind == EnsembleKind::haar) {
    pass = stats.mean <= haar + 3.0 * stats.std_error;
    checks = "mean <= haar bound + 3 std";
  } else if (!with_mc && exact) {
    pass = *exact <= theorem4 * theorem4 * (1.0 + 1e-9);
    checks = "exact square bound <= theorem4^2";
  }

  Csv csv(io.csv);
  csv.row(header_cells(c.subcommand));
  csv.row({b.id, with_mc ? ensemble_name(e) : "none", std::to_string(ell),
           std::to_string(samples), std::to_string(c.get_seed()), fmt(stats.mean),
           fmt(stats.std_error), fmt(theorem4), fmt(haar), fmt(exact), fmt(-std::log2(theorem4))});
  io.summary << subcommand_name(c.subcommand) << " " << b.id << " ell=" << ell;
  if (with_mc) io.summary << " mean=" << stats.mean << " +- " << stats.std_error;
  io.summary << " theorem4=" << theorem4 << " haar=" << haar;
  if (exact) io.summary << " exact_sq=" << *exact;
  io.summary << (checks.empty() ? " (no certified bound checked)" : " [" + checks + "]") << " "
             << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitOk : kExitViolation;
}

int run_design_delta(const ExperimentConfig& c, RunIo& io) {
  const int n = as_int(c, "n_qubits", 1), ell = as_int(c, "ell", 1);
  const MomentSuperOp r = map_r_pow(n, ell);
  const MomentSuperOp h = map_twirl_haar(n);
  const int dd = r.d * r.d;
  const DiamondNormResult res = diamond_norm_detailed(superop_to_choi(r.matrix - h.matrix, dd, dd),
                                                      dd, dd, c.get_real("gap_tol", 1e-7));
  const double scale = 2.0 * std::exp2(-static_cast<double>(ell) * n);
  const double tail = 1.0 / (std::exp2(n) - 1.0);
  const double lo = scale * (1.0 - tail), hi = scale * (1.0 + 2.0 * tail);
  const bool pass =
      res.status == SdpStatus::optimal && res.value >= lo - 1e-6 && res.value <= hi + 1e-6;
  Csv csv(io.csv);
  csv.row(header_cells(c.subcommand));
  csv.row({std::to_string(n), std::to_string(ell), fmt(res.value), fmt(res.dual_value), fmt(lo),
           fmt(hi), status_name(res.status), std::to_string(res.iterations), fmt(pass)});
  io.summary << "design-delta N=" << n << " ell=" << ell << " diamond=" << res.value << " in ["
             << lo << ", " << hi << "] " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitOk : kExitViolation;
}

int run_lemma5(const ExperimentConfig& c, RunIo& io) {
  const int n = as_int(c, "n_qubits", 1), ell = as_int(c, "ell", 1);
  const Lemma5Result r = lemma5_decompose(n, ell);
  const bool pass = r.min_choi_eigenvalue >= -1e-9 && r.trace_residual <= 1e-9 &&
                    r.unital_residual <= 1e-9;
  Csv csv(io.csv);
  csv.row(header_cells(c.subcommand));
  csv.row({std::to_string(n), std::to_string(ell), fmt(r.p_ell), r.p_ell_exact,
           fmt(r.min_choi_eigenvalue), fmt(r.trace_residual), fmt(r.unital_residual),
           fmt(r.decomposition_residual), fmt(pass)});
  io.summary << "moments-lemma5 N=" << n << " ell=" << ell << " p=" << r.p_ell_exact
             << " min_eig=" << r.min_choi_eigenvalue << " " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitOk : kExitViolation;
}

int run_entropy(const ExperimentConfig& c, RunIo& io) {
  const QuantumState rho = load_state(c);
  const Cut cut = parse_cut(c.get_string("cut", ""));
  const std::string q = c.get_string("quantity", "h_min");
  const double gap_tol = c.get_real("gap_tol", 1e-7);
  const BipartiteMatrix view = bipartite_view(rho, cut);
  EntropyResult res;
  if (q == "h_min") {
    res = h_min_cond(view, gap_tol);
  } else if (q == "h_2") {
    res = h_2_cond(view, CollisionMode::optimized);
  } else if (q == "h_2_plugin") {
    res = h_2_cond(view, CollisionMode::plugin);
  } else {
    const ComplexMatrix rho_a = partial_trace(view.matrix, {view.d_a, view.d_b}, {1});
    res.value = q == "h_0" ? h_0(rho_a) : h_max(rho_a);
  }
  if (c.has("optimizer_out")) {
    if (!res.optimizer) throw std::invalid_argument("quantity " + q + " has no optimizer");
    save_matrix(c.get_string("optimizer_out", ""), *res.optimizer);
  }
  Csv csv(io.csv);
  csv.row(header_cells(c.subcommand));
  csv.row({q, std::to_string(view.d_a), std::to_string(view.d_b), fmt(res.value),
           fmt(res.certificate), std::to_string(res.iterations)});
  io.summary << "entropy " << q << " = " << res.value << " bits\n";
  return kExitOk;
}

int run_prop1(const ExperimentConfig& c, RunIo& io) {
  const int d1 = as_int(c, "d1", 2), d2 = as_int(c, "d2", 2);
  const int samples = as_int(c, "samples", 1000);
  const Prop1Record r =
      prop1_quantities(d1, d2, samples, {c.get_seed(), 0}, c.get_bool("haar_mc", false));
  bool pass = r.mc_mean >= r.lower_bound - 3.0 * r.mc_std;
  if (r.exact_twirl) pass = pass && std::abs(*r.exact_twirl - r.closed_form) <= 1e-9;
  if (r.haar_mc) pass = pass && r.haar_mc->mean <= r.haar_bound + 3.0 * r.haar_mc->std_error;
  Csv csv(io.csv);
  csv.row(header_cells(c.subcommand));
  csv.row({std::to_string(d1), std::to_string(d2), fmt(r.closed_form), fmt(r.exact_twirl),
           fmt(r.mc_mean), fmt(r.mc_std), fmt(r.lower_bound), fmt(r.haar_bound),
           fmt(r.haar_mc ? r.haar_mc->mean : kNan), fmt(r.haar_mc ? r.haar_mc->std_error : kNan),
           std::to_string(samples), std::to_string(c.get_seed()), fmt(pass)});
  io.summary << "prop1 " << d1 << "x" << d2 << " closed=" << r.closed_form
             << " mc=" << r.mc_mean << " +- " << r.mc_std << " lower=" << r.lower_bound << " "
             << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitOk : kExitViolation;
}

int run_merging(const ExperimentConfig& c, RunIo& io) {
  std::optional<QuantumState> psi;
  if (c.get_string("instance", "random_pure") == "file") {
    psi = load_state(c);
  } else {
    const int d_a = as_int(c, "d_a", 1), d_b = as_int(c, "d_b", 1), d_r = as_int(c, "d_r", 1);
    Engine eng = instance_engine(c);
    const ComplexVector v = random_pure_vector(d_a * d_b * d_r, eng);
    psi.emplace(v * v.adjoint(), Dims{d_a, d_b, d_r});
  }
  const int ell = as_int(c, "ell", 1);
  const MergingRates r = merging_rates(*psi, ell, c.get_real("delta", 0.1));
  const double eps = c.get_real("epsilon", 0.25);
  const double thr = corollary6_threshold(r.h_min_ar, psi->dims()[0], ell, eps);
  Csv csv(io.csv);
  csv.row(header_cells(c.subcommand));
  csv.row({std::to_string(ell), fmt(r.delta), fmt(r.delta_prime), fmt(r.epsilon), fmt(r.h_min_ar),
           fmt(r.h_0_a), fmt(r.e_gain), fmt(r.q_cost), fmt(eps), fmt(thr), fmt(r.surrogate),
           std::to_string(c.get_seed())});
  io.summary << "apps-merging (unsmoothed surrogate) e_gain >= " << r.e_gain
             << " q_cost <= " << r.q_cost << " error " << r.epsilon
             << "; partial-trace threshold log2 d_A1 <= " << thr << "\n";
  return kExitOk;
}

int run_therm(const ExperimentConfig& c, RunIo& io) {
  const int d_s = as_int(c, "d_s", 1), d_e = as_int(c, "d_e", 1), d_r = as_int(c, "d_r", 1);
  std::optional<QuantumState> rho;
  if (c.get_string("instance", "mixed") == "file") {
    rho = load_state(c);
  } else {
    Engine eng = instance_engine(c);
    const int d_xi = d_s * d_e;
    rho.emplace(kron(ComplexMatrix::Identity(d_xi, d_xi) / static_cast<double>(d_xi),
                     random_density(d_r, d_r, eng)),
                Dims{d_xi, d_r});
  }
  std::optional<ComplexMatrix> iso;
  if (c.has("isometry_file")) iso = load_matrix(c.get_string("isometry_file", ""));
  const int ell = as_int(c, "ell", 1);
  const double e1 = c.get_real("eps1", 0.0), e2 = c.get_real("eps2", 0.0),
               e3 = c.get_real("eps3", 0.0), dt = c.get_real("delta_target", 1.0);
  const ThermalisationVerdict v = thermalisation_check(*rho, d_s, d_e, d_r, ell, e1, e2, e3, dt, iso);
  Csv csv(io.csv);
  csv.row(header_cells(c.subcommand));
  csv.row({std::to_string(d_s), std::to_string(d_e), std::to_string(d_r), std::to_string(ell),
           fmt(e1), fmt(e2), fmt(e3), fmt(dt), fmt(v.h_min_se_given_r), fmt(v.h_min_e),
           fmt(v.h_max_s), fmt(v.lhs), fmt(v.rhs), fmt(v.satisfied), fmt(v.k),
           fmt(v.fraction_bound), fmt(v.surrogate), std::to_string(c.get_seed())});
  io.summary << "apps-therm (unsmoothed surrogate) lhs=" << v.lhs << " rhs=" << v.rhs
             << (v.satisfied ? " condition met" : " condition not met")
             << ", fraction bound " << v.fraction_bound << "\n";
  return kExitOk;
}

}  // namespace

std::string csv_header(Subcommand s) {
  std::string out;
  for (const std::string& h : header_cells(s)) out += (out.empty() ? "" : ",") + h;
  return out;
}

int run(const ExperimentConfig& cfg, RunIo& io) {
  try {
    switch (cfg.subcommand) {
      case S::decouple_mc: return run_decouple(cfg, io, true);
      case S::decouple_exact: return run_decouple(cfg, io, false);
      case S::design_delta: return run_design_delta(cfg, io);
      case S::moments_lemma5: return run_lemma5(cfg, io);
      case S::entropy: return run_entropy(cfg, io);
      case S::prop1: return run_prop1(cfg, io);
      case S::apps_merging: return run_merging(cfg, io);
      case S::apps_therm: return run_therm(cfg, io);
    }
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace declab::cli
