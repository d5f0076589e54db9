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

#include "declab/entropies.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "declab/sdp.hpp"

namespace declab {

Cut parse_cut(const std::string& text) {
  const auto bar = text.find('|');
  if (bar == std::string::npos) {
    throw std::invalid_argument("cut '" + text + "' must look like 0,1|2");
  }
  auto parse_side = [&](const std::string& side) {
    std::vector<int> out;
    std::stringstream ss(side);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto first = item.find_first_not_of(" \t");
      if (first == std::string::npos) continue;
      const auto last = item.find_last_not_of(" \t");
      const std::string tok = item.substr(first, last - first + 1);
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || v < 0) {
        throw std::invalid_argument("cut '" + text + "': bad subsystem index '" + tok + "'");
      }
      out.push_back(v);
    }
    return out;
  };
  Cut cut{parse_side(text.substr(0, bar)), parse_side(text.substr(bar + 1))};
  if (cut.a.empty()) throw std::invalid_argument("cut '" + text + "': A is empty");
  return cut;
}

BipartiteMatrix bipartite_view(const QuantumState& rho, const Cut& cut) {
  const Dims& dims = rho.dims();
  const int k = static_cast<int>(dims.size());
  std::vector<int> keep = cut.a;
  keep.insert(keep.end(), cut.b.begin(), cut.b.end());
  std::vector<bool> used(k, false);
  for (int s : keep) {
    if (s < 0 || s >= k || used[s]) throw DimensionError("cut: invalid or repeated subsystem");
    used[s] = true;
  }
  BipartiteMatrix out;
  for (int s : cut.a) out.d_a *= dims[s];
  for (int s : cut.b) out.d_b *= dims[s];
  out.matrix = rho.marginal(keep).matrix();
  return out;
}

EntropyResult h_min_cond(const QuantumState& rho, const Cut& cut, double gap_tol) {
  return h_min_cond(bipartite_view(rho, cut), gap_tol);
}

EntropyResult h_min_cond(const BipartiteMatrix& rho, double gap_tol) {
  const int da = rho.d_a, db = rho.d_b;
  SdpProblem p;
  p.sense = SdpSense::maximize;
  p.block_sizes = {da * db};
  p.objective = {hermitian_part(rho.matrix)};
  for (int b = 0; b < db; ++b) {
    for (int bp = b; bp < db; ++bp) {
      SdpConstraint re, im;
      for (int a = 0; a < da; ++a) {
        const int r = a * db + b, c = a * db + bp;
        re.entries.push_back({0, r, c, Complex(b == bp ? 1.0 : 0.5, 0.0)});
        if (b != bp) im.entries.push_back({0, r, c, Complex(0.0, -0.5)});
      }
      re.rhs = b == bp ? 1.0 : 0.0;
      p.constraints.push_back(std::move(re));
      if (b != bp) p.constraints.push_back(std::move(im));
    }
  }
  SdpOptions opts;
  opts.gap_tol = gap_tol;
  const SdpSolution sol = solve_sdp(p, opts);
  if (sol.status != SdpStatus::optimal) {
    throw NumericalError(std::string("h_min_cond: solver finished with status ") +
                         status_name(sol.status));
  }
  if (sol.primal_value <= 0.0) throw NumericalError("h_min_cond: zero state");
  EntropyResult res;
  res.value = -std::log2(sol.primal_value);
  const ComplexMatrix y = adjoint_constraints(p, sol.y)[0];
  ComplexMatrix sigma = partial_trace(y, {da, db}, {0}) / static_cast<double>(da);
  sigma = hermitian_part(sigma);
  const double tr = sigma.trace().real();
  if (tr > 0.0) res.optimizer = sigma / tr;
  res.certificate = sol.gap;
  res.iterations = sol.iterations;
  return res;
}

namespace {

// Collision problem restricted to the support of rho_B.
struct CollisionProblem {
  ComplexMatrix rho;   // on A (x) supp(rho_B)
  ComplexMatrix embed; // d_b x r isometry onto supp(rho_B)
  int d_a = 1;
  int r = 1;

  double value(const ComplexMatrix& inv_sqrt) const {
    const ComplexMatrix gamma = kron(ComplexMatrix::Identity(d_a, d_a), inv_sqrt);
    const ComplexMatrix p = rho * gamma;
    return (p.array() * p.transpose().array()).sum().real();
  }
};

// Daleckii-Krein: D(x -> x^{-1/2})(s)[k] in the eigenbasis of s.
ComplexMatrix inv_sqrt_derivative(const Eigh& e, const ComplexMatrix& k) {
  const RealVector& l = e.values;
  const Eigen::Index n = l.size();
  ComplexMatrix kt = e.vectors.adjoint() * k * e.vectors;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double w;
      if (std::abs(l(i) - l(j)) <= 1e-12 * std::max(l(i), l(j))) {
        const double m = 0.5 * (l(i) + l(j));
        w = -0.5 * std::pow(m, -1.5);
      } else {
        w = (1.0 / std::sqrt(l(i)) - 1.0 / std::sqrt(l(j))) / (l(i) - l(j));
      }
      kt(i, j) *= w;
    }
  }
  return e.vectors * kt * e.vectors.adjoint();
}

constexpr double kEigenFloor = 1e-10;

// Projection onto { s : tr s = 1, s >= floor I } in Frobenius norm.
ComplexMatrix project_density(const ComplexMatrix& s) {
  const Eigh e = eigh(hermitian_part(s));
  const Eigen::Index n = e.values.size();
  const double floor = std::min(kEigenFloor, 0.5 / n);
  // Find theta with sum_i max(l_i - theta, floor) = 1 by bisection.
  double lo = e.values.minCoeff() - 1.0, hi = e.values.maxCoeff();
  auto total = [&](double theta) {
    double t = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) t += std::max(e.values(i) - theta, floor);
    return t;
  };
  for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (total(mid) > 1.0 ? lo : hi) = mid;
  }
  const double theta = 0.5 * (lo + hi);
  RealVector lam(n);
  for (Eigen::Index i = 0; i < n; ++i) lam(i) = std::max(e.values(i) - theta, floor);
  lam /= lam.sum();
  return e.vectors * lam.asDiagonal() * e.vectors.adjoint();
}

struct DescentResult {
  double value;
  ComplexMatrix sigma;
  int iterations;
  double last_step;
};

DescentResult descend(const CollisionProblem& cp, ComplexMatrix s, int max_iter) {
  s = project_density(s);
  Eigh e = eigh(s);
  auto inv_sqrt_of = [](const Eigh& eig) {
    return apply_spectral(eig, [](double x) { return 1.0 / std::sqrt(x); });
  };
  ComplexMatrix g_inv = inv_sqrt_of(e);
  double val = cp.value(g_inv);
  double step = 1.0;
  int it = 0;
  double last_step = 0.0;
  for (; it < max_iter; ++it) {
    const ComplexMatrix gamma = kron(ComplexMatrix::Identity(cp.d_a, cp.d_a), g_inv);
    const ComplexMatrix k = partial_trace(cp.rho * gamma * cp.rho, {cp.d_a, cp.r}, {0});
    const ComplexMatrix grad = hermitian_part(2.0 * inv_sqrt_derivative(e, hermitian_part(k)));
    const double gnorm = grad.norm();
    if (gnorm == 0.0) break;
    if (it == 0) step = 0.1 / gnorm;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      const ComplexMatrix trial = project_density(s - step * grad);
      const Eigh te = eigh(trial);
      const ComplexMatrix t_inv = inv_sqrt_of(te);
      const double tv = cp.value(t_inv);
      const double decrease = (grad.conjugate().array() * (trial - s).array()).sum().real();
      if (tv <= val + 1e-4 * decrease && tv < val) {
        last_step = (trial - s).norm();
        const bool tiny = val - tv <= 1e-15 * std::max(1.0, val);
        s = trial;
        e = te;
        g_inv = t_inv;
        val = tv;
        step *= 2.0;
        accepted = !tiny;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  return {val, s, it, last_step};
}

CollisionProblem restrict_to_support(const BipartiteMatrix& rho) {
  const ComplexMatrix rho_b = partial_trace(rho.matrix, {rho.d_a, rho.d_b}, {0});
  const Eigh e = eigh(rho_b);
  const double cut = kPsdTolerance * std::max(1.0, e.values.maxCoeff());
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    if (e.values(i) > cut) cols.push_back(i);
  }
  if (cols.empty()) throw NumericalError("h_2_cond: zero state");
  CollisionProblem cp;
  cp.d_a = rho.d_a;
  cp.r = static_cast<int>(cols.size());
  cp.embed.resize(rho.d_b, cp.r);
  for (int j = 0; j < cp.r; ++j) cp.embed.col(j) = e.vectors.col(cols[j]);
  const ComplexMatrix lift = kron(ComplexMatrix::Identity(rho.d_a, rho.d_a), cp.embed);
  cp.rho = hermitian_part(lift.adjoint() * rho.matrix * lift);
  return cp;
}

}  // namespace

double collision_term(const BipartiteMatrix& rho, const ComplexMatrix& sigma) {
  if (sigma.rows() != rho.d_b || sigma.cols() != rho.d_b) {
    throw DimensionError("collision_term: sigma has the wrong size");
  }
  const ComplexMatrix q = pinv_quarter_root(sigma);
  const ComplexMatrix gamma = kron(ComplexMatrix::Identity(rho.d_a, rho.d_a), q);
  const ComplexMatrix t = gamma * rho.matrix * gamma;
  return (t.array() * t.transpose().array()).sum().real();
}

EntropyResult h_2_cond(const QuantumState& rho, const Cut& cut, CollisionMode mode) {
  return h_2_cond(bipartite_view(rho, cut), mode);
}

EntropyResult h_2_cond(const BipartiteMatrix& rho, CollisionMode mode) {
  const CollisionProblem cp = restrict_to_support(rho);
  ComplexMatrix plugin = cp.embed.adjoint() *
                         partial_trace(rho.matrix, {rho.d_a, rho.d_b}, {0}) * cp.embed;
  plugin = hermitian_part(plugin / plugin.trace().real());

  EntropyResult res;
  DescentResult best = descend(cp, plugin, 0);
  if (mode == CollisionMode::optimized) {
    constexpr int kMaxIterations = 200;
    const DescentResult from_plugin = descend(cp, plugin, kMaxIterations);
    const DescentResult from_uniform = descend(
        cp, ComplexMatrix::Identity(cp.r, cp.r) / static_cast<double>(cp.r), kMaxIterations);
    for (const auto* cand : {&from_plugin, &from_uniform}) {
      if (cand->value < best.value) best = *cand;
    }
    res.iterations = from_plugin.iterations + from_uniform.iterations;
    res.certificate = best.last_step;
  }
  res.value = -std::log2(best.value);
  res.optimizer = hermitian_part(cp.embed * best.sigma * cp.embed.adjoint());
  return res;
}

double h_0(const ComplexMatrix& rho) {
  const Eigh e = eigh(rho);
  const double cut = 1e-10 * static_cast<double>(rho.rows());
  int rank = 0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) rank += e.values(i) > cut;
  if (rank == 0) throw NumericalError("h_0: zero operator");
  return std::log2(static_cast<double>(rank));
}

double h_0(const QuantumState& rho) { return h_0(rho.matrix()); }

double h_max(const ComplexMatrix& rho) {
  const Eigh e = eigh(rho);
  const double cut = 1e-10 * static_cast<double>(rho.rows());
  double s = 0.0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    if (e.values(i) > cut) s += std::sqrt(e.values(i));
  }
  if (s <= 0.0) throw NumericalError("h_max: zero operator");
  return 2.0 * std::log2(s);
}

double h_max(const QuantumState& rho) { return h_max(rho.matrix()); }

double h_min(const ComplexMatrix& rho) {
  const double top = eigh(rho).values.maxCoeff();
  if (top <= 0.0) throw NumericalError("h_min: zero operator");
  return -std::log2(top);
}

double purified_distance(const QuantumState& rho, const QuantumState& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("purified_distance: size mismatch");
  const double fid = trace_norm(sqrt_psd(rho.matrix()) * sqrt_psd(sigma.matrix()));
  const double slack = std::max(0.0, (1.0 - rho.trace()) * (1.0 - sigma.trace()));
  const double f = std::min(1.0, fid + std::sqrt(slack));
  return std::sqrt(std::max(0.0, 1.0 - f * f));
}

}  // namespace declab
