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

#include "declab/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace declab {

const char* status_name(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal:
      return "optimal";
    case SdpStatus::max_iterations:
      return "max-iterations";
    case SdpStatus::infeasible:
      return "infeasible";
  }
  return "unknown";
}

void SdpProblem::validate() const {
  if (objective.size() != block_sizes.size()) {
    throw DimensionError("SdpProblem: objective/block count mismatch");
  }
  for (std::size_t k = 0; k < block_sizes.size(); ++k) {
    const int n = block_sizes[k];
    if (n < 1 || objective[k].rows() != n || objective[k].cols() != n) {
      throw DimensionError("SdpProblem: objective block " + std::to_string(k) +
                           " has the wrong size");
    }
    if (hermiticity_defect(objective[k]) > 1e-10 * std::max(1.0, max_abs_entry(objective[k]))) {
      throw NumericalError("SdpProblem: objective block " + std::to_string(k) +
                           " is not Hermitian");
    }
  }
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    for (const auto& e : constraints[i].entries) {
      if (e.block < 0 || e.block >= static_cast<int>(block_sizes.size()) || e.row < 0 ||
          e.col < 0 || e.row >= block_sizes[e.block] || e.col >= block_sizes[e.block]) {
        throw DimensionError("SdpProblem: constraint " + std::to_string(i) +
                             " indexes outside its block");
      }
      if (e.row == e.col && std::abs(e.value.imag()) > 1e-10) {
        throw NumericalError("SdpProblem: constraint " + std::to_string(i) +
                             " has a complex diagonal entry");
      }
    }
  }
}

void add_real_part_constraint(SdpProblem& p, int block, int r, int c, double value) {
  SdpConstraint con;
  con.entries.push_back({block, r, c, Complex(r == c ? 1.0 : 0.5, 0.0)});
  con.rhs = value;
  p.constraints.push_back(std::move(con));
}

void add_imag_part_constraint(SdpProblem& p, int block, int r, int c, double value) {
  if (r == c) throw DimensionError("add_imag_part_constraint: diagonal entry");
  SdpConstraint con;
  con.entries.push_back({block, r, c, Complex(0.0, -0.5)});
  con.rhs = value;
  p.constraints.push_back(std::move(con));
}

namespace {

using Blocks = std::vector<ComplexMatrix>;

// Re tr(A X) restricted to one stored entry of A.
inline double entry_pairing(const SdpEntry& e, const ComplexMatrix& x) {
  if (e.row == e.col) return e.value.real() * x(e.row, e.row).real();
  return 2.0 * (e.value * x(e.col, e.row)).real();
}

double inner(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    s += (a[k].conjugate().array() * b[k].array()).real().sum();
  }
  return s;
}

double frobenius(const Blocks& a) { return std::sqrt(std::max(0.0, inner(a, a))); }

Blocks operator_sum(const Blocks& a, double alpha, const Blocks& b) {
  Blocks out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + alpha * b[k];
  return out;
}

struct BlockTerms {
  int constraint;
  std::vector<SdpEntry> entries;
};

struct Scaling {
  ComplexMatrix g;      // X = G V G^dagger, S = G^{-dagger} V G^{-1}
  ComplexMatrix g_inv;
  ComplexMatrix w;      // G G^dagger
  ComplexMatrix x_inv_half;
  ComplexMatrix s_inv_half;
  RealVector v;
};

// Largest alpha in (0, inf] with base + alpha dir PSD, given base^{-1/2}.
double max_step(const ComplexMatrix& base_inv_half, const ComplexMatrix& dir) {
  const ComplexMatrix t = base_inv_half * dir * base_inv_half;
  const double lmin = eigh(hermitian_part(t)).values(0);
  return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

ComplexMatrix inverse_sqrt_of_pd(const ComplexMatrix& m, ComplexMatrix* sqrt_out) {
  const Eigh e = eigh(m);
  if (e.values(0) <= 0.0) {
    throw NumericalError("solve_sdp: iterate lost positive definiteness");
  }
  if (sqrt_out) *sqrt_out = apply_spectral(e, [](double x) { return std::sqrt(x); });
  return apply_spectral(e, [](double x) { return 1.0 / std::sqrt(x); });
}

}  // namespace

Eigen::VectorXd apply_constraints(const SdpProblem& p, const Blocks& x) {
  Eigen::VectorXd out(p.constraints.size());
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    double s = 0.0;
    for (const auto& e : p.constraints[i].entries) s += entry_pairing(e, x[e.block]);
    out(i) = s;
  }
  return out;
}

Blocks adjoint_constraints(const SdpProblem& p, const Eigen::VectorXd& y) {
  Blocks out;
  for (int n : p.block_sizes) out.push_back(ComplexMatrix::Zero(n, n));
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    for (const auto& e : p.constraints[i].entries) {
      out[e.block](e.row, e.col) += y(i) * e.value;
      if (e.row != e.col) out[e.block](e.col, e.row) += y(i) * std::conj(e.value);
    }
  }
  return out;
}

SdpSolution solve_sdp(const SdpProblem& problem, const SdpOptions& opts) {
  problem.validate();
  const std::size_t nb = problem.block_sizes.size();
  const int m = static_cast<int>(problem.constraints.size());
  const double sign = problem.sense == SdpSense::maximize ? -1.0 : 1.0;

  Blocks c(nb);
  for (std::size_t k = 0; k < nb; ++k) c[k] = sign * hermitian_part(problem.objective[k]);
  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) b(i) = problem.constraints[i].rhs;

  // Constraint entries grouped by block, for the Schur complement.
  std::vector<std::vector<BlockTerms>> by_block(nb);
  std::vector<std::vector<std::pair<int, int>>> touched(m);  // (block, slot)
  for (int i = 0; i < m; ++i) {
    for (const auto& e : problem.constraints[i].entries) {
      auto& list = by_block[e.block];
      if (list.empty() || list.back().constraint != i) {
        list.push_back({i, {}});
        touched[i].push_back({e.block, static_cast<int>(list.size()) - 1});
      }
      list.back().entries.push_back(e);
    }
  }

  int n_total = 0;
  for (int n : problem.block_sizes) n_total += n;
  const double norm_b = b.norm();
  const double norm_c = frobenius(c);
  double max_a = 0.0, xi_ratio = 0.0;
  for (int i = 0; i < m; ++i) {
    double na = 0.0;
    for (const auto& e : problem.constraints[i].entries) {
      na += (e.row == e.col ? 1.0 : 2.0) * std::norm(e.value);
    }
    na = std::sqrt(na);
    max_a = std::max(max_a, na);
    xi_ratio = std::max(xi_ratio, (1.0 + std::abs(b(i))) / (1.0 + na));
  }
  const double sqrt_n = std::sqrt(static_cast<double>(n_total));
  const double xi = std::max({10.0, sqrt_n, sqrt_n * xi_ratio});
  const double eta = std::max({10.0, sqrt_n, norm_c, max_a});

  Blocks x(nb), s(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    const int n = problem.block_sizes[k];
    x[k] = xi * ComplexMatrix::Identity(n, n);
    s[k] = eta * ComplexMatrix::Identity(n, n);
  }
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);

  SdpSolution sol;
  int stalled = 0;
  constexpr double kStepFraction = 0.98;

  for (int iter = 0;; ++iter) {
    const Eigen::VectorXd rp = b - apply_constraints(problem, x);
    const Blocks aty = adjoint_constraints(problem, y);
    Blocks rd(nb);
    for (std::size_t k = 0; k < nb; ++k) rd[k] = c[k] - aty[k] - s[k];

    SdpIterate rec;
    rec.primal = inner(c, x);
    rec.dual = b.dot(y);
    rec.primal_infeasibility = rp.norm() / (1.0 + norm_b);
    rec.dual_infeasibility = frobenius(rd) / (1.0 + norm_c);
    rec.complementarity = inner(x, s);
    rec.identity_residual = rec.primal - rec.dual -
                            (rec.complementarity + inner(rd, x) - y.dot(rp));
    sol.history.push_back(rec);
    sol.iterations = iter;

    const double relgap = std::abs(rec.primal - rec.dual) / (1.0 + std::abs(rec.primal));
    if (relgap <= opts.gap_tol && rec.primal_infeasibility <= opts.gap_tol &&
        rec.dual_infeasibility <= opts.gap_tol) {
      sol.status = SdpStatus::optimal;
      break;
    }
    if (std::abs(rec.primal) > 1e12 || std::abs(rec.dual) > 1e12 ||
        !std::isfinite(rec.primal) || !std::isfinite(rec.dual)) {
      sol.status = SdpStatus::infeasible;
      break;
    }
    if (iter >= opts.max_iterations || stalled >= 5) {
      sol.status = SdpStatus::max_iterations;
      break;
    }

    std::vector<Scaling> sc(nb);
    try {
      for (std::size_t k = 0; k < nb; ++k) {
        ComplexMatrix x_half;
        sc[k].x_inv_half = inverse_sqrt_of_pd(x[k], &x_half);
        sc[k].s_inv_half = inverse_sqrt_of_pd(s[k], nullptr);
        const Eigh t = eigh(hermitian_part(x_half * s[k] * x_half));
        if (t.values(0) <= 0.0) throw NumericalError("solve_sdp: degenerate scaling");
        const RealVector lam = t.values;
        sc[k].v = lam.cwiseSqrt();
        const RealVector quarter = lam.array().pow(-0.25);
        sc[k].g = x_half * t.vectors * quarter.asDiagonal();
        sc[k].g_inv = quarter.cwiseInverse().asDiagonal() * t.vectors.adjoint() *
                      sc[k].x_inv_half;
        sc[k].w = sc[k].g * sc[k].g.adjoint();
      }

      // Schur complement M_ij = <A_i, W A_j W>.
      Eigen::MatrixXd schur = Eigen::MatrixXd::Zero(m, m);
      for (int j = 0; j < m; ++j) {
        for (const auto& [blk, slot] : touched[j]) {
          const ComplexMatrix& w = sc[blk].w;
          ComplexMatrix bj = ComplexMatrix::Zero(w.rows(), w.cols());
          for (const auto& e : by_block[blk][slot].entries) {
            bj.noalias() += e.value * w.col(e.row) * w.row(e.col);
            if (e.row != e.col) {
              bj.noalias() += std::conj(e.value) * w.col(e.col) * w.row(e.row);
            }
          }
          for (const auto& terms : by_block[blk]) {
            double acc = 0.0;
            for (const auto& e : terms.entries) acc += entry_pairing(e, bj);
            schur(terms.constraint, j) += acc;
          }
        }
      }
      schur = 0.5 * (schur + schur.transpose()).eval();
      Eigen::LLT<Eigen::MatrixXd> llt(schur);
      Eigen::LDLT<Eigen::MatrixXd> ldlt;
      const bool use_llt = llt.info() == Eigen::Success;
      if (!use_llt) ldlt.compute(schur);
      auto solve_schur = [&](const Eigen::VectorXd& rhs) -> Eigen::VectorXd {
        return use_llt ? Eigen::VectorXd(llt.solve(rhs)) : Eigen::VectorXd(ldlt.solve(rhs));
      };

      Blocks w_rd_w(nb);
      for (std::size_t k = 0; k < nb; ++k) w_rd_w[k] = sc[k].w * rd[k] * sc[k].w;
      const Eigen::VectorXd a_w_rd_w = apply_constraints(problem, w_rd_w);

      // Direction for a scaled complementarity target r_v (Hermitian per block).
      auto direction = [&](const Blocks& rv, Blocks& dx, Eigen::VectorXd& dy, Blocks& ds) {
        Blocks g_rv_g(nb);
        for (std::size_t k = 0; k < nb; ++k) g_rv_g[k] = sc[k].g * rv[k] * sc[k].g.adjoint();
        dy = solve_schur(rp - apply_constraints(problem, g_rv_g) + a_w_rd_w);
        if (!dy.allFinite()) throw NumericalError("solve_sdp: singular Schur complement");
        const Blocks atdy = adjoint_constraints(problem, dy);
        ds.resize(nb);
        dx.resize(nb);
        for (std::size_t k = 0; k < nb; ++k) {
          ds[k] = hermitian_part(rd[k] - atdy[k]);
          dx[k] = hermitian_part(g_rv_g[k] - sc[k].w * ds[k] * sc[k].w);
        }
      };
      auto step_lengths = [&](const Blocks& dx, const Blocks& ds, double& ap, double& ad) {
        ap = std::numeric_limits<double>::infinity();
        ad = ap;
        for (std::size_t k = 0; k < nb; ++k) {
          ap = std::min(ap, max_step(sc[k].x_inv_half, dx[k]));
          ad = std::min(ad, max_step(sc[k].s_inv_half, ds[k]));
        }
      };

      const double mu = rec.complementarity / n_total;

      Blocks rv(nb);
      for (std::size_t k = 0; k < nb; ++k) {
        rv[k] = ComplexMatrix((-sc[k].v).cast<Complex>().asDiagonal());
      }
      Blocks dx, ds;
      Eigen::VectorXd dy;
      direction(rv, dx, dy, ds);
      double ap = 0.0, ad = 0.0;
      step_lengths(dx, ds, ap, ad);
      ap = std::min(1.0, ap);
      ad = std::min(1.0, ad);
      const double mu_aff =
          inner(operator_sum(x, ap, dx), operator_sum(s, ad, ds)) / n_total;
      const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

      for (std::size_t k = 0; k < nb; ++k) {
        const ComplexMatrix dxs = sc[k].g_inv * dx[k] * sc[k].g_inv.adjoint();
        const ComplexMatrix dss = sc[k].g.adjoint() * ds[k] * sc[k].g;
        ComplexMatrix target = -0.5 * (dxs * dss + dss * dxs);
        const RealVector& v = sc[k].v;
        for (Eigen::Index i = 0; i < v.size(); ++i) target(i, i) += sigma * mu - v(i) * v(i);
        for (Eigen::Index j = 0; j < v.size(); ++j) {
          for (Eigen::Index i = 0; i < v.size(); ++i) {
            target(i, j) *= 2.0 / (v(i) + v(j));
          }
        }
        rv[k] = hermitian_part(target);
      }
      direction(rv, dx, dy, ds);
      step_lengths(dx, ds, ap, ad);
      ap = std::min(1.0, kStepFraction * ap);
      ad = std::min(1.0, kStepFraction * ad);
      stalled = (ap < 1e-10 && ad < 1e-10) ? stalled + 1 : 0;

      for (std::size_t k = 0; k < nb; ++k) {
        x[k] = hermitian_part(x[k] + ap * dx[k]);
        s[k] = hermitian_part(s[k] + ad * ds[k]);
      }
      y += ad * dy;
    } catch (const NumericalError&) {
      sol.status = SdpStatus::max_iterations;
      break;
    }
  }

  const SdpIterate& last = sol.history.back();
  sol.primal_value = sign * last.primal;
  sol.dual_value = sign * last.dual;
  sol.gap = std::abs(sol.primal_value - sol.dual_value);
  sol.x = x;
  sol.s = s;
  sol.y = sign * y;
  return sol;
}

}  // namespace declab
