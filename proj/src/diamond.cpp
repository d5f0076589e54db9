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

#include "declab/diamond.hpp"

#include <map>
#include <numeric>

namespace declab {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

}  // namespace

DiamondNormResult diamond_norm_detailed(const ComplexMatrix& delta_choi, int d_in,
                                        int d_out, double gap_tol) {
  const int n = d_in * d_out;
  if (delta_choi.rows() != n || delta_choi.cols() != n) {
    throw DimensionError("diamond_norm: Choi matrix must be (d_in d_out)^2");
  }
  const double scale = std::max(1.0, max_abs_entry(delta_choi));
  if (hermiticity_defect(delta_choi) > 1e-10 * scale) {
    throw NumericalError("diamond_norm: Choi difference is not Hermitian");
  }
  const ComplexMatrix jw = static_cast<double>(d_in) * hermitian_part(delta_choi);
  const double cutoff = 1e-13 * scale * d_in;

  UnionFind comp(n);
  bool any = false;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (std::abs(jw(r, c)) > cutoff) {
        comp.unite(r, c);
        any = true;
      }
    }
  }
  DiamondNormResult res;
  if (!any) return res;

  UnionFind group(d_in);
  for (bool changed = true; changed;) {
    changed = false;
    for (int c = 0; c < n; ++c) {
      const int root = comp.find(c);
      changed |= group.unite(c / d_out, root / d_out);
    }
    for (int a = 0; a < d_in; ++a) {
      const int ga = group.find(a);
      if (ga == a) continue;
      for (int b = 0; b < d_out; ++b) changed |= comp.unite(a * d_out + b, ga * d_out + b);
    }
  }

  // Components carrying part of J_w, and input groups.
  std::map<int, std::vector<int>> members;
  for (int c = 0; c < n; ++c) members[comp.find(c)].push_back(c);
  std::map<int, std::vector<int>> group_members;
  for (int a = 0; a < d_in; ++a) group_members[group.find(a)].push_back(a);

  SdpProblem p;
  p.sense = SdpSense::maximize;
  std::vector<int> pos_in_group(d_in);
  std::map<int, int> rho0_block, rho1_block;
  for (const auto& [g, as] : group_members) {
    for (std::size_t i = 0; i < as.size(); ++i) pos_in_group[as[i]] = static_cast<int>(i);
    const int sz = static_cast<int>(as.size());
    rho0_block[g] = static_cast<int>(p.block_sizes.size());
    p.block_sizes.push_back(sz);
    p.objective.push_back(ComplexMatrix::Zero(sz, sz));
    rho1_block[g] = static_cast<int>(p.block_sizes.size());
    p.block_sizes.push_back(sz);
    p.objective.push_back(ComplexMatrix::Zero(sz, sz));
  }
  SdpConstraint trace0, trace1;
  for (const auto& [g, as] : group_members) {
    for (std::size_t i = 0; i < as.size(); ++i) {
      const int ii = static_cast<int>(i);
      trace0.entries.push_back({rho0_block[g], ii, ii, 1.0});
      trace1.entries.push_back({rho1_block[g], ii, ii, 1.0});
    }
  }
  trace0.rhs = trace1.rhs = 1.0;
  p.constraints.push_back(std::move(trace0));
  p.constraints.push_back(std::move(trace1));

  for (const auto& [root, idx] : members) {
    const int nk = static_cast<int>(idx.size());
    ComplexMatrix jk(nk, nk);
    for (int i = 0; i < nk; ++i) {
      for (int j = 0; j < nk; ++j) jk(i, j) = jw(idx[i], idx[j]);
    }
    if (max_abs_entry(jk) <= cutoff) continue;
    ++res.components;
    const int blk = static_cast<int>(p.block_sizes.size());
    ComplexMatrix ck = ComplexMatrix::Zero(2 * nk, 2 * nk);
    ck.topRightCorner(nk, nk) = 0.5 * jk;
    ck.bottomLeftCorner(nk, nk) = 0.5 * jk.adjoint();
    p.block_sizes.push_back(2 * nk);
    p.objective.push_back(ck);

    const int g = group.find(idx[0] / d_out);
    for (int half = 0; half < 2; ++half) {
      const int off = half * nk;
      const int rho_blk = half == 0 ? rho0_block[g] : rho1_block[g];
      for (int i = 0; i < nk; ++i) {
        for (int j = i; j < nk; ++j) {
          const int ai = idx[i] / d_out, bi = idx[i] % d_out;
          const int aj = idx[j] / d_out, bj = idx[j] % d_out;
          const bool linked = bi == bj;
          const int ri = pos_in_group[ai], rj = pos_in_group[aj];
          if (i == j) {
            SdpConstraint con;
            con.entries.push_back({blk, off + i, off + i, 1.0});
            con.entries.push_back({rho_blk, ri, ri, -1.0});
            p.constraints.push_back(std::move(con));
            continue;
          }
          SdpConstraint re, im;
          re.entries.push_back({blk, off + i, off + j, Complex(0.5, 0.0)});
          im.entries.push_back({blk, off + i, off + j, Complex(0.0, -0.5)});
          if (linked) {
            re.entries.push_back({rho_blk, ri, rj, Complex(-0.5, 0.0)});
            im.entries.push_back({rho_blk, ri, rj, Complex(0.0, 0.5)});
          }
          p.constraints.push_back(std::move(re));
          p.constraints.push_back(std::move(im));
        }
      }
    }
  }
  res.constraints = static_cast<int>(p.constraints.size());

  SdpOptions opts;
  opts.gap_tol = gap_tol;
  const SdpSolution sol = solve_sdp(p, opts);
  res.value = sol.primal_value;
  res.dual_value = sol.dual_value;
  res.status = sol.status;
  res.iterations = sol.iterations;
  return res;
}

double diamond_norm(const ComplexMatrix& delta_choi, int d_in, int d_out, double gap_tol) {
  const DiamondNormResult r = diamond_norm_detailed(delta_choi, d_in, d_out, gap_tol);
  if (r.status != SdpStatus::optimal) {
    throw NumericalError(std::string("diamond_norm: solver finished with status ") +
                         status_name(r.status));
  }
  return r.value;
}

}  // namespace declab
