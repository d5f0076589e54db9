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

#include "declab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace declab {

bool is_power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_exact(long long n) {
  if (!is_power_of_two(n)) {
    throw DimensionError("dimension " + std::to_string(n) +
                         " is not a power of two");
  }
  int k = 0;
  while ((1LL << k) < n) ++k;
  return k;
}

long long product(const Dims& dims) {
  long long p = 1;
  for (int d : dims) {
    if (d <= 0) throw DimensionError("subsystem dimensions must be positive");
    p *= d;
  }
  return p;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

namespace {

void check_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << m.rows() << "x"
       << m.cols();
    throw DimensionError(os.str());
  }
}

// Mixed-radix digits of a flat index, most significant factor first.
std::vector<int> digits_of(long long index, const Dims& dims) {
  std::vector<int> dig(dims.size());
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    dig[k] = static_cast<int>(index % dims[k]);
    index /= dims[k];
  }
  return dig;
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& m, const Dims& dims,
                            const std::vector<int>& traced) {
  check_square(m, "partial_trace");
  const long long total = product(dims);
  if (total != m.rows()) {
    throw DimensionError("partial_trace: product of dims " +
                         std::to_string(total) + " != matrix size " +
                         std::to_string(m.rows()));
  }
  std::vector<bool> is_traced(dims.size(), false);
  for (int t : traced) {
    if (t < 0 || t >= static_cast<int>(dims.size()) || is_traced[t]) {
      throw DimensionError("partial_trace: invalid traced index " +
                           std::to_string(t));
    }
    is_traced[t] = true;
  }
  Dims kept_dims, traced_dims;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    (is_traced[k] ? traced_dims : kept_dims).push_back(dims[k]);
  }
  const long long dk = product(kept_dims);
  const long long dt = product(traced_dims);

  // full[k * dt + t] = flat index of (kept digits of k, traced digits of t)
  std::vector<long long> full(static_cast<std::size_t>(dk * dt));
  for (long long idx = 0; idx < total; ++idx) {
    const auto dig = digits_of(idx, dims);
    long long k = 0, t = 0;
    for (std::size_t f = 0; f < dims.size(); ++f) {
      if (is_traced[f]) {
        t = t * dims[f] + dig[f];
      } else {
        k = k * dims[f] + dig[f];
      }
    }
    full[static_cast<std::size_t>(k * dt + t)] = idx;
  }

  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (long long j = 0; j < dk; ++j) {
    for (long long i = 0; i < dk; ++i) {
      Complex s = 0.0;
      for (long long t = 0; t < dt; ++t) {
        s += m(full[i * dt + t], full[j * dt + t]);
      }
      out(i, j) = s;
    }
  }
  return out;
}

ComplexMatrix permute_subsystems(const ComplexMatrix& m, const Dims& dims,
                                 const std::vector<int>& perm) {
  check_square(m, "permute_subsystems");
  if (product(dims) != m.rows() || perm.size() != dims.size()) {
    throw DimensionError("permute_subsystems: dimension mismatch");
  }
  std::vector<int> seen(dims.size(), 0);
  for (int p : perm) {
    if (p < 0 || p >= static_cast<int>(dims.size()) || seen[p]++) {
      throw DimensionError("permute_subsystems: not a permutation");
    }
  }
  Dims new_dims(dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k) new_dims[k] = dims[perm[k]];

  const long long n = m.rows();
  std::vector<long long> old_of_new(static_cast<std::size_t>(n));
  for (long long idx = 0; idx < n; ++idx) {
    const auto dig = digits_of(idx, new_dims);
    std::vector<int> old_dig(dims.size());
    for (std::size_t k = 0; k < dims.size(); ++k) old_dig[perm[k]] = dig[k];
    long long o = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) o = o * dims[k] + old_dig[k];
    old_of_new[static_cast<std::size_t>(idx)] = o;
  }
  ComplexMatrix out(n, n);
  for (long long j = 0; j < n; ++j) {
    for (long long i = 0; i < n; ++i) {
      out(i, j) = m(old_of_new[i], old_of_new[j]);
    }
  }
  return out;
}

double max_abs_entry(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return max_abs_entry(m - m.adjoint());
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  return 0.5 * (m + m.adjoint());
}

Eigh eigh(const ComplexMatrix& h) {
  check_square(h, "eigh");
  const double scale = std::max(1.0, max_abs_entry(h));
  if (hermiticity_defect(h) > 1e-8 * scale) {
    throw NumericalError("eigh: input is not Hermitian (defect " +
                         std::to_string(hermiticity_defect(h)) + ")");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(h));
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigh: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector singular_values(const ComplexMatrix& m) {
  const Eigen::Index r = m.rows(), c = m.cols();
  const Eigen::Index k = std::min(r, c);
  ComplexMatrix emb = ComplexMatrix::Zero(r + c, r + c);
  emb.topRightCorner(r, c) = m;
  emb.bottomLeftCorner(c, r) = m.adjoint();
  const Eigh e = eigh(emb);
  RealVector s(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    s(i) = std::max(0.0, e.values(r + c - 1 - i));
  }
  return s;
}

double trace_norm(const ComplexMatrix& m) {
  if (m.rows() == m.cols() &&
      hermiticity_defect(m) <= 1e-13 * std::max(1.0, max_abs_entry(m))) {
    return eigh(m).values.cwiseAbs().sum();
  }
  return singular_values(m).sum();
}

double operator_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == m.cols() &&
      hermiticity_defect(m) <= 1e-13 * std::max(1.0, max_abs_entry(m))) {
    return eigh(m).values.cwiseAbs().maxCoeff();
  }
  return singular_values(m)(0);
}

ComplexMatrix psd_power(const ComplexMatrix& p, double exponent) {
  const Eigh e = eigh(p);
  if (e.values.size() > 0 && e.values(0) < -kPsdClampLimit) {
    throw NumericalError("psd_power: negative eigenvalue " +
                         std::to_string(e.values(0)));
  }
  return apply_spectral(e, [exponent](double x) {
    return x > kPsdTolerance ? std::pow(x, exponent) : 0.0;
  });
}

ComplexMatrix sqrt_psd(const ComplexMatrix& p) { return psd_power(p, 0.5); }

ComplexMatrix pinv_quarter_root(const ComplexMatrix& p) {
  return psd_power(p, -0.25);
}

ComplexMatrix clamp_psd(const ComplexMatrix& p) {
  const Eigh e = eigh(p);
  if (e.values.size() == 0 || e.values(0) >= -kPsdTolerance) {
    return hermitian_part(p);
  }
  if (e.values(0) < -kPsdClampLimit) {
    throw NumericalError("clamp_psd: eigenvalue " +
                         std::to_string(e.values(0)) + " below -1e-8");
  }
  return apply_spectral(e, [](double x) { return std::max(x, 0.0); });
}

ComplexMatrix swap_operator(int d) {
  if (d < 1) throw DimensionError("swap_operator: d must be positive");
  ComplexMatrix f = ComplexMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) f(i * d + j, j * d + i) = 1.0;
  }
  return f;
}

ComplexMatrix hadamard_all(int n_qubits) {
  if (n_qubits < 0) throw DimensionError("hadamard_all: negative qubit count");
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  const double norm = std::pow(2.0, -0.5 * n_qubits);
  ComplexMatrix h(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      // (-1)^{popcount(i & j)}
      h(i, j) = (__builtin_popcountll(static_cast<unsigned long long>(i & j)) & 1)
                    ? -norm
                    : norm;
    }
  }
  return h;
}

void hadamard_columns(ComplexMatrix& m) {
  const Eigen::Index d = m.rows();
  log2_exact(d);  // validates the size
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    Complex* col = m.col(c).data();
    for (Eigen::Index half = 1; half < d; half <<= 1) {
      for (Eigen::Index start = 0; start < d; start += 2 * half) {
        for (Eigen::Index k = start; k < start + half; ++k) {
          const Complex a = col[k], b = col[k + half];
          col[k] = (a + b) * inv_sqrt2;
          col[k + half] = (a - b) * inv_sqrt2;
        }
      }
    }
  }
}

ComplexMatrix hadamard_conjugate(const ComplexMatrix& m) {
  check_square(m, "hadamard_conjugate");
  ComplexMatrix a = m;
  hadamard_columns(a);
  ComplexMatrix b = a.adjoint();
  hadamard_columns(b);
  return b.adjoint();
}

ComplexVector vec(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index rows,
                    Eigen::Index cols) {
  if (v.size() != rows * cols) throw DimensionError("unvec: size mismatch");
  return Eigen::Map<const ComplexMatrix>(v.data(), rows, cols);
}

}  // namespace declab
