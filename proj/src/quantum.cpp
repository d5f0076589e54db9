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

#include "declab/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace declab {

namespace {

constexpr double kTraceTolerance = 1e-10;

void require_size(const ComplexMatrix& m, Eigen::Index n, const char* what) {
  if (m.rows() != n || m.cols() != n) {
    std::ostringstream os;
    os << what << ": expected " << n << "x" << n << ", got " << m.rows() << "x"
       << m.cols();
    throw DimensionError(os.str());
  }
}

}  // namespace

QuantumState::QuantumState(ComplexMatrix matrix, Dims dims, NormClass norm_class)
    : dims_(std::move(dims)), norm_class_(norm_class) {
  if (matrix.rows() != matrix.cols()) {
    throw DimensionError("QuantumState: matrix is not square");
  }
  if (product(dims_) != matrix.rows()) {
    throw DimensionError("QuantumState: dims do not match matrix size");
  }
  const double defect = hermiticity_defect(matrix);
  if (defect > kPsdTolerance * std::max(1.0, max_abs_entry(matrix))) {
    throw NumericalError("QuantumState: not Hermitian (defect " +
                         std::to_string(defect) + ")");
  }
  matrix_ = clamp_psd(matrix);
  const double tr = matrix_.trace().real();
  if (norm_class_ == NormClass::normalized && std::abs(tr - 1.0) > kTraceTolerance) {
    throw NumericalError("QuantumState: trace " + std::to_string(tr) + " != 1");
  }
  if (norm_class_ == NormClass::subnormalized && tr > 1.0 + kTraceTolerance) {
    throw NumericalError("QuantumState: trace " + std::to_string(tr) + " > 1");
  }
}

QuantumState QuantumState::marginal(const std::vector<int>& keep) const {
  std::vector<bool> kept(dims_.size(), false);
  for (int k : keep) {
    if (k < 0 || k >= static_cast<int>(dims_.size()) || kept[k]) {
      throw DimensionError("marginal: invalid subsystem index");
    }
    kept[k] = true;
  }
  std::vector<int> traced;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (!kept[k]) traced.push_back(static_cast<int>(k));
  }
  ComplexMatrix reduced = partial_trace(matrix_, dims_, traced);

  // partial_trace keeps factors in ascending order; reorder to `keep`.
  std::vector<int> sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  Dims sorted_dims, keep_dims;
  for (int k : sorted) sorted_dims.push_back(dims_[k]);
  for (int k : keep) keep_dims.push_back(dims_[k]);
  std::vector<int> perm(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    perm[i] = static_cast<int>(
        std::find(sorted.begin(), sorted.end(), keep[i]) - sorted.begin());
  }
  if (keep.size() > 1) reduced = permute_subsystems(reduced, sorted_dims, perm);
  return QuantumState(std::move(reduced), keep_dims, norm_class_);
}

Channel::Channel(ComplexMatrix choi, int d_in, int d_out, bool trace_preserving)
    : d_in_(d_in), d_out_(d_out), tp_(trace_preserving) {
  if (d_in < 1 || d_out < 1) throw DimensionError("Channel: dimensions must be positive");
  require_size(choi, static_cast<Eigen::Index>(d_in) * d_out, "Channel");
  const Eigh e = eigh(choi);
  if (e.values(0) < -kPsdClampLimit) {
    throw NumericalError("Channel: Choi matrix has eigenvalue " +
                         std::to_string(e.values(0)) + " (not CP)");
  }
  choi_ = e.values(0) < -kPsdTolerance
              ? apply_spectral(e, [](double x) { return std::max(x, 0.0); })
              : hermitian_part(choi);
  if (tp_) {
    const ComplexMatrix marg = partial_trace(choi_, {d_in, d_out}, {1});
    const ComplexMatrix target =
        ComplexMatrix::Identity(d_in, d_in) / static_cast<double>(d_in);
    if (max_abs_entry(marg - target) > kTraceTolerance) {
      throw NumericalError("Channel: not trace preserving");
    }
  }
}

ComplexMatrix Channel::apply(const ComplexMatrix& y) const {
  require_size(y, d_in_, "Channel::apply");
  ComplexMatrix out = ComplexMatrix::Zero(d_out_, d_out_);
  for (int a = 0; a < d_in_; ++a) {
    for (int ap = 0; ap < d_in_; ++ap) {
      if (y(a, ap) == Complex(0.0)) continue;
      out += y(a, ap) * choi_.block(a * d_out_, ap * d_out_, d_out_, d_out_);
    }
  }
  return static_cast<double>(d_in_) * out;
}

ComplexMatrix Channel::adjoint_apply(const ComplexMatrix& y) const {
  require_size(y, d_out_, "Channel::adjoint_apply");
  ComplexMatrix out(d_in_, d_in_);
  for (int a = 0; a < d_in_; ++a) {
    for (int ap = 0; ap < d_in_; ++ap) {
      // tr[J_{a' a} Y]
      const auto blk = choi_.block(ap * d_out_, a * d_out_, d_out_, d_out_);
      out(a, ap) = (blk.array() * y.transpose().array()).sum();
    }
  }
  return static_cast<double>(d_in_) * out;
}

ComplexMatrix Channel::apply_on_first(const ComplexMatrix& x, int d_r) const {
  require_size(x, static_cast<Eigen::Index>(d_in_) * d_r, "Channel::apply_on_first");
  ComplexMatrix out = ComplexMatrix::Zero(d_out_ * d_r, d_out_ * d_r);
  for (int a = 0; a < d_in_; ++a) {
    for (int ap = 0; ap < d_in_; ++ap) {
      const ComplexMatrix xb = x.block(a * d_r, ap * d_r, d_r, d_r);
      if (max_abs_entry(xb) == 0.0) continue;
      out += kron(choi_.block(a * d_out_, ap * d_out_, d_out_, d_out_), xb);
    }
  }
  return static_cast<double>(d_in_) * out;
}

ComplexMatrix Channel::adjoint_tensor2_apply(const ComplexMatrix& z) const {
  const int n = d_out_;
  require_size(z, static_cast<Eigen::Index>(n) * n, "Channel::adjoint_tensor2_apply");
  // images[b * n + b'] = T*(|b><b'|), entry (a, a') = d_in J[(a', b'), (a, b)]
  std::vector<ComplexMatrix> images(static_cast<std::size_t>(n) * n);
  for (int b = 0; b < n; ++b) {
    for (int bp = 0; bp < n; ++bp) {
      ComplexMatrix img(d_in_, d_in_);
      for (int a = 0; a < d_in_; ++a) {
        for (int ap = 0; ap < d_in_; ++ap) {
          img(a, ap) = static_cast<double>(d_in_) * choi_(ap * n + bp, a * n + b);
        }
      }
      images[b * n + bp] = std::move(img);
    }
  }
  const int m = d_in_;
  ComplexMatrix out = ComplexMatrix::Zero(m * m, m * m);
  for (int b1 = 0; b1 < n; ++b1) {
    for (int b2 = 0; b2 < n; ++b2) {
      for (int b1p = 0; b1p < n; ++b1p) {
        for (int b2p = 0; b2p < n; ++b2p) {
          const Complex w = z(b1 * n + b2, b1p * n + b2p);
          if (w == Complex(0.0)) continue;
          out += w * kron(images[b1 * n + b1p], images[b2 * n + b2p]);
        }
      }
    }
  }
  return out;
}

QuantumState max_entangled(int d) {
  if (d < 1) throw DimensionError("max_entangled: d must be positive");
  ComplexMatrix phi = ComplexMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) phi(i * d + i, j * d + j) = 1.0 / d;
  }
  return QuantumState(std::move(phi), {d, d});
}

Channel j_map(const std::vector<ComplexMatrix>& kraus) {
  if (kraus.empty()) throw DimensionError("j_map: empty Kraus list");
  const Eigen::Index d_out = kraus[0].rows(), d_in = kraus[0].cols();
  ComplexMatrix choi = ComplexMatrix::Zero(d_in * d_out, d_in * d_out);
  ComplexMatrix kk = ComplexMatrix::Zero(d_in, d_in);
  for (const auto& k : kraus) {
    if (k.rows() != d_out || k.cols() != d_in) {
      throw DimensionError("j_map: Kraus operators have inconsistent shapes");
    }
    ComplexVector v(d_in * d_out);
    for (Eigen::Index a = 0; a < d_in; ++a) {
      for (Eigen::Index b = 0; b < d_out; ++b) v(a * d_out + b) = k(b, a);
    }
    choi += v * v.adjoint();
    kk += k.adjoint() * k;
  }
  choi /= static_cast<double>(d_in);
  const bool tp =
      max_abs_entry(kk - ComplexMatrix::Identity(d_in, d_in)) <= kTraceTolerance;
  return Channel(std::move(choi), static_cast<int>(d_in), static_cast<int>(d_out), tp);
}

ComplexMatrix superop_to_choi(const ComplexMatrix& superop, int d_in, int d_out) {
  if (superop.rows() != static_cast<Eigen::Index>(d_out) * d_out ||
      superop.cols() != static_cast<Eigen::Index>(d_in) * d_in) {
    throw DimensionError("superop_to_choi: shape mismatch");
  }
  ComplexMatrix choi(d_in * d_out, d_in * d_out);
  for (int a = 0; a < d_in; ++a) {
    for (int ap = 0; ap < d_in; ++ap) {
      for (int b = 0; b < d_out; ++b) {
        for (int bp = 0; bp < d_out; ++bp) {
          choi(a * d_out + b, ap * d_out + bp) =
              superop(b + bp * d_out, a + ap * d_in) / static_cast<double>(d_in);
        }
      }
    }
  }
  return choi;
}

ComplexMatrix choi_to_superop(const ComplexMatrix& choi, int d_in, int d_out) {
  require_size(choi, static_cast<Eigen::Index>(d_in) * d_out, "choi_to_superop");
  ComplexMatrix s(d_out * d_out, d_in * d_in);
  for (int a = 0; a < d_in; ++a) {
    for (int ap = 0; ap < d_in; ++ap) {
      for (int b = 0; b < d_out; ++b) {
        for (int bp = 0; bp < d_out; ++bp) {
          s(b + bp * d_out, a + ap * d_in) =
              static_cast<double>(d_in) * choi(a * d_out + b, ap * d_out + bp);
        }
      }
    }
  }
  return s;
}

Channel j_map_superop(const ComplexMatrix& superop, int d_in, int d_out) {
  ComplexMatrix choi = superop_to_choi(superop, d_in, d_out);
  const ComplexMatrix marg = partial_trace(choi, {d_in, d_out}, {1});
  const bool tp = max_abs_entry(marg - ComplexMatrix::Identity(d_in, d_in) /
                                          static_cast<double>(d_in)) <= kTraceTolerance;
  return Channel(std::move(choi), d_in, d_out, tp);
}

ComplexMatrix j_inv_apply(const Channel& c, const ComplexMatrix& y) {
  const int d_in = c.d_in(), d_out = c.d_out();
  require_size(y, d_in, "j_inv_apply");
  ComplexMatrix lhs = kron(y.transpose(), ComplexMatrix::Identity(d_out, d_out));
  return static_cast<double>(d_in) *
         partial_trace(lhs * c.choi(), {d_in, d_out}, {0});
}

Channel identity_channel(int d) {
  return Channel(max_entangled(d).matrix(), d, d, true);
}

Channel completely_depolarizing_channel(int d) {
  if (d < 1) throw DimensionError("completely_depolarizing_channel: d must be positive");
  return Channel(ComplexMatrix::Identity(d * d, d * d) / static_cast<double>(d * d),
                 d, d, true);
}

Channel depolarizing_channel(int d, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("depolarizing_channel: p out of range");
  }
  ComplexMatrix choi = (1.0 - p) * max_entangled(d).matrix() +
                       p * ComplexMatrix::Identity(d * d, d * d) /
                           static_cast<double>(d * d);
  return Channel(std::move(choi), d, d, true);
}

Channel full_trace_channel(int d) {
  if (d < 1) throw DimensionError("full_trace_channel: d must be positive");
  return Channel(ComplexMatrix::Identity(d, d) / static_cast<double>(d), d, 1, true);
}

Channel partial_trace_channel(const Dims& dims, const std::vector<int>& traced) {
  const int d = static_cast<int>(product(dims));
  std::vector<bool> is_traced(dims.size(), false);
  for (int t : traced) {
    if (t < 0 || t >= static_cast<int>(dims.size()) || is_traced[t]) {
      throw DimensionError("partial_trace_channel: invalid traced index");
    }
    is_traced[t] = true;
  }
  // kept[i] and gone[i]: flat kept / traced index of input basis state i.
  std::vector<int> kept(d), gone(d);
  int d_out = 1;
  for (std::size_t f = 0; f < dims.size(); ++f) {
    if (!is_traced[f]) d_out *= dims[f];
  }
  for (int i = 0; i < d; ++i) {
    int rem = i, k = 0, t = 0, kscale = 1, tscale = 1;
    for (int f = static_cast<int>(dims.size()) - 1; f >= 0; --f) {
      const int digit = rem % dims[f];
      rem /= dims[f];
      if (is_traced[f]) {
        t += digit * tscale;
        tscale *= dims[f];
      } else {
        k += digit * kscale;
        kscale *= dims[f];
      }
    }
    kept[i] = k;
    gone[i] = t;
  }
  ComplexMatrix choi = ComplexMatrix::Zero(d * d_out, d * d_out);
  for (int a = 0; a < d; ++a) {
    for (int ap = 0; ap < d; ++ap) {
      if (gone[a] != gone[ap]) continue;
      choi(a * d_out + kept[a], ap * d_out + kept[ap]) = 1.0 / d;
    }
  }
  return Channel(std::move(choi), d, d_out, true);
}

}  // namespace declab
