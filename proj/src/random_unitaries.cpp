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

#include "declab/random_unitaries.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "declab/io.hpp"

namespace declab {

Engine make_engine(const RngSpec& key) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(key.master_seed),
      static_cast<std::uint32_t>(key.master_seed >> 32),
      static_cast<std::uint32_t>(key.stream_index),
      static_cast<std::uint32_t>(key.stream_index >> 32)};
  return Engine(seq);
}

double draw_phase(Engine& eng) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const double phi = kTwoPi * std::generate_canonical<double, 64>(eng);
  return phi < kTwoPi ? phi : 0.0;
}

const char* basis_name(Basis b) { return b == Basis::Z ? "Z" : "X"; }

ComplexMatrix DiagUnitary::matrix() const {
  const int d = dim();
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) m(k, k) = std::polar(1.0, phases[k]);
  return basis == Basis::Z ? m : hadamard_conjugate(m);
}

ComplexMatrix DiagCircuit::matrix() const {
  if (layers.empty()) throw DimensionError("DiagCircuit: no layers");
  ComplexMatrix u = layers.front().matrix();
  for (std::size_t k = 1; k < layers.size(); ++k) u = layers[k].matrix() * u;
  return u;
}

void write_circuit(std::ostream& os, const DiagCircuit& c, std::uint64_t id) {
  os << "circuit " << id << " ell " << c.ell << '\n';
  for (const auto& layer : c.layers) {
    os << "basis:" << basis_name(layer.basis);
    for (double p : layer.phases) os << ' ' << format_real(p);
    os << '\n';
  }
}

DiagCircuit read_circuit(std::istream& is) {
  std::string word;
  std::uint64_t id = 0;
  DiagCircuit c;
  if (!(is >> word) || word != "circuit" || !(is >> id >> word) || word != "ell" ||
      !(is >> c.ell) || c.ell < 1) {
    throw ParseError("circuit dump: bad header");
  }
  std::string line;
  std::getline(is, line);
  for (int k = 0; k < 2 * c.ell + 1; ++k) {
    if (!std::getline(is, line)) throw ParseError("circuit dump: missing layer");
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    DiagUnitary layer;
    if (tag == "basis:Z") {
      layer.basis = Basis::Z;
    } else if (tag == "basis:X") {
      layer.basis = Basis::X;
    } else {
      throw ParseError("circuit dump: bad layer tag '" + tag + "'");
    }
    double p = 0.0;
    while (ls >> p) layer.phases.push_back(p);
    c.layers.push_back(std::move(layer));
  }
  return c;
}

DiagUnitary sample_diag(Basis basis, int d, Engine& eng) {
  if (d < 2 || !is_power_of_two(d)) {
    throw DimensionError("sample_diag: d must be a power of two >= 2");
  }
  DiagUnitary u;
  u.basis = basis;
  u.phases.resize(d);
  for (double& p : u.phases) p = draw_phase(eng);
  return u;
}

DiagUnitary sample_diag(Basis basis, int d, const RngSpec& rng) {
  Engine eng = make_engine(rng);
  return sample_diag(basis, d, eng);
}

ComplexMatrix random_ginibre(int rows, int cols, Engine& eng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      const double re = normal(eng);
      const double im = normal(eng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

ComplexMatrix sample_haar(int d, Engine& eng) {
  if (d < 1) throw DimensionError("sample_haar: d must be positive");
  const ComplexMatrix g = random_ginibre(d, d, eng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (int k = 0; k < d; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

ComplexMatrix sample_haar(int d, const RngSpec& rng) {
  Engine eng = make_engine(rng);
  return sample_haar(d, eng);
}

DiagCircuit sample_d_ell(int n_qubits, int ell, Engine& eng) {
  if (n_qubits < 1 || ell < 1) {
    throw DimensionError("sample_d_ell: n_qubits and ell must be positive");
  }
  const int d = 1 << n_qubits;
  DiagCircuit c;
  c.ell = ell;
  for (int k = 0; k < 2 * ell + 1; ++k) {
    c.layers.push_back(sample_diag(k % 2 == 0 ? Basis::Z : Basis::X, d, eng));
  }
  return c;
}

DiagCircuit sample_d_ell(int n_qubits, int ell, const RngSpec& rng) {
  Engine eng = make_engine(rng);
  return sample_d_ell(n_qubits, ell, eng);
}

ComplexMatrix embed_two_qubit(const ComplexMatrix& gate, int n_qubits, int q1, int q2) {
  if (gate.rows() != 4 || gate.cols() != 4 || q1 == q2 || q1 < 0 || q2 < 0 ||
      q1 >= n_qubits || q2 >= n_qubits) {
    throw DimensionError("embed_two_qubit: bad gate or qubit indices");
  }
  const int d = 1 << n_qubits;
  const int s1 = n_qubits - 1 - q1, s2 = n_qubits - 1 - q2;
  const int mask = (1 << s1) | (1 << s2);
  ComplexMatrix u = ComplexMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    const int gj = (((j >> s1) & 1) << 1) | ((j >> s2) & 1);
    const int rest = j & ~mask;
    for (int gi = 0; gi < 4; ++gi) {
      const int i = rest | (((gi >> 1) & 1) << s1) | ((gi & 1) << s2);
      u(i, j) = gate(gi, gj);
    }
  }
  return u;
}

ComplexMatrix sample_rqc(int n_qubits, int length, Engine& eng) {
  if (length < 0) throw DimensionError("sample_rqc: negative length");
  if (length > 0 && n_qubits < 2) {
    throw DimensionError("sample_rqc: two-qubit gates need at least 2 qubits");
  }
  if (n_qubits < 0) throw DimensionError("sample_rqc: negative qubit count");
  const int d = 1 << n_qubits;
  ComplexMatrix u = ComplexMatrix::Identity(d, d);
  for (int step = 0; step < length; ++step) {
    std::uniform_int_distribution<int> first(0, n_qubits - 1);
    std::uniform_int_distribution<int> second(0, n_qubits - 2);
    const int q1 = first(eng);
    int q2 = second(eng);
    if (q2 >= q1) ++q2;
    const ComplexMatrix gate = sample_haar(4, eng);
    u = embed_two_qubit(gate, n_qubits, q1, q2) * u;
  }
  return u;
}

ComplexMatrix sample_rqc(int n_qubits, int length, const RngSpec& rng) {
  Engine eng = make_engine(rng);
  return sample_rqc(n_qubits, length, eng);
}

ComplexVector random_pure_vector(int d, Engine& eng) {
  ComplexVector v = random_ginibre(d, 1, eng).col(0);
  return v / v.norm();
}

ComplexMatrix random_density(int d, int rank, Engine& eng) {
  if (rank < 1 || rank > d) throw DimensionError("random_density: bad rank");
  const ComplexMatrix g = random_ginibre(d, rank, eng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return hermitian_part(rho);
}

Channel random_channel(int d_in, int d_out, int n_kraus, Engine& eng) {
  if (d_in < 1 || d_out < 1 || n_kraus < 1) {
    throw DimensionError("random_channel: dimensions must be positive");
  }
  const ComplexMatrix u = sample_haar(d_out * n_kraus, eng);
  std::vector<ComplexMatrix> kraus;
  for (int k = 0; k < n_kraus; ++k) {
    kraus.push_back(u.block(k * d_out, 0, d_out, d_in));
  }
  return j_map(kraus);
}

namespace {

int base_dimension(const ComplexMatrix& x, const char* what) {
  if (x.rows() != x.cols()) {
    throw DimensionError(std::string(what) + ": operator is not square");
  }
  const int n = static_cast<int>(x.rows());
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (d * d != n || !is_power_of_two(d)) {
    throw DimensionError(std::string(what) + ": size " + std::to_string(n) +
                         " is not d^2 for a power of two d");
  }
  return d;
}

ComplexMatrix twirl2_z(const ComplexMatrix& x, int d) {
  ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const int row = i * d + j;
      out(row, row) = x(row, row);
      const int swapped = j * d + i;
      out(row, swapped) = x(row, swapped);
    }
  }
  return out;
}

}  // namespace

ComplexMatrix twirl2_diag(const ComplexMatrix& x, Basis basis) {
  const int d = base_dimension(x, "twirl2_diag");
  if (basis == Basis::Z) return twirl2_z(x, d);
  return hadamard_conjugate(twirl2_z(hadamard_conjugate(x), d));
}

ComplexMatrix twirl2_haar(const ComplexMatrix& x) {
  if (x.rows() != x.cols()) throw DimensionError("twirl2_haar: not square");
  const int n = static_cast<int>(x.rows());
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (d * d != n) throw DimensionError("twirl2_haar: size is not a square");
  if (d == 1) return x;
  const ComplexMatrix f = swap_operator(d);
  const Complex tr_x = x.trace();
  const Complex tr_xf = (x * f).trace();
  const double dd = d;
  const Complex alpha = (tr_x - tr_xf / dd) / (dd * dd - 1.0);
  const Complex beta = (tr_xf - tr_x / dd) / (dd * dd - 1.0);
  return alpha * ComplexMatrix::Identity(n, n) + beta * f;
}

ComplexMatrix apply_r(const ComplexMatrix& x) {
  return twirl2_diag(twirl2_diag(twirl2_diag(x, Basis::Z), Basis::X), Basis::Z);
}

ComplexMatrix apply_r_pow(const ComplexMatrix& x, int ell) {
  if (ell < 0) throw DimensionError("apply_r_pow: negative power");
  ComplexMatrix y = x;
  for (int k = 0; k < ell; ++k) y = apply_r(y);
  return y;
}

ComplexMatrix MomentSuperOp::apply(const ComplexMatrix& x) const {
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
  if (x.rows() != n || x.cols() != n) throw DimensionError("MomentSuperOp: size mismatch");
  return unvec(matrix * vec(x), n, n);
}

MomentSuperOp map_r_pow(int n_qubits, int ell) {
  if (n_qubits < 1 || ell < 1) throw DimensionError("map_r_pow: bad arguments");
  if (n_qubits > 3) throw DimensionError("map_r_pow: exceeds the 2^24 entry limit");
  return moment_superop(1 << n_qubits,
                        [ell](const ComplexMatrix& x) { return apply_r_pow(x, ell); });
}

MomentSuperOp map_twirl_haar(int n_qubits) {
  if (n_qubits < 1) throw DimensionError("map_twirl_haar: bad arguments");
  if (n_qubits > 3) throw DimensionError("map_twirl_haar: exceeds the 2^24 entry limit");
  return moment_superop(1 << n_qubits,
                        [](const ComplexMatrix& x) { return twirl2_haar(x); });
}

namespace {

boost::multiprecision::cpp_rational weight_rational(int n_qubits, int ell) {
  using boost::multiprecision::cpp_int;
  if (n_qubits < 1 || ell < 1) throw DimensionError("lemma5 weight: bad arguments");
  const cpp_int d = cpp_int(1) << n_qubits;
  const cpp_int d_ell = boost::multiprecision::pow(d, ell);
  return boost::multiprecision::cpp_rational(d_ell * d + d_ell - 2,
                                             d_ell * d_ell * (d - 1));
}

}  // namespace

std::string lemma5_weight_exact(int n_qubits, int ell) {
  const auto p = weight_rational(n_qubits, ell);
  return numerator(p).str() + "/" + denominator(p).str();
}

double lemma5_weight(int n_qubits, int ell) {
  return weight_rational(n_qubits, ell).convert_to<double>();
}

Lemma5Result lemma5_decompose(int n_qubits, int ell) {
  Lemma5Result res;
  res.p_ell = lemma5_weight(n_qubits, ell);
  res.p_ell_exact = lemma5_weight_exact(n_qubits, ell);
  const MomentSuperOp r = map_r_pow(n_qubits, ell);
  const MomentSuperOp haar = map_twirl_haar(n_qubits);
  const int n = r.d * r.d;

  const ComplexMatrix c = (r.matrix - (1.0 - res.p_ell) * haar.matrix) / res.p_ell;
  res.decomposition_residual =
      max_abs_entry(r.matrix - (1.0 - res.p_ell) * haar.matrix - res.p_ell * c);

  res.c_choi = superop_to_choi(c, n, n);
  res.min_choi_eigenvalue = eigh(res.c_choi).values(0);
  const ComplexMatrix marg = partial_trace(res.c_choi, {n, n}, {1});
  res.trace_residual =
      max_abs_entry(marg - ComplexMatrix::Identity(n, n) / static_cast<double>(n));
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  res.unital_residual = operator_norm(unvec(c * vec(id), n, n) - id);
  return res;
}

}  // namespace declab
