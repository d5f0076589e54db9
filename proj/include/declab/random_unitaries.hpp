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

#pragma once

/**
 * @file random_unitaries.hpp
 * Random unitary ensembles and their exact 2-fold moment operators.
 *
 * The moment maps act on operators X on C^d (x) C^d; G_Z and G_X are the
 * averages over random Z- and X-diagonal unitaries, G_H the Haar average, and
 * R = G_Z G_X G_Z.
 */

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "declab/linalg.hpp"
#include "declab/quantum.hpp"

namespace declab {

/// Key of an independent random stream.
struct RngSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
};

using Engine = std::mt19937_64;

/// Engine seeded from all 128 bits of the RngSpec.
Engine make_engine(const RngSpec& key);

/// Uniform phase in [0, 2 pi).
double draw_phase(Engine& eng);

enum class Basis { Z, X };

const char* basis_name(Basis b);

/// exp(i phases) in the computational basis, or its Hadamard conjugate.
struct DiagUnitary {
  Basis basis = Basis::Z;
  std::vector<double> phases;

  int dim() const { return static_cast<int>(phases.size()); }
  ComplexMatrix matrix() const;
};

/// Layers in application order; the first and last layers are Z-diagonal.
struct DiagCircuit {
  int ell = 0;
  std::vector<DiagUnitary> layers;

  /// layers.back() * ... * layers.front().
  ComplexMatrix matrix() const;
};

/// One "basis:Z p0 p1 ..." line per layer, preceded by "circuit <id> ell <l>".
void write_circuit(std::ostream& os, const DiagCircuit& c, std::uint64_t id);
DiagCircuit read_circuit(std::istream& is);

DiagUnitary sample_diag(Basis basis, int d, Engine& eng);
DiagUnitary sample_diag(Basis basis, int d, const RngSpec& rng);

/// Haar unitary: QR of a complex Ginibre matrix with R's diagonal made positive.
ComplexMatrix sample_haar(int d, Engine& eng);
ComplexMatrix sample_haar(int d, const RngSpec& rng);

/// Z, X, Z, ..., Z with 2 ell + 1 independent layers.
DiagCircuit sample_d_ell(int n_qubits, int ell, Engine& eng);
DiagCircuit sample_d_ell(int n_qubits, int ell, const RngSpec& rng);

/// `length` Haar two-qubit gates on uniformly chosen ordered qubit pairs.
ComplexMatrix sample_rqc(int n_qubits, int length, Engine& eng);
ComplexMatrix sample_rqc(int n_qubits, int length, const RngSpec& rng);

/// Gate on qubits (q1, q2) of an n-qubit register; qubit 0 is most significant.
ComplexMatrix embed_two_qubit(const ComplexMatrix& gate, int n_qubits, int q1, int q2);

ComplexVector random_pure_vector(int d, Engine& eng);
/// Normalized rank-`rank` density matrix (partial trace of a Haar pure state).
ComplexMatrix random_density(int d, int rank, Engine& eng);
/// Complex Ginibre matrix with unit-variance entries.
ComplexMatrix random_ginibre(int rows, int cols, Engine& eng);
/// CPTP map with `n_kraus` Kraus operators from a Haar isometry.
Channel random_channel(int d_in, int d_out, int n_kraus, Engine& eng);

/// E[(D (x) D) x (D (x) D)^dagger] over diagonal unitaries in `basis`.
ComplexMatrix twirl2_diag(const ComplexMatrix& x, Basis basis);
/// E[(U (x) U) x (U (x) U)^dagger] over the Haar measure: alpha I + beta F.
ComplexMatrix twirl2_haar(const ComplexMatrix& x);
/// R(x) = G_Z(G_X(G_Z(x))).
ComplexMatrix apply_r(const ComplexMatrix& x);
ComplexMatrix apply_r_pow(const ComplexMatrix& x, int ell);

/// Column-stacking matrix of a map on B(C^d (x) C^d).
struct MomentSuperOp {
  ComplexMatrix matrix;
  int d = 0;
  int fold = 2;

  ComplexMatrix apply(const ComplexMatrix& x) const;
};

/// Largest superoperator entry count accepted by the dense builders.
inline constexpr long long kMomentEntryLimit = 1LL << 24;

/// Superoperator of a linear map on d^2 x d^2 matrices, built column by column.
template <class Map>
MomentSuperOp moment_superop(int d, Map&& map) {
  const long long n = static_cast<long long>(d) * d;
  if (n * n * n * n > kMomentEntryLimit) {
    throw DimensionError("moment superoperator for d = " + std::to_string(d) +
                         " exceeds the 2^24 entry limit");
  }
  MomentSuperOp out;
  out.d = d;
  out.matrix.resize(n * n, n * n);
  ComplexMatrix e = ComplexMatrix::Zero(n, n);
  for (long long col = 0; col < n * n; ++col) {
    e(col % n, col / n) = 1.0;
    out.matrix.col(col) = vec(map(e));
    e(col % n, col / n) = 0.0;
  }
  return out;
}

MomentSuperOp map_r_pow(int n_qubits, int ell);
MomentSuperOp map_twirl_haar(int n_qubits);

/// Exact rational p_ell = (d^{ell+1} + d^ell - 2) / (d^{2 ell} (d - 1)),
/// rendered as "num/den".
std::string lemma5_weight_exact(int n_qubits, int ell);
double lemma5_weight(int n_qubits, int ell);

struct Lemma5Result {
  double p_ell = 0.0;
  std::string p_ell_exact;
  /// Choi matrix of C on d^2-dimensional input and output.
  ComplexMatrix c_choi;
  double min_choi_eigenvalue = 0.0;
  /// max entry of tr_out J(C) - I / d^2.
  double trace_residual = 0.0;
  /// operator norm of C(I) - I.
  double unital_residual = 0.0;
  /// max entry of R^ell - (1 - p) G_H - p C.
  double decomposition_residual = 0.0;
};

/// Splits R^ell = (1 - p_ell) G_H + p_ell C and reports how close C is to a
/// unital channel.
Lemma5Result lemma5_decompose(int n_qubits, int ell);

}  // namespace declab
