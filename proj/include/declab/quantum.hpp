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
 * @file quantum.hpp
 * States, channels and the Choi-Jamiolkowski isomorphism.
 *
 * Choi convention: J(T) = (id (x) T)(Phi) with Phi = |Phi><Phi| and
 * |Phi> = d_in^{-1/2} sum_i |ii>, so a trace-preserving T has tr J(T) = 1 and
 * tr_out J(T) = I / d_in. The Choi matrix is ordered input (x) output.
 * The inverse is T(Y) = d_in tr_in[(Y^T (x) I) J].
 */

#include <vector>

#include "declab/linalg.hpp"

namespace declab {

enum class NormClass { normalized, subnormalized };

/// Density operator with a subsystem signature. Construction validates
/// Hermiticity, positivity and trace; eigenvalues in [-1e-8, -1e-10) are
/// clamped to zero.
class QuantumState {
 public:
  QuantumState(ComplexMatrix matrix, Dims dims,
               NormClass norm_class = NormClass::normalized);

  const ComplexMatrix& matrix() const { return matrix_; }
  const Dims& dims() const { return dims_; }
  NormClass norm_class() const { return norm_class_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }
  double trace() const { return matrix_.trace().real(); }

  /// Reduced state on the listed subsystems (in the listed order).
  QuantumState marginal(const std::vector<int>& keep) const;

 private:
  ComplexMatrix matrix_;
  Dims dims_;
  NormClass norm_class_;
};

/// CP map stored as its Choi matrix.
class Channel {
 public:
  /// Validates complete positivity and, if `trace_preserving`, that
  /// tr_out J = I / d_in within 1e-10.
  Channel(ComplexMatrix choi, int d_in, int d_out, bool trace_preserving);

  const ComplexMatrix& choi() const { return choi_; }
  int d_in() const { return d_in_; }
  int d_out() const { return d_out_; }
  bool trace_preserving() const { return tp_; }

  /// T(Y) for Y on the input space.
  ComplexMatrix apply(const ComplexMatrix& y) const;
  /// Hilbert-Schmidt adjoint T*(Y) for Y on the output space.
  ComplexMatrix adjoint_apply(const ComplexMatrix& y) const;
  /// (T (x) id_R)(X) for X on input (x) R.
  ComplexMatrix apply_on_first(const ComplexMatrix& x, int d_r) const;
  /// (T* (x) T*)(Z) for Z on output (x) output'.
  ComplexMatrix adjoint_tensor2_apply(const ComplexMatrix& z) const;

 private:
  ComplexMatrix choi_;
  int d_in_;
  int d_out_;
  bool tp_;
};

/// |Phi><Phi| on C^d (x) C^d with unit trace.
QuantumState max_entangled(int d);

/// Choi matrix of Y -> sum_k K_k Y K_k^dagger.
Channel j_map(const std::vector<ComplexMatrix>& kraus);
/// Choi matrix of a column-stacking superoperator; `trace_preserving` is
/// detected numerically.
Channel j_map_superop(const ComplexMatrix& superop, int d_in, int d_out);

/// T(Y) = d_in tr_in[(Y^T (x) I) J].
ComplexMatrix j_inv_apply(const Channel& c, const ComplexMatrix& y);

/// Raw Choi/superoperator conversions, no positivity checks.
ComplexMatrix superop_to_choi(const ComplexMatrix& superop, int d_in, int d_out);
ComplexMatrix choi_to_superop(const ComplexMatrix& choi, int d_in, int d_out);

Channel identity_channel(int d);
/// Y -> tr(Y) I / d.
Channel completely_depolarizing_channel(int d);
/// Y -> (1 - p) Y + p tr(Y) I / d.
Channel depolarizing_channel(int d, double p);
/// Y -> tr(Y), output dimension 1.
Channel full_trace_channel(int d);
/// Traces out the subsystems `traced` of an input with signature `dims`.
Channel partial_trace_channel(const Dims& dims, const std::vector<int>& traced);

}  // namespace declab
