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
 * @file linalg.hpp
 * Dense complex linear algebra shared by every other module.
 *
 * Tensor-product ordering is the standard one: for dims (d_0, ..., d_{k-1})
 * the basis index of |i_0 ... i_{k-1}> is i_0 d_1 ... d_{k-1} + ... + i_{k-1}.
 *
 * Superoperators use column stacking: vec(X)[i + j d] = X(i, j), so that
 * vec(A X B) = (B^T (x) A) vec(X).
 */

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace declab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<int>;

/// Shape or index bookkeeping failure.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input outside a numerical domain (non-Hermitian, not PSD, ...).
class NumericalError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Eigenvalues below this are treated as exact zeros of a PSD operator.
inline constexpr double kPsdTolerance = 1e-10;
/// Eigenvalues below -kPsdClampLimit are reported as errors rather than clamped.
inline constexpr double kPsdClampLimit = 1e-8;

bool is_power_of_two(long long n);
/// log2 of a power of two; throws DimensionError otherwise.
int log2_exact(long long n);
long long product(const Dims& dims);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Traces out the subsystems listed in `traced` (indices into `dims`).
ComplexMatrix partial_trace(const ComplexMatrix& m, const Dims& dims,
                            const std::vector<int>& traced);

/// Reorders tensor factors: factor perm[k] of the input becomes factor k.
ComplexMatrix permute_subsystems(const ComplexMatrix& m, const Dims& dims,
                                 const std::vector<int>& perm);

struct Eigh {
  RealVector values;      ///< ascending
  ComplexMatrix vectors;  ///< columns are eigenvectors
};

/// Hermitian eigendecomposition. Throws NumericalError if the input deviates
/// from Hermiticity by more than 1e-8 (max-entry norm of H - H^dagger).
Eigh eigh(const ComplexMatrix& h);

/// Singular values (descending) via eigh of [[0, M], [M^dagger, 0]].
RealVector singular_values(const ComplexMatrix& m);

/// Schatten 1-norm. Hermitian inputs use sum |lambda_i| directly.
double trace_norm(const ComplexMatrix& m);
/// Largest singular value.
double operator_norm(const ComplexMatrix& m);
double max_abs_entry(const ComplexMatrix& m);
double hermiticity_defect(const ComplexMatrix& m);

ComplexMatrix hermitian_part(const ComplexMatrix& m);

/// f applied to the spectrum of a Hermitian matrix.
template <class F>
ComplexMatrix apply_spectral(const Eigh& e, F&& f) {
  RealVector fv(e.values.size());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) fv(i) = f(e.values(i));
  return e.vectors * fv.asDiagonal() * e.vectors.adjoint();
}

/// p^exponent on the support of a PSD matrix, zero on its kernel
/// (Moore-Penrose convention for negative exponents). Eigenvalues in
/// [-1e-8, 1e-10] count as kernel; anything more negative throws.
ComplexMatrix psd_power(const ComplexMatrix& p, double exponent);
ComplexMatrix sqrt_psd(const ComplexMatrix& p);
/// p^{-1/4} in the Moore-Penrose sense.
ComplexMatrix pinv_quarter_root(const ComplexMatrix& p);

/// Clamps small negative eigenvalues of a nearly-PSD Hermitian matrix.
/// Throws NumericalError below -1e-8.
ComplexMatrix clamp_psd(const ComplexMatrix& p);

/// F = sum_{ij} |ij><ji| on C^d (x) C^d.
ComplexMatrix swap_operator(int d);
/// H^{(x) n}.
ComplexMatrix hadamard_all(int n_qubits);
/// In-place Walsh-Hadamard transform H^{(x) n} applied to every column.
void hadamard_columns(ComplexMatrix& m);
/// H^{(x) n} m H^{(x) n} for a square matrix of power-of-two size.
ComplexMatrix hadamard_conjugate(const ComplexMatrix& m);

/// Column-stacking vectorization and its inverse.
ComplexVector vec(const ComplexMatrix& m);
ComplexMatrix unvec(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols);

}  // namespace declab
