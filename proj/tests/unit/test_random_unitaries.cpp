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

#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "declab/quantum.hpp"
#include "helpers.hpp"

using namespace declab;
using declab::test::basis_op;
using declab::test::max_diff;

namespace {

constexpr double kTwoPi = 6.283185307179586;

ComplexMatrix unit_frobenius(int d, Engine& eng) {
  ComplexMatrix x = random_ginibre(d, d, eng);
  return x / x.norm();
}

// Empirical E[(U (x) U) x (U (x) U)^dagger] with sample i drawn from stream i.
template <class Draw>
ComplexMatrix empirical_twirl(const ComplexMatrix& x, int n, Draw&& draw) {
  ComplexMatrix acc = ComplexMatrix::Zero(x.rows(), x.cols());
  for (int i = 0; i < n; ++i) {
    Engine eng = make_engine({99, static_cast<std::uint64_t>(i)});
    const ComplexMatrix u = draw(eng);
    const ComplexMatrix uu = kron(u, u);
    acc += uu * x * uu.adjoint();
  }
  return acc / static_cast<double>(n);
}

}  // namespace

TEST_CASE("diagonal samples") {
  Engine eng = test::engine(1);
  const DiagUnitary z = sample_diag(Basis::Z, 8, eng);
  REQUIRE(z.phases.size() == 8);
  for (double p : z.phases) {
    CHECK(p >= 0.0);
    CHECK(p < kTwoPi);
  }
  const ComplexMatrix mz = z.matrix();
  CHECK(max_diff(mz.adjoint() * mz, ComplexMatrix::Identity(8, 8)) < 1e-12);
  for (int k = 0; k < 8; ++k) {
    const ComplexMatrix proj = basis_op(8, k, k);
    CHECK(max_diff(mz * proj, proj * mz) == 0.0);
  }
  const DiagUnitary x = sample_diag(Basis::X, 8, eng);
  ComplexMatrix diag = ComplexMatrix::Zero(8, 8);
  for (int k = 0; k < 8; ++k) diag(k, k) = std::polar(1.0, x.phases[k]);
  CHECK(max_diff(x.matrix(), hadamard_all(3) * diag * hadamard_all(3)) < 1e-12);
}

TEST_CASE("uniform phases have vanishing first moment") {
  const int n = 100000;
  Complex acc[2] = {0.0, 0.0};
  Engine eng = test::engine(2);
  for (int i = 0; i < n; ++i) {
    const DiagUnitary z = sample_diag(Basis::Z, 2, eng);
    acc[0] += std::polar(1.0, z.phases[0]);
    acc[1] += std::polar(1.0, z.phases[1]);
  }
  for (const Complex& a : acc) CHECK(std::abs(a / static_cast<double>(n)) <= 5.0 / std::sqrt(n));
}

TEST_CASE("Haar samples are unitary and have the right first moments") {
  Engine eng = test::engine(3);
  for (int d : {1, 2, 5}) {
    const ComplexMatrix u = sample_haar(d, eng);
    CHECK(max_diff(u.adjoint() * u, ComplexMatrix::Identity(d, d)) < 1e-10);
  }
  const int n = 100000;
  ComplexMatrix mean = ComplexMatrix::Zero(2, 2);
  for (int i = 0; i < n; ++i) mean += sample_haar(2, eng);
  CHECK(max_abs_entry(mean / static_cast<double>(n)) <= 5.0 / std::sqrt(n));

  const int m = 10000;
  ComplexMatrix x = random_ginibre(3, 3, eng);
  ComplexMatrix twirled = ComplexMatrix::Zero(3, 3);
  for (int i = 0; i < m; ++i) {
    const ComplexMatrix u = sample_haar(3, eng);
    twirled += u * x * u.adjoint();
  }
  twirled /= static_cast<double>(m);
  const ComplexMatrix expect = x.trace() / 3.0 * ComplexMatrix::Identity(3, 3);
  CHECK(max_diff(twirled, expect) <= 5.0 * operator_norm(x) / std::sqrt(m));
}

TEST_CASE("D[l] circuits") {
  Engine eng = test::engine(4);
  const DiagCircuit c1 = sample_d_ell(3, 1, eng);
  REQUIRE(c1.layers.size() == 3);
  CHECK(c1.layers[0].basis == Basis::Z);
  CHECK(c1.layers[1].basis == Basis::X);
  CHECK(c1.layers[2].basis == Basis::Z);
  const DiagCircuit c3 = sample_d_ell(2, 3, eng);
  REQUIRE(c3.layers.size() == 7);
  for (std::size_t k = 0; k < c3.layers.size(); ++k) {
    CHECK(c3.layers[k].basis == (k % 2 ? Basis::X : Basis::Z));
  }
  const ComplexMatrix u = c3.matrix();
  CHECK(max_diff(u.adjoint() * u, ComplexMatrix::Identity(4, 4)) < 1e-10);
  ComplexMatrix manual = ComplexMatrix::Identity(4, 4);
  for (const DiagUnitary& l : c3.layers) manual = l.matrix() * manual;
  CHECK(max_diff(u, manual) < 1e-13);
}

TEST_CASE("circuit text format round trips") {
  const DiagCircuit c = sample_d_ell(2, 2, RngSpec{7, 3});
  std::stringstream ss;
  write_circuit(ss, c, 3);
  CHECK(ss.str().rfind("circuit 3 ell 2\nbasis:Z ", 0) == 0);
  const DiagCircuit back = read_circuit(ss);
  REQUIRE(back.layers.size() == c.layers.size());
  for (std::size_t k = 0; k < c.layers.size(); ++k) {
    CHECK(back.layers[k].basis == c.layers[k].basis);
    CHECK(back.layers[k].phases == c.layers[k].phases);
  }
}

TEST_CASE("samplers are reproducible") {
  const RngSpec key{12345, 17};
  CHECK(max_diff(sample_haar(4, key), sample_haar(4, key)) == 0.0);
  CHECK(sample_diag(Basis::X, 4, key).phases == sample_diag(Basis::X, 4, key).phases);
  CHECK(max_diff(sample_d_ell(2, 2, key).matrix(), sample_d_ell(2, 2, key).matrix()) == 0.0);
  CHECK(max_diff(sample_rqc(3, 5, key), sample_rqc(3, 5, key)) == 0.0);
  CHECK(max_diff(sample_haar(4, key), sample_haar(4, RngSpec{12345, 18})) > 0.0);
  CHECK(max_diff(sample_haar(4, key), sample_haar(4, RngSpec{12346, 17})) > 0.0);
}

TEST_CASE("random quantum circuits") {
  Engine eng = test::engine(5);
  CHECK(max_diff(sample_rqc(3, 0, eng), ComplexMatrix::Identity(8, 8)) == 0.0);
  const ComplexMatrix u = sample_rqc(3, 50, eng);
  CHECK(max_diff(u.adjoint() * u, ComplexMatrix::Identity(8, 8)) < 1e-9);
  CHECK_THROWS(sample_rqc(1, 1, eng));
  CHECK_NOTHROW(sample_rqc(1, 0, eng));
  const int n = 20000;
  ComplexMatrix mean = ComplexMatrix::Zero(4, 4);
  for (int i = 0; i < n; ++i) mean += sample_rqc(2, 1, eng);
  CHECK(max_abs_entry(mean / static_cast<double>(n)) <= 5.0 / std::sqrt(n));
}

TEST_CASE("two-qubit gate embedding") {
  Engine eng = test::engine(6);
  const ComplexMatrix g = sample_haar(4, eng);
  CHECK(max_diff(embed_two_qubit(g, 3, 0, 1), kron(g, ComplexMatrix::Identity(2, 2))) < 1e-15);
  CHECK(max_diff(embed_two_qubit(g, 3, 1, 2), kron(ComplexMatrix::Identity(2, 2), g)) < 1e-15);
  const ComplexMatrix f = swap_operator(2);
  CHECK(max_diff(embed_two_qubit(g, 2, 1, 0), f * g * f) < 1e-15);
}

TEST_CASE("diagonal twirl examples") {
  CHECK(max_diff(twirl2_diag(ComplexMatrix::Identity(4, 4), Basis::Z), ComplexMatrix::Identity(4, 4)) <
        1e-15);
  const ComplexMatrix e0110 = basis_op(4, 1, 2);
  CHECK(max_diff(twirl2_diag(e0110, Basis::Z), e0110) == 0.0);
  CHECK(max_abs_entry(twirl2_diag(basis_op(4, 0, 3), Basis::Z)) == 0.0);
  CHECK(max_diff(twirl2_diag(ComplexMatrix::Identity(16, 16), Basis::X),
                 ComplexMatrix::Identity(16, 16)) < 1e-14);
  CHECK_THROWS_AS(twirl2_diag(ComplexMatrix::Identity(9, 9), Basis::Z), DimensionError);
}

TEST_CASE("diagonal twirl examples agree with sampling") {
  const int n = 100000;
  for (const ComplexMatrix& x : {basis_op(4, 1, 2), basis_op(4, 0, 3)}) {
    const ComplexMatrix mc =
        empirical_twirl(x, n, [](Engine& e) { return sample_diag(Basis::Z, 2, e).matrix(); });
    CHECK(max_diff(mc, twirl2_diag(x, Basis::Z)) <= 5.0 / std::sqrt(n));
  }
}

TEST_CASE("diagonal twirls are idempotent and trace preserving") {
  Engine eng = test::engine(7);
  for (int d : {2, 4, 8}) {
    const ComplexMatrix x = random_ginibre(d * d, d * d, eng);
    for (Basis b : {Basis::Z, Basis::X}) {
      const ComplexMatrix once = twirl2_diag(x, b);
      CHECK(max_diff(twirl2_diag(once, b), once) < 1e-12);
      CHECK(std::abs(once.trace() - x.trace()) < 1e-12);
    }
  }
}

TEST_CASE("Haar twirl examples") {
  CHECK(max_diff(twirl2_haar(ComplexMatrix::Identity(9, 9)), ComplexMatrix::Identity(9, 9)) < 1e-14);
  CHECK(max_diff(twirl2_haar(swap_operator(3)), swap_operator(3)) < 1e-14);
  const ComplexMatrix expect = (ComplexMatrix::Identity(4, 4) + swap_operator(2)) / 6.0;
  CHECK(max_diff(twirl2_haar(basis_op(4, 0, 0)), expect) < 1e-15);
  const int n = 20000;
  const ComplexMatrix mc =
      empirical_twirl(basis_op(4, 0, 0), n, [](Engine& e) { return sample_haar(2, e); });
  CHECK(max_diff(mc, expect) <= 5.0 / std::sqrt(n));
  Engine eng = test::engine(8);
  const ComplexMatrix x = random_ginibre(16, 16, eng);
  const ComplexMatrix once = twirl2_haar(x);
  CHECK(max_diff(twirl2_haar(once), once) < 1e-12);
}

TEST_CASE("Haar twirl absorbs R on both sides") {
  for (int n : {1, 2}) {
    const MomentSuperOp r = map_r_pow(n, 1);
    const MomentSuperOp h = map_twirl_haar(n);
    CHECK(max_diff(h.matrix * r.matrix, h.matrix) < 1e-10);
    CHECK(max_diff(r.matrix * h.matrix, h.matrix) < 1e-10);
    CHECK(max_diff(h.matrix * h.matrix, h.matrix) < 1e-12);
  }
}

TEST_CASE("R^l superoperators") {
  for (int n : {1, 2}) {
    const int d = 1 << n;
    for (int ell : {1, 2, 3}) {
      const MomentSuperOp r = map_r_pow(n, ell);
      CHECK(r.d == d);
      CHECK(r.fold == 2);
      const ComplexMatrix id = ComplexMatrix::Identity(d * d, d * d);
      CHECK(max_diff(r.apply(id), id) < 1e-12);
      Engine eng = test::engine(9);
      const ComplexMatrix x = random_ginibre(d * d, d * d, eng);
      CHECK(max_diff(r.apply(x), apply_r_pow(x, ell)) < 1e-12);
      CHECK(std::abs(r.apply(x).trace() - x.trace()) < 1e-10);
      const ComplexMatrix h = test::random_hermitian(d * d, eng);
      CHECK(hermiticity_defect(r.apply(h)) < 1e-12);
    }
  }
  CHECK_THROWS_AS(map_r_pow(4, 1), DimensionError);
}

TEST_CASE("R^l contracts towards the Haar twirl") {
  Engine eng = test::engine(11);
  const ComplexMatrix y = test::random_hermitian(16, eng);
  double prev = INFINITY;
  for (int ell = 2; ell <= 5; ++ell) {
    const double gap = (apply_r_pow(y, ell) - apply_r_pow(y, ell + 1)).norm();
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(max_diff(apply_r_pow(y, 40), twirl2_haar(y)) < 1e-10);
}

TEST_CASE("moment decomposition weights in rational arithmetic") {
  CHECK(lemma5_weight_exact(1, 1) == "1/1");
  CHECK(lemma5_weight_exact(2, 1) == "3/8");
  CHECK(lemma5_weight_exact(2, 2) == "13/128");
  CHECK(lemma5_weight(2, 2) == doctest::Approx(0.1015625));
  CHECK(lemma5_weight_exact(1, 2) == "5/8");
  CHECK(lemma5_weight_exact(3, 3) == "329/131072");
}

TEST_CASE("moment decomposition yields a unital channel") {
  for (int n : {1, 2}) {
    for (int ell : {1, 2, 3}) {
      const Lemma5Result r = lemma5_decompose(n, ell);
      CHECK(r.min_choi_eigenvalue >= -1e-9);
      CHECK(r.trace_residual <= 1e-9);
      CHECK(r.unital_residual <= 1e-9);
      CHECK(r.decomposition_residual <= 1e-12);
    }
  }
  // p_1 = 1 at d = 2, so R itself is the channel C.
  const Lemma5Result r = lemma5_decompose(1, 1);
  CHECK(r.p_ell == 1.0);
  CHECK(max_diff(r.c_choi, superop_to_choi(map_r_pow(1, 1).matrix, 4, 4)) < 1e-12);
}

TEST_CASE("sampled second moments match the exact twirls") {
  const int n = 10000;
  const double tol = 5.0 / std::sqrt(n);
  Engine eng = test::engine(10);
  for (int q : {1, 2}) {
    const int d = 1 << q;
    const ComplexMatrix x = unit_frobenius(d * d, eng);
    CHECK(max_diff(empirical_twirl(x, n, [d](Engine& e) { return sample_haar(d, e); }),
                   twirl2_haar(x)) <= tol);
    CHECK(max_diff(empirical_twirl(x, n, [d](Engine& e) { return sample_diag(Basis::X, d, e).matrix(); }),
                   twirl2_diag(x, Basis::X)) <= tol);
    for (int ell : {1, 2}) {
      CHECK(max_diff(empirical_twirl(x, n, [q, ell](Engine& e) { return sample_d_ell(q, ell, e).matrix(); }),
                     apply_r_pow(x, ell)) <= tol);
    }
  }
}
