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
#include <sstream>

#include "declab/io.hpp"
#include "declab/quantum.hpp"
#include "helpers.hpp"

using namespace declab;
using declab::test::max_diff;

namespace {

ComplexMatrix pauli_x() {
  ComplexMatrix x = ComplexMatrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  return x;
}

ComplexMatrix ket_bra(const ComplexVector& a, const ComplexVector& b) { return a * b.adjoint(); }

ComplexVector ket(int d, int i) {
  ComplexVector v = ComplexVector::Zero(d);
  v(i) = 1.0;
  return v;
}

}  // namespace

TEST_CASE("kron of identities and diagonals") {
  CHECK(max_diff(kron(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)),
                 ComplexMatrix::Identity(4, 4)) == 0.0);
  ComplexMatrix a = ComplexMatrix::Zero(2, 2), b = ComplexMatrix::Zero(2, 2);
  a(0, 0) = 1;
  a(1, 1) = 2;
  b(0, 0) = 3;
  b(1, 1) = 4;
  const ComplexMatrix k = kron(a, b);
  CHECK(k(0, 0) == Complex(3));
  CHECK(k(1, 1) == Complex(4));
  CHECK(k(2, 2) == Complex(6));
  CHECK(k(3, 3) == Complex(8));
  CHECK(max_abs_entry(k - ComplexMatrix(k.diagonal().asDiagonal())) == 0.0);
}

TEST_CASE("kron index order: X (x) X maps |00> to |11>") {
  const ComplexVector out = kron(pauli_x(), pauli_x()) * ket(4, 0);
  CHECK(std::abs(out(3) - 1.0) == 0.0);
  CHECK(out.norm() == doctest::Approx(1.0));
}

TEST_CASE("partial trace of products and maximally entangled states") {
  Engine eng = test::engine(1);
  const ComplexMatrix ra = random_density(3, 3, eng);
  const ComplexMatrix sb = 0.5 * random_density(2, 2, eng);
  CHECK(max_diff(partial_trace(kron(ra, sb), {3, 2}, {1}), 0.5 * ra) < 1e-14);
  CHECK(max_diff(partial_trace(max_entangled(2).matrix(), {2, 2}, {1}),
                 ComplexMatrix::Identity(2, 2) / 2.0) < 1e-15);
}

TEST_CASE("partial trace over a middle factor matches an index-sum loop") {
  Engine eng = test::engine(2);
  const ComplexMatrix m = random_ginibre(12, 12, eng);
  const ComplexMatrix got = partial_trace(m, {2, 3, 2}, {1});
  ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c)
      for (int ap = 0; ap < 2; ++ap)
        for (int cp = 0; cp < 2; ++cp)
          for (int b = 0; b < 3; ++b)
            expect(a * 2 + c, ap * 2 + cp) += m((a * 3 + b) * 2 + c, (ap * 3 + b) * 2 + cp);
  CHECK(max_diff(got, expect) < 1e-13);
  CHECK(std::abs(got.trace() - m.trace()) < 1e-12);
}

TEST_CASE("partial trace rejects bad input") {
  CHECK_THROWS_AS(partial_trace(ComplexMatrix::Identity(4, 4), {2, 3}, {0}), DimensionError);
  CHECK_THROWS_AS(partial_trace(ComplexMatrix::Identity(4, 4), {2, 2}, {2}), DimensionError);
}

TEST_CASE("permute_subsystems swaps tensor factors") {
  Engine eng = test::engine(3);
  const ComplexMatrix a = random_ginibre(2, 2, eng), b = random_ginibre(3, 3, eng);
  CHECK(max_diff(permute_subsystems(kron(a, b), {2, 3}, {1, 0}), kron(b, a)) < 1e-15);
}

TEST_CASE("eigh spectra and reconstruction") {
  const Eigh id = eigh(ComplexMatrix::Identity(4, 4));
  for (int i = 0; i < 4; ++i) CHECK(id.values(i) == doctest::Approx(1.0));
  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  z(0, 0) = 1;
  z(1, 1) = -1;
  const Eigh ez = eigh(z);
  CHECK(ez.values(0) == doctest::Approx(-1.0));
  CHECK(ez.values(1) == doctest::Approx(1.0));
  Engine eng = test::engine(4);
  const ComplexMatrix h = test::random_hermitian(8, eng);
  const Eigh e = eigh(h);
  CHECK(max_diff(e.vectors * e.values.asDiagonal() * e.vectors.adjoint(), h) < 1e-9 * 8);
  CHECK_THROWS_AS(eigh(random_ginibre(3, 3, eng)), NumericalError);
}

TEST_CASE("trace norm examples") {
  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  z(0, 0) = 1;
  z(1, 1) = -1;
  CHECK(trace_norm(z) == doctest::Approx(2.0));
  Engine eng = test::engine(5);
  CHECK(trace_norm(sample_haar(5, eng)) == doctest::Approx(5.0).epsilon(1e-12));
  ComplexVector plus = ComplexVector::Constant(2, 1.0 / std::sqrt(2.0));
  const ComplexMatrix diff = ket_bra(ket(2, 0), ket(2, 0)) - ket_bra(plus, plus);
  CHECK(trace_norm(diff) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("trace norm is unitarily invariant") {
  Engine eng = test::engine(6);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix x = random_ginibre(4, 4, eng);
    const ComplexMatrix u = sample_haar(4, eng), v = sample_haar(4, eng);
    CHECK(std::abs(trace_norm(u * x * v) - trace_norm(x)) < 1e-9);
  }
}

TEST_CASE("pinv_quarter_root examples") {
  CHECK(max_diff(pinv_quarter_root(ComplexMatrix::Identity(3, 3)), ComplexMatrix::Identity(3, 3)) <
        1e-14);
  ComplexMatrix p = ComplexMatrix::Zero(2, 2);
  p(0, 0) = 4;
  ComplexMatrix q = pinv_quarter_root(p);
  CHECK(q(0, 0).real() == doctest::Approx(std::pow(4.0, -0.25)));
  CHECK(std::abs(q(1, 1)) < 1e-15);
  p(0, 0) = 16;
  p(1, 1) = 1;
  q = pinv_quarter_root(p);
  CHECK(q(0, 0).real() == doctest::Approx(0.5));
  CHECK(q(1, 1).real() == doctest::Approx(1.0));
  ComplexMatrix neg = ComplexMatrix::Identity(2, 2);
  neg(1, 1) = -1e-3;
  CHECK_THROWS_AS(pinv_quarter_root(neg), NumericalError);
}

TEST_CASE("pinv_quarter_root to the fourth times p is the support projector") {
  Engine eng = test::engine(7);
  for (int rank : {1, 2, 4}) {
    const ComplexMatrix p = random_density(5, rank, eng);
    const ComplexMatrix q = pinv_quarter_root(p);
    const ComplexMatrix proj = q * q * q * q * p;
    CHECK(max_diff(proj * proj, proj) < 1e-8);
    CHECK(std::abs(proj.trace().real() - rank) < 1e-8);
    CHECK(max_diff(proj * p, p) < 1e-8);
  }
}

TEST_CASE("max_entangled states") {
  CHECK(std::abs(max_entangled(1).matrix()(0, 0) - 1.0) < 1e-15);
  const QuantumState bell = max_entangled(2);
  CHECK(max_diff(bell.marginal({0}).matrix(), ComplexMatrix::Identity(2, 2) / 2.0) < 1e-15);
  CHECK(max_diff(bell.marginal({1}).matrix(), ComplexMatrix::Identity(2, 2) / 2.0) < 1e-15);
  const ComplexMatrix phi4 = max_entangled(4).matrix();
  CHECK((phi4 * phi4).trace().real() == doctest::Approx(1.0));
  const ComplexMatrix m4 = partial_trace(phi4, {4, 4}, {1});
  CHECK((m4 * m4).trace().real() == doctest::Approx(0.25));
}

TEST_CASE("swap operator") {
  const ComplexMatrix f = swap_operator(2);
  CHECK(std::abs((f * ket(4, 1))(2) - 1.0) == 0.0);
  CHECK(std::abs(swap_operator(5).trace() - 5.0) == 0.0);
  CHECK(max_diff(swap_operator(3) * swap_operator(3), ComplexMatrix::Identity(9, 9)) == 0.0);
}

TEST_CASE("swap trick: tr[(X (x) Y) F] = tr[XY]") {
  Engine eng = test::engine(8);
  for (int t = 0; t < 100; ++t) {
    const int d = 1 + t % 4;
    const ComplexMatrix x = random_ginibre(d, d, eng), y = random_ginibre(d, d, eng);
    CHECK(std::abs((kron(x, y) * swap_operator(d)).trace() - (x * y).trace()) < 1e-10);
  }
}

TEST_CASE("Choi matrices of standard channels") {
  CHECK(max_diff(identity_channel(2).choi(), max_entangled(2).matrix()) < 1e-15);
  CHECK(max_diff(completely_depolarizing_channel(2).choi(), ComplexMatrix::Identity(4, 4) / 4.0) <
        1e-15);
  const Channel pt = partial_trace_channel({2, 2}, {1});
  CHECK(pt.d_in() == 4);
  CHECK(pt.d_out() == 2);
  const ComplexMatrix tau_b = partial_trace(pt.choi(), {4, 2}, {0});
  CHECK(max_diff(tau_b, ComplexMatrix::Identity(2, 2) / 2.0) < 1e-15);
  CHECK(pt.choi().trace().real() == doctest::Approx(1.0));
  // explicit (id (x) tr_2)(Phi_4)
  ComplexMatrix expect = ComplexMatrix::Zero(8, 8);
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 2; ++a2)
      for (int b1 = 0; b1 < 2; ++b1)
        for (int b2 = 0; b2 < 2; ++b2)
          if (a2 == b2) expect((a1 * 2 + a2) * 2 + a1, (b1 * 2 + b2) * 2 + b1) = 0.25;
  CHECK(max_diff(pt.choi(), expect) < 1e-15);
}

TEST_CASE("Choi inverse examples") {
  Engine eng = test::engine(9);
  const ComplexMatrix rho = random_density(3, 3, eng);
  CHECK(max_diff(j_inv_apply(j_map({ComplexMatrix::Identity(3, 3)}), rho), rho) < 1e-14);
  const Channel dep = completely_depolarizing_channel(3);
  const ComplexMatrix y = random_ginibre(3, 3, eng);
  CHECK(max_diff(j_inv_apply(dep, y), y.trace() * ComplexMatrix::Identity(3, 3) / 3.0) < 1e-14);
}

TEST_CASE("Choi inverse matches direct Kraus application") {
  Engine eng = test::engine(10);
  for (int t = 0; t < 50; ++t) {
    const int d_in = t % 2 ? 2 : 4, d_out = (t / 2) % 2 ? 2 : 4;
    const ComplexMatrix v = sample_haar(d_out * 3, eng).leftCols(d_in);
    std::vector<ComplexMatrix> kraus;
    for (int k = 0; k < 3; ++k) kraus.push_back(v.middleRows(k * d_out, d_out));
    const Channel ch = j_map(kraus);
    CHECK(ch.trace_preserving());
    const ComplexMatrix rho = random_density(d_in, d_in, eng);
    ComplexMatrix direct = ComplexMatrix::Zero(d_out, d_out);
    for (const auto& k : kraus) direct += k * rho * k.adjoint();
    CHECK(max_diff(j_inv_apply(ch, rho), direct) < 1e-10);
    CHECK(max_diff(ch.apply(rho), direct) < 1e-10);
    CHECK(std::abs(direct.trace() - 1.0) < 1e-10);
  }
}

TEST_CASE("superoperator and Choi conversions round trip") {
  Engine eng = test::engine(11);
  const Channel ch = random_channel(3, 2, 2, eng);
  const ComplexMatrix s = choi_to_superop(ch.choi(), 3, 2);
  CHECK(max_diff(superop_to_choi(s, 3, 2), ch.choi()) < 1e-14);
  const ComplexMatrix x = random_ginibre(3, 3, eng);
  CHECK(max_diff(unvec(s * vec(x), 2, 2), ch.apply(x)) < 1e-13);
  CHECK(j_map_superop(s, 3, 2).trace_preserving());
}

TEST_CASE("vec uses column stacking") {
  ComplexMatrix m(2, 2);
  m << 1, 2, 3, 4;
  const ComplexVector v = vec(m);
  CHECK(v(1) == Complex(3));
  CHECK(v(2) == Complex(2));
  Engine eng = test::engine(12);
  const ComplexMatrix a = random_ginibre(2, 2, eng), b = random_ginibre(2, 2, eng);
  CHECK((vec(a * m * b) - kron(b.transpose(), a) * vec(m)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("adjoint is the Hilbert-Schmidt dual") {
  Engine eng = test::engine(13);
  for (int t = 0; t < 10; ++t) {
    const Channel ch = random_channel(3, 2, 2, eng);
    const ComplexMatrix x = random_ginibre(3, 3, eng), y = random_ginibre(2, 2, eng);
    CHECK(std::abs((y.adjoint() * ch.apply(x)).trace() - (ch.adjoint_apply(y).adjoint() * x).trace()) <
          1e-12);
  }
}

TEST_CASE("adjoint swap image is bounded by d_A^2 tr[J(C)^2]") {
  Engine eng = test::engine(14);
  for (int t = 0; t < 50; ++t) {
    const int d_in = 2 + t % 3, d_out = 2 + (t / 3) % 2;
    const ComplexMatrix g = random_ginibre(d_in * d_out, 1 + t % 4, eng);
    ComplexMatrix j = g * g.adjoint();
    j /= j.trace().real() * (1.0 + t % 5);
    const Channel c(j, d_in, d_out, false);
    const double lhs = operator_norm(c.adjoint_tensor2_apply(swap_operator(d_out)));
    CHECK(lhs <= d_in * d_in * (j * j).trace().real() + 1e-8);
  }
}

TEST_CASE("adjoint swap image can exceed d_A tr[J(C)^2]") {
  // C(X) = |0><0| X |0><0|: the image of F is |00><00| while d tr J^2 = 1/d.
  for (int d : {2, 3, 4}) {
    const Channel c = j_map({test::basis_op(d, 0, 0)});
    const double lhs = operator_norm(c.adjoint_tensor2_apply(swap_operator(d)));
    const double tr_j2 = (c.choi() * c.choi()).trace().real();
    CHECK(lhs == doctest::Approx(1.0));
    CHECK(d * tr_j2 == doctest::Approx(1.0 / d));
    CHECK(d * d * tr_j2 == doctest::Approx(1.0));
  }
}

TEST_CASE("chain rule for differences of products on Phi") {
  Engine eng = test::engine(15);
  for (int t = 0; t < 50; ++t) {
    const int d = 2 + t % 3;
    const ComplexVector phi = [&] {
      ComplexVector v = ComplexVector::Zero(d * d);
      for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
      return v;
    }();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    const ComplexMatrix u = sample_haar(d, eng), up = sample_haar(d, eng);
    const ComplexMatrix v = sample_haar(d, eng), vp = sample_haar(d, eng);
    auto dist = [&](const ComplexMatrix& a, const ComplexMatrix& b) {
      return (kron(a - b, id) * phi).norm();
    };
    CHECK(dist(u * up, v * vp) <= dist(u, v) + dist(up, vp) + 1e-10);
  }
}

TEST_CASE("hadamard_all") {
  const ComplexVector plus = hadamard_all(1) * ket(2, 0);
  CHECK(std::abs(plus(0) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(plus(1) - 1.0 / std::sqrt(2.0)) < 1e-15);
  const ComplexMatrix h2 = hadamard_all(2);
  CHECK(h2.rows() == 4);
  CHECK((h2.cwiseAbs().array() - 0.5).abs().maxCoeff() < 1e-15);
  const ComplexMatrix h3 = hadamard_all(3);
  CHECK(max_diff(h3 * h3, ComplexMatrix::Identity(8, 8)) < 1e-12);
  CHECK(max_diff(h3, h3.transpose()) == 0.0);
  Engine eng = test::engine(16);
  const ComplexMatrix m = random_ginibre(8, 8, eng);
  CHECK(max_diff(hadamard_conjugate(m), h3 * m * h3) < 1e-13);
}

TEST_CASE("state validation") {
  CHECK_THROWS_AS(QuantumState(ComplexMatrix::Identity(2, 2), {2}), NumericalError);
  CHECK_NOTHROW(QuantumState(ComplexMatrix::Identity(2, 2) / 4.0, {2}, NormClass::subnormalized));
  CHECK_THROWS_AS(QuantumState(ComplexMatrix::Identity(4, 4) / 4.0, {2, 3}), DimensionError);
  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
  bad(1, 1) = -0.5;
  bad(0, 0) = 1.5;
  CHECK_THROWS_AS(QuantumState(bad, {2}), NumericalError);
  ComplexMatrix almost = ComplexMatrix::Zero(2, 2);
  almost(0, 0) = 1.0;
  almost(1, 1) = -5e-9;
  const QuantumState clamped(almost, {2});
  CHECK(eigh(clamped.matrix()).values(0) >= 0.0);
}

TEST_CASE("channel validation") {
  ComplexMatrix j = ComplexMatrix::Identity(4, 4) / 4.0;
  j(0, 0) = -0.1;
  CHECK_THROWS_AS(Channel(j, 2, 2, false), NumericalError);
  CHECK_THROWS_AS(Channel(ComplexMatrix::Identity(4, 4) / 2.0, 2, 2, true), NumericalError);
  CHECK_NOTHROW(Channel(ComplexMatrix::Identity(4, 4) / 2.0, 2, 2, false));
  CHECK_THROWS(depolarizing_channel(2, 1.5));
}

TEST_CASE("matrix text format round trips") {
  Engine eng = test::engine(17);
  const ComplexMatrix m = random_ginibre(3, 2, eng);
  std::stringstream ss;
  write_matrix(ss, m);
  CHECK(ss.str().rfind("3 2\n", 0) == 0);
  CHECK(max_diff(read_matrix(ss), m) == 0.0);
  std::stringstream bad("2 2\n1,0 0,0\n0,0");
  CHECK_THROWS_AS(read_matrix(bad), ParseError);
  std::stringstream garbage("2 2\n1,0 x,0 0,0 1,0");
  CHECK_THROWS_AS(read_matrix(garbage), ParseError);
  CHECK(format_real(0.1) == "0.10000000000000001");
}
