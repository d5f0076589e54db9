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

#include <cstdint>

#include "declab/linalg.hpp"
#include "declab/random_unitaries.hpp"

namespace declab::test {

inline double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return max_abs_entry(a - b);
}

inline Engine engine(std::uint64_t seed) { return make_engine({seed, 0}); }

/// Random Hermitian matrix with unit-variance Gaussian entries.
inline ComplexMatrix random_hermitian(int d, Engine& eng) {
  const ComplexMatrix g = random_ginibre(d, d, eng);
  return 0.5 * (g + g.adjoint());
}

inline ComplexMatrix basis_op(int d, int i, int j) {
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

}  // namespace declab::test
