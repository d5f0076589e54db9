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
 * @file io.hpp
 * Plain-text matrix files: a "rows cols" header followed by row-major
 * "re,im" pairs at 17 significant digits.
 */

#include <iosfwd>
#include <string>

#include "declab/linalg.hpp"

namespace declab {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_matrix(std::ostream& os, const ComplexMatrix& m);
ComplexMatrix read_matrix(std::istream& is);

void save_matrix(const std::string& path, const ComplexMatrix& m);
ComplexMatrix load_matrix(const std::string& path);

/// Shortest round-trippable rendering at 17 significant digits.
std::string format_real(double x);

}  // namespace declab
