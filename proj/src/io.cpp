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

#include "declab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace declab {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_matrix(std::ostream& os, const ComplexMatrix& m) {
  os << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) os << ' ';
      os << format_real(m(i, j).real()) << ',' << format_real(m(i, j).imag());
    }
    os << '\n';
  }
}

ComplexMatrix read_matrix(std::istream& is) {
  long long rows = 0, cols = 0;
  if (!(is >> rows >> cols) || rows <= 0 || cols <= 0) {
    throw ParseError("matrix file: bad header, expected \"rows cols\"");
  }
  ComplexMatrix m(rows, cols);
  std::string tok;
  for (long long k = 0; k < rows * cols; ++k) {
    if (!(is >> tok)) {
      throw ParseError("matrix file: expected " + std::to_string(rows * cols) +
                       " entries, found " + std::to_string(k));
    }
    const auto comma = tok.find(',');
    if (comma == std::string::npos) {
      throw ParseError("matrix file: entry '" + tok + "' is not re,im");
    }
    double re = 0.0, im = 0.0;
    try {
      std::size_t used = 0;
      re = std::stod(tok.substr(0, comma), &used);
      if (used != comma) throw std::invalid_argument(tok);
      const std::string imag = tok.substr(comma + 1);
      im = std::stod(imag, &used);
      if (used != imag.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ParseError("matrix file: cannot parse entry '" + tok + "'");
    }
    if (!std::isfinite(re) || !std::isfinite(im)) {
      throw ParseError("matrix file: non-finite entry '" + tok + "'");
    }
    m(k / cols, k % cols) = Complex(re, im);
  }
  if (is >> tok) throw ParseError("matrix file: trailing data '" + tok + "'");
  return m;
}

void save_matrix(const std::string& path, const ComplexMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_matrix(out, m);
}

ComplexMatrix load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_matrix(in);
}

}  // namespace declab
