// Copyright 2026 The qcert Authors
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

// Independent oracles and random-state generators shared by the tests.

#include <cmath>
#include <complex>
#include <random>

#include "qcert/qudit.hpp"

namespace qtest {

using qcert::cplx;
using qcert::CMatrix;
using qcert::CVector;

// Kronecker product by its element definition.
inline CMatrix brute_kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

inline CVector random_ket(std::size_t n, std::mt19937_64& g) {
  std::normal_distribution<double> nd;
  CVector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(nd(g), nd(g));
  return v.normalized();
}

inline CMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& g) {
  std::normal_distribution<double> nd;
  CMatrix m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = cplx(nd(g), nd(g));
  return m;
}

// Full-rank random density matrix (Ginibre construction).
inline CMatrix random_density(std::size_t n, std::mt19937_64& g) {
  const CMatrix a = random_matrix(n, n, g);
  CMatrix rho = a * a.adjoint();
  return rho / rho.trace();
}

inline CVector bell_ket() {
  CVector v = CVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v;
}

inline double frobenius(const CMatrix& a, const CMatrix& b) { return (a - b).norm(); }

}  // namespace qtest
