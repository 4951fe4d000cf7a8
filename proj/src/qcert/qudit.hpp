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

// Dense complex linear algebra for small bipartite (signal x idler) qudit
// systems. Joint indices are flattened row-major as x_s * dim_idler + x_i.

#include <complex>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qcert {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kNormTol = 1e-12;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPositivityTol = 1e-10;
inline constexpr double kImagResidueTol = 1e-10;

/// Kronecker product, row-major block layout: (a (x) b)(i*rb+k, j*cb+l) = a(i,j) b(k,l).
CMatrix tensor(const CMatrix& a, const CMatrix& b);
CVector tensor(const CVector& a, const CVector& b);

/// Pure bipartite ket. The constructor normalizes; a zero vector is rejected.
class StateVector {
 public:
  StateVector(std::size_t dim_signal, std::size_t dim_idler, CVector amplitudes);

  std::size_t dim_signal() const { return dim_s_; }
  std::size_t dim_idler() const { return dim_i_; }
  std::size_t dim() const { return dim_s_ * dim_i_; }
  const CVector& amplitudes() const { return amp_; }
  cplx amplitude(std::size_t xs, std::size_t xi) const { return amp_(xs * dim_i_ + xi); }

  /// Coefficients as a dim_signal x dim_idler matrix.
  CMatrix coefficient_matrix() const;

 private:
  std::size_t dim_s_;
  std::size_t dim_i_;
  CVector amp_;
};

/// Mixed state on the bipartite space. Construction validates hermiticity,
/// unit trace and positivity; eigenvalues in [-1e-10, 0) are clamped to 0.
class DensityOperator {
 public:
  DensityOperator(std::size_t dim_signal, std::size_t dim_idler, CMatrix matrix);

  static DensityOperator maximally_mixed(std::size_t dim_signal, std::size_t dim_idler);

  std::size_t dim_signal() const { return dim_s_; }
  std::size_t dim_idler() const { return dim_i_; }
  std::size_t dim() const { return dim_s_ * dim_i_; }
  const CMatrix& matrix() const { return m_; }
  cplx element(std::size_t row, std::size_t col) const { return m_(row, col); }
  std::size_t index(std::size_t xs, std::size_t xi) const { return xs * dim_i_ + xi; }

  double purity() const;

 private:
  std::size_t dim_s_;
  std::size_t dim_i_;
  CMatrix m_;
};

/// One outcome of a local measurement: a unit vector on one subsystem.
struct Projector {
  CVector vector;
  int label = 0;

  Projector(CVector v, int label);
};

DensityOperator density_from_ket(const StateVector& psi);

/// Convex combination weight*a + (1-weight)*b.
DensityOperator mix(const DensityOperator& a, const DensityOperator& b, double weight);

/// Tr(rho (P_s (x) P_i)), clamped to [0,1].
double joint_probability(const DensityOperator& rho, const Projector& p_s, const Projector& p_i);
double joint_probability(const DensityOperator& rho, const CVector& v_s, const CVector& v_i);

/// Tr(rho (P_s (x) I)) and Tr(rho (I (x) P_i)).
double signal_marginal(const DensityOperator& rho, const CVector& v_s);
double idler_marginal(const DensityOperator& rho, const CVector& v_i);

/// <psi|rho|psi>.
double fidelity_to_pure(const DensityOperator& rho, const StateVector& target);

/// Post-selected two-qubit block of rho on span{|j>,|k>} (x) span{|j>,|k>}.
/// Qubit basis order is |jj>, |jk>, |kj>, |kk>.
struct PairRestriction {
  std::optional<DensityOperator> rho;  // empty when weight is below 1e-14
  double weight = 0.0;
  bool zero_weight() const { return !rho.has_value(); }
};

PairRestriction restrict_to_pair(const DensityOperator& rho, std::size_t j, std::size_t k);

/// Post-select rho onto span{modes} on both sides and renormalize. Returns
/// the renormalized operator (dimension |modes| x |modes|) and the weight.
std::pair<DensityOperator, double> restrict_to_modes(const DensityOperator& rho,
                                                     const std::vector<std::size_t>& modes);

/// Converts a (near-)real complex probability to a real in [0,1]; a residual
/// imaginary part above 1e-10 is treated as a bug and throws.
double clamp_probability(cplx value);

}  // namespace qcert
