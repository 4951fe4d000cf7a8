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

#include "qcert/qudit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qcert/error.hpp"

namespace qcert {

CMatrix tensor(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CVector tensor(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

StateVector::StateVector(std::size_t dim_signal, std::size_t dim_idler, CVector amplitudes)
    : dim_s_(dim_signal), dim_i_(dim_idler), amp_(std::move(amplitudes)) {
  if (dim_s_ == 0 || dim_i_ == 0) throw ValidationError("StateVector: dimensions must be positive");
  if (static_cast<std::size_t>(amp_.size()) != dim_s_ * dim_i_) {
    throw ValidationError("StateVector: amplitude count does not match dim_signal*dim_idler");
  }
  const double n = amp_.norm();
  if (!std::isfinite(n) || n < 1e-300) throw ValidationError("StateVector: zero or non-finite amplitudes");
  amp_ /= n;
}

CMatrix StateVector::coefficient_matrix() const {
  CMatrix c(dim_s_, dim_i_);
  for (std::size_t s = 0; s < dim_s_; ++s)
    for (std::size_t i = 0; i < dim_i_; ++i) c(s, i) = amp_(s * dim_i_ + i);
  return c;
}

DensityOperator::DensityOperator(std::size_t dim_signal, std::size_t dim_idler, CMatrix matrix)
    : dim_s_(dim_signal), dim_i_(dim_idler), m_(std::move(matrix)) {
  const auto n = static_cast<Eigen::Index>(dim_s_ * dim_i_);
  if (dim_s_ == 0 || dim_i_ == 0) throw ValidationError("DensityOperator: dimensions must be positive");
  if (m_.rows() != n || m_.cols() != n) {
    throw ValidationError("DensityOperator: matrix size does not match dim_signal*dim_idler");
  }
  if (!m_.allFinite()) throw ValidationError("DensityOperator: non-finite entries");
  const double herm = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol) {
    std::ostringstream os;
    os << "DensityOperator: not hermitian (max deviation " << herm << ")";
    throw ComputationError(os.str());
  }
  m_ = 0.5 * (m_ + m_.adjoint());
  const cplx tr = m_.trace();
  if (std::abs(tr - 1.0) > kTraceTol) {
    std::ostringstream os;
    os << "DensityOperator: trace " << tr.real() << " differs from 1";
    throw ComputationError(os.str());
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m_);
  const auto& ev = es.eigenvalues();
  if (ev.minCoeff() < -kPositivityTol) {
    std::ostringstream os;
    os << "DensityOperator: negative eigenvalue " << ev.minCoeff();
    throw ComputationError(os.str());
  }
  if (ev.minCoeff() < 0.0) {
    Eigen::VectorXd clipped = ev.cwiseMax(0.0);
    clipped /= clipped.sum();
    m_ = es.eigenvectors() * clipped.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  }
}

DensityOperator DensityOperator::maximally_mixed(std::size_t dim_signal, std::size_t dim_idler) {
  const auto n = static_cast<Eigen::Index>(dim_signal * dim_idler);
  return DensityOperator(dim_signal, dim_idler, CMatrix::Identity(n, n) / static_cast<double>(n));
}

double DensityOperator::purity() const { return (m_ * m_).trace().real(); }

Projector::Projector(CVector v, int lbl) : vector(std::move(v)), label(lbl) {
  if (std::abs(vector.norm() - 1.0) > kNormTol) throw ValidationError("Projector: vector is not normalized");
}

DensityOperator density_from_ket(const StateVector& psi) {
  const CVector& a = psi.amplitudes();
  return DensityOperator(psi.dim_signal(), psi.dim_idler(), a * a.adjoint());
}

DensityOperator mix(const DensityOperator& a, const DensityOperator& b, double weight) {
  if (a.dim_signal() != b.dim_signal() || a.dim_idler() != b.dim_idler()) {
    throw ValidationError("mix: dimension mismatch");
  }
  if (!(weight >= 0.0 && weight <= 1.0)) throw ValidationError("mix: weight outside [0,1]");
  return DensityOperator(a.dim_signal(), a.dim_idler(), weight * a.matrix() + (1.0 - weight) * b.matrix());
}

double clamp_probability(cplx value) {
  if (std::abs(value.imag()) > kImagResidueTol) {
    std::ostringstream os;
    os << "probability has imaginary residue " << value.imag();
    throw ComputationError(os.str());
  }
  return std::clamp(value.real(), 0.0, 1.0);
}

double joint_probability(const DensityOperator& rho, const CVector& v_s, const CVector& v_i) {
  if (static_cast<std::size_t>(v_s.size()) != rho.dim_signal() ||
      static_cast<std::size_t>(v_i.size()) != rho.dim_idler()) {
    throw ValidationError("joint_probability: projector dimension does not match subsystem");
  }
  const CVector v = tensor(v_s, v_i);
  return clamp_probability(v.dot(rho.matrix() * v));
}

double joint_probability(const DensityOperator& rho, const Projector& p_s, const Projector& p_i) {
  return joint_probability(rho, p_s.vector, p_i.vector);
}

double signal_marginal(const DensityOperator& rho, const CVector& v_s) {
  if (static_cast<std::size_t>(v_s.size()) != rho.dim_signal()) {
    throw ValidationError("signal_marginal: projector dimension mismatch");
  }
  const std::size_t di = rho.dim_idler();
  cplx acc = 0.0;
  for (std::size_t a = 0; a < rho.dim_signal(); ++a) {
    for (std::size_t b = 0; b < rho.dim_signal(); ++b) {
      const cplx w = std::conj(v_s(a)) * v_s(b);
      if (w == cplx(0.0)) continue;
      cplx partial = 0.0;
      for (std::size_t i = 0; i < di; ++i) partial += rho.element(a * di + i, b * di + i);
      acc += w * partial;
    }
  }
  return clamp_probability(acc);
}

double idler_marginal(const DensityOperator& rho, const CVector& v_i) {
  if (static_cast<std::size_t>(v_i.size()) != rho.dim_idler()) {
    throw ValidationError("idler_marginal: projector dimension mismatch");
  }
  const std::size_t di = rho.dim_idler();
  cplx acc = 0.0;
  for (std::size_t s = 0; s < rho.dim_signal(); ++s) {
    acc += v_i.dot(rho.matrix().block(s * di, s * di, di, di) * v_i);
  }
  return clamp_probability(acc);
}

double fidelity_to_pure(const DensityOperator& rho, const StateVector& target) {
  if (rho.dim_signal() != target.dim_signal() || rho.dim_idler() != target.dim_idler()) {
    throw ValidationError("fidelity_to_pure: dimension mismatch");
  }
  const CVector& a = target.amplitudes();
  return clamp_probability(a.dot(rho.matrix() * a));
}

std::pair<DensityOperator, double> restrict_to_modes(const DensityOperator& rho,
                                                     const std::vector<std::size_t>& modes) {
  if (modes.empty()) throw ValidationError("restrict_to_modes: empty mode list");
  for (std::size_t m : modes) {
    if (m >= rho.dim_signal() || m >= rho.dim_idler()) throw ValidationError("restrict_to_modes: mode out of range");
  }
  const std::size_t n = modes.size();
  std::vector<std::size_t> idx;
  idx.reserve(n * n);
  for (std::size_t a : modes)
    for (std::size_t b : modes) idx.push_back(rho.index(a, b));
  CMatrix block(n * n, n * n);
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t c = 0; c < idx.size(); ++c) block(r, c) = rho.element(idx[r], idx[c]);
  const double weight = block.trace().real();
  if (weight < 1e-14) throw ComputationError("restrict_to_modes: zero post-selection weight");
  return {DensityOperator(n, n, block / weight), weight};
}

PairRestriction restrict_to_pair(const DensityOperator& rho, std::size_t j, std::size_t k) {
  if (j == k) throw ValidationError("restrict_to_pair: modes must differ");
  if (j >= rho.dim_signal() || k >= rho.dim_signal() || j >= rho.dim_idler() || k >= rho.dim_idler()) {
    throw ValidationError("restrict_to_pair: mode index out of range");
  }
  const std::size_t idx[4] = {rho.index(j, j), rho.index(j, k), rho.index(k, j), rho.index(k, k)};
  CMatrix block(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) block(r, c) = rho.element(idx[r], idx[c]);
  PairRestriction out;
  out.weight = block.trace().real();
  if (out.weight < 1e-14) return out;
  out.rho.emplace(2, 2, block / out.weight);
  return out;
}

}  // namespace qcert
