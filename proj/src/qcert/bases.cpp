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

#include "qcert/bases.hpp"

#include <cmath>
#include <numbers>

#include "qcert/error.hpp"

namespace qcert {

namespace {

constexpr double kGramTol = 1e-10;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

CVector fourier_vector(std::size_t d, std::size_t d_total, double frequency) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(d_total));
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t x = 0; x < d; ++x) {
    v(static_cast<Eigen::Index>(x)) = std::polar(norm, kTwoPi * static_cast<double>(x) * frequency / static_cast<double>(d));
  }
  return v;
}

}  // namespace

char to_char(Space s) { return s == Space::X ? 'X' : 'K'; }

char to_char(Axis a) {
  switch (a) {
    case Axis::X: return 'x';
    case Axis::Y: return 'y';
    case Axis::Z: return 'z';
  }
  return '?';
}

Space parse_space(const std::string& s) {
  if (s == "X" || s == "x") return Space::X;
  if (s == "K" || s == "k") return Space::K;
  throw ValidationError("unknown space '" + s + "' (expected X or K)");
}

Axis parse_axis(char c) {
  switch (c) {
    case 'x': return Axis::X;
    case 'y': return Axis::Y;
    case 'z': return Axis::Z;
    default: throw ValidationError(std::string("unknown axis '") + c + "'");
  }
}

MeasurementBasis::MeasurementBasis(std::string name, Side side, std::size_t dim, std::vector<Projector> outcomes)
    : name_(std::move(name)), side_(side), dim_(dim), outcomes_(std::move(outcomes)) {
  if (outcomes_.empty() || outcomes_.size() > dim_) throw ValidationError("MeasurementBasis: bad outcome count");
  for (const auto& p : outcomes_) {
    if (static_cast<std::size_t>(p.vector.size()) != dim_) throw ValidationError("MeasurementBasis: vector dimension");
  }
  const CMatrix g = gram();
  const double err = (g - CMatrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
  if (err > kGramTol) throw ValidationError("MeasurementBasis '" + name_ + "': outcomes are not orthonormal");
}

CMatrix MeasurementBasis::columns() const {
  CMatrix c(dim_, outcomes_.size());
  for (std::size_t i = 0; i < outcomes_.size(); ++i) c.col(static_cast<Eigen::Index>(i)) = outcomes_[i].vector;
  return c;
}

CMatrix MeasurementBasis::gram() const {
  const CMatrix c = columns();
  return c.adjoint() * c;
}

CMatrix MeasurementBasis::completion() const {
  const CMatrix c = columns();
  return CMatrix::Identity(dim_, dim_) - c * c.adjoint();
}

CVector mode_vector(Space space, Side side, std::size_t mode, std::size_t dim) {
  if (mode >= dim) throw ValidationError("mode_vector: mode index out of range");
  if (space == Space::X) {
    CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(mode)) = 1.0;
    return v;
  }
  CVector v = fourier_vector(dim, dim, static_cast<double>(mode));
  return side == Side::Signal ? v : CVector(v.conjugate());
}

MeasurementBasis space_basis(Space space, Side side, std::size_t d) {
  if (d < 1 || d > 10) throw ValidationError("basis dimension must lie in 1..10");
  std::vector<Projector> out;
  out.reserve(d);
  for (std::size_t m = 0; m < d; ++m) out.emplace_back(mode_vector(space, side, m, d), static_cast<int>(m));
  return MeasurementBasis(std::string(1, to_char(space)), side, d, std::move(out));
}

MeasurementBasis x_basis(std::size_t d) { return space_basis(Space::X, Side::Signal, d); }

MeasurementBasis k_basis(std::size_t d) { return space_basis(Space::K, Side::Signal, d); }

MeasurementBasis mub_pair_basis(std::size_t j, std::size_t k, Axis axis, std::size_t d_total, Space space, Side side) {
  if (j == k) throw ValidationError("mub_pair_basis: modes must differ");
  if (j >= d_total || k >= d_total) throw ValidationError("mub_pair_basis: mode index out of range");
  const CVector mj = mode_vector(space, side, j, d_total);
  const CVector mk = mode_vector(space, side, k, d_total);
  const double r = 1.0 / std::numbers::sqrt2;
  std::vector<Projector> out;
  switch (axis) {
    case Axis::Z:
      out.emplace_back(mj, +1);
      out.emplace_back(mk, -1);
      break;
    case Axis::X:
      out.emplace_back(CVector(r * (mj + mk)), +1);
      out.emplace_back(CVector(r * (mj - mk)), -1);
      break;
    case Axis::Y:
      out.emplace_back(CVector(r * (mj + cplx(0, 1) * mk)), +1);
      out.emplace_back(CVector(r * (mj - cplx(0, 1) * mk)), -1);
      break;
  }
  std::string name = std::string(1, to_char(space)) + "/" + std::to_string(j) + "-" + std::to_string(k) + "/" +
                     to_char(axis);
  return MeasurementBasis(std::move(name), side, d_total, std::move(out));
}

MeasurementBasis cglmp_basis(Side side, int setting, std::size_t d, std::size_t d_total) {
  if (d < 2) throw ValidationError("cglmp_basis: d must be >= 2");
  if (setting != 0 && setting != 1) throw ValidationError("cglmp_basis: setting must be 0 or 1");
  if (d_total == 0) d_total = d;
  if (d_total < d) throw ValidationError("cglmp_basis: d_total < d");
  static constexpr double kTheta[2] = {0.0, 0.5};
  static constexpr double kPhi[2] = {0.25, -0.25};
  std::vector<Projector> out;
  out.reserve(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double kk = static_cast<double>(k);
    const double freq = side == Side::Signal ? kk + kTheta[setting] : -kk + kPhi[setting];
    out.emplace_back(fourier_vector(d, d_total, freq), static_cast<int>(k));
  }
  std::string name = std::string(side == Side::Signal ? "S" : "I") + std::to_string(setting);
  return MeasurementBasis(std::move(name), side, d_total, std::move(out));
}

RfToneProgram rf_tone_program(const Projector& basis_vector, double tone_spacing_mhz) {
  if (!(tone_spacing_mhz > 0.0)) throw ValidationError("rf_tone_program: tone spacing must be positive");
  RfToneProgram prog;
  const CVector& v = basis_vector.vector;
  for (Eigen::Index x = 0; x < v.size(); ++x) {
    const double a = std::abs(v(x));
    if (a < 1e-14) continue;
    prog.tones.push_back({static_cast<double>(x) * tone_spacing_mhz, a, std::arg(v(x))});
  }
  return prog;
}

CVector synthesize_vector(const RfToneProgram& program, std::size_t dim, double tone_spacing_mhz) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
  for (const RfTone& t : program.tones) {
    const double slot = t.frequency_mhz / tone_spacing_mhz;
    const auto x = static_cast<long>(std::lround(slot));
    if (std::abs(slot - static_cast<double>(x)) > 1e-9 || x < 0 || static_cast<std::size_t>(x) >= dim) {
      throw ValidationError("synthesize_vector: tone frequency is not on the mode grid");
    }
    v(x) += std::polar(t.amplitude, t.phase);
  }
  return v;
}

}  // namespace qcert
