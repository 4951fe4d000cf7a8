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

#include <cstddef>
#include <string>
#include <vector>

#include "qcert/qudit.hpp"

namespace qcert {

enum class Side { Signal, Idler };
enum class Space { X, K };
enum class Axis { X, Y, Z };

char to_char(Space s);
char to_char(Axis a);
Space parse_space(const std::string& s);
Axis parse_axis(char c);

/// Ordered set of orthonormal outcome vectors on one subsystem. Bases with
/// fewer vectors than the ambient dimension are completed by an implicit
/// "neither" outcome onto the orthogonal complement.
class MeasurementBasis {
 public:
  MeasurementBasis(std::string name, Side side, std::size_t dim, std::vector<Projector> outcomes);

  const std::string& name() const { return name_; }
  Side side() const { return side_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return outcomes_.size(); }
  const std::vector<Projector>& outcomes() const { return outcomes_; }
  const Projector& operator[](std::size_t i) const { return outcomes_[i]; }
  bool complete() const { return outcomes_.size() == dim_; }

  /// Gram matrix of the outcome vectors.
  CMatrix gram() const;
  /// Projector onto the span not covered by any outcome.
  CMatrix completion() const;
  /// Outcome vectors as matrix columns.
  CMatrix columns() const;

 private:
  std::string name_;
  Side side_;
  std::size_t dim_;
  std::vector<Projector> outcomes_;
};

/// Single mode vector of a space on a given side. K-space idler modes are the
/// complex conjugates of the signal modes, so that sum_x |x>|x> is
/// perfectly correlated in (K, K) with matching labels.
CVector mode_vector(Space space, Side side, std::size_t mode, std::size_t dim);

MeasurementBasis x_basis(std::size_t d);
/// |k> = d^{-1/2} sum_x exp(2 pi i x k / d) |x>.
MeasurementBasis k_basis(std::size_t d);
/// Full-dimension basis of a space for one side (k_basis conjugated on the idler).
MeasurementBasis space_basis(Space space, Side side, std::size_t d);

/// Two-outcome basis on span{mode j, mode k}; labels +1/-1.
MeasurementBasis mub_pair_basis(std::size_t j, std::size_t k, Axis axis, std::size_t d_total,
                                Space space = Space::X, Side side = Side::Signal);

/// Fourier bases with offsets Theta = {0, 1/2} (signal) and Phi = {1/4, -1/4}
/// (idler) over the first d modes, embedded in d_total >= d modes.
MeasurementBasis cglmp_basis(Side side, int setting, std::size_t d, std::size_t d_total = 0);

inline constexpr double kToneSpacingMHz = 0.8;

struct RfTone {
  double frequency_mhz = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;  // radians
};

struct RfToneProgram {
  std::vector<RfTone> tones;
};

/// Drive program that diffracts into the superposition v: one tone per mode
/// with nonzero amplitude, at offset mode * spacing.
RfToneProgram rf_tone_program(const Projector& basis_vector, double tone_spacing_mhz = kToneSpacingMHz);
CVector synthesize_vector(const RfToneProgram& program, std::size_t dim, double tone_spacing_mhz = kToneSpacingMHz);

}  // namespace qcert
