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

// Two-qubit tomography on a post-selected mode pair.  Qubit |0> is mode j and
// |1> is mode k on each side; all nine {x,y,z}^2 settings are used.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "qcert/bases.hpp"
#include "qcert/counting.hpp"
#include "qcert/qudit.hpp"

namespace qcert {

// Outcome probabilities for one setting, ordered (++, +-, -+, --).
using SettingProbabilities = std::array<double, 4>;
// Nine settings ordered signal-axis major: xx, xy, xz, yx, ..., zz.
using TomoProbabilities = std::array<SettingProbabilities, 9>;

struct TomoResult {
  std::size_t j = 0;
  std::size_t k = 0;
  Space space = Space::X;
  bool subtracted = false;
  CMatrix rho_linear;          // before positivity projection
  CMatrix rho_hat;             // physical
  double fidelity = 0.0;
  double fidelity_err = 0.0;
  double relative_phase_deg = 0.0;
  double postselection_weight = 0.0;
  double clipped_weight = 0.0;  // eigenvalue mass removed by the projection
};

std::vector<SettingSpec> tomo_settings(std::size_t j, std::size_t k, std::size_t D, Space space = Space::X);

CMatrix linear_inversion(const TomoProbabilities& p);

// Nearest unit-trace PSD matrix in Frobenius norm (eigenvalue clipping).
CMatrix project_to_physical(const CMatrix& m, double* clipped = nullptr);

double bell_fidelity(const CMatrix& rho4);
double relative_phase_deg(const CMatrix& rho4);

TomoResult reconstruct(const TomoProbabilities& p);

TomoProbabilities tomo_probabilities(const CMatrix& rho4);
TomoResult tomo_exact(const DensityOperator& rho, std::size_t j, std::size_t k, Space space = Space::X);
TomoResult tomo_from_table(const CoincidenceTable& table, std::size_t j, std::size_t k, Space space, bool subtract,
                           unsigned bootstrap = 0, std::uint64_t seed = 0);

}  // namespace qcert
