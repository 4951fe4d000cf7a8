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
#include <vector>

#include "qcert/qudit.hpp"

namespace qcert {

/// Parameters of the multiplexed-memory source: sum_i C_i e^{i phi_i} |i>_s|i>_a
/// mixed with a white-noise component of weight noise_fraction.
struct SourceConfig {
  std::size_t modes = 10;
  std::vector<cplx> coefficients;    // C_i, sum |C_i|^2 = 1
  std::vector<double> phase_mismatch;  // radians, per mode
  double noise_fraction = 0.0;

  /// Uniform C_i = 1/sqrt(D), zero phases, no noise.
  static SourceConfig uniform(std::size_t modes);

  /// Throws ValidationError describing the first offending field.
  void validate() const;
};

StateVector ideal_state(const SourceConfig& cfg);

/// (1-p)|Psi><Psi| + p I/D^2.
DensityOperator noisy_state(const SourceConfig& cfg);

/// Mean per-axis visibility of the X-space witness, evaluated exactly on
/// noisy_state(cfg). Equals W / (3 * D(D-1)/2).
double mean_x_visibility(const SourceConfig& cfg);

/// Bisection (to 1e-6 in p) for the noise fraction whose exact X-space
/// witness has mean per-axis visibility equal to target.
double fit_noise_to_visibility(double target_mean_visibility, const SourceConfig& cfg);

/// Bisection for the noise fraction at which the post-selected pair (j,k)
/// has fidelity target with (|jj>+|kk>)/sqrt(2).
double fit_noise_to_pair_fidelity(double target_fidelity, const SourceConfig& cfg, std::size_t j, std::size_t k);

}  // namespace qcert
