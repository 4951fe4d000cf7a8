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

#include "qcert/source.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "qcert/bases.hpp"
#include "qcert/certify.hpp"
#include "qcert/error.hpp"

namespace qcert {

SourceConfig SourceConfig::uniform(std::size_t modes) {
  SourceConfig cfg;
  cfg.modes = modes;
  cfg.coefficients.assign(modes, cplx(1.0 / std::sqrt(static_cast<double>(modes)), 0.0));
  cfg.phase_mismatch.assign(modes, 0.0);
  return cfg;
}

void SourceConfig::validate() const {
  if (modes < 1) throw ValidationError("source.D: must be >= 1");
  if (coefficients.size() != modes) {
    throw ValidationError("source.coefficients: expected " + std::to_string(modes) + " entries, got " +
                          std::to_string(coefficients.size()));
  }
  if (phase_mismatch.size() != modes) {
    throw ValidationError("source.phases_deg: expected " + std::to_string(modes) + " entries, got " +
                          std::to_string(phase_mismatch.size()));
  }
  double norm = 0.0;
  for (const cplx& c : coefficients) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw ValidationError("source.coefficients: non-finite");
    norm += std::norm(c);
  }
  if (std::abs(norm - 1.0) > kNormTol) {
    throw ValidationError("source.coefficients: sum |C_i|^2 = " + std::to_string(norm) + ", expected 1");
  }
  for (double p : phase_mismatch) {
    if (!std::isfinite(p)) throw ValidationError("source.phases_deg: non-finite");
  }
  if (!(noise_fraction >= 0.0 && noise_fraction <= 1.0)) {
    throw ValidationError("source.noise_fraction: must lie in [0,1]");
  }
}

StateVector ideal_state(const SourceConfig& cfg) {
  cfg.validate();
  const std::size_t d = cfg.modes;
  CVector amp = CVector::Zero(static_cast<Eigen::Index>(d * d));
  for (std::size_t i = 0; i < d; ++i) {
    amp(static_cast<Eigen::Index>(i * d + i)) = cfg.coefficients[i] * std::polar(1.0, cfg.phase_mismatch[i]);
  }
  return StateVector(d, d, std::move(amp));
}

DensityOperator noisy_state(const SourceConfig& cfg) {
  const StateVector psi = ideal_state(cfg);
  const std::size_t d = cfg.modes;
  const auto n = static_cast<Eigen::Index>(d * d);
  const double p = cfg.noise_fraction;
  CMatrix m = (1.0 - p) * (psi.amplitudes() * psi.amplitudes().adjoint());
  m.diagonal().array() += p / static_cast<double>(n);
  return DensityOperator(d, d, std::move(m));
}

double mean_x_visibility(const SourceConfig& cfg) {
  if (cfg.modes < 2) throw ValidationError("mean_x_visibility: need at least two modes");
  const WitnessResult w = witness(noisy_state(cfg), Space::X);
  const double pairs = static_cast<double>(cfg.modes * (cfg.modes - 1) / 2);
  return w.W / (3.0 * pairs);
}

namespace {

// Bisection on p in [0,1] for a quantity that decreases monotonically in p.
double bisect_noise(const SourceConfig& cfg, double target, const std::function<double(const SourceConfig&)>& f,
                    const char* what) {
  SourceConfig probe = cfg;
  probe.noise_fraction = 0.0;
  const double top = f(probe);
  probe.noise_fraction = 1.0;
  const double bottom = f(probe);
  if (target > top + 1e-12) {
    throw ComputationError(std::string(what) + ": target above the noiseless value " + std::to_string(top));
  }
  if (target < bottom - 1e-12) {
    throw ComputationError(std::string(what) + ": target below the fully-mixed floor " + std::to_string(bottom));
  }
  if (target >= top) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    probe.noise_fraction = mid;
    if (f(probe) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double fit_noise_to_visibility(double target_mean_visibility, const SourceConfig& cfg) {
  if (!(target_mean_visibility > 0.0 && target_mean_visibility <= 1.0)) {
    throw ValidationError("fit_noise_to_visibility: target must lie in (0,1]");
  }
  return bisect_noise(cfg, target_mean_visibility, mean_x_visibility, "fit_noise_to_visibility");
}

double fit_noise_to_pair_fidelity(double target_fidelity, const SourceConfig& cfg, std::size_t j, std::size_t k) {
  if (!(target_fidelity > 0.0 && target_fidelity <= 1.0)) {
    throw ValidationError("fit_noise_to_pair_fidelity: target must lie in (0,1]");
  }
  const CVector bell = (CVector(4) << 1.0, 0.0, 0.0, 1.0).finished() / std::numbers::sqrt2;
  const StateVector target(2, 2, bell);
  auto fidelity = [&](const SourceConfig& c) {
    const PairRestriction r = restrict_to_pair(noisy_state(c), j, k);
    return r.zero_weight() ? 0.0 : fidelity_to_pure(*r.rho, target);
  };
  return bisect_noise(cfg, target_fidelity, fidelity, "fit_noise_to_pair_fidelity");
}

}  // namespace qcert
