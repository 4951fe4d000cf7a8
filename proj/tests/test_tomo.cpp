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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qcert/certify.hpp"
#include "qcert/error.hpp"
#include "qcert/source.hpp"
#include "qcert/tomo.hpp"
#include "support.hpp"

using namespace qcert;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

CMatrix pauli(int a) {
  CMatrix m = CMatrix::Zero(2, 2);
  if (a == 0) m << 0, 1, 1, 0;
  if (a == 1) m << 0, cplx(0, -1), cplx(0, 1), 0;
  if (a == 2) m << 1, 0, 0, -1;
  return m;
}

// Outcome probabilities from Pauli expectation values:
// P(a,b) = (1 + a<s> + b<i> + ab<s i>) / 4 with a,b = +-1.
TomoProbabilities pauli_probabilities(const CMatrix& rho) {
  const CMatrix I = CMatrix::Identity(2, 2);
  TomoProbabilities p;
  for (int s = 0; s < 3; ++s)
    for (int i = 0; i < 3; ++i) {
      const double es = (rho * qtest::brute_kron(pauli(s), I)).trace().real();
      const double ei = (rho * qtest::brute_kron(I, pauli(i))).trace().real();
      const double ess = (rho * qtest::brute_kron(pauli(s), pauli(i))).trace().real();
      int n = 0;
      for (int a : {1, -1})
        for (int b : {1, -1}) p[3 * s + i][n++] = (1 + a * es + b * ei + a * b * ess) / 4.0;
    }
  return p;
}

CMatrix phased_bell(double phi) {
  CVector v = CVector::Zero(4);
  v(0) = 1.0 / std::sqrt(2.0);
  v(3) = std::polar(1.0 / std::sqrt(2.0), phi);
  return v * v.adjoint();
}

}  // namespace

TEST_CASE("outcome probabilities follow the Pauli expectation formula") {
  std::mt19937_64 g(3);
  for (int rep = 0; rep < 20; ++rep) {
    const CMatrix rho = qtest::random_density(4, g);
    const TomoProbabilities a = tomo_probabilities(rho);
    const TomoProbabilities b = pauli_probabilities(rho);
    for (int s = 0; s < 9; ++s)
      for (int c = 0; c < 4; ++c) CHECK(std::abs(a[s][c] - b[s][c]) < 1e-12);
  }
}

TEST_CASE("ideal Bell pair") {
  const TomoResult r = reconstruct(tomo_probabilities(qtest::bell_ket() * qtest::bell_ket().adjoint()));
  CHECK(r.fidelity == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(r.relative_phase_deg) < 1e-9);
  CHECK(r.clipped_weight < 1e-12);
}

TEST_CASE("relative phase of a phased Bell pair") {
  for (double deg : {-150.0, -17.0, 0.0, 17.0, 90.0, 179.0}) {
    const CMatrix rho = phased_bell(deg * kDeg);
    CHECK(relative_phase_deg(rho) == doctest::Approx(deg).epsilon(1e-12));
    CHECK(bell_fidelity(rho) == doctest::Approx((1.0 + std::cos(deg * kDeg)) / 2.0).epsilon(1e-12));
  }
  CHECK(relative_phase_deg(phased_bell(std::numbers::pi)) == doctest::Approx(180.0));
}

TEST_CASE("reconstruction round trip on random states") {
  std::mt19937_64 g(11);
  for (int rep = 0; rep < 100; ++rep) {
    const CMatrix rho = qtest::random_density(4, g);
    const TomoResult r = reconstruct(tomo_probabilities(rho));
    CHECK(qtest::frobenius(r.rho_linear, rho) < 1e-9);
    CHECK(qtest::frobenius(r.rho_hat, rho) < 1e-9);
  }
  // pure states sit on the boundary and must survive the projection
  for (int rep = 0; rep < 20; ++rep) {
    const CVector v = qtest::random_ket(4, g);
    const CMatrix rho = v * v.adjoint();
    CHECK(qtest::frobenius(reconstruct(tomo_probabilities(rho)).rho_hat, rho) < 1e-9);
  }
}

TEST_CASE("physical projection clips and redistributes") {
  CMatrix m = CMatrix::Zero(4, 4);
  m.diagonal() << 0.6, 0.5, -0.1, 0.0;
  double clipped = 0.0;
  const CMatrix p = project_to_physical(m, &clipped);
  // -0.1 is dropped, the shift of -1/30 would push the zero below 0 too,
  // so both go and the remaining two share -0.1 equally
  CHECK(p(0, 0).real() == doctest::Approx(0.55));
  CHECK(p(1, 1).real() == doctest::Approx(0.45));
  CHECK(std::abs(p(2, 2)) < 1e-12);
  CHECK(std::abs(p(3, 3)) < 1e-12);
  CHECK(clipped == doctest::Approx(0.1));

  // the projection is the Frobenius-nearest density matrix: no random
  // density matrix is closer
  std::mt19937_64 g(5);
  for (int rep = 0; rep < 500; ++rep) {
    const CMatrix r = qtest::random_density(4, g);
    CHECK(qtest::frobenius(r, m) >= qtest::frobenius(p, m) - 1e-12);
  }
  const DensityOperator ok(2, 2, p);
  CHECK(ok.dim() == 4);
}

TEST_CASE("reconstruct tolerates subtraction noise but not garbage") {
  TomoProbabilities p = tomo_probabilities(CMatrix::Identity(4, 4) / 4.0);
  // slightly negative estimates arise from accidental subtraction
  p[2][1] = -0.02;
  p[2][0] += 0.02;
  const TomoResult r = reconstruct(p);
  CHECK(std::abs(r.rho_hat.trace() - 1.0) < 1e-12);
  p[2][1] = std::nan("");
  CHECK_THROWS_AS(reconstruct(p), ValidationError);
}

TEST_CASE("exact tomography of the phased pair") {
  SourceConfig c = SourceConfig::uniform(10);
  c.phase_mismatch[5] = 17.0 * kDeg;
  c.noise_fraction = fit_noise_to_pair_fidelity(0.878, c, 0, 5);
  const TomoResult r = tomo_exact(noisy_state(c), 0, 5);
  CHECK(r.fidelity == doctest::Approx(0.878).epsilon(1e-4));
  CHECK(r.relative_phase_deg == doctest::Approx(17.0).epsilon(1e-9));
  CHECK(r.postselection_weight > 0.0);
  CHECK(r.postselection_weight < 1.0);

  // direct oracle: post-selected block of the noisy state
  const PairRestriction pr = restrict_to_pair(noisy_state(c), 0, 5);
  CHECK(qtest::frobenius(r.rho_hat, pr.rho->matrix()) < 1e-9);
  CHECK(r.postselection_weight == doctest::Approx(pr.weight).epsilon(1e-12));
}

TEST_CASE("tomography from counts") {
  SourceConfig c = SourceConfig::uniform(4);
  c.phase_mismatch[2] = 30.0 * kDeg;
  c.noise_fraction = 0.3;
  const DensityOperator rho = noisy_state(c);
  const TomoResult exact = tomo_exact(rho, 1, 2);
  const auto plan = tomo_settings(1, 2, 4);
  CHECK(plan.size() == 9);
  const CoincidenceTable t(simulate_plan(rho, plan, CountingParams{200000000, 0.05, 0.5, 0.001}, 42));
  const TomoResult s = tomo_from_table(t, 1, 2, Space::X, true, 50, 7);
  CHECK(s.subtracted);
  CHECK(s.fidelity == doctest::Approx(exact.fidelity).epsilon(0.02));
  CHECK(s.relative_phase_deg == doctest::Approx(30.0).epsilon(0.05));
  CHECK(s.fidelity_err > 0.0);
  CHECK(std::abs(s.fidelity - exact.fidelity) < 5.0 * s.fidelity_err + 1e-3);

  const TomoResult raw = tomo_from_table(t, 1, 2, Space::X, false);
  CHECK(raw.fidelity < s.fidelity);

  CoincidenceTable partial(std::vector<CountRecord>(t.records().begin(), t.records().begin() + 8));
  CHECK_THROWS_AS(tomo_from_table(partial, 1, 2, Space::X, false), ValidationError);
  CHECK_THROWS_AS(tomo_settings(2, 2, 4), ValidationError);
  CHECK_THROWS_AS(tomo_settings(1, 4, 4), ValidationError);
}
