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

#include "qcert/bases.hpp"
#include "qcert/error.hpp"
#include "qcert/source.hpp"
#include "support.hpp"

using namespace qcert;

namespace {

CMatrix direct_dft(std::size_t d) {
  CMatrix f(d, d);
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t k = 0; k < d; ++k)
      f(x, k) = std::polar(1.0 / std::sqrt(static_cast<double>(d)), 2.0 * std::numbers::pi * x * k / d);
  return f;
}

}  // namespace

TEST_CASE("x basis") {
  const MeasurementBasis b2 = x_basis(2);
  CHECK(b2.size() == 2);
  CHECK(b2[0].vector == CVector::Unit(2, 0));
  CHECK(b2[1].vector == CVector::Unit(2, 1));
  const MeasurementBasis b10 = x_basis(10);
  CHECK(b10.columns() == CMatrix::Identity(10, 10));
  CHECK((b10.gram() - CMatrix::Identity(10, 10)).norm() < 1e-10);
  CHECK_THROWS_AS(x_basis(11), ValidationError);
  CHECK_THROWS_AS(x_basis(0), ValidationError);
}

TEST_CASE("k basis is the unitary DFT") {
  const MeasurementBasis k2 = k_basis(2);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK((k2[0].vector - CVector(CVector::Ones(2) * r)).norm() < 1e-15);
  CVector minus(2);
  minus << r, -r;
  CHECK((k2[1].vector - minus).norm() < 1e-15);
  for (std::size_t d = 1; d <= 10; ++d) {
    CHECK((k_basis(d).columns() - direct_dft(d)).norm() < 1e-12);
    CHECK((k_basis(d).gram() - CMatrix::Identity(d, d)).norm() < 1e-12);
  }
}

TEST_CASE("uniform state is anti-correlated in plain Fourier bases") {
  const DensityOperator rho = noisy_state(SourceConfig::uniform(10));
  const MeasurementBasis k = k_basis(10);
  for (std::size_t a = 0; a < 10; ++a)
    for (std::size_t b = 0; b < 10; ++b) {
      const double want = (a + b) % 10 == 0 ? 0.1 : 0.0;
      CHECK(std::abs(joint_probability(rho, k[a], k[b]) - want) < 1e-12);
    }
}

TEST_CASE("conjugated idler modes make the K space perfectly correlated") {
  const DensityOperator rho = noisy_state(SourceConfig::uniform(10));
  const MeasurementBasis s = space_basis(Space::K, Side::Signal, 10);
  const MeasurementBasis i = space_basis(Space::K, Side::Idler, 10);
  for (std::size_t a = 0; a < 10; ++a) CHECK(joint_probability(rho, s[a], i[a]) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("pair bases") {
  const MeasurementBasis z = mub_pair_basis(0, 1, Axis::Z, 2);
  CHECK(z.columns() == CMatrix::Identity(2, 2));
  CHECK(z[0].label == +1);
  CHECK(z[1].label == -1);

  CMatrix px(2, 2);
  px << 0, 1, 1, 0;
  const MeasurementBasis x = mub_pair_basis(0, 1, Axis::X, 2);
  CHECK((px * x[0].vector - x[0].vector).norm() < 1e-14);
  CHECK((px * x[1].vector + x[1].vector).norm() < 1e-14);

  for (Space sp : {Space::X, Space::K})
    for (Side side : {Side::Signal, Side::Idler}) {
      const MeasurementBasis b[3] = {mub_pair_basis(2, 7, Axis::X, 10, sp, side),
                                     mub_pair_basis(2, 7, Axis::Y, 10, sp, side),
                                     mub_pair_basis(2, 7, Axis::Z, 10, sp, side)};
      for (int p = 0; p < 3; ++p)
        for (int q = p + 1; q < 3; ++q)
          for (int u = 0; u < 2; ++u)
            for (int v = 0; v < 2; ++v) {
              CHECK(std::norm(b[p][u].vector.dot(b[q][v].vector)) == doctest::Approx(0.5).epsilon(1e-12));
            }
    }
  CHECK_THROWS_AS(mub_pair_basis(3, 3, Axis::X, 10), ValidationError);
  CHECK_THROWS_AS(mub_pair_basis(3, 10, Axis::X, 10), ValidationError);
}

TEST_CASE("embedded bases complete to the full space") {
  const MeasurementBasis b = mub_pair_basis(1, 4, Axis::Y, 6);
  const CMatrix c = b.completion();
  CMatrix sum = c;
  for (const auto& p : b.outcomes()) sum += p.vector * p.vector.adjoint();
  CHECK((sum - CMatrix::Identity(6, 6)).norm() < 1e-12);
  CHECK((c * c - c).norm() < 1e-12);
  CHECK(c.trace().real() == doctest::Approx(4.0));
}

TEST_CASE("cglmp bases") {
  for (std::size_t d = 2; d <= 10; ++d) {
    CHECK((cglmp_basis(Side::Signal, 0, d).columns() - k_basis(d).columns()).norm() < 1e-12);
    for (Side side : {Side::Signal, Side::Idler})
      for (int s = 0; s < 2; ++s) {
        const MeasurementBasis b = cglmp_basis(side, s, d);
        CHECK((b.gram() - CMatrix::Identity(d, d)).norm() < 1e-10);
        // related to the DFT by a diagonal phase and a relabeling
        const CMatrix cross = k_basis(d).columns().adjoint() * b.columns();
        CHECK(std::abs(cross.determinant()) == doctest::Approx(1.0).epsilon(1e-9));
      }
  }
  // embedded in ten modes, the vectors live on the first d modes only
  const MeasurementBasis e = cglmp_basis(Side::Idler, 1, 4, 10);
  CHECK(e.dim() == 10);
  CHECK(e[2].vector.tail(6).norm() < 1e-15);
  CHECK_THROWS_AS(cglmp_basis(Side::Signal, 2, 4), ValidationError);
  CHECK_THROWS_AS(cglmp_basis(Side::Signal, 0, 1), ValidationError);
}

TEST_CASE("rf tone programs") {
  const MeasurementBasis k2 = k_basis(2);
  const RfToneProgram p0 = rf_tone_program(k2[0]);
  REQUIRE(p0.tones.size() == 2);
  CHECK(p0.tones[0].frequency_mhz == 0.0);
  CHECK(p0.tones[1].frequency_mhz == doctest::Approx(0.8));
  for (const auto& t : p0.tones) {
    CHECK(t.amplitude == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(t.phase == doctest::Approx(0.0));
  }
  const RfToneProgram p1 = rf_tone_program(k2[1]);
  CHECK(p1.tones[0].phase == doctest::Approx(0.0));
  CHECK(std::abs(p1.tones[1].phase) == doctest::Approx(std::numbers::pi));

  // zero-amplitude modes are omitted
  const RfToneProgram pz = rf_tone_program(mub_pair_basis(1, 3, Axis::X, 10)[0]);
  REQUIRE(pz.tones.size() == 2);
  CHECK(pz.tones[0].frequency_mhz == doctest::Approx(0.8));
  CHECK(pz.tones[1].frequency_mhz == doctest::Approx(2.4));
}

TEST_CASE("rf tone programs round-trip every basis vector") {
  for (std::size_t d = 2; d <= 10; ++d)
    for (Side side : {Side::Signal, Side::Idler})
      for (int s = 0; s < 2; ++s) {
        const MeasurementBasis basis = cglmp_basis(side, s, d);
        for (const auto& p : basis.outcomes()) {
          const RfToneProgram prog = rf_tone_program(p);
          double power = 0.0;
          for (const auto& t : prog.tones) power += t.amplitude * t.amplitude;
          CHECK(power == doctest::Approx(1.0).epsilon(1e-10));
          CHECK((synthesize_vector(prog, d) - p.vector).norm() < 1e-12);
        }
      }
  RfToneProgram bad;
  bad.tones.push_back({0.5, 1.0, 0.0});
  CHECK_THROWS_AS(synthesize_vector(bad, 4), ValidationError);
}

TEST_CASE("non-orthonormal outcomes are rejected") {
  std::vector<Projector> v{Projector(CVector::Unit(2, 0), 0), Projector(CVector::Unit(2, 0), 1)};
  CHECK_THROWS_AS(MeasurementBasis("bad", Side::Signal, 2, v), ValidationError);
  CHECK_THROWS_AS(Projector(CVector::Ones(2), 0), ValidationError);
}

TEST_CASE("labels parse") {
  CHECK(parse_space("X") == Space::X);
  CHECK(parse_space("K") == Space::K);
  CHECK_THROWS_AS(parse_space("Q"), ValidationError);
  CHECK(parse_axis('y') == Axis::Y);
  CHECK_THROWS_AS(parse_axis('w'), ValidationError);
}
