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

#include "qcert/tomo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <string>

#include "qcert/certify.hpp"
#include "qcert/error.hpp"
#include "qcert/settings.hpp"

namespace qcert {

namespace {

constexpr Axis kAxes[3] = {Axis::X, Axis::Y, Axis::Z};

const std::array<CMatrix, 4>& paulis() {
  static const std::array<CMatrix, 4> p = [] {
    std::array<CMatrix, 4> s;
    for (auto& m : s) m = CMatrix::Zero(2, 2);
    s[0] << 1, 0, 0, 1;
    s[1] << 0, 1, 1, 0;
    s[2] << 0, cplx(0, -1), cplx(0, 1), 0;
    s[3] << 1, 0, 0, -1;
    return s;
  }();
  return p;
}

double std_dev(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

SettingProbabilities normalized(const std::array<double, 4>& c, const std::string& name) {
  const double total = c[0] + c[1] + c[2] + c[3];
  if (!(total > 0.0)) throw ComputationError("tomography: setting '" + name + "' has no net coincidences");
  return {c[0] / total, c[1] / total, c[2] / total, c[3] / total};
}

TomoProbabilities table_probabilities(const CoincidenceTable& t, std::size_t j, std::size_t k, Space space,
                                      bool subtract) {
  TomoProbabilities p;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const std::string name = pair_setting_name(space, j, k, kAxes[a], kAxes[b]);
      std::array<double, 4> c{};
      int n = 0;
      for (int s : {+1, -1})
        for (int i : {+1, -1}) c[n++] = cell_count(t.at(name, s, i), subtract).value;
      p[3 * a + b] = normalized(c, name);
    }
  return p;
}

}  // namespace

std::vector<SettingSpec> tomo_settings(std::size_t j, std::size_t k, std::size_t D, Space space) {
  if (j == k) throw ValidationError("tomo_settings: modes must differ");
  if (j >= D || k >= D) throw ValidationError("tomo_settings: mode index out of range");
  std::vector<SettingSpec> out;
  for (Axis a : kAxes)
    for (Axis b : kAxes) out.push_back(pair_setting(space, j, k, a, b, D));
  return out;
}

CMatrix linear_inversion(const TomoProbabilities& p) {
  static constexpr double kSign[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  double T[4][4] = {};
  T[0][0] = 1.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const auto& q = p[3 * a + b];
      for (int c = 0; c < 4; ++c) {
        T[a + 1][b + 1] += kSign[c][0] * kSign[c][1] * q[c];
        // single-side terms are averaged over the three partner settings
        T[a + 1][0] += kSign[c][0] * q[c] / 3.0;
        T[0][b + 1] += kSign[c][1] * q[c] / 3.0;
      }
    }
  CMatrix rho = CMatrix::Zero(4, 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) rho += T[a][b] * tensor(paulis()[a], paulis()[b]);
  return rho / 4.0;
}

CMatrix project_to_physical(const CMatrix& m, double* clipped) {
  const CMatrix h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) throw ComputationError("project_to_physical: eigendecomposition failed");
  Eigen::VectorXd lam = es.eigenvalues();  // ascending
  const double tr = lam.sum();
  if (!(tr > 0.0)) throw ComputationError("project_to_physical: non-positive trace");
  lam /= tr;
  const auto n = lam.size();
  double acc = 0.0;
  Eigen::Index i = 0;
  // drop the most negative eigenvalues while the redistributed shift cannot rescue them
  while (i < n && lam(i) + acc / static_cast<double>(n - i) < 0.0) {
    acc += lam(i);
    lam(i) = 0.0;
    ++i;
  }
  for (Eigen::Index r = i; r < n; ++r) lam(r) += acc / static_cast<double>(n - i);
  if (clipped) *clipped = -acc;
  return es.eigenvectors() * lam.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

double bell_fidelity(const CMatrix& rho4) {
  if (rho4.rows() != 4 || rho4.cols() != 4) throw ValidationError("bell_fidelity: expected a 4x4 matrix");
  return std::clamp(0.5 * (rho4(0, 0) + rho4(3, 3) + rho4(0, 3) + rho4(3, 0)).real(), 0.0, 1.0);
}

double relative_phase_deg(const CMatrix& rho4) {
  if (rho4.rows() != 4 || rho4.cols() != 4) throw ValidationError("relative_phase_deg: expected a 4x4 matrix");
  double deg = std::arg(rho4(3, 0)) * 180.0 / std::numbers::pi;
  if (deg <= -180.0) deg += 360.0;
  return deg;
}

TomoResult reconstruct(const TomoProbabilities& p) {
  for (const auto& s : p)
    for (double v : s)
      if (!std::isfinite(v)) throw ValidationError("reconstruct: non-finite probability");
  TomoResult r;
  r.rho_linear = linear_inversion(p);
  r.rho_hat = project_to_physical(r.rho_linear, &r.clipped_weight);
  DensityOperator check(2, 2, r.rho_hat);  // enforces the density-operator invariants
  r.fidelity = bell_fidelity(r.rho_hat);
  r.relative_phase_deg = relative_phase_deg(r.rho_hat);
  return r;
}

TomoProbabilities tomo_probabilities(const CMatrix& rho4) {
  const DensityOperator rho(2, 2, rho4);
  TomoProbabilities p;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const MeasurementBasis bs = mub_pair_basis(0, 1, kAxes[a], 2);
      const MeasurementBasis bi = mub_pair_basis(0, 1, kAxes[b], 2);
      std::array<double, 4> c{};
      int n = 0;
      for (int s = 0; s < 2; ++s)
        for (int i = 0; i < 2; ++i) c[n++] = joint_probability(rho, bs[s], bi[i]);
      p[3 * a + b] = normalized(c, "exact");
    }
  return p;
}

TomoResult tomo_exact(const DensityOperator& rho, std::size_t j, std::size_t k, Space space) {
  const std::vector<SettingSpec> plan = tomo_settings(j, k, rho.dim_signal(), space);
  TomoProbabilities p;
  for (std::size_t n = 0; n < plan.size(); ++n) {
    std::array<double, 4> c{};
    int m = 0;
    for (int s = 0; s < 2; ++s)
      for (int i = 0; i < 2; ++i) c[m++] = joint_probability(rho, plan[n].basis_s[s], plan[n].basis_i[i]);
    p[n] = normalized(c, plan[n].name);
  }
  TomoResult r = reconstruct(p);
  r.j = j;
  r.k = k;
  r.space = space;
  r.postselection_weight = restrict_to_pair(to_space(rho, space), j, k).weight;
  return r;
}

TomoResult tomo_from_table(const CoincidenceTable& table, std::size_t j, std::size_t k, Space space, bool subtract,
                           unsigned bootstrap, std::uint64_t seed) {
  if (j == k) throw ValidationError("tomography: modes must differ");
  TomoResult r = reconstruct(table_probabilities(table, j, k, space, subtract));
  r.j = j;
  r.k = k;
  r.space = space;
  r.subtracted = subtract;

  const std::string full = full_setting_name(space);
  if (table.has_setting(full)) {
    double all = 0.0;
    double pair = 0.0;
    for (const auto& rec : table.records()) {
      if (rec.setting != full) continue;
      const double v = cell_count(rec, subtract).value;
      all += v;
      const auto a = static_cast<std::size_t>(rec.outcome_s);
      const auto b = static_cast<std::size_t>(rec.outcome_i);
      if ((a == j || a == k) && (b == j || b == k)) pair += v;
    }
    if (all > 0.0) r.postselection_weight = pair / all;
  }

  if (bootstrap > 0) {
    std::set<std::string> names;
    for (Axis a : kAxes)
      for (Axis b : kAxes) names.insert(pair_setting_name(space, j, k, a, b));
    const CoincidenceTable own = select_settings(table, [&](const std::string& n) { return names.count(n) > 0; });
    std::vector<double> fids;
    for (unsigned rep = 0; rep < bootstrap; ++rep) {
      try {
        fids.push_back(reconstruct(table_probabilities(bootstrap_resample(own, seed, rep), j, k, space, subtract)).fidelity);
      } catch (const ComputationError&) {
        // an empty replicate setting carries no information
      }
    }
    r.fidelity_err = std_dev(fids);
  }
  return r;
}

}  // namespace qcert
