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

#include "qcert/certify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "qcert/error.hpp"
#include "qcert/settings.hpp"

namespace qcert {

namespace {

constexpr Axis kAxes[3] = {Axis::X, Axis::Y, Axis::Z};

// Probability of each (signal, idler) outcome cell, row-major over outcomes.
Eigen::MatrixXd outcome_table(const DensityOperator& rho, const MeasurementBasis& bs, const MeasurementBasis& bi) {
  Eigen::MatrixXd p(bs.size(), bi.size());
  for (std::size_t a = 0; a < bs.size(); ++a)
    for (std::size_t b = 0; b < bi.size(); ++b)
      p(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = joint_probability(rho, bs[a].vector, bi[b].vector);
  return p;
}

double std_dev(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

std::array<CorrectedCount, 4> pair_cells(const CoincidenceTable& t, const std::string& name, bool subtract) {
  return {cell_count(t.at(name, +1, +1), subtract), cell_count(t.at(name, -1, -1), subtract),
          cell_count(t.at(name, +1, -1), subtract), cell_count(t.at(name, -1, +1), subtract)};
}

void finish_witness(WitnessResult& r) {
  double var = 0.0;
  r.W = 0.0;
  r.flagged_cells = 0;
  for (const auto& [pair, vs] : r.per_pair) {
    for (const Visibility& v : vs) {
      r.W += v.value;
      var += v.error * v.error;
      if (v.flagged) ++r.flagged_cells;
    }
  }
  r.W_err = std::sqrt(var);
  r.certified_dimension = certified_dimension(r.W, r.W_err, r.D, r.margin);
}

}  // namespace

long long witness_bound(std::size_t D, std::size_t d) {
  if (D < 1 || d < 1) throw ValidationError("witness_bound: D and d must be >= 1");
  if (d > D) throw ValidationError("witness_bound: d exceeds D");
  const auto Dl = static_cast<long long>(D);
  const auto dl = static_cast<long long>(d);
  return 3 * Dl * (Dl - 1) / 2 - Dl * (Dl - dl);
}

int certified_dimension(double W, double W_err, std::size_t D, double margin) {
  const double lower = W - margin * W_err;
  int best = 1;
  for (std::size_t d = 1; d <= D; ++d) {
    if (lower > static_cast<double>(witness_bound(D, d))) best = static_cast<int>(d) + 1;
  }
  return std::min(best, static_cast<int>(D));
}

Visibility visibility_from_counts(const std::array<CorrectedCount, 4>& c) {
  static constexpr double kSign[4] = {+1.0, +1.0, -1.0, -1.0};
  double total = 0.0;
  double corr = 0.0;
  for (int i = 0; i < 4; ++i) {
    total += c[i].value;
    corr += kSign[i] * c[i].value;
  }
  Visibility v;
  if (!(total > 0.0)) {
    v.flagged = true;
    return v;
  }
  const double sgn = corr >= 0.0 ? 1.0 : -1.0;
  v.correlation = corr / total;
  v.value = std::min(1.0, std::abs(corr) / total);
  double var = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double g = (kSign[i] * sgn - v.value) / total;
    var += c[i].error * c[i].error * g * g;
  }
  v.error = std::sqrt(var);
  return v;
}

Visibility visibility_from_counts(const std::array<double, 4>& counts) {
  std::array<CorrectedCount, 4> c;
  for (int i = 0; i < 4; ++i) c[i] = {counts[i], std::sqrt(std::max(0.0, counts[i]))};
  return visibility_from_counts(c);
}

WitnessResult witness(const DensityOperator& rho, Space space, double margin) {
  if (rho.dim_signal() != rho.dim_idler()) throw ValidationError("witness: signal and idler dimensions differ");
  const std::size_t D = rho.dim_signal();
  if (D < 2) throw ValidationError("witness: need at least two modes");
  WitnessResult r;
  r.space = space;
  r.D = D;
  r.margin = margin;
  for (std::size_t j = 0; j < D; ++j) {
    for (std::size_t k = j + 1; k < D; ++k) {
      std::array<Visibility, 3> vs;
      for (int a = 0; a < 3; ++a) {
        const SettingSpec s = pair_setting(space, j, k, kAxes[a], kAxes[a], D);
        const Eigen::MatrixXd p = outcome_table(rho, s.basis_s, s.basis_i);
        // outcome order is (+1, -1) on each side
        vs[a] = visibility_from_counts(std::array<CorrectedCount, 4>{
            CorrectedCount{p(0, 0), 0.0}, CorrectedCount{p(1, 1), 0.0}, CorrectedCount{p(0, 1), 0.0},
            CorrectedCount{p(1, 0), 0.0}});
        if (p.sum() < 1e-14) vs[a] = Visibility{0.0, 0.0, true};
      }
      r.per_pair.emplace(ModePair{j, k}, vs);
    }
  }
  finish_witness(r);
  return r;
}

WitnessResult witness(const CoincidenceTable& table, Space space, std::size_t D, bool subtract, double margin) {
  if (D < 2) throw ValidationError("witness: need at least two modes");
  std::vector<std::string> missing;
  for (std::size_t j = 0; j < D; ++j) {
    for (std::size_t k = j + 1; k < D; ++k) {
      for (Axis a : kAxes) {
        const std::string name = pair_setting_name(space, j, k, a, a);
        bool ok = table.has_setting(name);
        for (int s : {+1, -1})
          for (int i : {+1, -1}) ok = ok && table.find(name, s, i) != nullptr;
        if (!ok) {
          missing.push_back("(" + std::to_string(j) + "," + std::to_string(k) + ")");
          break;
        }
      }
    }
  }
  if (!missing.empty()) {
    std::ostringstream os;
    os << "witness: missing settings for " << missing.size() << " pair(s):";
    for (const auto& m : missing) os << ' ' << m;
    throw ValidationError(os.str());
  }
  WitnessResult r;
  r.space = space;
  r.D = D;
  r.margin = margin;
  for (std::size_t j = 0; j < D; ++j) {
    for (std::size_t k = j + 1; k < D; ++k) {
      std::array<Visibility, 3> vs;
      for (int a = 0; a < 3; ++a) {
        vs[a] = visibility_from_counts(pair_cells(table, pair_setting_name(space, j, k, kAxes[a], kAxes[a]), subtract));
      }
      r.per_pair.emplace(ModePair{j, k}, vs);
    }
  }
  finish_witness(r);
  return r;
}

// ---------------------------------------------------------------------------

std::vector<ModePair> all_pairs(std::size_t D) {
  std::vector<ModePair> out;
  for (std::size_t j = 0; j < D; ++j)
    for (std::size_t k = j + 1; k < D; ++k) out.emplace_back(j, k);
  return out;
}

double eof_from_b(double B) {
  if (B * B >= 2.0) {
    std::ostringstream os;
    os << "eof_bound: B^2 = " << B * B << " >= 2; inputs are inconsistent with a physical state";
    throw ComputationError(os.str());
  }
  return -std::log2(1.0 - B * B / 2.0);
}

int eof_certified_dimension(double E_F, double E_F_err, double margin) {
  const double lower = E_F - margin * E_F_err;
  int d = 1;
  while (d < 1 << 20 && lower > std::log2(static_cast<double>(d))) ++d;
  return d;
}

DensityOperator to_space(const DensityOperator& rho, Space space) {
  if (space == Space::X) return rho;
  const CMatrix us = space_basis(space, Side::Signal, rho.dim_signal()).columns();
  const CMatrix ui = space_basis(space, Side::Idler, rho.dim_idler()).columns();
  const CMatrix u = tensor(us, ui);
  return DensityOperator(rho.dim_signal(), rho.dim_idler(), u.adjoint() * rho.matrix() * u);
}

namespace {

std::vector<std::size_t> modes_of(const std::vector<ModePair>& pairs) {
  std::set<std::size_t> m;
  for (const auto& [j, k] : pairs) {
    if (j == k) throw ValidationError("eof_bound: pair with equal modes");
    m.insert(j);
    m.insert(k);
  }
  return {m.begin(), m.end()};
}

struct Bound {
  double B = 0.0;
  double E_F = 0.0;
  std::vector<EofPairTerm> terms;
};

Bound assemble(const std::vector<EofPairTerm>& terms) {
  Bound b;
  b.terms = terms;
  double sum = 0.0;
  for (const auto& t : terms) sum += t.coherence - t.cross;
  b.B = std::max(0.0, 2.0 / std::sqrt(static_cast<double>(terms.size())) * sum);
  b.E_F = eof_from_b(b.B);
  return b;
}

// Growing-subset curve and best point, given an evaluator for a pair subset.
template <typename Eval>
void fill_curve(EofResult& r, const std::vector<ModePair>& pairs, Eval&& eval) {
  std::size_t max_mode = 0;
  for (const auto& [j, k] : pairs) max_mode = std::max({max_mode, j, k});
  r.curve.clear();
  r.best_E_F = 0.0;
  r.best_modes = 0;
  for (std::size_t m = 2; m <= max_mode + 1; ++m) {
    std::vector<ModePair> sub;
    for (const auto& p : pairs)
      if (p.first < m && p.second < m) sub.push_back(p);
    if (sub.empty()) continue;
    const Bound b = eval(sub);
    r.curve.push_back({m, b.B, b.E_F});
    if (b.E_F > r.best_E_F || r.best_modes == 0) {
      r.best_E_F = b.E_F;
      r.best_modes = m;
    }
  }
}

Bound exact_bound(const DensityOperator& rho_space, const std::vector<ModePair>& pairs) {
  const std::vector<std::size_t> modes = modes_of(pairs);
  const auto [sub, weight] = restrict_to_modes(rho_space, modes);
  (void)weight;
  auto pos = [&](std::size_t m) {
    return static_cast<std::size_t>(std::lower_bound(modes.begin(), modes.end(), m) - modes.begin());
  };
  std::vector<EofPairTerm> terms;
  for (const auto& [j, k] : pairs) {
    const std::size_t a = pos(j);
    const std::size_t b = pos(k);
    EofPairTerm t{j, k, std::abs(sub.element(sub.index(a, a), sub.index(b, b))), 0.0};
    const double djk = std::max(0.0, sub.element(sub.index(a, b), sub.index(a, b)).real());
    const double dkj = std::max(0.0, sub.element(sub.index(b, a), sub.index(b, a)).real());
    t.cross = std::sqrt(djk * dkj);
    terms.push_back(t);
  }
  return assemble(terms);
}

Bound table_bound(const CoincidenceTable& t, Space space, const std::vector<ModePair>& pairs, bool subtract) {
  const std::vector<std::size_t> modes = modes_of(pairs);
  const std::string full = full_setting_name(space);
  double total = 0.0;
  for (std::size_t a : modes)
    for (std::size_t b : modes) total += cell_count(t.at(full, static_cast<int>(a), static_cast<int>(b)), subtract).value;
  if (!(total > 0.0)) throw ComputationError("eof_bound: no coincidences in the selected modes of " + full);
  auto diag = [&](std::size_t a, std::size_t b) {
    return cell_count(t.at(full, static_cast<int>(a), static_cast<int>(b)), subtract).value / total;
  };
  std::vector<EofPairTerm> terms;
  for (const auto& [j, k] : pairs) {
    const double weight = diag(j, j) + diag(j, k) + diag(k, j) + diag(k, k);
    const Visibility vx = visibility_from_counts(pair_cells(t, pair_setting_name(space, j, k, Axis::X, Axis::X), subtract));
    const Visibility vy = visibility_from_counts(pair_cells(t, pair_setting_name(space, j, k, Axis::Y, Axis::Y), subtract));
    // Re<jj|rho|kk> = weight (E_xx - E_yy) / 4 on the pair; unclamped correlations keep it unbiased
    EofPairTerm term{j, k, std::max(0.0, weight) * std::abs(vx.correlation - vy.correlation) / 4.0, 0.0};
    term.cross = std::sqrt(std::max(0.0, diag(j, k)) * std::max(0.0, diag(k, j)));
    terms.push_back(term);
  }
  return assemble(terms);
}

}  // namespace

EofResult eof_bound(const DensityOperator& rho, const std::vector<ModePair>& pairs, Space space) {
  if (pairs.empty()) throw ValidationError("eof_bound: empty pair set");
  const DensityOperator rs = to_space(rho, space);
  EofResult r;
  r.pairs = pairs;
  const Bound b = exact_bound(rs, pairs);
  r.B = b.B;
  r.E_F_lower = b.E_F;
  r.terms = b.terms;
  fill_curve(r, pairs, [&](const std::vector<ModePair>& sub) { return exact_bound(rs, sub); });
  return r;
}

EofResult eof_bound(const CoincidenceTable& table, Space space, std::size_t D, const std::vector<ModePair>& pairs,
                    bool subtract, unsigned bootstrap, std::uint64_t seed) {
  if (pairs.empty()) throw ValidationError("eof_bound: empty pair set");
  for (const auto& [j, k] : pairs) {
    if (j >= D || k >= D) throw ValidationError("eof_bound: pair mode exceeds D");
  }
  if (!table.has_setting(full_setting_name(space))) {
    throw ValidationError("eof_bound: counts lack the '" + full_setting_name(space) + "' setting");
  }
  EofResult r;
  r.pairs = pairs;
  const Bound b = table_bound(table, space, pairs, subtract);
  r.B = b.B;
  r.E_F_lower = b.E_F;
  r.terms = b.terms;
  fill_curve(r, pairs, [&](const std::vector<ModePair>& sub) { return table_bound(table, space, sub, subtract); });

  if (bootstrap > 0) {
    const std::string prefix(1, to_char(space));
    const CoincidenceTable own =
        select_settings(table, [&](const std::string& n) { return n.size() > 2 && n[0] == prefix[0] && n[1] == '/'; });
    std::vector<double> full_vals;
    std::vector<double> best_vals;
    for (unsigned rep = 0; rep < bootstrap; ++rep) {
      const CoincidenceTable bt = bootstrap_resample(own, seed, rep);
      try {
        full_vals.push_back(table_bound(bt, space, pairs, subtract).E_F);
        std::vector<ModePair> sub;
        for (const auto& p : pairs)
          if (p.first < r.best_modes && p.second < r.best_modes) sub.push_back(p);
        best_vals.push_back(table_bound(bt, space, sub, subtract).E_F);
      } catch (const ComputationError&) {
        // replicate produced an unphysical B; it carries no error information
      }
    }
    r.E_F_err = std_dev(full_vals);
    r.best_E_F_err = std_dev(best_vals);
  }
  return r;
}

// ---------------------------------------------------------------------------

std::array<Eigen::MatrixXd, 4> cglmp_coefficients(std::size_t d) {
  if (d < 2) throw ValidationError("cglmp: d must be >= 2");
  std::array<Eigen::MatrixXd, 4> w;
  for (auto& m : w) m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  const auto n = static_cast<long>(d);
  auto mod = [n](long v) { return static_cast<Eigen::Index>(((v % n) + n) % n); };
  // P(S_s = I_i + l): cells (k, k - l).  P(I_i = S_s + l): cells (k, k + l).
  auto s_eq_i_plus = [&](int s, int i, long l, double c) {
    for (long k = 0; k < n; ++k) w[2 * s + i](k, mod(k - l)) += c;
  };
  auto i_eq_s_plus = [&](int s, int i, long l, double c) {
    for (long k = 0; k < n; ++k) w[2 * s + i](k, mod(k + l)) += c;
  };
  for (long l = 0; l < n / 2; ++l) {
    const double c = 1.0 - 2.0 * static_cast<double>(l) / static_cast<double>(n - 1);
    s_eq_i_plus(0, 0, l, c);
    s_eq_i_plus(0, 0, -l - 1, -c);
    i_eq_s_plus(1, 0, l + 1, c);
    i_eq_s_plus(1, 0, -l, -c);
    s_eq_i_plus(1, 1, l, c);
    s_eq_i_plus(1, 1, -l - 1, -c);
    i_eq_s_plus(0, 1, l, c);
    i_eq_s_plus(0, 1, -l - 1, -c);
  }
  return w;
}

double cglmp_value(const std::array<ProbabilityTable, 4>& tables, std::size_t d) {
  const auto w = cglmp_coefficients(d);
  double s = 0.0;
  for (int t = 0; t < 4; ++t) {
    if (tables[t].rows() != static_cast<Eigen::Index>(d) || tables[t].cols() != static_cast<Eigen::Index>(d)) {
      throw ValidationError("cglmp: probability table has wrong shape");
    }
    s += (w[t].array() * tables[t].array()).sum();
  }
  return s;
}

CglmpResult cglmp(const DensityOperator& rho, std::size_t d) {
  if (d < 2) throw ValidationError("cglmp: d must be >= 2");
  if (d > rho.dim_signal() || d > rho.dim_idler()) throw ValidationError("cglmp: d exceeds the state dimension");
  CglmpResult r;
  r.d = d;
  for (int s = 0; s < 2; ++s) {
    for (int i = 0; i < 2; ++i) {
      const CMatrix a = cglmp_basis(Side::Signal, s, d, rho.dim_signal()).columns();
      const CMatrix b = cglmp_basis(Side::Idler, i, d, rho.dim_idler()).columns();
      const CMatrix v = tensor(a, b);
      const CMatrix rv = rho.matrix() * v;
      Eigen::MatrixXd p(d, d);
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l) {
          const auto c = static_cast<Eigen::Index>(k * d + l);
          p(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = clamp_probability(v.col(c).dot(rv.col(c)));
        }
      const double total = p.sum();
      if (total < 1e-14) throw ComputationError("cglmp: zero post-selection weight on the first d modes");
      r.tables[2 * s + i] = p / total;
    }
  }
  r.S = cglmp_value(r.tables, d);
  return r;
}

CglmpResult cglmp(const StateVector& psi, std::size_t d) {
  if (d < 2) throw ValidationError("cglmp: d must be >= 2");
  if (d > psi.dim_signal() || d > psi.dim_idler()) throw ValidationError("cglmp: d exceeds the state dimension");
  const CMatrix coeff = psi.coefficient_matrix();
  CglmpResult r;
  r.d = d;
  for (int s = 0; s < 2; ++s) {
    for (int i = 0; i < 2; ++i) {
      const CMatrix a = cglmp_basis(Side::Signal, s, d, psi.dim_signal()).columns();
      const CMatrix b = cglmp_basis(Side::Idler, i, d, psi.dim_idler()).columns();
      const CMatrix amp = a.adjoint() * coeff * b.conjugate();
      Eigen::MatrixXd p = amp.cwiseAbs2();
      const double total = p.sum();
      if (total < 1e-14) throw ComputationError("cglmp: zero post-selection weight on the first d modes");
      r.tables[2 * s + i] = p / total;
    }
  }
  r.S = cglmp_value(r.tables, d);
  return r;
}

CglmpResult cglmp(const CoincidenceTable& table, std::size_t d, bool subtract) {
  if (d < 2) throw ValidationError("cglmp: d must be >= 2");
  const auto w = cglmp_coefficients(d);
  CglmpResult r;
  r.d = d;
  double var = 0.0;
  for (int s = 0; s < 2; ++s) {
    for (int i = 0; i < 2; ++i) {
      const std::string name = bell_setting_name(d, s, i);
      if (!table.has_setting(name)) throw ValidationError("cglmp: counts lack setting '" + name + "'");
      Eigen::MatrixXd c(d, d);
      Eigen::MatrixXd e(d, d);
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l) {
          const CorrectedCount cc = cell_count(table.at(name, static_cast<int>(k), static_cast<int>(l)), subtract);
          c(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = cc.value;
          e(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = cc.error;
        }
      const double total = c.sum();
      if (!(total > 0.0)) throw ComputationError("cglmp: setting '" + name + "' has no net coincidences");
      const Eigen::MatrixXd p = c / total;
      const double part = (w[2 * s + i].array() * p.array()).sum();
      var += ((w[2 * s + i].array() - part) / total * e.array()).square().sum();
      r.tables[2 * s + i] = p;
    }
  }
  r.S = cglmp_value(r.tables, d);
  r.S_err = std::sqrt(var);
  return r;
}

std::vector<ViolationRow> violation_curve_exact(const SourceConfig& cfg, std::size_t d_min, std::size_t d_max) {
  if (d_min < 2 || d_max > 10 || d_min > d_max || d_max > cfg.modes) {
    throw ValidationError("violation_curve: d range must lie within [2, min(10, D)]");
  }
  const DensityOperator rho = noisy_state(cfg);
  std::vector<ViolationRow> rows;
  for (std::size_t d = d_min; d <= d_max; ++d) {
    const CglmpResult c = cglmp(rho, d);
    rows.push_back({"exact", d, c.S, 0.0, is_violation(c.S, 0.0, 1.0)});
  }
  return rows;
}

std::vector<ViolationRow> violation_curve_table(const CoincidenceTable& table, std::size_t d_min, std::size_t d_max,
                                                bool subtract, double margin) {
  if (d_min < 2 || d_max > 10 || d_min > d_max) throw ValidationError("violation_curve: d range must lie within [2,10]");
  std::vector<ViolationRow> rows;
  for (std::size_t d = d_min; d <= d_max; ++d) {
    const CglmpResult c = cglmp(table, d, subtract);
    rows.push_back({subtract ? "subtracted" : "raw", d, c.S, c.S_err, is_violation(c.S, c.S_err, margin)});
  }
  return rows;
}

std::vector<ViolationRow> violation_curve_sampled(const SourceConfig& state_cfg, const CountingParams& params,
                                                  std::size_t d_min, std::size_t d_max, std::uint64_t seed,
                                                  unsigned workers, double margin) {
  if (d_min < 2 || d_max > 10 || d_min > d_max || d_max > state_cfg.modes) {
    throw ValidationError("violation_curve: d range must lie within [2, min(10, D)]");
  }
  std::vector<SettingSpec> plan;
  for (std::size_t d = d_min; d <= d_max; ++d) append_unique(plan, cglmp_plan(d, state_cfg.modes));
  const CoincidenceTable table(simulate_plan(noisy_state(state_cfg), plan, params, seed, workers));
  std::vector<ViolationRow> rows = violation_curve_table(table, d_min, d_max, false, margin);
  const std::vector<ViolationRow> sub = violation_curve_table(table, d_min, d_max, true, margin);
  rows.insert(rows.end(), sub.begin(), sub.end());
  return rows;
}

}  // namespace qcert
