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

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qcert/bases.hpp"
#include "qcert/counting.hpp"
#include "qcert/qudit.hpp"
#include "qcert/source.hpp"

namespace qcert {

using ModePair = std::pair<std::size_t, std::size_t>;

// ---------------------------------------------------------------------------
// Dimension witness
// ---------------------------------------------------------------------------

/// Largest visibility sum reachable with Schmidt number <= d on D modes:
/// 3D(D-1)/2 - D(D-d).
long long witness_bound(std::size_t D, std::size_t d);

/// 1 + max{d : W - margin*W_err > f(d)}, or 1 when no bound is exceeded.
int certified_dimension(double W, double W_err, std::size_t D, double margin = 1.0);

struct Visibility {
  double value = 0.0;
  double error = 0.0;
  bool flagged = false;  // no usable counts; contributes 0
  double correlation = 0.0;  // signed and unclamped; same error as value
};

/// Cells in the order (++, --, +-, -+).
Visibility visibility_from_counts(const std::array<CorrectedCount, 4>& cells);
Visibility visibility_from_counts(const std::array<double, 4>& counts);

struct WitnessResult {
  Space space = Space::X;
  std::size_t D = 0;
  std::map<ModePair, std::array<Visibility, 3>> per_pair;  // (V_x, V_y, V_z)
  double W = 0.0;
  double W_err = 0.0;
  double margin = 1.0;
  int certified_dimension = 1;
  std::size_t flagged_cells = 0;
};

/// Exact path: visibilities from outcome probabilities of rho.
WitnessResult witness(const DensityOperator& rho, Space space, double margin = 1.0);
/// Count path. Every pair's xx/yy/zz settings must be present.
WitnessResult witness(const CoincidenceTable& table, Space space, std::size_t D, bool subtract, double margin = 1.0);

// ---------------------------------------------------------------------------
// Entanglement-of-formation lower bound
// ---------------------------------------------------------------------------

struct EofPairTerm {
  std::size_t j = 0;
  std::size_t k = 0;
  double coherence = 0.0;  // |<jj|rho|kk>|
  double cross = 0.0;      // sqrt(<jk|rho|jk><kj|rho|kj>)
};

struct EofCurvePoint {
  std::size_t modes = 0;
  double B = 0.0;
  double E_F = 0.0;
};

struct EofResult {
  double B = 0.0;
  double E_F_lower = 0.0;
  double E_F_err = 0.0;
  std::vector<ModePair> pairs;
  std::vector<EofPairTerm> terms;
  std::vector<EofCurvePoint> curve;  // modes added in index order
  double best_E_F = 0.0;
  double best_E_F_err = 0.0;
  std::size_t best_modes = 0;
};

std::vector<ModePair> all_pairs(std::size_t D);

/// -log2(1 - B^2/2); throws ComputationError when B^2 >= 2.
double eof_from_b(double B);

// Schmidt number implied by an E_F lower bound: the largest d with E_F > log2(d - 1).
int eof_certified_dimension(double E_F, double E_F_err = 0.0, double margin = 1.0);

/// Rotates rho into the (signal, idler) mode basis of `space`.
DensityOperator to_space(const DensityOperator& rho, Space space);

/// Exact path. rho is post-selected onto the modes touched by `pairs` and
/// renormalized before the bound is evaluated.
EofResult eof_bound(const DensityOperator& rho, const std::vector<ModePair>& pairs, Space space = Space::X);
/// Count path: diagonals from the "<S>/full" setting, coherences
/// weight_jk * |E_xx - E_yy| / 4 from the signed pair correlations. Bootstrap
/// replicates that hit an unphysical B are skipped.
EofResult eof_bound(const CoincidenceTable& table, Space space, std::size_t D, const std::vector<ModePair>& pairs,
                    bool subtract, unsigned bootstrap = 0, std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// CGLMP
// ---------------------------------------------------------------------------

using ProbabilityTable = Eigen::MatrixXd;  // rows: signal outcome, cols: idler outcome

struct CglmpResult {
  std::size_t d = 0;
  double S = 0.0;
  double S_err = 0.0;
  std::array<ProbabilityTable, 4> tables;  // index 2*s + i
};

/// Coefficient tables W_si such that S_d = sum_si <W_si, P_si>.
std::array<Eigen::MatrixXd, 4> cglmp_coefficients(std::size_t d);
double cglmp_value(const std::array<ProbabilityTable, 4>& tables, std::size_t d);

/// Exact path, post-selected onto the first d modes.
CglmpResult cglmp(const DensityOperator& rho, std::size_t d);
CglmpResult cglmp(const StateVector& psi, std::size_t d);
CglmpResult cglmp(const CoincidenceTable& table, std::size_t d, bool subtract);

struct ViolationRow {
  std::string curve;  // "exact", "raw" or "subtracted"
  std::size_t d = 0;
  double S = 0.0;
  double S_err = 0.0;
  bool violated = false;
};

inline bool is_violation(double S, double S_err, double margin) { return S - margin * S_err > 2.0; }

std::vector<ViolationRow> violation_curve_exact(const SourceConfig& cfg, std::size_t d_min, std::size_t d_max);
std::vector<ViolationRow> violation_curve_table(const CoincidenceTable& table, std::size_t d_min, std::size_t d_max,
                                                bool subtract, double margin = 1.0);
/// Simulates the CGLMP settings for noisy_state(state_cfg) and returns the raw
/// and accidental-subtracted curves.
std::vector<ViolationRow> violation_curve_sampled(const SourceConfig& state_cfg, const CountingParams& params,
                                                  std::size_t d_min, std::size_t d_max, std::uint64_t seed,
                                                  unsigned workers = 1, double margin = 1.0);

}  // namespace qcert
