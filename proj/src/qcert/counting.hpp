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

// Finite-statistics photon counting. Each (setting, outcome_s, outcome_i)
// cell is an independent acquisition of N trials in which
//
//   true coincidences   ~ N * P_S * eta_r * P(a,b)
//   accidentals         ~ N * P_S m_s(a) * P_I(b),  P_I(b) = eta_r P_S m_i(b) + P_bg u(b)
//   signal singles      ~ N * P_S m_s(a)
//   idler singles       ~ N * P_I(b)
//
// where m_s, m_i are outcome marginals of rho and u(b) = |v_b|^2 / dim is the
// share of unpolarized background landing on outcome b.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "qcert/bases.hpp"
#include "qcert/qudit.hpp"

namespace qcert {

struct CountRecord {
  std::string setting;
  int outcome_s = 0;
  int outcome_i = 0;
  std::int64_t coincidences = 0;
  std::int64_t singles_s = 0;
  std::int64_t singles_i = 0;
  std::int64_t trials = 1;

  void validate() const;  // throws ValidationError
  bool operator==(const CountRecord&) const = default;
};

struct TableMetadata {
  std::uint64_t seed = 0;
  double P_S = 0.0;
  double eta_r = 0.0;
  double P_bg_idler = 0.0;
  double noise_fraction = 0.0;
  double residual_noise_fraction = 0.0;
  double repetition_rate_hz = 0.0;
  std::size_t D = 0;
  std::string manifest_hash;
  bool operator==(const TableMetadata&) const = default;
};

using RecordKey = std::tuple<std::string, int, int>;

class CoincidenceTable {
 public:
  CoincidenceTable() = default;
  explicit CoincidenceTable(std::vector<CountRecord> records, TableMetadata meta = {});

  /// Appends a record; duplicate keys are rejected.
  void add(CountRecord r);

  const std::vector<CountRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  const TableMetadata& metadata() const { return meta_; }
  TableMetadata& metadata() { return meta_; }

  const CountRecord* find(const std::string& setting, int a, int b) const;
  const CountRecord& at(const std::string& setting, int a, int b) const;  // ValidationError if absent
  bool has_setting(const std::string& setting) const;
  std::vector<std::string> settings() const;  // in first-appearance order

  bool operator==(const CoincidenceTable& o) const { return records_ == o.records_ && meta_ == o.meta_; }

 private:
  std::vector<CountRecord> records_;
  std::map<RecordKey, std::size_t> index_;
  std::map<std::string, std::size_t> setting_first_;
  TableMetadata meta_;
};

struct CountingParams {
  std::int64_t trials = 1;
  double P_S = 0.0;
  double eta_r = 0.0;
  double P_bg_idler = 0.0;

  void validate() const;
};

/// One record per labeled outcome pair of (basis_s, basis_i); streams keyed by
/// (seed, setting_name, outcome labels).
std::vector<CountRecord> simulate_setting(const DensityOperator& rho, const MeasurementBasis& basis_s,
                                          const MeasurementBasis& basis_i, const CountingParams& params,
                                          std::uint64_t seed, const std::string& setting_name);

/// Expected values of the four counters for one cell (no sampling).
struct CellMeans {
  double true_coincidences = 0.0;
  double accidentals = 0.0;
  double singles_s = 0.0;
  double singles_i = 0.0;
};
std::vector<CellMeans> expected_setting(const DensityOperator& rho, const MeasurementBasis& basis_s,
                                        const MeasurementBasis& basis_i, const CountingParams& params);

struct SettingSpec {
  std::string name;
  MeasurementBasis basis_s;
  MeasurementBasis basis_i;
};

/// Simulates every setting, distributing them over `workers` threads. Record
/// order follows the plan and does not depend on the worker count.
std::vector<CountRecord> simulate_plan(const DensityOperator& rho, const std::vector<SettingSpec>& plan,
                                       const CountingParams& params, std::uint64_t seed, unsigned workers = 1);

struct CorrectedCount {
  double value = 0.0;
  double error = 0.0;
};

/// C' = C_SI - C_S C_I / N with independent-Poisson error; negative values kept.
CorrectedCount subtract_accidentals(const CountRecord& r);
/// C_SI with Poisson error sqrt(C_SI).
CorrectedCount raw_coincidences(const CountRecord& r);
inline CorrectedCount cell_count(const CountRecord& r, bool subtract) {
  return subtract ? subtract_accidentals(r) : raw_coincidences(r);
}

/// Sums records sharing a key (counts and trials add).
CoincidenceTable merge_tables(const CoincidenceTable& a, const CoincidenceTable& b);

/// Records whose setting name satisfies keep, in their original order.
CoincidenceTable select_settings(const CoincidenceTable& t, const std::function<bool(const std::string&)>& keep);

/// Parametric bootstrap replicate: every counter redrawn as Poisson(observed).
CoincidenceTable bootstrap_resample(const CoincidenceTable& t, std::uint64_t seed, unsigned replicate);

inline constexpr const char* kCountsHeader = "setting,outcome_s,outcome_i,coincidences,singles_s,singles_i,trials";

void save_table(const CoincidenceTable& table, const std::string& csv_path);
CoincidenceTable load_table(const std::string& csv_path);
std::string table_to_csv(const CoincidenceTable& table);
CoincidenceTable table_from_csv(const std::string& text);

void save_metadata(const TableMetadata& meta, const std::string& json_path);
TableMetadata load_metadata(const std::string& json_path);

}  // namespace qcert
