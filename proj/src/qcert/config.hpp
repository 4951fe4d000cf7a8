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

// Run configuration: one JSON document drives simulate, certify, bell, tomo
// and sweep.  Command-line flags override individual fields.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcert/bases.hpp"
#include "qcert/certify.hpp"
#include "qcert/counting.hpp"
#include "qcert/source.hpp"

namespace qcert {

inline constexpr int kConfigSchemaVersion = 1;

struct CountingSection {
  std::int64_t trials_per_setting = 260000;
  std::int64_t full_basis_trials = 0;      // trials for the "<space>/full" settings; 0 means trials_per_setting
  double P_S = 0.006;
  double eta_r = 0.1;
  std::optional<double> P_bg_idler;        // derived from the noise split when absent
  double residual_noise_fraction = 0.1;    // white noise left after accidental subtraction
  double repetition_rate_hz = 16000.0;
};

struct BellSection {
  bool enabled = true;
  double noise_fraction = 0.0;             // total white-noise equivalent for the CGLMP runs
  double residual_noise_fraction = 0.1;
  std::int64_t trials_per_setting = 20000000;
  std::optional<double> P_bg_idler;
  std::size_t d_min = 2;
  std::size_t d_max = 10;
};

struct TomoSection {
  std::vector<ModePair> pairs;
  std::vector<Space> spaces{Space::X};
  std::optional<double> fit_fidelity;      // exact-path noise fitted to this pair fidelity
};

struct CertifySection {
  std::vector<Space> spaces{Space::X, Space::K};
  double margin = 1.0;
  unsigned bootstrap = 200;
};

struct RunConfig {
  int schema_version = kConfigSchemaVersion;
  std::uint64_t seed = 1;
  SourceConfig source = SourceConfig::uniform(10);
  std::optional<double> fit_witness_W;     // overrides source.noise_fraction when set
  CountingSection counting;
  BellSection bell;
  TomoSection tomography;
  CertifySection certify;

  void validate() const;
};

// Sampled-path model: residual white noise in the state plus accidentals
// from the counting model, split so that the raw statistics reproduce the
// total noise fraction.
struct SamplingModel {
  SourceConfig state;
  CountingParams params;
};

SamplingModel sampling_model(const SourceConfig& total, std::int64_t trials, double P_S, double eta_r,
                             double residual_noise_fraction, std::optional<double> P_bg_idler);
double accidental_ratio(double noise_fraction, double residual_noise_fraction);

// Applies fit_witness_W if present and returns the exact-path source.
SourceConfig resolved_source(const RunConfig& cfg);
SamplingModel witness_sampling(const RunConfig& cfg);
SamplingModel bell_sampling(const RunConfig& cfg);

// Settings that `simulate` acquires with trials_per_setting; the full-basis
// settings are added separately with full_basis_trials.
std::vector<SettingSpec> simulation_plan(const RunConfig& cfg);
CoincidenceTable simulate_config(const RunConfig& cfg, std::uint64_t seed, unsigned workers);

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);
RunConfig default_config();

// Sets a numeric field addressed by a dotted key, e.g. "source.noise_fraction".
void set_config_number(RunConfig& cfg, const std::string& dotted_key, double value);

}  // namespace qcert
