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

#include "qcert/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "qcert/error.hpp"
#include "qcert/settings.hpp"
#include "qcert/tomo.hpp"

namespace qcert {

using nlohmann::json;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ValidationError("config: " + where + " must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : obj.items()) {
    if (!ok.count(k)) throw ValidationError("config: unknown key '" + (where.empty() ? k : where + "." + k) + "'");
  }
}

template <typename T>
void read(const json& obj, const char* key, const std::string& where, T& out) {
  if (!obj.contains(key)) return;
  const std::string path = where.empty() ? key : where + "." + key;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError("config: " + path + ": " + e.what());
  }
}

template <typename T>
void read_opt(const json& obj, const char* key, const std::string& where, std::optional<T>& out) {
  if (!obj.contains(key) || obj.at(key).is_null()) return;
  T v{};
  read(obj, key, where, v);
  out = v;
}

std::vector<Space> read_spaces(const json& obj, const char* key, const std::string& where,
                               std::vector<Space> fallback) {
  if (!obj.contains(key)) return fallback;
  std::vector<std::string> names;
  read(obj, key, where, names);
  std::vector<Space> out;
  for (const auto& n : names) {
    try {
      out.push_back(parse_space(n));
    } catch (const ValidationError& e) {
      throw ValidationError("config: " + where + "." + key + ": " + e.what());
    }
  }
  return out;
}

std::vector<std::string> space_names(const std::vector<Space>& s) {
  std::vector<std::string> out;
  for (Space x : s) out.emplace_back(1, to_char(x));
  return out;
}

void check_unit(double v, const std::string& name) {
  if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("config: " + name + " must lie in [0,1]");
}

}  // namespace

void RunConfig::validate() const {
  if (schema_version != kConfigSchemaVersion) {
    throw ValidationError("config: unsupported schema_version " + std::to_string(schema_version));
  }
  try {
    source.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("config: source: ") + e.what());
  }
  if (source.modes < 2) throw ValidationError("config: source.D must be >= 2");
  if (fit_witness_W && !(*fit_witness_W > 0.0)) throw ValidationError("config: source.fit_witness_W must be positive");
  if (counting.trials_per_setting < 1) throw ValidationError("config: counting.trials_per_setting must be >= 1");
  if (counting.full_basis_trials < 0) throw ValidationError("config: counting.full_basis_trials must be >= 0");
  check_unit(counting.P_S, "counting.P_S");
  check_unit(counting.eta_r, "counting.eta_r");
  if (counting.P_bg_idler) check_unit(*counting.P_bg_idler, "counting.P_bg_idler");
  check_unit(counting.residual_noise_fraction, "counting.residual_noise_fraction");
  if (!(counting.repetition_rate_hz > 0.0)) throw ValidationError("config: counting.repetition_rate_hz must be positive");
  if (bell.enabled) {
    check_unit(bell.noise_fraction, "bell.noise_fraction");
    check_unit(bell.residual_noise_fraction, "bell.residual_noise_fraction");
    if (bell.P_bg_idler) check_unit(*bell.P_bg_idler, "bell.P_bg_idler");
    if (bell.trials_per_setting < 1) throw ValidationError("config: bell.trials_per_setting must be >= 1");
    if (bell.d_min < 2 || bell.d_max > 10 || bell.d_min > bell.d_max || bell.d_max > source.modes) {
      throw ValidationError("config: bell.d_min..d_max must lie within 2..min(10, D)");
    }
  }
  for (const auto& [j, k] : tomography.pairs) {
    if (j == k || j >= source.modes || k >= source.modes) {
      throw ValidationError("config: tomography.pairs entry (" + std::to_string(j) + "," + std::to_string(k) +
                            ") is not a valid mode pair");
    }
  }
  if (tomography.fit_fidelity && !(*tomography.fit_fidelity > 0.25 && *tomography.fit_fidelity <= 1.0)) {
    throw ValidationError("config: tomography.fit_fidelity must lie in (0.25, 1]");
  }
  if (certify.spaces.empty()) throw ValidationError("config: certify.spaces must not be empty");
  if (!(certify.margin >= 0.0)) throw ValidationError("config: certify.margin must be >= 0");
}

double accidental_ratio(double p, double p_res) {
  if (p >= 1.0 - 1e-12) return 0.0;
  return std::max(0.0, (p - p_res) / (1.0 - p));
}

SamplingModel sampling_model(const SourceConfig& total, std::int64_t trials, double P_S, double eta_r,
                             double p_res, std::optional<double> P_bg_idler) {
  SamplingModel m;
  m.state = total;
  m.params.trials = trials;
  m.params.P_S = P_S;
  m.params.eta_r = eta_r;
  const double p = total.noise_fraction;
  if (p >= 1.0 - 1e-12) {
    m.state.noise_fraction = p;
    m.params.P_bg_idler = P_bg_idler.value_or(0.0);
  } else {
    m.state.noise_fraction = std::min(p, p_res);
    const double q = accidental_ratio(p, m.state.noise_fraction);
    m.params.P_bg_idler = P_bg_idler.value_or(std::max(0.0, eta_r * (q - P_S)));
  }
  m.params.P_bg_idler = std::min(1.0, m.params.P_bg_idler);
  m.params.validate();
  return m;
}

SourceConfig resolved_source(const RunConfig& cfg) {
  SourceConfig s = cfg.source;
  if (cfg.fit_witness_W) {
    const double pairs = static_cast<double>(s.modes * (s.modes - 1) / 2);
    s.noise_fraction = fit_noise_to_visibility(*cfg.fit_witness_W / (3.0 * pairs), s);
  }
  return s;
}

SamplingModel witness_sampling(const RunConfig& cfg) {
  const auto& c = cfg.counting;
  return sampling_model(resolved_source(cfg), c.trials_per_setting, c.P_S, c.eta_r, c.residual_noise_fraction,
                        c.P_bg_idler);
}

SamplingModel bell_sampling(const RunConfig& cfg) {
  SourceConfig s = cfg.source;
  s.noise_fraction = cfg.bell.noise_fraction;
  return sampling_model(s, cfg.bell.trials_per_setting, cfg.counting.P_S, cfg.counting.eta_r,
                        cfg.bell.residual_noise_fraction, cfg.bell.P_bg_idler);
}

std::vector<SettingSpec> simulation_plan(const RunConfig& cfg) {
  const std::size_t D = cfg.source.modes;
  std::vector<SettingSpec> plan;
  std::vector<Space> spaces = cfg.certify.spaces;
  for (Space s : cfg.tomography.spaces)
    if (std::find(spaces.begin(), spaces.end(), s) == spaces.end()) spaces.push_back(s);
  for (Space s : spaces) append_unique(plan, witness_plan(s, D));
  for (Space s : cfg.tomography.spaces)
    for (const auto& [j, k] : cfg.tomography.pairs) append_unique(plan, tomo_settings(j, k, D, s));
  return plan;
}

CoincidenceTable simulate_config(const RunConfig& cfg, std::uint64_t seed, unsigned workers) {
  cfg.validate();
  const SamplingModel w = witness_sampling(cfg);
  const DensityOperator rho = noisy_state(w.state);
  std::vector<CountRecord> records = simulate_plan(rho, simulation_plan(cfg), w.params, seed, workers);
  {
    std::vector<SettingSpec> full;
    for (Space s : cfg.certify.spaces) append_unique(full, {full_basis_setting(s, cfg.source.modes)});
    for (Space s : cfg.tomography.spaces) append_unique(full, {full_basis_setting(s, cfg.source.modes)});
    CountingParams fp = w.params;
    if (cfg.counting.full_basis_trials > 0) fp.trials = cfg.counting.full_basis_trials;
    std::vector<CountRecord> more = simulate_plan(rho, full, fp, seed, workers);
    records.insert(records.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
  }
  if (cfg.bell.enabled) {
    const SamplingModel b = bell_sampling(cfg);
    std::vector<SettingSpec> plan;
    for (std::size_t d = cfg.bell.d_min; d <= cfg.bell.d_max; ++d) append_unique(plan, cglmp_plan(d, cfg.source.modes));
    std::vector<CountRecord> more = simulate_plan(noisy_state(b.state), plan, b.params, seed, workers);
    records.insert(records.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
  }
  TableMetadata meta;
  meta.seed = seed;
  meta.P_S = w.params.P_S;
  meta.eta_r = w.params.eta_r;
  meta.P_bg_idler = w.params.P_bg_idler;
  meta.noise_fraction = resolved_source(cfg).noise_fraction;
  meta.residual_noise_fraction = w.state.noise_fraction;
  meta.repetition_rate_hz = cfg.counting.repetition_rate_hz;
  meta.D = cfg.source.modes;
  return CoincidenceTable(std::move(records), meta);
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  check_keys(j, "", {"schema_version", "seed", "source", "counting", "bell", "tomography", "certify"});
  read(j, "schema_version", "", c.schema_version);
  read(j, "seed", "", c.seed);

  if (j.contains("source")) {
    const json& s = j.at("source");
    check_keys(s, "source", {"D", "coefficients_re", "coefficients_im", "phases_deg", "noise_fraction", "fit_witness_W"});
    std::size_t D = 10;
    read(s, "D", "source", D);
    if (D < 1 || D > 64) throw ValidationError("config: source.D must lie in 1..64");
    c.source = SourceConfig::uniform(D);
    std::vector<double> re;
    std::vector<double> im;
    read(s, "coefficients_re", "source", re);
    read(s, "coefficients_im", "source", im);
    if (!re.empty() || !im.empty()) {
      if (re.empty()) re.assign(im.size(), 0.0);
      if (im.empty()) im.assign(re.size(), 0.0);
      if (re.size() != D || im.size() != D) throw ValidationError("config: source.coefficients_* must have length D");
      for (std::size_t i = 0; i < D; ++i) c.source.coefficients[i] = cplx(re[i], im[i]);
    }
    std::vector<double> deg;
    read(s, "phases_deg", "source", deg);
    if (!deg.empty()) {
      if (deg.size() != D) throw ValidationError("config: source.phases_deg must have length D");
      for (std::size_t i = 0; i < D; ++i) c.source.phase_mismatch[i] = deg[i] * kDeg;
    }
    read(s, "noise_fraction", "source", c.source.noise_fraction);
    read_opt(s, "fit_witness_W", "source", c.fit_witness_W);
  }
  if (j.contains("counting")) {
    const json& s = j.at("counting");
    check_keys(s, "counting",
               {"trials_per_setting", "full_basis_trials", "P_S", "eta_r", "P_bg_idler", "residual_noise_fraction",
                "repetition_rate_hz"});
    read(s, "trials_per_setting", "counting", c.counting.trials_per_setting);
    read(s, "full_basis_trials", "counting", c.counting.full_basis_trials);
    read(s, "P_S", "counting", c.counting.P_S);
    read(s, "eta_r", "counting", c.counting.eta_r);
    read_opt(s, "P_bg_idler", "counting", c.counting.P_bg_idler);
    read(s, "residual_noise_fraction", "counting", c.counting.residual_noise_fraction);
    read(s, "repetition_rate_hz", "counting", c.counting.repetition_rate_hz);
  }
  if (j.contains("bell")) {
    const json& s = j.at("bell");
    check_keys(s, "bell",
               {"enabled", "noise_fraction", "residual_noise_fraction", "trials_per_setting", "P_bg_idler", "d_min", "d_max"});
    read(s, "enabled", "bell", c.bell.enabled);
    read(s, "noise_fraction", "bell", c.bell.noise_fraction);
    read(s, "residual_noise_fraction", "bell", c.bell.residual_noise_fraction);
    read(s, "trials_per_setting", "bell", c.bell.trials_per_setting);
    read_opt(s, "P_bg_idler", "bell", c.bell.P_bg_idler);
    read(s, "d_min", "bell", c.bell.d_min);
    read(s, "d_max", "bell", c.bell.d_max);
  }
  if (j.contains("tomography")) {
    const json& s = j.at("tomography");
    check_keys(s, "tomography", {"pairs", "spaces", "fit_fidelity"});
    std::vector<std::array<std::size_t, 2>> pairs;
    read(s, "pairs", "tomography", pairs);
    for (const auto& p : pairs) c.tomography.pairs.emplace_back(p[0], p[1]);
    c.tomography.spaces = read_spaces(s, "spaces", "tomography", c.tomography.spaces);
    read_opt(s, "fit_fidelity", "tomography", c.tomography.fit_fidelity);
  }
  if (j.contains("certify")) {
    const json& s = j.at("certify");
    check_keys(s, "certify", {"spaces", "margin", "bootstrap"});
    c.certify.spaces = read_spaces(s, "spaces", "certify", c.certify.spaces);
    read(s, "margin", "certify", c.certify.margin);
    read(s, "bootstrap", "certify", c.certify.bootstrap);
  }
  c.validate();
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["seed"] = c.seed;
  std::vector<double> re;
  std::vector<double> im;
  std::vector<double> deg;
  for (std::size_t i = 0; i < c.source.modes; ++i) {
    re.push_back(c.source.coefficients[i].real());
    im.push_back(c.source.coefficients[i].imag());
    deg.push_back(c.source.phase_mismatch[i] / kDeg);
  }
  j["source"] = {{"D", c.source.modes},
                 {"coefficients_re", re},
                 {"coefficients_im", im},
                 {"phases_deg", deg},
                 {"noise_fraction", c.source.noise_fraction}};
  if (c.fit_witness_W) j["source"]["fit_witness_W"] = *c.fit_witness_W;
  j["counting"] = {{"trials_per_setting", c.counting.trials_per_setting},
                   {"full_basis_trials", c.counting.full_basis_trials},
                   {"P_S", c.counting.P_S},
                   {"eta_r", c.counting.eta_r},
                   {"residual_noise_fraction", c.counting.residual_noise_fraction},
                   {"repetition_rate_hz", c.counting.repetition_rate_hz}};
  if (c.counting.P_bg_idler) j["counting"]["P_bg_idler"] = *c.counting.P_bg_idler;
  j["bell"] = {{"enabled", c.bell.enabled},
               {"noise_fraction", c.bell.noise_fraction},
               {"residual_noise_fraction", c.bell.residual_noise_fraction},
               {"trials_per_setting", c.bell.trials_per_setting},
               {"d_min", c.bell.d_min},
               {"d_max", c.bell.d_max}};
  if (c.bell.P_bg_idler) j["bell"]["P_bg_idler"] = *c.bell.P_bg_idler;
  json pairs = json::array();
  for (const auto& [a, b] : c.tomography.pairs) pairs.push_back({a, b});
  j["tomography"] = {{"pairs", pairs}, {"spaces", space_names(c.tomography.spaces)}};
  if (c.tomography.fit_fidelity) j["tomography"]["fit_fidelity"] = *c.tomography.fit_fidelity;
  j["certify"] = {{"spaces", space_names(c.certify.spaces)}, {"margin", c.certify.margin}, {"bootstrap", c.certify.bootstrap}};
  return j;
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: malformed JSON: ") + e.what());
  }
  return config_from_json(j);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

RunConfig default_config() {
  RunConfig c;
  c.seed = 20260101;
  c.source = SourceConfig::uniform(10);
  c.source.phase_mismatch[5] = 17.0 * kDeg;
  c.source.noise_fraction = 0.0;
  c.fit_witness_W = 111.6;
  c.counting.trials_per_setting = 500000;
  c.counting.full_basis_trials = 100000000;
  c.counting.P_S = 0.006;
  c.counting.eta_r = 0.1;
  c.counting.residual_noise_fraction = 0.1;
  c.counting.repetition_rate_hz = 16000.0;
  c.bell.noise_fraction = 0.40;
  c.bell.residual_noise_fraction = 0.1;
  c.bell.trials_per_setting = 40000000;
  c.tomography.pairs = {{0, 5}};
  c.tomography.spaces = {Space::X};
  c.tomography.fit_fidelity = 0.878;
  return c;
}

void set_config_number(RunConfig& cfg, const std::string& key, double value) {
  json j = config_to_json(cfg);
  const auto dot = key.find('.');
  if (dot == std::string::npos) {
    if (key != "seed") throw ValidationError("config: unknown numeric key '" + key + "'");
    j["seed"] = static_cast<std::uint64_t>(value);
  } else {
    const std::string section = key.substr(0, dot);
    const std::string field = key.substr(dot + 1);
    if (!j.contains(section) || !j[section].is_object()) throw ValidationError("config: unknown section '" + section + "'");
    json& target = j[section][field];
    if (target.is_number_integer() || target.is_number_unsigned()) {
      if (std::floor(value) != value) throw ValidationError("config: " + key + " must be an integer");
      target = static_cast<std::int64_t>(value);
    } else {
      target = value;
    }
    // an explicit noise level replaces the witness fit
    if (key == "source.noise_fraction") j["source"].erase("fit_witness_W");
  }
  cfg = config_from_json(j);
}

}  // namespace qcert
