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

#include "qcert/counting.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qcert/error.hpp"
#include "qcert/rng.hpp"

namespace qcert {

using nlohmann::json;

void CountRecord::validate() const {
  if (setting.empty()) throw ValidationError("record: empty setting name");
  if (setting.find_first_of(",\"\n\r") != std::string::npos) {
    throw ValidationError("record: setting name '" + setting + "' contains a reserved character");
  }
  if (trials < 1) throw ValidationError("record " + setting + ": trials must be >= 1");
  if (coincidences < 0 || singles_s < 0 || singles_i < 0) throw ValidationError("record " + setting + ": negative count");
  if (coincidences > trials || singles_s > trials || singles_i > trials) {
    throw ValidationError("record " + setting + ": count exceeds trials");
  }
  if (coincidences > std::min(singles_s, singles_i)) {
    throw ValidationError("record " + setting + ": coincidences exceed singles");
  }
}

CoincidenceTable::CoincidenceTable(std::vector<CountRecord> records, TableMetadata meta) : meta_(std::move(meta)) {
  records_.reserve(records.size());
  for (auto& r : records) add(std::move(r));
}

void CoincidenceTable::add(CountRecord r) {
  r.validate();
  RecordKey key{r.setting, r.outcome_s, r.outcome_i};
  if (index_.count(key)) {
    throw ValidationError("duplicate record key (" + r.setting + "," + std::to_string(r.outcome_s) + "," +
                          std::to_string(r.outcome_i) + ")");
  }
  index_.emplace(std::move(key), records_.size());
  setting_first_.try_emplace(r.setting, records_.size());
  records_.push_back(std::move(r));
}

const CountRecord* CoincidenceTable::find(const std::string& setting, int a, int b) const {
  auto it = index_.find(RecordKey{setting, a, b});
  return it == index_.end() ? nullptr : &records_[it->second];
}

const CountRecord& CoincidenceTable::at(const std::string& setting, int a, int b) const {
  const CountRecord* r = find(setting, a, b);
  if (!r) {
    throw ValidationError("missing record (" + setting + "," + std::to_string(a) + "," + std::to_string(b) + ")");
  }
  return *r;
}

bool CoincidenceTable::has_setting(const std::string& setting) const { return setting_first_.count(setting) > 0; }

std::vector<std::string> CoincidenceTable::settings() const {
  std::vector<std::pair<std::size_t, std::string>> order;
  order.reserve(setting_first_.size());
  for (const auto& [name, pos] : setting_first_) order.emplace_back(pos, name);
  std::sort(order.begin(), order.end());
  std::vector<std::string> out;
  out.reserve(order.size());
  for (auto& [pos, name] : order) out.push_back(std::move(name));
  return out;
}

void CountingParams::validate() const {
  if (trials < 1) throw ValidationError("counting.trials_per_setting: must be >= 1");
  auto unit = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(std::string("counting.") + name + ": must lie in [0,1]");
  };
  unit(P_S, "P_S");
  unit(eta_r, "eta_r");
  unit(P_bg_idler, "P_bg_idler");
}

std::vector<CellMeans> expected_setting(const DensityOperator& rho, const MeasurementBasis& basis_s,
                                        const MeasurementBasis& basis_i, const CountingParams& params) {
  params.validate();
  if (basis_s.dim() != rho.dim_signal() || basis_i.dim() != rho.dim_idler()) {
    throw ValidationError("simulate_setting: basis dimension does not match state");
  }
  const std::size_t ns = basis_s.size();
  const std::size_t ni = basis_i.size();
  std::vector<double> ms(ns), mi(ni), bg(ni);
  for (std::size_t a = 0; a < ns; ++a) ms[a] = signal_marginal(rho, basis_s[a].vector);
  for (std::size_t b = 0; b < ni; ++b) {
    mi[b] = idler_marginal(rho, basis_i[b].vector);
    bg[b] = basis_i[b].vector.squaredNorm() / static_cast<double>(basis_i.dim());
  }
  const double n = static_cast<double>(params.trials);
  std::vector<CellMeans> out(ns * ni);
  double total = 0.0;
  for (std::size_t a = 0; a < ns; ++a) {
    for (std::size_t b = 0; b < ni; ++b) {
      const double p = joint_probability(rho, basis_s[a].vector, basis_i[b].vector);
      total += p;
      const double p_idler = params.eta_r * params.P_S * mi[b] + params.P_bg_idler * bg[b];
      if (p_idler > 1.0) throw ValidationError("simulate_setting: idler detection probability exceeds 1");
      CellMeans& c = out[a * ni + b];
      c.true_coincidences = n * params.P_S * params.eta_r * p;
      c.accidentals = n * params.P_S * ms[a] * p_idler;
      c.singles_s = n * params.P_S * ms[a];
      c.singles_i = n * p_idler;
    }
  }
  if (total > 1.0 + 1e-9) throw ValidationError("simulate_setting: outcome probabilities sum above 1");
  return out;
}

std::vector<CountRecord> simulate_setting(const DensityOperator& rho, const MeasurementBasis& basis_s,
                                          const MeasurementBasis& basis_i, const CountingParams& params,
                                          std::uint64_t seed, const std::string& setting_name) {
  const std::vector<CellMeans> means = expected_setting(rho, basis_s, basis_i, params);
  const std::size_t ni = basis_i.size();
  std::vector<CountRecord> out;
  out.reserve(means.size());
  for (std::size_t a = 0; a < basis_s.size(); ++a) {
    for (std::size_t b = 0; b < ni; ++b) {
      const CellMeans& m = means[a * ni + b];
      CountRecord r;
      r.setting = setting_name;
      r.outcome_s = basis_s[a].label;
      r.outcome_i = basis_i[b].label;
      r.trials = params.trials;
      const std::string key = setting_name + "|" + std::to_string(r.outcome_s) + "|" + std::to_string(r.outcome_i);
      auto gc = stream_for(seed, key + "|c");
      auto gs = stream_for(seed, key + "|s");
      auto gi = stream_for(seed, key + "|i");
      r.singles_s = std::min(draw_poisson(gs, m.singles_s), r.trials);
      r.singles_i = std::min(draw_poisson(gi, m.singles_i), r.trials);
      r.coincidences = std::min({draw_poisson(gc, m.true_coincidences + m.accidentals), r.singles_s, r.singles_i});
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<CountRecord> simulate_plan(const DensityOperator& rho, const std::vector<SettingSpec>& plan,
                                       const CountingParams& params, std::uint64_t seed, unsigned workers) {
  std::vector<std::vector<CountRecord>> parts(plan.size());
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(plan.size())));
  auto run = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < plan.size(); i += step) {
      parts[i] = simulate_setting(rho, plan[i].basis_s, plan[i].basis_i, params, seed, plan[i].name);
    }
  };
  if (workers <= 1) {
    run(0, 1);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            run(w, workers);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  std::vector<CountRecord> out;
  for (auto& p : parts) out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  return out;
}

CorrectedCount subtract_accidentals(const CountRecord& r) {
  if (r.trials <= 0) throw ValidationError("subtract_accidentals: N must be positive");
  const double cs = static_cast<double>(r.singles_s);
  const double ci = static_cast<double>(r.singles_i);
  const double acc = cs * ci / static_cast<double>(r.trials);
  double var = static_cast<double>(r.coincidences);
  if (cs > 0.0 && ci > 0.0) var += acc * acc * (1.0 / cs + 1.0 / ci);
  return {static_cast<double>(r.coincidences) - acc, std::sqrt(var)};
}

CorrectedCount raw_coincidences(const CountRecord& r) {
  const double c = static_cast<double>(r.coincidences);
  return {c, std::sqrt(c)};
}

CoincidenceTable merge_tables(const CoincidenceTable& a, const CoincidenceTable& b) {
  CoincidenceTable out({}, a.metadata());
  for (const CountRecord& ra : a.records()) {
    CountRecord m = ra;
    if (const CountRecord* rb = b.find(ra.setting, ra.outcome_s, ra.outcome_i)) {
      m.coincidences += rb->coincidences;
      m.singles_s += rb->singles_s;
      m.singles_i += rb->singles_i;
      m.trials += rb->trials;
    }
    out.add(std::move(m));
  }
  for (const CountRecord& rb : b.records()) {
    if (!a.find(rb.setting, rb.outcome_s, rb.outcome_i)) out.add(rb);
  }
  return out;
}

CoincidenceTable select_settings(const CoincidenceTable& t, const std::function<bool(const std::string&)>& keep) {
  CoincidenceTable out({}, t.metadata());
  for (const CountRecord& r : t.records())
    if (keep(r.setting)) out.add(r);
  return out;
}

// Streams are keyed by record, so resampling a subset reproduces the same
// replicate values for the records it keeps.
CoincidenceTable bootstrap_resample(const CoincidenceTable& t, std::uint64_t seed, unsigned replicate) {
  CoincidenceTable out({}, t.metadata());
  const std::string prefix = "bootstrap|" + std::to_string(replicate) + "|";
  for (const CountRecord& r : t.records()) {
    auto g = stream_for(seed, prefix + r.setting + "|" + std::to_string(r.outcome_s) + "|" + std::to_string(r.outcome_i));
    CountRecord b = r;
    b.singles_s = std::min(draw_poisson(g, static_cast<double>(r.singles_s)), r.trials);
    b.singles_i = std::min(draw_poisson(g, static_cast<double>(r.singles_i)), r.trials);
    b.coincidences = std::min({draw_poisson(g, static_cast<double>(r.coincidences)), b.singles_s, b.singles_i});
    out.add(std::move(b));
  }
  return out;
}

std::string table_to_csv(const CoincidenceTable& table) {
  std::string out = kCountsHeader;
  out += '\n';
  for (const CountRecord& r : table.records()) {
    out += r.setting;
    for (std::int64_t v : {std::int64_t{r.outcome_s}, std::int64_t{r.outcome_i}, r.coincidences, r.singles_s,
                           r.singles_i, r.trials}) {
      out += ',';
      out += std::to_string(v);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::int64_t parse_int(std::string_view field, std::size_t line, const char* column) {
  std::int64_t v = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || field.empty()) {
    throw ValidationError("counts line " + std::to_string(line) + ": column '" + column + "' is not an integer");
  }
  return v;
}

}  // namespace

CoincidenceTable table_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ValidationError("counts: empty file");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCountsHeader) {
    throw ValidationError(std::string("counts line 1: header must be exactly '") + kCountsHeader + "'");
  }
  static constexpr const char* kColumns[] = {"setting", "outcome_s", "outcome_i", "coincidences",
                                             "singles_s", "singles_i", "trials"};
  CoincidenceTable table;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    while (true) {
      auto pos = rest.find(',');
      fields.push_back(rest.substr(0, pos));
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }
    if (fields.size() != 7) {
      throw ValidationError("counts line " + std::to_string(lineno) + ": expected 7 columns, got " +
                            std::to_string(fields.size()));
    }
    CountRecord r;
    r.setting = std::string(fields[0]);
    const auto oa = parse_int(fields[1], lineno, kColumns[1]);
    const auto ob = parse_int(fields[2], lineno, kColumns[2]);
    r.outcome_s = static_cast<int>(oa);
    r.outcome_i = static_cast<int>(ob);
    r.coincidences = parse_int(fields[3], lineno, kColumns[3]);
    r.singles_s = parse_int(fields[4], lineno, kColumns[4]);
    r.singles_i = parse_int(fields[5], lineno, kColumns[5]);
    r.trials = parse_int(fields[6], lineno, kColumns[6]);
    try {
      table.add(std::move(r));
    } catch (const ValidationError& e) {
      throw ValidationError("counts line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return table;
}

void save_table(const CoincidenceTable& table, const std::string& csv_path) {
  std::ofstream out(csv_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + csv_path + "' for writing");
  out << table_to_csv(table);
  if (!out) throw IoError("write failed for '" + csv_path + "'");
}

CoincidenceTable load_table(const std::string& csv_path) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + csv_path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return table_from_csv(ss.str());
}

void save_metadata(const TableMetadata& m, const std::string& json_path) {
  json j = {{"schema_version", 1},
            {"seed", m.seed},
            {"P_S", m.P_S},
            {"eta_r", m.eta_r},
            {"P_bg_idler", m.P_bg_idler},
            {"noise_fraction", m.noise_fraction},
            {"residual_noise_fraction", m.residual_noise_fraction},
            {"repetition_rate_hz", m.repetition_rate_hz},
            {"D", m.D}};
  if (!m.manifest_hash.empty()) j["manifest_hash"] = m.manifest_hash;
  std::ofstream out(json_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + json_path + "' for writing");
  out << j.dump(2) << '\n';
}

TableMetadata load_metadata(const std::string& json_path) {
  std::ifstream in(json_path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + json_path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("metadata: " + std::string(e.what()));
  }
  TableMetadata m;
  try {
    m.seed = j.at("seed").get<std::uint64_t>();
    m.P_S = j.at("P_S").get<double>();
    m.eta_r = j.at("eta_r").get<double>();
    m.noise_fraction = j.at("noise_fraction").get<double>();
    m.repetition_rate_hz = j.at("repetition_rate_hz").get<double>();
    m.D = j.at("D").get<std::size_t>();
    m.P_bg_idler = j.value("P_bg_idler", 0.0);
    m.residual_noise_fraction = j.value("residual_noise_fraction", m.noise_fraction);
    m.manifest_hash = j.value("manifest_hash", std::string());
  } catch (const json::exception& e) {
    throw ValidationError("metadata: " + std::string(e.what()));
  }
  if (!(m.P_S >= 0.0 && m.P_S <= 1.0)) throw ValidationError("metadata.P_S: must lie in [0,1]");
  if (!(m.repetition_rate_hz >= 0.0)) throw ValidationError("metadata.repetition_rate_hz: must be >= 0");
  return m;
}

}  // namespace qcert
