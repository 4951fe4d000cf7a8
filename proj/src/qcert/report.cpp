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

#include "qcert/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qcert/error.hpp"
#include "qcert/rng.hpp"
#include "qcert/settings.hpp"

#ifndef QCERT_VERSION_STRING
#define QCERT_VERSION_STRING "0.0.0"
#endif

namespace qcert {

using nlohmann::json;

namespace {

json complex_matrix(const CMatrix& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json rr = json::array();
    json ii = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"re", re}, {"im", im}};
}

json complex_vector(const CVector& v) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return {{"re", re}, {"im", im}};
}

json basis_json(const std::string& setting, const MeasurementBasis& b) {
  json outs = json::array();
  for (const Projector& p : b.outcomes()) {
    json tones = json::array();
    for (const RfTone& t : rf_tone_program(p).tones) {
      tones.push_back({{"frequency_mhz", t.frequency_mhz}, {"amplitude", t.amplitude}, {"phase_rad", t.phase}});
    }
    json o = complex_vector(p.vector);
    o["label"] = p.label;
    o["rf_tones"] = tones;
    outs.push_back(o);
  }
  return {{"setting", setting}, {"basis", b.name()}, {"side", b.side() == Side::Signal ? "signal" : "idler"},
          {"outcomes", outs}};
}

}  // namespace

std::string toolkit_version() { return QCERT_VERSION_STRING; }

std::string content_hash(const std::string& bytes) { return hex64(fnv1a64(bytes)); }

std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return content_hash(ss.str());
}

json provenance_json(const Provenance& p) {
  json j{{"input_hash", p.input_hash}, {"seed", p.seed}, {"manifest_hash", p.manifest_hash},
         {"version", toolkit_version()}};
  if (p.generated_at) j["generated_at"] = *p.generated_at;
  return j;
}

json witness_json(const WitnessResult& w) {
  json f = json::array();
  for (std::size_t d = 1; d <= w.D; ++d) f.push_back({{"d", d}, {"f", witness_bound(w.D, d)}});
  json pairs = json::array();
  for (const auto& [pair, v] : w.per_pair) {
    pairs.push_back({{"j", pair.first},
                     {"k", pair.second},
                     {"V_x", v[0].value},
                     {"V_x_err", v[0].error},
                     {"V_y", v[1].value},
                     {"V_y_err", v[1].error},
                     {"V_z", v[2].value},
                     {"V_z_err", v[2].error},
                     {"flagged", v[0].flagged || v[1].flagged || v[2].flagged}});
  }
  return {{"space", std::string(1, to_char(w.space))},
          {"D", w.D},
          {"W", w.W},
          {"W_err", w.W_err},
          {"margin", w.margin},
          {"f_table", f},
          {"certified_dimension", w.certified_dimension},
          {"flagged_cells", w.flagged_cells},
          {"per_pair", pairs}};
}

json eof_json(const EofResult& e, double margin) {
  json curve = json::array();
  for (const auto& c : e.curve) curve.push_back({{"modes", c.modes}, {"B", c.B}, {"E_F", c.E_F}});
  json terms = json::array();
  for (const auto& t : e.terms) {
    terms.push_back({{"j", t.j}, {"k", t.k}, {"coherence", t.coherence}, {"cross", t.cross}});
  }
  return {{"B", e.B},
          {"E_F_lower", e.E_F_lower},
          {"E_F_err", e.E_F_err},
          {"pair_count", e.pairs.size()},
          {"certified_dimension", eof_certified_dimension(e.E_F_lower, e.E_F_err, margin)},
          {"best", {{"modes", e.best_modes},
                    {"E_F", e.best_E_F},
                    {"E_F_err", e.best_E_F_err},
                    {"certified_dimension", eof_certified_dimension(e.best_E_F, e.best_E_F_err, margin)}}},
          {"eof_curve", curve},
          {"terms", terms}};
}

json violation_json(const std::vector<ViolationRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"curve", r.curve}, {"d", r.d}, {"S", r.S}, {"S_err", r.S_err}, {"violated", r.violated}});
  }
  return out;
}

json certification_report(const WitnessResult& w, const EofResult& e, const std::vector<ViolationRow>& cglmp,
                          bool subtracted, const Provenance& p) {
  json j = witness_json(w);
  j["schema_version"] = kReportSchemaVersion;
  j["kind"] = "certification";
  j["subtracted"] = subtracted;
  const json ej = eof_json(e, w.margin);
  j["B"] = ej["B"];
  j["E_F_lower"] = ej["E_F_lower"];
  j["E_F_err"] = ej["E_F_err"];
  j["eof"] = ej;
  j["eof_curve"] = ej["eof_curve"];
  j["cglmp"] = violation_json(cglmp);
  j["provenance"] = provenance_json(p);
  return j;
}

json tomo_json(const TomoResult& t) {
  return {{"j", t.j},
          {"k", t.k},
          {"space", std::string(1, to_char(t.space))},
          {"subtracted", t.subtracted},
          {"fidelity", t.fidelity},
          {"fidelity_err", t.fidelity_err},
          {"relative_phase_deg", t.relative_phase_deg},
          {"postselection_weight", t.postselection_weight},
          {"clipped_weight", t.clipped_weight},
          {"basis_order", {"jj", "jk", "kj", "kk"}},
          {"rho_hat", complex_matrix(t.rho_hat)},
          {"rho_linear", complex_matrix(t.rho_linear)}};
}

json tomo_report(const std::vector<TomoResult>& variants, const Provenance& p) {
  json list = json::array();
  for (const auto& t : variants) list.push_back(tomo_json(t));
  return {{"schema_version", kReportSchemaVersion}, {"kind", "tomography"}, {"results", list},
          {"provenance", provenance_json(p)}};
}

std::string violation_csv(const std::vector<ViolationRow>& rows) {
  std::string out = "curve,d,S,S_err,violated\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%zu,%.10f,%.10f,%d\n", r.curve.c_str(), r.d, r.S, r.S_err, r.violated ? 1 : 0);
    out += buf;
  }
  return out;
}

json bases_json(std::size_t D, std::size_t d_min, std::size_t d_max) {
  json settings = json::array();
  for (const SettingSpec& s : witness_plan(Space::X, D)) {
    settings.push_back({{"name", s.name}, {"signal", basis_json(s.name, s.basis_s)}, {"idler", basis_json(s.name, s.basis_i)}});
  }
  for (const SettingSpec& s : witness_plan(Space::K, D)) {
    settings.push_back({{"name", s.name}, {"signal", basis_json(s.name, s.basis_s)}, {"idler", basis_json(s.name, s.basis_i)}});
  }
  for (Space sp : {Space::X, Space::K}) {
    const SettingSpec s = full_basis_setting(sp, D);
    settings.push_back({{"name", s.name}, {"signal", basis_json(s.name, s.basis_s)}, {"idler", basis_json(s.name, s.basis_i)}});
  }
  for (std::size_t d = d_min; d <= d_max; ++d) {
    for (const SettingSpec& s : cglmp_plan(d, D)) {
      settings.push_back({{"name", s.name}, {"signal", basis_json(s.name, s.basis_s)}, {"idler", basis_json(s.name, s.basis_i)}});
    }
  }
  return {{"schema_version", kReportSchemaVersion},
          {"kind", "bases"},
          {"D", D},
          {"tone_spacing_mhz", kToneSpacingMHz},
          {"settings", settings}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace qcert
