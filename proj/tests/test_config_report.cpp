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
#include <fstream>
#include <set>

#include "qcert/certify.hpp"
#include "qcert/config.hpp"
#include "qcert/error.hpp"
#include "qcert/report.hpp"
#include "qcert/settings.hpp"

using namespace qcert;
using nlohmann::json;

namespace {

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("config json round trip") {
  const RunConfig c = default_config();
  const json j = config_to_json(c);
  const RunConfig back = config_from_json(j);
  CHECK(config_to_json(back) == j);
  CHECK(back.seed == 20260101u);
  CHECK(back.fit_witness_W.has_value());
  CHECK(*back.fit_witness_W == 111.6);
  REQUIRE(back.tomography.pairs.size() == 1);
  CHECK(back.tomography.pairs[0] == ModePair{0, 5});
}

TEST_CASE("shipped default config matches the built-in default") {
  const RunConfig file = load_config(std::string(QCERT_SOURCE_DIR) + "/configs/default.json");
  CHECK(config_to_json(file) == config_to_json(default_config()));
}

TEST_CASE("config validation names the offending field") {
  CHECK(message_of(R"({"sourc": {}})").find("unknown key 'sourc'") != std::string::npos);
  CHECK(message_of(R"({"source": {"D": 4, "noise": 0.1}})").find("source.noise") != std::string::npos);
  CHECK(message_of(R"({"counting": {"P_S": "x"}})").find("counting.P_S") != std::string::npos);
  CHECK(message_of(R"({"counting": {"P_S": 1.5}})").find("P_S") != std::string::npos);
  CHECK(message_of(R"({"source": {"D": 4, "phases_deg": [0, 1]}})").find("phases_deg") != std::string::npos);
  CHECK(message_of(R"({"schema_version": 7})").find("schema_version") != std::string::npos);
  CHECK(message_of(R"({"tomography": {"pairs": [[3, 3]]}})").find("tomography.pairs") != std::string::npos);
  CHECK(message_of("{not json").find("malformed") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/cfg.json"), IoError);
}

TEST_CASE("set_config_number") {
  RunConfig c = default_config();
  set_config_number(c, "counting.P_S", 0.01);
  CHECK(c.counting.P_S == 0.01);
  set_config_number(c, "counting.trials_per_setting", 1000);
  CHECK(c.counting.trials_per_setting == 1000);
  CHECK_THROWS_AS(set_config_number(c, "counting.trials_per_setting", 10.5), ValidationError);
  CHECK(c.fit_witness_W.has_value());
  set_config_number(c, "source.noise_fraction", 0.2);
  CHECK(!c.fit_witness_W.has_value());
  CHECK(resolved_source(c).noise_fraction == 0.2);
  set_config_number(c, "seed", 9);
  CHECK(c.seed == 9u);
  CHECK_THROWS_AS(set_config_number(c, "nosuch.field", 1), ValidationError);
  CHECK_THROWS_AS(set_config_number(c, "counting.nosuch", 1), ValidationError);
  CHECK_THROWS_AS(set_config_number(c, "counting.eta_r", 2.0), ValidationError);
}

TEST_CASE("witness fit resolves the noise fraction") {
  const SourceConfig s = resolved_source(default_config());
  CHECK(witness(noisy_state(s), Space::X).W == doctest::Approx(111.6).epsilon(1e-4));
}

TEST_CASE("noise split between state and accidentals") {
  CHECK(accidental_ratio(0.5, 0.1) == doctest::Approx(0.8));
  CHECK(accidental_ratio(0.05, 0.1) == 0.0);
  CHECK(accidental_ratio(1.0, 0.1) == 0.0);

  SourceConfig total = SourceConfig::uniform(6);
  total.noise_fraction = 0.4;
  const SamplingModel m = sampling_model(total, 1000, 0.006, 0.1, 0.1, std::nullopt);
  CHECK(m.state.noise_fraction == doctest::Approx(0.1));
  CHECK(m.params.P_bg_idler == doctest::Approx(0.1 * (0.3 / 0.6 - 0.006)));
  const SamplingModel fixed = sampling_model(total, 1000, 0.006, 0.1, 0.1, 0.002);
  CHECK(fixed.params.P_bg_idler == 0.002);
  total.noise_fraction = 0.05;
  CHECK(sampling_model(total, 1000, 0.006, 0.1, 0.1, std::nullopt).state.noise_fraction == doctest::Approx(0.05));

  // raw expected statistics of the split model reproduce the total noise level
  total.noise_fraction = 0.4;
  const SamplingModel big = sampling_model(total, 1000000000000LL, 0.006, 0.1, 0.1, std::nullopt);
  const DensityOperator residual = noisy_state(big.state);
  const DensityOperator full = noisy_state(total);
  for (const SettingSpec& s : witness_plan(Space::X, 6)) {
    const auto cells = expected_setting(residual, s.basis_s, s.basis_i, big.params);
    double tot = 0.0;
    for (const auto& c : cells) tot += c.true_coincidences + c.accidentals;
    std::size_t n = 0;
    for (std::size_t a = 0; a < s.basis_s.size(); ++a)
      for (std::size_t b = 0; b < s.basis_i.size(); ++b, ++n) {
        double ptot = 0.0;
        for (std::size_t a2 = 0; a2 < s.basis_s.size(); ++a2)
          for (std::size_t b2 = 0; b2 < s.basis_i.size(); ++b2)
            ptot += joint_probability(full, s.basis_s[a2], s.basis_i[b2]);
        const double want = joint_probability(full, s.basis_s[a], s.basis_i[b]) / ptot;
        CHECK((cells[n].true_coincidences + cells[n].accidentals) / tot == doctest::Approx(want).epsilon(1e-9));
      }
  }
}

TEST_CASE("simulation plan covers the configured settings") {
  RunConfig c = default_config();
  const auto plan = simulation_plan(c);
  std::set<std::string> names;
  for (const auto& s : plan) CHECK(names.insert(s.name).second);
  CHECK(names.count(pair_setting_name(Space::X, 0, 5, Axis::X, Axis::Y)) == 1);
  CHECK(names.count(pair_setting_name(Space::K, 3, 7, Axis::Z, Axis::Z)) == 1);
  CHECK(names.count(full_setting_name(Space::X)) == 0);
}

TEST_CASE("small simulate_config is deterministic and labeled") {
  RunConfig c = default_config();
  c.source = SourceConfig::uniform(3);
  c.fit_witness_W.reset();
  c.source.noise_fraction = 0.3;
  c.counting.trials_per_setting = 20000;
  c.counting.full_basis_trials = 40000;
  c.bell.trials_per_setting = 20000;
  c.bell.d_max = 3;
  c.tomography.pairs = {{0, 2}};
  c.validate();
  const CoincidenceTable a = simulate_config(c, 5, 1);
  const CoincidenceTable b = simulate_config(c, 5, 3);
  CHECK(a == b);
  CHECK(a.metadata().seed == 5u);
  CHECK(a.metadata().D == 3u);
  CHECK(a.has_setting(full_setting_name(Space::K)));
  CHECK(a.has_setting(bell_setting_name(3, 1, 0)));
  CHECK(a.at(full_setting_name(Space::X), 0, 0).trials == 40000);
  CHECK(!(a == simulate_config(c, 6, 1)));
}

TEST_CASE("content hash") {
  CHECK(content_hash("") == "cbf29ce484222325");
  CHECK(content_hash("a") == "af63dc4c8601ec8c");
  CHECK(content_hash("foobar") == "85944171f73967e8");
  CHECK_THROWS_AS(file_hash("/nonexistent/file"), IoError);
}

TEST_CASE("certification report fields") {
  const DensityOperator rho = noisy_state(SourceConfig::uniform(4));
  const WitnessResult w = witness(rho, Space::X);
  const EofResult e = eof_bound(rho, all_pairs(4));
  const auto rows = violation_curve_exact(SourceConfig::uniform(4), 2, 4);
  const json r = certification_report(w, e, rows, false, Provenance{"abc", 7, "def", std::nullopt});
  for (const char* k : {"schema_version", "kind", "W", "W_err", "certified_dimension", "f_table", "per_pair", "B",
                        "E_F_lower", "E_F_err", "eof", "eof_curve", "cglmp", "provenance"})
    CHECK_MESSAGE(r.contains(k), k);
  CHECK(r["W"].get<double>() == doctest::Approx(18.0));
  CHECK(r["certified_dimension"] == 4);
  CHECK(r["provenance"]["input_hash"] == "abc");
  CHECK(r["provenance"]["manifest_hash"] == "def");
  CHECK(r["provenance"]["seed"] == 7);
  CHECK(!r["provenance"].contains("generated_at"));
  const json t = provenance_json(Provenance{"x", 1, "y", std::string("2026-01-01T00:00:00Z")});
  CHECK(t["generated_at"] == "2026-01-01T00:00:00Z");
  CHECK(t["version"] == toolkit_version());
}

TEST_CASE("violation csv") {
  const auto rows = violation_curve_exact(SourceConfig::uniform(3), 2, 3);
  const std::string csv = violation_csv(rows);
  CHECK(csv.rfind("curve,d,S,S_err,violated\n", 0) == 0);
  CHECK(csv.find("exact,2,2.82842712") != std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("tomography report") {
  const TomoResult r = tomo_exact(noisy_state(SourceConfig::uniform(3)), 0, 2);
  const json j = tomo_report({r}, Provenance{"a", 1, "b", std::nullopt});
  CHECK(j.dump().find("rho_hat") != std::string::npos);
  CHECK(j.dump().find("fidelity") != std::string::npos);
}

TEST_CASE("bases export") {
  const json j = bases_json(4, 2, 3);
  CHECK(j.dump().find("X/0-1/xx") != std::string::npos);
  CHECK(j.dump().find("bell/d3/S1I1") != std::string::npos);
  CHECK(j.dump().find("rf_tones") != std::string::npos);
}
