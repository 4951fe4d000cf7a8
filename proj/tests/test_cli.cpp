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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qcert/qcert.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kWork = fs::current_path() / "cli_test_work";

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(QCERT_CLI_PATH) + " " + args + " >" + (kWork / "stdout.txt").string() +
                          " 2>" + (kWork / "stderr.txt").string();
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string p(const fs::path& x) { return x.string(); }

const char* kSmallConfig = R"({
  "seed": 11,
  "source": {"D": 4, "noise_fraction": 0.25},
  "counting": {"trials_per_setting": 100000, "full_basis_trials": 1000000, "P_S": 0.05, "eta_r": 0.5,
               "residual_noise_fraction": 0.05},
  "bell": {"noise_fraction": 0.25, "trials_per_setting": 100000, "d_max": 4},
  "tomography": {"pairs": [[0, 1]]},
  "certify": {"bootstrap": 10}
})";

struct Workdir {
  Workdir() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
    spit(kWork / "small.json", kSmallConfig);
  }
};

}  // namespace

TEST_CASE("usage and validation errors exit with 2") {
  Workdir w;
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("--help") == 0);
  CHECK(run("certify --exact --space Q") == 2);
  CHECK(run("certify") == 2);  // neither --counts nor --exact
  CHECK(run("certify --counts " + p(kWork / "missing.csv")) == 2);
  spit(kWork / "bad.json", R"({"source": {"D": 4, "noise_fraction": 3}})");
  CHECK(run("certify --exact -c " + p(kWork / "bad.json")) == 2);
  CHECK(slurp(kWork / "stderr.txt").find("noise_fraction") != std::string::npos);
  spit(kWork / "bad.csv", "setting,outcome_s,outcome_i,coincidences,singles_s,singles_i,trials\nX/0-1/xx,0,0,-4,1,1,1\n");
  CHECK(run("certify --counts " + p(kWork / "bad.csv") + " -D 2") == 2);
  CHECK(run("sweep --param source.noise_fraction --grid 1:0:0.1") == 2);
  CHECK(run("bell --exact --d-range 2..12") == 2);
  CHECK(run("simulate --out " + p(kWork / "x"), "QCERT_SEED=abc") == 2);
}

TEST_CASE("computation errors exit with 3") {
  Workdir w;
  // the 17 degree phase caps the pair fidelity below 0.98
  spit(kWork / "fid.json", R"({"source": {"D": 10, "phases_deg": [0,0,0,0,0,17,0,0,0,0]},
                               "tomography": {"pairs": [[0, 5]], "fit_fidelity": 0.999}})");
  CHECK(run("tomo --exact --pair 0,5 -c " + p(kWork / "fid.json")) == 3);
  CHECK(slurp(kWork / "stderr.txt").find("fidelity") != std::string::npos);
}

TEST_CASE("simulate is deterministic across worker counts") {
  Workdir w;
  const std::string cfg = p(kWork / "small.json");
  REQUIRE(run("--workers 1 simulate -c " + cfg + " --out " + p(kWork / "w1")) == 0);
  REQUIRE(run("-j 3 simulate -c " + cfg + " --out " + p(kWork / "w3")) == 0);
  for (const char* f : {"counts.csv", "metadata.json", "manifest.json"}) {
    CHECK_MESSAGE(slurp(kWork / "w1" / f) == slurp(kWork / "w3" / f), f);
    CHECK(!slurp(kWork / "w1" / f).empty());
  }
  const json meta = json::parse(slurp(kWork / "w1" / "metadata.json"));
  CHECK(meta["seed"] == 11);

  // the metadata links to the manifest by hash
  char* h = nullptr;
  const std::string manifest = slurp(kWork / "w1" / "manifest.json");
  REQUIRE(qcert_hash_bytes(manifest.data(), manifest.size(), &h) == QCERT_OK);
  CHECK(meta["manifest_hash"] == std::string(h));
  qcert_free_string(h);
}

TEST_CASE("seed precedence: flag, environment, config") {
  Workdir w;
  const std::string cfg = p(kWork / "small.json");
  REQUIRE(run("simulate -c " + cfg + " --out " + p(kWork / "env"), "QCERT_SEED=99") == 0);
  REQUIRE(run("--seed 99 simulate -c " + cfg + " --out " + p(kWork / "flag")) == 0);
  REQUIRE(run("--seed 5 simulate -c " + cfg + " --out " + p(kWork / "both"), "QCERT_SEED=99") == 0);
  REQUIRE(run("simulate -c " + cfg + " --out " + p(kWork / "cfg")) == 0);
  CHECK(slurp(kWork / "env" / "counts.csv") == slurp(kWork / "flag" / "counts.csv"));
  CHECK(json::parse(slurp(kWork / "both" / "metadata.json"))["seed"] == 5);
  CHECK(json::parse(slurp(kWork / "cfg" / "metadata.json"))["seed"] == 11);
  CHECK(slurp(kWork / "cfg" / "counts.csv") != slurp(kWork / "env" / "counts.csv"));
}

TEST_CASE("analysis commands on simulated counts") {
  Workdir w;
  REQUIRE(run("simulate -c " + p(kWork / "small.json") + " --out " + p(kWork / "run")) == 0);
  const std::string counts = p(kWork / "run" / "counts.csv");

  REQUIRE(run("--no-timestamp certify --counts " + counts + " --subtract-accidentals --out " + p(kWork / "a" / "c.json")) == 0);
  REQUIRE(run("certify --no-timestamp --counts " + counts + " --subtract-accidentals --out " + p(kWork / "b" / "c.json")) == 0);
  CHECK(slurp(kWork / "a" / "c.json") == slurp(kWork / "b" / "c.json"));
  CHECK(slurp(kWork / "a" / "c.json.manifest.json") == slurp(kWork / "b" / "c.json.manifest.json"));
  const json r = json::parse(slurp(kWork / "a" / "c.json"));
  CHECK(r["kind"] == "certification");
  CHECK(r["subtracted"] == true);
  CHECK(!r["provenance"].contains("generated_at"));
  CHECK(r["certified_dimension"].get<int>() >= 2);

  // the report's manifest hash is the hash of the manifest written beside it
  const std::string manifest = slurp(kWork / "a" / "c.json.manifest.json");
  char* h = nullptr;
  REQUIRE(qcert_hash_bytes(manifest.data(), manifest.size(), &h) == QCERT_OK);
  CHECK(r["provenance"]["manifest_hash"] == std::string(h));
  qcert_free_string(h);
  CHECK(json::parse(manifest)["inputs"].size() == 2);

  REQUIRE(run("certify --counts " + counts + " --space K") == 0);
  CHECK(json::parse(slurp(kWork / "stdout.txt"))["provenance"].contains("generated_at"));

  REQUIRE(run("bell --counts " + counts + " --d-range 2..4 --subtract-accidentals") == 0);
  const std::string csv = slurp(kWork / "stdout.txt");
  CHECK(csv.rfind("curve,d,S,S_err,violated\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  CHECK(csv.find("subtracted,4,") != std::string::npos);

  REQUIRE(run("tomo --counts " + counts + " --pair 0,1 --bootstrap 10 --no-timestamp") == 0);
  CHECK(json::parse(slurp(kWork / "stdout.txt"))["results"].size() == 2);
  CHECK(run("tomo --counts " + counts + " --pair 0,3") == 2);
}

TEST_CASE("exact-path commands") {
  Workdir w;
  REQUIRE(run("bell --exact") == 0);
  const std::string csv = slurp(kWork / "stdout.txt");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
  REQUIRE(run("tomo --exact --pair 0,5 --no-timestamp") == 0);
  const json t = json::parse(slurp(kWork / "stdout.txt"));
  CHECK(t["results"][0]["fidelity"].get<double>() == doctest::Approx(0.878).epsilon(1e-4));
  REQUIRE(run("certify --exact --no-timestamp") == 0);
  CHECK(json::parse(slurp(kWork / "stdout.txt"))["W"].get<double>() == doctest::Approx(111.6).epsilon(1e-4));
  REQUIRE(run("sweep --param source.noise_fraction --grid 0:0.2:0.1 --out " + p(kWork / "s.csv")) == 0);
  const std::string s = slurp(kWork / "s.csv");
  CHECK(std::count(s.begin(), s.end(), '\n') == 4);
  CHECK(fs::exists(kWork / "s.csv.manifest.json"));
  REQUIRE(run("bases -D 3 --out " + p(kWork / "b.json")) == 0);
  CHECK(!json::parse(slurp(kWork / "b.json")).empty());
}
