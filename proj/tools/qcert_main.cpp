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

// qcert command-line front end.  All work goes through the C interface.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcert/qcert.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitComputation = 3;

// Carries a C status out of nested helpers.
struct Failure : std::runtime_error {
  qcert_status status;
  Failure(qcert_status s, const std::string& msg) : std::runtime_error(msg), status(s) {}
};

void check(qcert_status s) {
  if (s != QCERT_OK) throw Failure(s, qcert_last_error());
}

int exit_code(qcert_status s) { return s == QCERT_ERR_COMPUTATION ? kExitComputation : kExitValidation; }

struct CString {
  char* p = nullptr;
  ~CString() { qcert_free_string(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

using ConfigPtr = std::unique_ptr<qcert_config, decltype(&qcert_config_free)>;
using TablePtr = std::unique_ptr<qcert_table, decltype(&qcert_table_free)>;

ConfigPtr load_config(const std::string& path) {
  qcert_config* c = nullptr;
  check(path.empty() ? qcert_config_default(&c) : qcert_config_load(path.c_str(), &c));
  return ConfigPtr(c, qcert_config_free);
}

TablePtr load_counts(const std::string& csv, std::string metadata) {
  if (metadata.empty()) {
    const fs::path sidecar = fs::path(csv).parent_path() / "metadata.json";
    if (fs::exists(sidecar)) metadata = sidecar.string();
  }
  qcert_table* t = nullptr;
  check(qcert_table_load(csv.c_str(), metadata.empty() ? nullptr : metadata.c_str(), &t));
  return TablePtr(t, qcert_table_free);
}

std::string hash_file(const std::string& path) {
  CString h;
  check(qcert_hash_file(path.c_str(), &h.p));
  return h.str();
}

std::string hash_bytes(const std::string& s) {
  CString h;
  check(qcert_hash_bytes(s.data(), s.size(), &h.p));
  return h.str();
}

void write_file(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure(QCERT_ERR_IO, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Failure(QCERT_ERR_IO, "write failed for '" + path + "'");
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    write_file(out_path, text);
  }
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, const qcert_config* cfg) {
  if (flag) return *flag;
  if (const char* env = std::getenv("QCERT_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw Failure(QCERT_ERR_VALIDATION, std::string("QCERT_SEED is not an unsigned integer: '") + env + "'");
  }
  std::uint64_t s = 1;
  if (cfg) check(qcert_config_seed(cfg, &s));
  return s;
}

// The manifest records what a run consumed and produced.  Paths are stored
// by file name so relocating a run directory does not change the hash.
struct Manifest {
  json doc;

  explicit Manifest(const std::string& command) {
    doc = {{"schema_version", 1}, {"command", command}, {"version", qcert_version()},
           {"inputs", json::array()}, {"outputs", json::array()}, {"options", json::object()}};
  }
  void input(const std::string& role, const std::string& path) {
    if (path.empty()) return;
    doc["inputs"].push_back({{"role", role}, {"name", fs::path(path).filename().string()}, {"hash", hash_file(path)}});
  }
  void output(const std::string& path) {
    doc["outputs"].push_back(path.empty() || path == "-" ? std::string("-") : fs::path(path).filename().string());
  }
  std::string text() const { return doc.dump(2) + "\n"; }
  std::string hash() const { return hash_bytes(text()); }
  void write_beside(const std::string& out_path) const {
    if (out_path.empty() || out_path == "-") return;
    write_file(out_path + ".manifest.json", text());
  }
};

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> out;
  const auto colon = std::count(spec.begin(), spec.end(), ':');
  if (colon == 2) {
    const auto a = spec.find(':');
    const auto b = spec.find(':', a + 1);
    const double start = std::stod(spec.substr(0, a));
    const double stop = std::stod(spec.substr(a + 1, b - a - 1));
    const double step = std::stod(spec.substr(b + 1));
    if (!(step > 0.0) || stop < start) throw Failure(QCERT_ERR_VALIDATION, "--grid start:stop:step needs step > 0");
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  if (out.empty()) throw Failure(QCERT_ERR_VALIDATION, "--grid is empty");
  return out;
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& spec) {
  const auto dots = spec.find("..");
  if (dots == std::string::npos) {
    const auto v = static_cast<std::size_t>(std::stoul(spec));
    return {v, v};
  }
  return {static_cast<std::size_t>(std::stoul(spec.substr(0, dots))),
          static_cast<std::size_t>(std::stoul(spec.substr(dots + 2)))};
}

std::pair<std::size_t, std::size_t> parse_pair(const std::string& spec) {
  const auto comma = spec.find(',');
  if (comma == std::string::npos) throw Failure(QCERT_ERR_VALIDATION, "--pair expects j,k");
  return {static_cast<std::size_t>(std::stoul(spec.substr(0, comma))),
          static_cast<std::size_t>(std::stoul(spec.substr(comma + 1)))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcert: high-dimensional entanglement certification toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(qcert_version()));

  unsigned workers = 1;
  std::optional<std::uint64_t> seed_flag;
  bool no_timestamp = false;
  app.add_option("--workers,-j", workers, "Worker threads for simulation")->check(CLI::Range(1u, 256u));
  app.add_option("--seed", seed_flag, "Master seed (default: $QCERT_SEED, then the config seed)");
  app.add_flag("--no-timestamp", no_timestamp, "Omit the generated_at field from reports");

  std::string config_path;
  std::string counts_path;
  std::string metadata_path;
  std::string out_path;
  std::string space = "X";
  bool subtract = false;
  bool exact = false;
  double margin = 1.0;
  unsigned bootstrap = 200;
  std::size_t modes = 0;

  auto* sim = app.add_subcommand("simulate", "Simulate count tables for every configured setting");
  sim->add_option("--config,-c", config_path, "Run configuration JSON (default: built-in)");
  sim->add_option("--out,-o", out_path, "Output directory")->required();

  auto* cert = app.add_subcommand("certify", "Dimension witness, E_F bound and CGLMP report");
  cert->add_option("--counts", counts_path, "Counts CSV");
  cert->add_option("--metadata", metadata_path, "Metadata JSON (default: metadata.json next to the counts)");
  cert->add_option("--config,-c", config_path, "Run configuration JSON for --exact");
  cert->add_flag("--exact", exact, "Use exact probabilities from the configured source");
  cert->add_option("--space", space, "Measurement space")->check(CLI::IsMember({"X", "K"}));
  cert->add_flag("--subtract-accidentals", subtract, "Apply accidental subtraction");
  cert->add_option("--margin", margin, "Sigma margin for certification")->check(CLI::NonNegativeNumber);
  cert->add_option("--bootstrap", bootstrap, "Bootstrap replicates for E_F errors");
  cert->add_option("--modes,-D", modes, "Number of modes (default: from metadata)");
  cert->add_option("--out,-o", out_path, "Report path (default: stdout)");

  std::string d_range = "2..10";
  auto* bell = app.add_subcommand("bell", "CGLMP violation table");
  bell->add_option("--counts", counts_path, "Counts CSV");
  bell->add_option("--metadata", metadata_path, "Metadata JSON");
  bell->add_option("--config,-c", config_path, "Run configuration JSON for --exact");
  bell->add_flag("--exact", exact, "Use exact probabilities at the configured Bell noise level");
  bell->add_option("--d-range", d_range, "Dimensions, e.g. 2..10");
  bell->add_flag("--subtract-accidentals", subtract, "Also emit the accidental-subtracted curve");
  bell->add_option("--margin", margin, "Sigma margin for the violation flag")->check(CLI::NonNegativeNumber);
  bell->add_option("--out,-o", out_path, "CSV path (default: stdout)");

  std::string pair_spec = "0,1";
  auto* tomo = app.add_subcommand("tomo", "Two-qubit subspace tomography");
  tomo->add_option("--counts", counts_path, "Counts CSV");
  tomo->add_option("--metadata", metadata_path, "Metadata JSON");
  tomo->add_option("--config,-c", config_path, "Run configuration JSON for --exact");
  tomo->add_flag("--exact", exact, "Use exact probabilities (noise fitted to tomography.fit_fidelity if set)");
  tomo->add_option("--pair", pair_spec, "Mode pair j,k");
  tomo->add_option("--space", space, "Measurement space")->check(CLI::IsMember({"X", "K"}));
  tomo->add_option("--bootstrap", bootstrap, "Bootstrap replicates for the fidelity error");
  tomo->add_option("--out,-o", out_path, "Report path (default: stdout)");

  std::string param;
  std::string grid;
  auto* sweep = app.add_subcommand("sweep", "Exact-path sweep of one numeric config field");
  sweep->add_option("--config,-c", config_path, "Run configuration JSON (default: built-in)");
  sweep->add_option("--param", param, "Dotted config key, e.g. source.noise_fraction")->required();
  sweep->add_option("--grid", grid, "Comma list or start:stop:step")->required();
  sweep->add_option("--out,-o", out_path, "CSV path (default: stdout)");

  std::size_t bases_modes = 10;
  auto* bases = app.add_subcommand("bases", "Export measurement bases and RF tone programs");
  bases->add_option("--modes,-D", bases_modes, "Number of modes");
  bases->add_option("--out,-o", out_path, "JSON path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    const std::optional<std::string> stamp = no_timestamp ? std::nullopt : std::optional<std::string>(utc_now());

    auto need_source = [&](const char* cmd) {
      if (exact == !counts_path.empty()) {
        throw Failure(QCERT_ERR_VALIDATION, std::string(cmd) + ": give exactly one of --counts or --exact");
      }
    };

    if (sim->parsed()) {
      ConfigPtr cfg = load_config(config_path);
      const std::uint64_t seed = resolve_seed(seed_flag, cfg.get());
      qcert_table* raw = nullptr;
      check(qcert_simulate(cfg.get(), seed, workers, &raw));
      TablePtr table(raw, qcert_table_free);
      CString cfg_json;
      check(qcert_config_to_json(cfg.get(), &cfg_json.p));

      Manifest m("simulate");
      m.doc["seed"] = seed;
      m.doc["config"] = {{"name", config_path.empty() ? std::string("<built-in>") : fs::path(config_path).filename().string()},
                         {"hash", hash_bytes(cfg_json.str())}};
      m.output("counts.csv");
      m.output("metadata.json");
      const fs::path dir(out_path);
      std::error_code ec;
      fs::create_directories(dir, ec);
      write_file((dir / "manifest.json").string(), m.text());
      const std::string mh = m.hash();
      check(qcert_table_save(table.get(), (dir / "counts.csv").string().c_str(), (dir / "metadata.json").string().c_str(),
                             mh.c_str()));
      std::cerr << "wrote " << qcert_table_size(table.get()) << " records to " << (dir / "counts.csv").string() << "\n";
      return kExitOk;
    }

    if (bases->parsed()) {
      CString out;
      check(qcert_bases_json(bases_modes, &out.p));
      emit(out_path, out.str());
      return kExitOk;
    }

    if (sweep->parsed()) {
      ConfigPtr cfg = load_config(config_path);
      const std::vector<double> values = parse_grid(grid);
      CString out;
      check(qcert_sweep(cfg.get(), param.c_str(), values.data(), values.size(), &out.p));
      Manifest m("sweep");
      m.input("config", config_path);
      m.doc["options"] = {{"param", param}, {"grid", values}};
      m.output(out_path);
      m.write_beside(out_path);
      emit(out_path, out.str());
      return kExitOk;
    }

    qcert_options opts;
    qcert_options_init(&opts);
    opts.space = space.at(0);
    opts.subtract = subtract ? 1 : 0;
    opts.margin = margin;
    opts.bootstrap = bootstrap;

    auto finish_manifest = [&](Manifest& m, std::uint64_t seed) {
      m.input("counts", counts_path);
      if (!counts_path.empty()) {
        const fs::path sidecar = metadata_path.empty() ? fs::path(counts_path).parent_path() / "metadata.json"
                                                       : fs::path(metadata_path);
        if (fs::exists(sidecar)) m.input("metadata", sidecar.string());
      }
      m.input("config", config_path);
      m.doc["seed"] = seed;
      m.output(out_path);
    };

    if (cert->parsed()) {
      need_source("certify");
      Manifest m("certify");
      m.doc["options"] = {{"space", space}, {"subtract_accidentals", subtract}, {"margin", margin},
                          {"bootstrap", bootstrap}, {"exact", exact}};
      CString out;
      if (exact) {
        ConfigPtr cfg = load_config(config_path);
        const std::uint64_t seed = resolve_seed(seed_flag, cfg.get());
        finish_manifest(m, seed);
        const std::string mh = m.hash();
        std::string ih = config_path.empty() ? std::string() : hash_file(config_path);
        opts.seed = seed;
        opts.input_hash = ih.c_str();
        opts.manifest_hash = mh.c_str();
        opts.generated_at = stamp ? stamp->c_str() : nullptr;
        check(qcert_certify_exact(cfg.get(), &opts, &out.p));
      } else {
        TablePtr table = load_counts(counts_path, metadata_path);
        const std::uint64_t seed = resolve_seed(seed_flag, nullptr);
        finish_manifest(m, seed);
        const std::string mh = m.hash();
        const std::string ih = hash_file(counts_path);
        opts.seed = seed;
        opts.input_hash = ih.c_str();
        opts.manifest_hash = mh.c_str();
        opts.generated_at = stamp ? stamp->c_str() : nullptr;
        check(qcert_certify_table(table.get(), modes, &opts, &out.p));
      }
      m.write_beside(out_path);
      emit(out_path, out.str());
      return kExitOk;
    }

    if (bell->parsed()) {
      need_source("bell");
      const auto [dmin, dmax] = parse_range(d_range);
      Manifest m("bell");
      m.doc["options"] = {{"d_range", d_range}, {"subtract_accidentals", subtract}, {"margin", margin}, {"exact", exact}};
      std::string csv;
      if (exact) {
        ConfigPtr cfg = load_config(config_path);
        finish_manifest(m, resolve_seed(seed_flag, cfg.get()));
        CString out;
        check(qcert_bell_exact(cfg.get(), dmin, dmax, &out.p));
        csv = out.str();
      } else {
        TablePtr table = load_counts(counts_path, metadata_path);
        finish_manifest(m, resolve_seed(seed_flag, nullptr));
        CString raw;
        check(qcert_bell_table(table.get(), dmin, dmax, 0, margin, &raw.p));
        csv = raw.str();
        if (subtract) {
          CString sub;
          check(qcert_bell_table(table.get(), dmin, dmax, 1, margin, &sub.p));
          const std::string s = sub.str();
          csv += s.substr(s.find('\n') + 1);  // drop the repeated header
        }
      }
      m.write_beside(out_path);
      emit(out_path, csv);
      return kExitOk;
    }

    if (tomo->parsed()) {
      need_source("tomo");
      const auto [j, k] = parse_pair(pair_spec);
      Manifest m("tomo");
      m.doc["options"] = {{"pair", pair_spec}, {"space", space}, {"bootstrap", bootstrap}, {"exact", exact}};
      CString out;
      ConfigPtr cfg(nullptr, qcert_config_free);
      if (exact) cfg = load_config(config_path);
      const std::uint64_t seed = resolve_seed(seed_flag, exact ? cfg.get() : nullptr);
      finish_manifest(m, seed);
      const std::string mh = m.hash();
      const std::string ih = exact ? (config_path.empty() ? std::string() : hash_file(config_path)) : hash_file(counts_path);
      opts.seed = seed;
      opts.input_hash = ih.c_str();
      opts.manifest_hash = mh.c_str();
      opts.generated_at = stamp ? stamp->c_str() : nullptr;
      if (exact) {
        check(qcert_tomo_exact(cfg.get(), j, k, &opts, &out.p));
      } else {
        TablePtr table = load_counts(counts_path, metadata_path);
        check(qcert_tomo_table(table.get(), j, k, &opts, &out.p));
      }
      m.write_beside(out_path);
      emit(out_path, out.str());
      return kExitOk;
    }
  } catch (const Failure& f) {
    std::cerr << "qcert: error: " << f.what() << "\n";
    return exit_code(f.status);
  } catch (const std::invalid_argument& e) {
    std::cerr << "qcert: error: malformed numeric argument (" << e.what() << ")\n";
    return kExitValidation;
  } catch (const std::out_of_range& e) {
    std::cerr << "qcert: error: numeric argument out of range (" << e.what() << ")\n";
    return kExitValidation;
  }
  return kExitOk;
}
