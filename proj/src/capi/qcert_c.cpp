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

#include "qcert/qcert.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <stdexcept>
#include <string>

#include "qcert/certify.hpp"
#include "qcert/config.hpp"
#include "qcert/counting.hpp"
#include "qcert/error.hpp"
#include "qcert/report.hpp"
#include "qcert/settings.hpp"
#include "qcert/tomo.hpp"

struct qcert_config {
  qcert::RunConfig cfg;
};

struct qcert_table {
  qcert::CoincidenceTable table;
};

namespace {

thread_local std::string g_last_error;

// Misuse of the interface itself (null handles, empty inputs).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

qcert_status fail(qcert_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <typename F>
qcert_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return QCERT_OK;
  } catch (const ArgumentError& e) {
    return fail(QCERT_ERR_ARGUMENT, e.what());
  } catch (const qcert::ValidationError& e) {
    return fail(QCERT_ERR_VALIDATION, e.what());
  } catch (const qcert::ComputationError& e) {
    return fail(QCERT_ERR_COMPUTATION, e.what());
  } catch (const qcert::IoError& e) {
    return fail(QCERT_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(QCERT_ERR_COMPUTATION, "out of memory");
  } catch (const std::exception& e) {
    return fail(QCERT_ERR_COMPUTATION, e.what());
  }
}

char* copy_out(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void need(const void* p, const char* what) {
  if (!p) throw ArgumentError(std::string("null argument: ") + what);
}

qcert::Space space_of(const qcert_options& o) { return qcert::parse_space(std::string(1, o.space)); }

qcert::Provenance provenance_of(const qcert_options& o) {
  qcert::Provenance p;
  p.seed = o.seed;
  if (o.input_hash) p.input_hash = o.input_hash;
  if (o.manifest_hash) p.manifest_hash = o.manifest_hash;
  if (o.generated_at) p.generated_at = std::string(o.generated_at);
  return p;
}

qcert_options options_or_default(const qcert_options* opts) {
  qcert_options o;
  qcert_options_init(&o);
  return opts ? *opts : o;
}

std::vector<qcert::ViolationRow> table_cglmp_rows(const qcert::CoincidenceTable& t, bool subtract, double margin) {
  std::vector<qcert::ViolationRow> rows;
  for (std::size_t d = 2; d <= 10; ++d) {
    bool all = true;
    for (int s = 0; s < 2; ++s)
      for (int i = 0; i < 2; ++i) all = all && t.has_setting(qcert::bell_setting_name(d, s, i));
    if (!all) continue;
    const auto r = qcert::violation_curve_table(t, d, d, subtract, margin);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  return rows;
}

}  // namespace

extern "C" {

const char* qcert_version(void) {
  static const std::string v = qcert::toolkit_version();
  return v.c_str();
}

const char* qcert_last_error(void) { return g_last_error.c_str(); }

void qcert_free_string(char* s) { std::free(s); }

qcert_status qcert_config_default(qcert_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = new qcert_config{qcert::default_config()};
  });
}

qcert_status qcert_config_load(const char* path, qcert_config** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new qcert_config{qcert::load_config(path)};
  });
}

qcert_status qcert_config_parse(const char* json_text, qcert_config** out) {
  return guarded([&] {
    need(json_text, "json_text");
    need(out, "out");
    *out = new qcert_config{qcert::parse_config(json_text)};
  });
}

qcert_status qcert_config_set_number(qcert_config* cfg, const char* key, double value) {
  return guarded([&] {
    need(cfg, "cfg");
    need(key, "key");
    qcert::set_config_number(cfg->cfg, key, value);
  });
}

qcert_status qcert_config_to_json(const qcert_config* cfg, char** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    *out = copy_out(qcert::dump(qcert::config_to_json(cfg->cfg)));
  });
}

qcert_status qcert_config_seed(const qcert_config* cfg, uint64_t* out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    *out = cfg->cfg.seed;
  });
}

qcert_status qcert_config_modes(const qcert_config* cfg, size_t* out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    *out = cfg->cfg.source.modes;
  });
}

void qcert_config_free(qcert_config* cfg) { delete cfg; }

qcert_status qcert_simulate(const qcert_config* cfg, uint64_t seed, unsigned workers, qcert_table** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    *out = new qcert_table{qcert::simulate_config(cfg->cfg, seed, workers == 0 ? 1 : workers)};
  });
}

qcert_status qcert_table_load(const char* csv_path, const char* metadata_path, qcert_table** out) {
  return guarded([&] {
    need(csv_path, "csv_path");
    need(out, "out");
    qcert::CoincidenceTable t = qcert::load_table(csv_path);
    if (metadata_path) t.metadata() = qcert::load_metadata(metadata_path);
    *out = new qcert_table{std::move(t)};
  });
}

qcert_status qcert_table_save(const qcert_table* t, const char* csv_path, const char* metadata_path,
                              const char* manifest_hash) {
  return guarded([&] {
    need(t, "table");
    need(csv_path, "csv_path");
    qcert::save_table(t->table, csv_path);
    if (metadata_path) {
      qcert::TableMetadata meta = t->table.metadata();
      if (manifest_hash) meta.manifest_hash = manifest_hash;
      qcert::save_metadata(meta, metadata_path);
    }
  });
}

qcert_status qcert_table_to_csv(const qcert_table* t, char** out) {
  return guarded([&] {
    need(t, "table");
    need(out, "out");
    *out = copy_out(qcert::table_to_csv(t->table));
  });
}

size_t qcert_table_size(const qcert_table* t) { return t ? t->table.size() : 0; }

size_t qcert_table_modes(const qcert_table* t) { return t ? t->table.metadata().D : 0; }

void qcert_table_free(qcert_table* t) { delete t; }

void qcert_options_init(qcert_options* o) {
  if (!o) return;
  o->space = 'X';
  o->subtract = 0;
  o->margin = 1.0;
  o->bootstrap = 200;
  o->seed = 0;
  o->input_hash = nullptr;
  o->manifest_hash = nullptr;
  o->generated_at = nullptr;
}

qcert_status qcert_certify_table(const qcert_table* t, size_t D, const qcert_options* opts, char** out) {
  return guarded([&] {
    need(t, "table");
    need(out, "out");
    const qcert_options o = options_or_default(opts);
    if (D == 0) D = t->table.metadata().D;
    if (D < 2) throw qcert::ValidationError("certify: number of modes unknown; pass D or a metadata file");
    const qcert::Space sp = space_of(o);
    const bool sub = o.subtract != 0;
    const auto w = qcert::witness(t->table, sp, D, sub, o.margin);
    const auto e = qcert::eof_bound(t->table, sp, D, qcert::all_pairs(D), sub, o.bootstrap, o.seed);
    const auto rows = table_cglmp_rows(t->table, sub, o.margin);
    *out = copy_out(qcert::dump(qcert::certification_report(w, e, rows, sub, provenance_of(o))));
  });
}

qcert_status qcert_certify_exact(const qcert_config* cfg, const qcert_options* opts, char** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    const qcert_options o = options_or_default(opts);
    const qcert::SourceConfig src = qcert::resolved_source(cfg->cfg);
    const qcert::DensityOperator rho = qcert::noisy_state(src);
    const qcert::Space sp = space_of(o);
    const auto w = qcert::witness(rho, sp, o.margin);
    const auto e = qcert::eof_bound(rho, qcert::all_pairs(src.modes), sp);
    const auto rows = qcert::violation_curve_exact(src, 2, std::min<std::size_t>(10, src.modes));
    *out = copy_out(qcert::dump(qcert::certification_report(w, e, rows, false, provenance_of(o))));
  });
}

qcert_status qcert_bell_table(const qcert_table* t, size_t d_min, size_t d_max, int subtract, double margin, char** out) {
  return guarded([&] {
    need(t, "table");
    need(out, "out");
    *out = copy_out(qcert::violation_csv(qcert::violation_curve_table(t->table, d_min, d_max, subtract != 0, margin)));
  });
}

qcert_status qcert_bell_exact(const qcert_config* cfg, size_t d_min, size_t d_max, char** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    qcert::SourceConfig src = cfg->cfg.source;
    src.noise_fraction = cfg->cfg.bell.noise_fraction;
    *out = copy_out(qcert::violation_csv(qcert::violation_curve_exact(src, d_min, d_max)));
  });
}

qcert_status qcert_tomo_table(const qcert_table* t, size_t j, size_t k, const qcert_options* opts, char** out) {
  return guarded([&] {
    need(t, "table");
    need(out, "out");
    const qcert_options o = options_or_default(opts);
    const qcert::Space sp = space_of(o);
    std::vector<qcert::TomoResult> v;
    v.push_back(qcert::tomo_from_table(t->table, j, k, sp, false, o.bootstrap, o.seed));
    v.push_back(qcert::tomo_from_table(t->table, j, k, sp, true, o.bootstrap, o.seed));
    *out = copy_out(qcert::dump(qcert::tomo_report(v, provenance_of(o))));
  });
}

qcert_status qcert_tomo_exact(const qcert_config* cfg, size_t j, size_t k, const qcert_options* opts, char** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    const qcert_options o = options_or_default(opts);
    qcert::SourceConfig src = qcert::resolved_source(cfg->cfg);
    if (cfg->cfg.tomography.fit_fidelity) {
      src.noise_fraction = qcert::fit_noise_to_pair_fidelity(*cfg->cfg.tomography.fit_fidelity, src, j, k);
    }
    std::vector<qcert::TomoResult> v{qcert::tomo_exact(qcert::noisy_state(src), j, k, space_of(o))};
    nlohmann::json rep = qcert::tomo_report(v, provenance_of(o));
    rep["noise_fraction"] = src.noise_fraction;
    *out = copy_out(qcert::dump(rep));
  });
}

qcert_status qcert_sweep(const qcert_config* cfg, const char* key, const double* grid, size_t n, char** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(key, "key");
    need(out, "out");
    need(grid, "grid");
    if (n == 0) throw ArgumentError("sweep: empty grid");
    const std::size_t D = cfg->cfg.source.modes;
    const std::size_t dmax = std::min<std::size_t>(10, D);
    std::string csv = "param,value,noise_fraction,W_X,certified_X,W_K,certified_K,E_F_X,E_F_K,best_E_F_X,best_E_F_K";
    for (std::size_t d = 2; d <= dmax; ++d) csv += ",S_" + std::to_string(d);
    csv += "\n";
    char buf[64];
    auto num = [&](double v) {
      std::snprintf(buf, sizeof buf, ",%.10g", v);
      csv += buf;
    };
    for (size_t i = 0; i < n; ++i) {
      qcert::RunConfig c = cfg->cfg;
      qcert::set_config_number(c, key, grid[i]);
      const qcert::SourceConfig src = qcert::resolved_source(c);
      const qcert::DensityOperator rho = qcert::noisy_state(src);
      const auto wx = qcert::witness(rho, qcert::Space::X);
      const auto wk = qcert::witness(rho, qcert::Space::K);
      const auto ex = qcert::eof_bound(rho, qcert::all_pairs(D), qcert::Space::X);
      const auto ek = qcert::eof_bound(rho, qcert::all_pairs(D), qcert::Space::K);
      csv += key;
      num(grid[i]);
      num(src.noise_fraction);
      num(wx.W);
      num(wx.certified_dimension);
      num(wk.W);
      num(wk.certified_dimension);
      num(ex.E_F_lower);
      num(ek.E_F_lower);
      num(ex.best_E_F);
      num(ek.best_E_F);
      for (std::size_t d = 2; d <= dmax; ++d) num(qcert::cglmp(rho, d).S);
      csv += "\n";
    }
    *out = copy_out(csv);
  });
}

qcert_status qcert_witness_bound(size_t D, size_t d, long long* out) {
  return guarded([&] {
    need(out, "out");
    *out = qcert::witness_bound(D, d);
  });
}

qcert_status qcert_bases_json(size_t D, char** out) {
  return guarded([&] {
    need(out, "out");
    if (D < 2) throw qcert::ValidationError("bases: D must be >= 2");
    *out = copy_out(qcert::dump(qcert::bases_json(D, 2, std::min<std::size_t>(10, D))));
  });
}

qcert_status qcert_hash_file(const char* path, char** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = copy_out(qcert::file_hash(path));
  });
}

qcert_status qcert_hash_bytes(const char* data, size_t n, char** out) {
  return guarded([&] {
    need(out, "out");
    if (n > 0) need(data, "data");
    *out = copy_out(qcert::content_hash(std::string(data ? data : "", n)));
  });
}

}  // extern "C"
