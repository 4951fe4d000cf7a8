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

#ifndef QCERT_QCERT_H_
#define QCERT_QCERT_H_

/* C interface to the qcert toolkit.  Objects are opaque handles; every call
 * returns a status code and, on failure, leaves a message retrievable with
 * qcert_last_error() on the calling thread.  Strings handed out through
 * `char**` parameters belong to the caller and are released with
 * qcert_free_string(). */

#include <stddef.h>
#include <stdint.h>

#if defined(QCERT_BUILDING_LIBRARY)
#define QCERT_API __attribute__((visibility("default")))
#else
#define QCERT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qcert_status {
  QCERT_OK = 0,
  QCERT_ERR_ARGUMENT = 1,
  QCERT_ERR_VALIDATION = 2,
  QCERT_ERR_COMPUTATION = 3,
  QCERT_ERR_IO = 4
} qcert_status;

typedef struct qcert_config qcert_config;
typedef struct qcert_table qcert_table;

QCERT_API const char* qcert_version(void);
QCERT_API const char* qcert_last_error(void);
QCERT_API void qcert_free_string(char* s);

/* configuration */
QCERT_API qcert_status qcert_config_default(qcert_config** out);
QCERT_API qcert_status qcert_config_load(const char* path, qcert_config** out);
QCERT_API qcert_status qcert_config_parse(const char* json_text, qcert_config** out);
QCERT_API qcert_status qcert_config_set_number(qcert_config* cfg, const char* dotted_key, double value);
QCERT_API qcert_status qcert_config_to_json(const qcert_config* cfg, char** out);
QCERT_API qcert_status qcert_config_seed(const qcert_config* cfg, uint64_t* out);
QCERT_API qcert_status qcert_config_modes(const qcert_config* cfg, size_t* out);
QCERT_API void qcert_config_free(qcert_config* cfg);

/* count tables */
QCERT_API qcert_status qcert_simulate(const qcert_config* cfg, uint64_t seed, unsigned workers, qcert_table** out);
/* metadata_path may be NULL */
QCERT_API qcert_status qcert_table_load(const char* csv_path, const char* metadata_path, qcert_table** out);
QCERT_API qcert_status qcert_table_save(const qcert_table* t, const char* csv_path, const char* metadata_path,
                                        const char* manifest_hash);
QCERT_API qcert_status qcert_table_to_csv(const qcert_table* t, char** out);
QCERT_API size_t qcert_table_size(const qcert_table* t);
QCERT_API size_t qcert_table_modes(const qcert_table* t); /* D from metadata, 0 if unknown */
QCERT_API void qcert_table_free(qcert_table* t);

typedef struct qcert_options {
  char space;            /* 'X' or 'K' */
  int subtract;          /* accidental subtraction on count tables */
  double margin;         /* sigma multiplier for certification decisions */
  unsigned bootstrap;    /* bootstrap replicates for E_F and fidelity errors */
  uint64_t seed;         /* bootstrap seed, echoed in provenance */
  const char* input_hash;
  const char* manifest_hash;
  const char* generated_at; /* NULL omits the timestamp field */
} qcert_options;

QCERT_API void qcert_options_init(qcert_options* opts);

/* certification report JSON */
QCERT_API qcert_status qcert_certify_table(const qcert_table* t, size_t D, const qcert_options* opts, char** out);
QCERT_API qcert_status qcert_certify_exact(const qcert_config* cfg, const qcert_options* opts, char** out);

/* CSV with header curve,d,S,S_err,violated */
QCERT_API qcert_status qcert_bell_table(const qcert_table* t, size_t d_min, size_t d_max, int subtract, double margin,
                                        char** out);
QCERT_API qcert_status qcert_bell_exact(const qcert_config* cfg, size_t d_min, size_t d_max, char** out);

/* tomography JSON; the table variant reports both raw and subtracted reconstructions */
QCERT_API qcert_status qcert_tomo_table(const qcert_table* t, size_t j, size_t k, const qcert_options* opts, char** out);
QCERT_API qcert_status qcert_tomo_exact(const qcert_config* cfg, size_t j, size_t k, const qcert_options* opts,
                                        char** out);

/* exact-path sweep of one numeric config field; CSV output */
QCERT_API qcert_status qcert_sweep(const qcert_config* cfg, const char* dotted_key, const double* grid, size_t n,
                                   char** out);

QCERT_API qcert_status qcert_witness_bound(size_t D, size_t d, long long* out);
QCERT_API qcert_status qcert_bases_json(size_t D, char** out);
QCERT_API qcert_status qcert_hash_file(const char* path, char** out);
QCERT_API qcert_status qcert_hash_bytes(const char* data, size_t n, char** out);

#ifdef __cplusplus
}
#endif

#endif /* QCERT_QCERT_H_ */
