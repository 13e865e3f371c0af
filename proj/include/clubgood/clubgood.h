//------------------------------------------------------------------------------
//
//   Copyright 2026 The clubgood Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#ifndef CLUBGOOD_CLUBGOOD_H
#define CLUBGOOD_CLUBGOOD_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define CG_API __declspec(dllexport)
#else
#define CG_API __attribute__((visibility("default")))
#endif

typedef enum cg_status
{
  CG_OK                 = 0,
  CG_ERR_INTERNAL       = 1,
  CG_ERR_CONFIG         = 2,
  CG_ERR_PRECONDITION   = 3,
  CG_ERR_VERIFICATION   = 4,
  CG_ERR_NUMERICAL      = 5,
  CG_ERR_INVALID_ARGUMENT = 6
} cg_status;

typedef struct cg_economy cg_economy;

/* Library version string, static storage. */
CG_API const char *cg_version(void);

/* Message of the last failed call on this thread; empty if none. */
CG_API const char *cg_last_error(void);

/* Human-readable summary of the last successful cg_run on this thread. */
CG_API const char *cg_last_summary(void);

/* Builds an economy from the JSON economy block used in run configs. */
CG_API cg_status cg_economy_from_json(const char *json, cg_economy **out);
CG_API void      cg_economy_free(cg_economy *economy);
CG_API int       cg_economy_buyers(const cg_economy *economy);

CG_API cg_status cg_virtual_value(const cg_economy *economy, double theta, int set_size,
                                  double *out);

/* Optimal allocation and ex-post transfers for one type profile of length n.
   consume and transfers must hold n entries; any output pointer may be NULL. */
CG_API cg_status cg_solve(const cg_economy *economy, const double *profile, size_t n, int *consume,
                          int *set_size, double *profit, double *transfers);

/* Interim allocation by set size (q_by_k holds n entries) and payment of buyer 0
   at own type theta, by exact quadrature; two-buyer economies only. */
CG_API cg_status cg_interim(const cg_economy *economy, double theta, double *q_by_k, double *payment);

/* Runs a config file (or a manifest of a previous run) and writes artifacts to
   out_dir. threads >= 1. When has_seed is nonzero, seed replaces the config seed.
   Returns CG_OK, CG_ERR_CONFIG, CG_ERR_PRECONDITION, CG_ERR_VERIFICATION or
   CG_ERR_INTERNAL. */
CG_API cg_status cg_run(const char *config_path, const char *out_dir, int threads, int has_seed,
                        uint64_t seed);

/* Runs the acceptance criteria listed in ids (all nine when count is 0) and
   writes one line per criterion to *report, to be released with cg_string_free.
   Returns CG_ERR_VERIFICATION if any criterion fails. */
CG_API cg_status cg_verify_all(uint64_t seed, int threads, const int *ids, size_t count, char **report);

CG_API void cg_string_free(char *text);

#ifdef __cplusplus
}
#endif

#endif
