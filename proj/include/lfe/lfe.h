/*
 * Copyright 2026 The lfe Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the labeling-function engine.
 *
 * Every operation returns an lfe_result, never NULL, holding a status code,
 * the text meant for standard output and the text meant for standard error.
 * Results and projects are owned by the caller and released with the
 * matching _free function. Strings returned by accessors live as long as
 * their result.
 *
 * The status codes double as process exit codes.
 */

#ifndef LFE_LFE_H_
#define LFE_LFE_H_

#include <stdint.h>

#if defined(_WIN32)
#define LFE_API __declspec(dllexport)
#else
#define LFE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum {
  LFE_OK = 0,
  LFE_USER_ERROR = 2,        /* bad input: ruleset, config values, requests */
  LFE_ENVIRONMENT_ERROR = 3, /* missing files, I/O failures, busy ports */
  LFE_INTERNAL_ERROR = 4
};

typedef struct lfe_project lfe_project;
typedef struct lfe_result lfe_result;

typedef struct lfe_open_options {
  int workers;      /* 0 keeps the configured worker count */
  int has_seed;     /* nonzero replaces the configured split seed */
  uint64_t seed;
  int service_env;  /* nonzero applies LF_CORPUS_DIR and LF_JOURNAL_PATH */
} lfe_open_options;

LFE_API const char* lfe_version(void);

LFE_API int lfe_result_status(const lfe_result* r);
LFE_API const char* lfe_result_output(const lfe_result* r);
LFE_API const char* lfe_result_errors(const lfe_result* r);
LFE_API void lfe_result_free(lfe_result* r);

/* Loads the config, corpus, schema and rulesets. On failure *out is NULL.
 * `options` may be NULL. */
LFE_API lfe_result* lfe_project_open(const char* config_path, const lfe_open_options* options,
                                     lfe_project** out);
LFE_API void lfe_project_free(lfe_project* p);

/* Each command renders JSON when `json` is nonzero and text otherwise. */

/* Per-document ingestion summary. */
LFE_API lfe_result* lfe_ingest(lfe_project* p, int json);
/* Ruleset diagnostics; LFE_USER_ERROR when any is an error. */
LFE_API lfe_result* lfe_check(lfe_project* p, int json);
/* Runs the saved ruleset and writes labels.jsonl and resolved.jsonl to the
 * output directory. */
LFE_API lfe_result* lfe_run(lfe_project* p, int json);
/* Train-bucket coverage per concept. */
LFE_API lfe_result* lfe_stats(lfe_project* p, int json);
/* Per-concept conflict rates of the raw LF votes. */
LFE_API lfe_result* lfe_conflict(lfe_project* p, int json);
/* Computes the split from the effective seed and writes the manifest. */
LFE_API lfe_result* lfe_split(lfe_project* p, int json);
/* Scores LF predictions against gold. `bucket` is "dev", "test" or NULL; NULL
 * means both in text mode and "test" in JSON mode. */
LFE_API lfe_result* lfe_eval(lfe_project* p, const char* bucket, int json);
/* Writes train-bucket training data. `format` is "spans" or "bio"; NULL
 * `out_path` picks train.jsonl or train.bio in the output directory. */
LFE_API lfe_result* lfe_export(lfe_project* p, const char* format, const char* out_path,
                               int json);

/* Serves the HTTP API until the process ends. `port` < 0 uses LF_PORT or the
 * default port. `on_ready`, when given, is called once the socket is bound. */
typedef void (*lfe_ready_fn)(int port, void* user);
LFE_API lfe_result* lfe_serve(lfe_project* p, const char* host, int port, lfe_ready_fn on_ready,
                              void* user);

/* Synthetic throughput benchmark; needs no project. */
LFE_API lfe_result* lfe_bench(uint64_t tokens, int workers, uint64_t seed, int json);

#ifdef __cplusplus
}
#endif

#endif /* LFE_LFE_H_ */
