/* Copyright 2026 The markmt Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef MARKMT_MARKMT_H_
#define MARKMT_MARKMT_H_

/* C interface of the markmt shared library.
 *
 * Every function returns a markmt_status. On failure a message is available
 * from markmt_last_error() on the calling thread until the next call.
 * Strings returned through char** out-parameters are owned by the caller and
 * released with markmt_string_free(). Inputs are UTF-8; JSON arguments are
 * objects whose fields are documented per function. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define MARKMT_API __declspec(dllexport)
#else
#define MARKMT_API __attribute__((visibility("default")))
#endif

typedef enum markmt_status {
  MARKMT_OK = 0,
  MARKMT_E_INVALID_ARGUMENT = 1,
  MARKMT_E_MALFORMED_MARKUP = 2,
  MARKMT_E_DECODE = 3,
  MARKMT_E_NESTING_UNSUPPORTED = 4,
  MARKMT_E_LOCATION_STALE = 5,
  MARKMT_E_SPAN_CONFLICT = 6,
  MARKMT_E_EMPTY_CORPUS = 7,
  MARKMT_E_DIMENSION_MISMATCH = 8,
  MARKMT_E_INDEX_OUT_OF_BOUNDS = 9,
  MARKMT_E_UNSUPPORTED_PAIR = 10,
  MARKMT_E_BACKEND_UNAVAILABLE = 11,
  MARKMT_E_TIMEOUT = 12,
  MARKMT_E_AUTH = 13,
  MARKMT_E_PROTOCOL = 14,
  MARKMT_E_EMPTY_INPUT = 15,
  MARKMT_E_TOO_FEW_SAMPLES = 16,
  MARKMT_E_SCHEMA = 17,
  MARKMT_E_MISSING_HYPOTHESES = 18,
  MARKMT_E_INSUFFICIENT_SYSTEMS = 19,
  MARKMT_E_UNKNOWN_TASK = 20,
  MARKMT_E_UNKNOWN_LABEL = 21,
  MARKMT_E_IO = 22,
  MARKMT_E_INTERNAL = 23
} markmt_status;

MARKMT_API const char *markmt_version(void);
MARKMT_API const char *markmt_status_name(markmt_status status);
/* Message of the last failed call on this thread; "" after success. */
MARKMT_API const char *markmt_last_error(void);
MARKMT_API void markmt_string_free(char *s);

/* ---- Document translation ------------------------------------------------ */

typedef struct markmt_pipeline markmt_pipeline;

/* config_json: {"backend": "identity" | {"kind", "dictionary",
 * "remote_config", "pairs": ["cs-uk"]}, "policy", "forward_lexicon",
 * "reverse_lexicon", "glossaries": [paths]}. All fields optional; relative
 * paths resolve against the working directory. */
MARKMT_API markmt_status markmt_pipeline_create(const char *config_json, markmt_pipeline **out);
MARKMT_API void markmt_pipeline_free(markmt_pipeline *pipeline);

/* request_json: {"format": "html"|"xml"|"text", "content", "source_lang",
 * "target_lang", "domain"?, "glossary"?}. response_json receives
 * {"content", "segments", "term_findings", "backend"}; warnings_jsonl (may be
 * NULL) one projection warning per line. */
MARKMT_API markmt_status markmt_pipeline_translate(markmt_pipeline *pipeline,
                                                   const char *request_json,
                                                   char **response_json, char **warnings_jsonl);

/* ---- chrF ------------------------------------------------------------------ */

/* Corpus chrF of n line pairs with a bootstrap interval (resamples >= 1 and
 * n >= 2, else MARKMT_E_TOO_FEW_SAMPLES; resamples 0 skips it). report_json receives the score report plus "ci_low",
 * "ci_high" and "rendered" ("NN.N ± D.D"). */
MARKMT_API markmt_status markmt_chrf(const char *const *hypotheses,
                                     const char *const *references, size_t n,
                                     int resamples, uint64_t seed, char **report_json);

/* ---- Word alignment -------------------------------------------------------- */

typedef struct markmt_lexicon markmt_lexicon;

/* Trains IBM Model 1 on a `src<TAB>tgt` corpus and writes t(tgt|src) to
 * out_path; with reverse != 0 the inverse direction is trained instead.
 * log_json (may be NULL) receives {"log_likelihood": [...], "pairs": n}. */
MARKMT_API markmt_status markmt_train_model1(const char *corpus_path, int iterations,
                                             int reverse, const char *out_path,
                                             char **log_json);
MARKMT_API markmt_status markmt_lexicon_load(const char *path, markmt_lexicon **out);
MARKMT_API void markmt_lexicon_free(markmt_lexicon *lexicon);
/* Viterbi alignment of one sentence pair as Pharaoh "i-j" pairs. */
MARKMT_API markmt_status markmt_align(const markmt_lexicon *lexicon, const char *src,
                                      const char *tgt, char **pharaoh);

/* ---- Evaluation ------------------------------------------------------------ */

/* request_json: {"evalset", "runs": [paths], "split": "dev"|"test", "seed",
 * "resamples", "scores"?, "key"?}. report_json receives {"split_counts",
 * "systems": [...], "human"?}; table_text (may be NULL) a plain-text table. */
MARKMT_API markmt_status markmt_evaluate(const char *request_json, char **report_json,
                                         char **table_text);

/* request_json: {"evalset", "runs": [paths], "annotators": [ids], "split"?,
 * "seed", "limit"?, "redundancy"?, "tasks_out", "key_out"}. summary_json
 * receives {"tasks", "loads": {annotator: n}}. */
MARKMT_API markmt_status markmt_annotation_make_batch(const char *request_json,
                                                      char **summary_json);

/* request_json: {"scores", "key", "errors"?}. report_json receives the
 * per-system summaries, per-annotator means and, with "errors", the error
 * counts; table_text (may be NULL) a plain-text table. */
MARKMT_API markmt_status markmt_annotation_aggregate(const char *request_json,
                                                     char **report_json, char **table_text);

/* ---- HTTP service ---------------------------------------------------------- */

typedef struct markmt_service markmt_service;

/* config_path may be NULL for defaults. overrides_json (may be NULL):
 * {"port"?, "host"?, "backend"?}. */
MARKMT_API markmt_status markmt_service_create(const char *config_path,
                                               const char *overrides_json,
                                               markmt_service **out);
/* Binds the socket and stores the port in *port. */
MARKMT_API markmt_status markmt_service_bind(markmt_service *service, int *port);
/* Blocks until markmt_service_stop() is called from another thread. */
MARKMT_API markmt_status markmt_service_run(markmt_service *service);
MARKMT_API void markmt_service_stop(markmt_service *service);
MARKMT_API void markmt_service_free(markmt_service *service);

#ifdef __cplusplus
}
#endif

#endif /* MARKMT_MARKMT_H_ */
