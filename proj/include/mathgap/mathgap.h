#ifndef MATHGAP_MATHGAP_H
#define MATHGAP_MATHGAP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MG_API __declspec(dllexport)
#else
#define MG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mg_status {
  MG_OK = 0,
  MG_ERR_INVALID_ARGUMENT = 1,
  MG_ERR_PARSE = 2,
  MG_ERR_SCHEMA = 3,
  MG_ERR_OVERFLOW = 4,
  MG_ERR_LABEL_MISMATCH = 5,
  MG_ERR_GENERATION = 6,
  MG_ERR_VOCABULARY = 7,
  MG_ERR_MISSING_TEMPLATE = 8,
  MG_ERR_ORACLE_MISMATCH = 9,
  MG_ERR_IO = 10,
  MG_ERR_TRANSPORT = 11,
  MG_ERR_INTERNAL = 12
} mg_status;

MG_API const char* mg_status_string(mg_status status);

/* Message for the most recent failure on the calling thread. */
MG_API const char* mg_last_error(void);

MG_API const char* mg_version(void);

/* Strings returned through char** outputs are owned by the caller. */
MG_API void mg_string_free(char* s);

typedef struct mg_generator mg_generator;

/*
 * config_json may be NULL or "{}" for built-in word lists and templates.
 * Keys (all optional): "agents", "extended_agents", "entities", "attributes",
 * "units", "hypernyms", "templates" (file paths), "quantity_min",
 * "quantity_max".
 */
MG_API mg_status mg_generator_create(const char* config_json, mg_generator** out);
MG_API void mg_generator_destroy(mg_generator* generator);

/*
 * spec_json: {"family": "...", "complexity": N, "seed": S} with optional
 * "rules": ["comp-add", ...]. Writes one dataset record as JSON.
 */
MG_API mg_status mg_generator_problem(const mg_generator* generator, const char* spec_json,
                                      char** out_json);

/*
 * spec_json: {"family", "complexity", "n", "seed"[, "rules"]}. Writes JSONL to
 * out_path only after every problem has passed the linear-system check.
 */
MG_API mg_status mg_generate_dataset(const mg_generator* generator, const char* spec_json,
                                     const char* out_path);

MG_API mg_status mg_dataset_stats(const char* path, char** out_json);

/* Report JSON: {"n", "passed", "failures": [{"line", "id", "reason"}]}. */
MG_API mg_status mg_verify_dataset(const char* path, char** out_json);

/* policy: "canonical", "move-to-front:K" or "permutation:i,j,...". */
MG_API mg_status mg_permute_dataset(const char* in_path, const char* policy, const char* out_path);

/*
 * config_json keys: "dataset" (required), "model" (required), "regime",
 * "shots", "range_min", "range_max", "seed", "base_url", "api_key_env",
 * "timeout_seconds", "concurrency", "max_tokens", "retries", "backoff_ms",
 * "resamples", "records" and "timing" (output paths). Writes metrics JSON.
 */
MG_API mg_status mg_eval(const mg_generator* generator, const char* config_json,
                         char** out_metrics_json);

/* *out_found is 0 when the text holds no integer. */
MG_API mg_status mg_extract_answer(const char* text, int64_t* out_value, int* out_found);

MG_API mg_status mg_bootstrap_ci(const unsigned char* flags, size_t n, size_t resamples,
                                 double level, uint64_t seed, double* out_accuracy,
                                 double* out_low, double* out_high);

/* comparison_root: 0 for a container root, nonzero for a comparison root. */
MG_API mg_status mg_expected_nonlinear_width(size_t depth, int comparison_root, int64_t* out);

/*
 * world_model_json: {"body": ["container(agent=A, quantity=5, entity=apple)", ...],
 * "question": "..."}. Result: {"status": "answer"|"underdetermined"|"inconsistent",
 * "answer": N|null}.
 */
MG_API mg_status mg_solve_world_model(const char* world_model_json, char** out_json);

#ifdef __cplusplus
}
#endif

#endif
