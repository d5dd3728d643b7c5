#ifndef AIA_AIA_H
#define AIA_AIA_H

/* C interface to the agent interrogation library. Every call returning
 * aia_status leaves a message for aia_last_error() on failure. Strings
 * returned through char** are owned by the caller and released with
 * aia_string_free(). */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define AIA_API __declspec(dllexport)
#else
#define AIA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as process exit codes of the command-line tool. */
typedef enum aia_status {
  AIA_OK = 0,
  AIA_ERR_INTERNAL = 1,
  AIA_ERR_INPUT = 2,
  AIA_ERR_REPAIR = 3,
  AIA_ERR_RESOURCE = 4
} aia_status;

typedef struct aia_agent aia_agent;
typedef struct aia_run aia_run;
typedef struct aia_evaluation aia_evaluation;

AIA_API const char* aia_version(void);
/* Message of the last failed call on this thread; empty if none. */
AIA_API const char* aia_last_error(void);
AIA_API void aia_string_free(char* text);

/* A simulator agent hiding the model in domain_text. */
AIA_API aia_status aia_agent_open(const char* domain_text, const char* problem_text, aia_agent** out);
AIA_API void aia_agent_close(aia_agent* agent);
AIA_API size_t aia_agent_query_count(const aia_agent* agent);
AIA_API aia_status aia_agent_transcript(const aia_agent* agent, char** out_jsonl);
/* Distinct states from seeded random walks, one JSON array of atoms per line. */
AIA_API aia_status aia_gen_states(const aia_agent* agent, size_t walk_length, size_t count, uint64_t seed,
                                  char** out_jsonl);

typedef struct aia_run_options {
  size_t plan_cap;
  size_t node_cap;
  int consolidate;
  /* Optional, may be NULL. */
  const char* truth_domain_text;   /* enables accuracy and safety accounting */
  const char* replay_transcript;   /* answer from a recorded transcript instead of the agent */
  const char* resume_checkpoint;   /* continue an interrupted run */
  size_t member_limit;             /* learned domains materialized per run */
} aia_run_options;

AIA_API void aia_run_options_init(aia_run_options* options);

/* Runs interrogation to convergence. On repair failure or a resource cap the
 * partial run is still returned through *out. */
AIA_API aia_status aia_interrogate(aia_agent* agent, const char* states_jsonl, const aia_run_options* options,
                                   aia_run** out);
AIA_API void aia_run_free(aia_run* run);

typedef struct aia_run_stats {
  size_t lattice_queries;
  size_t repair_queries;
  size_t iterations;
  size_t safety_violations;
  uint64_t models;
  size_t members;   /* learned domains available, at most member_limit */
  int converged;
} aia_run_stats;

AIA_API aia_status aia_run_get_stats(const aia_run* run, aia_run_stats* out);
/* Index 0 is the canonical member; others follow in enumeration order. */
AIA_API aia_status aia_run_learned_domain(const aia_run* run, size_t index, char** out);
AIA_API aia_status aia_run_report_jsonl(const aia_run* run, char** out);
AIA_API aia_status aia_run_summary_json(const aia_run* run, char** out);
AIA_API aia_status aia_run_transcript_jsonl(const aia_run* run, char** out);
AIA_API aia_status aia_run_model_set_json(const aia_run* run, char** out);
AIA_API aia_status aia_run_checkpoint_json(const aia_run* run, char** out);

/* Compares a learned domain with the true one on every plan of at most
 * `bound` steps from the given states (NULL: the problem's initial state). */
AIA_API aia_status aia_evaluate(const char* learned_domain_text, const char* truth_domain_text,
                                const char* problem_text, const char* states_jsonl, size_t bound,
                                aia_evaluation** out);
AIA_API double aia_evaluation_accuracy(const aia_evaluation* evaluation);
AIA_API double aia_evaluation_palm_accuracy(const aia_evaluation* evaluation);
AIA_API int aia_evaluation_equivalent(const aia_evaluation* evaluation);
AIA_API aia_status aia_evaluation_json(const aia_evaluation* evaluation, char** out);
AIA_API void aia_evaluation_free(aia_evaluation* evaluation);

#ifdef __cplusplus
}
#endif

#endif
