#ifndef GSRC_H
#define GSRC_H

/* C interface to the UAV goal-oriented semantic communication simulator.
 * All functions are synchronous. Handles are opaque and single-owner;
 * free them with the matching *_free call. */

#ifdef __cplusplus
extern "C" {
#endif

#define GSRC_OK 0
#define GSRC_ERROR_RUNTIME 1
#define GSRC_ERROR_CONFIG 2

typedef struct gsrc_config gsrc_config_t;
typedef struct gsrc_model gsrc_model_t;

/* Library version, static storage. */
const char* gsrc_version(void);

/* Message of the calling thread's most recent failure; empty string if the
 * last call on this thread succeeded. Storage is thread-local and reused. */
const char* gsrc_last_error(void);

/* Status code of the calling thread's most recent library call; useful for
 * calls that report failure by returning NULL. */
int gsrc_last_status(void);

/* Frees strings returned by this library (gsrc_config_dump). */
void gsrc_string_free(char* s);

/* --- configuration ---------------------------------------------------- */

/* Fresh config with the built-in defaults; NULL only on allocation failure. */
gsrc_config_t* gsrc_config_create(void);

/* Parses and validates a key = value file; NULL on error. */
gsrc_config_t* gsrc_config_load(const char* path);

/* Applies one dotted key = value override; invariants are re-checked when
 * the config is used. Returns GSRC_OK / GSRC_ERROR_CONFIG. */
int gsrc_config_set(gsrc_config_t* cfg, const char* key, const char* value);

/* Canonical full key dump; caller frees with gsrc_string_free. */
char* gsrc_config_dump(const gsrc_config_t* cfg);

void gsrc_config_free(gsrc_config_t* cfg);

/* --- models ------------------------------------------------------------ */

/* Loads a trained Q-network; NULL on error (bad path or corrupt file are
 * reported as config errors: they come from operator input). */
gsrc_model_t* gsrc_model_load(const char* path);

int gsrc_model_save(const gsrc_model_t* model, const char* path);

void gsrc_model_free(gsrc_model_t* model);

/* --- commands ----------------------------------------------------------- */

/* Trains the command agent per the config; writes model.bin and
 * learning.csv into run.out_dir and returns the model. NULL on error. */
gsrc_model_t* gsrc_train(const gsrc_config_t* cfg);

/* Evaluates every configured scheme; writes summary.csv and the trajectory
 * CSVs into run.out_dir. model may be NULL: a DQN scheme in the list then
 * triggers in-process training first. */
int gsrc_eval(const gsrc_config_t* cfg, const gsrc_model_t* model);

/* Repetition-axis sweep; axis is "kmax" or "trep", values a comma-separated
 * number list. Writes sweep.csv into run.out_dir. model as in gsrc_eval. */
int gsrc_sweep(const gsrc_config_t* cfg, const gsrc_model_t* model,
               const char* axis, const char* values);

#ifdef __cplusplus
}
#endif

#endif /* GSRC_H */
