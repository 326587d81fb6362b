/*
 * C interface to the search-based preference weighting library.
 *
 * All functions that can fail return an spw_status; SPW_OK means success and
 * anything else leaves a human-readable message in spw_last_error() (thread
 * local). Handles are opaque; every *_new/_load/_build has a matching
 * *_free, and freeing NULL is a no-op.
 */

#ifndef SPW_H
#define SPW_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spw_status {
    SPW_OK = 0,
    SPW_ERROR_INVALID_ARGUMENT = 1,
    SPW_ERROR_IO = 2,
    SPW_ERROR_PARSE = 3,
    SPW_ERROR_DIMENSION_MISMATCH = 4,
    SPW_ERROR_EMPTY_INPUT = 5,
    SPW_ERROR_NUMERIC = 6,
    SPW_ERROR_NOT_CONVERGED = 7,
    SPW_ERROR_UNKNOWN = 8
} spw_status;

typedef struct spw_config spw_config;
typedef struct spw_trajectories spw_trajectories;
typedef struct spw_index spw_index;
typedef struct spw_model spw_model;

const char* spw_version(void);

/* Message of the most recent failure on this thread; empty if none. */
const char* spw_last_error(void);

/* ---------------------------------------------------------------- config */

/* A new config starts from the built-in defaults, so setting nothing still
 * yields a runnable experiment. */
spw_config* spw_config_new(void);
void spw_config_free(spw_config* config);

/* key = value lines; '#' starts a comment line. Later sources win, so load
 * files before applying command-line overrides. */
spw_status spw_config_load_file(spw_config* config, const char* path);
spw_status spw_config_set(spw_config* config, const char* key, const char* value);
int spw_config_has(const spw_config* config, const char* key);

/* Copies the value into buffer (NUL-terminated). Fails with
 * SPW_ERROR_INVALID_ARGUMENT if the key is unknown or the buffer is too
 * small. */
spw_status spw_config_get(const spw_config* config, const char* key, char* buffer,
                          size_t buffer_size);

/* ------------------------------------------------------------- pipeline */

/* Experiment subcommands. Each reads everything it needs from the config
 * and writes its outputs under <outdir>/<task>/<method>/seed<k>/. Reruns
 * with one config are byte-identical. */
spw_status spw_run_generate(const spw_config* config);
spw_status spw_run_train(const spw_config* config);
spw_status spw_run_evaluate(const spw_config* config);
spw_status spw_run_ablate_tau(const spw_config* config);
spw_status spw_run_compare(const spw_config* config);

/* ---------------------------------------------------------------- data */

/* Loads a JSON-lines trajectory file (fields source, states, actions and
 * optional rewards; one object per line). */
spw_status spw_trajectories_load(const char* path, spw_trajectories** out);
void spw_trajectories_free(spw_trajectories* trajectories);
size_t spw_trajectories_count(const spw_trajectories* trajectories);
spw_status spw_trajectories_dims(const spw_trajectories* trajectories, size_t* state_dim,
                                 size_t* action_dim);

/* --------------------------------------------------------------- search */

/* Exact nearest-neighbor index over the pooled transitions of expert-tagged
 * trajectories. standardize != 0 applies per-dimension z-scoring fitted on
 * the expert data before measuring Euclidean distances. */
spw_status spw_index_build(const spw_trajectories* expert, int standardize, spw_index** out);
void spw_index_free(spw_index* index);
size_t spw_index_size(const spw_index* index);

/* query is the state||action concatenation of length dim. */
spw_status spw_index_nearest_distance(const spw_index* index, const double* query, size_t dim,
                                      double* out_distance);

/* ------------------------------------------------------------ weighting */

/* Softmax importance weights over a distance profile: out_weights[i] =
 * exp(-distances[i]/tau) normalized across the profile. Passing a positive
 * infinity tau selects the exact uniform 1/count path. */
spw_status spw_extract_weights(const double* distances, size_t count, double tau,
                               double* out_weights);

/* --------------------------------------------------------- reward model */

spw_status spw_model_load(const char* checkpoint_path, spw_model** out);
void spw_model_free(spw_model* model);
spw_status spw_model_input_dim(const spw_model* model, size_t* out_dim);

/* input is the state||action concatenation of length dim. */
spw_status spw_model_predict(const spw_model* model, const double* input, size_t dim,
                             double* out_reward);

#ifdef __cplusplus
}
#endif

#endif /* SPW_H */
