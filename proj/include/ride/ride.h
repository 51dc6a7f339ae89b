/*
 * C interface to the RIDE exploration workbench.
 *
 * Everything lives behind opaque handles; functions return ride_status and
 * never throw. On failure, ride_last_error() carries a message for the
 * calling thread. Constructors return NULL on failure.
 */
#ifndef RIDE_RIDE_H
#define RIDE_RIDE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef RIDE_API
#define RIDE_API __attribute__((visibility("default")))
#endif

typedef enum ride_status {
  RIDE_OK = 0,
  RIDE_ERR_INVALID_ARGUMENT = 1, /* bad parameter, shape or contract violation */
  RIDE_ERR_CONFIG = 2,           /* bad task/config values, config mismatch */
  RIDE_ERR_IO = 3,               /* missing or corrupt files */
  RIDE_ERR_NUMERIC = 4,          /* NaN/inf losses or gradients */
  RIDE_ERR_INTERNAL = 5
} ride_status;

RIDE_API const char* ride_status_name(ride_status status);

/* Message for the last failing call on this thread ("" if none). */
RIDE_API const char* ride_last_error(void);

/* ------------------------------------------------------------------ */
/* Experiment configuration: flat string keys, same names as the config
 * file format (task, method, seed, total_frames, ...).                */

typedef struct ride_config ride_config;

RIDE_API ride_config* ride_config_new(void);
RIDE_API void ride_config_free(ride_config* config);
RIDE_API ride_status ride_config_set(ride_config* config, const char* key, const char* value);
RIDE_API ride_status ride_config_get(const ride_config* config, const char* key, char* buffer,
                                     size_t buffer_size);
RIDE_API ride_status ride_config_load(ride_config* config, const char* path);
RIDE_API ride_status ride_config_save(const ride_config* config, const char* path);

/* ------------------------------------------------------------------ */
/* Gridworld environments.                                             */

typedef struct ride_env ride_env;

/* task: e.g. "multiroom-n7-s4", "multiroom-noisytv-n2-s4",
 * "colorgen-multiroom-n7-s4", "keycorridor-s3-r3", "obstructedmaze-2dlh",
 * "dynamicobstacles-8-4". singleton_seed >= 0 pins the layout. */
RIDE_API ride_env* ride_env_new(const char* task, int64_t singleton_seed);
RIDE_API void ride_env_free(ride_env* env);

RIDE_API ride_status ride_env_reset(ride_env* env, uint64_t seed);
/* action in [0,6]: left, right, forward, pickup, drop, toggle, done. */
RIDE_API ride_status ride_env_step(ride_env* env, int action, double* reward, int* done);

RIDE_API int ride_env_view_size(const ride_env* env);
/* Observation bytes, row-major channel-last, view*view*3 entries. */
RIDE_API ride_status ride_env_observe(const ride_env* env, int8_t* buffer, size_t buffer_size);
RIDE_API uint64_t ride_env_obs_hash(const ride_env* env);
RIDE_API ride_status ride_env_agent(const ride_env* env, int* x, int* y, int* dir);
RIDE_API int ride_env_width(const ride_env* env);
RIDE_API int ride_env_height(const ride_env* env);
RIDE_API int ride_env_step_count(const ride_env* env);
RIDE_API int ride_env_max_steps(const ride_env* env);
/* Text map dump; returns the number of bytes written (excluding the
 * terminator), or 0 on error. */
RIDE_API size_t ride_env_render(const ride_env* env, char* buffer, size_t buffer_size);

/* ------------------------------------------------------------------ */
/* Training and evaluation.                                            */

typedef struct ride_progress {
  uint64_t frames;
  uint64_t episodes;
  double rolling_return;   /* mean extrinsic return over the past 100 episodes */
  double mean_intrinsic;   /* mean raw intrinsic reward of the last batch */
} ride_progress;

typedef void (*ride_progress_fn)(const ride_progress* progress, void* user_data);

/* Trains one run, writing runlog.csv, learner.csv and checkpoints under
 * out_dir. resume_from may name a checkpoint directory (or be NULL). */
RIDE_API ride_status ride_train(const ride_config* config, const char* out_dir,
                                const char* resume_from, ride_progress_fn progress,
                                void* user_data);

/* Evaluates a checkpoint by sampling the policy on fresh instances.
 * task may be NULL (use the checkpoint's task). color_mode: NULL, "train"
 * or "held-out". traces_out: optional directory for per-step trace CSVs.
 * step_budget overrides the episode step limit when > 0. */
RIDE_API ride_status ride_evaluate(const char* checkpoint_dir, const char* task, int episodes,
                                   uint64_t seed, const char* color_mode, const char* traces_out,
                                   int step_budget, double* mean_return, double* std_return);

/* ------------------------------------------------------------------ */
/* Post-hoc analyses over trace/log CSVs.
 * mode: "table", "visitmap", "rewardmap", "distinct" or "decay".
 * options: semicolon-separated key=value pairs (groups=doors|objects,
 * window=N, width=N, height=N, layout=PATH), or NULL. */
RIDE_API ride_status ride_analyze(const char* mode, const char* traces_dir, const char* out_dir,
                                  const char* options);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* RIDE_RIDE_H */
