/*
 * gbrsim C interface.
 *
 * Every function returns a gbr_status; on anything but GBR_OK the calling
 * thread's gbr_last_error() holds a human-readable diagnostic. Handles are
 * opaque and owned by the caller, who releases them with the matching
 * *_free function. Strings returned through `char **` are heap copies that
 * must be released with gbr_string_free.
 */
#ifndef GBRSIM_GBRSIM_H
#define GBRSIM_GBRSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GBRSIM_BUILDING_LIBRARY)
#    define GBRSIM_API __declspec(dllexport)
#  else
#    define GBRSIM_API __declspec(dllimport)
#  endif
#else
#  define GBRSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gbr_status {
  GBR_OK = 0,
  GBR_ERR_INVALID_ARGUMENT = 1, /* bad input, malformed JSON, invalid config */
  GBR_ERR_ROUTING_FAULT = 2,    /* no admissible next hop, disconnected topology */
  GBR_ERR_CONVERGENCE = 3,      /* slice optimizer did not converge */
  GBR_ERR_CONSERVATION = 4,     /* message conservation violated */
  GBR_ERR_IO = 5,
  GBR_ERR_INTERNAL = 6
} gbr_status;

typedef enum gbr_strategy {
  GBR_STRATEGY_STANDARD = 0,
  GBR_STRATEGY_MIXED = 1,
  GBR_STRATEGY_RANDOMIZED = 2
} gbr_strategy;

typedef struct gbr_config gbr_config;
typedef struct gbr_topology gbr_topology;
typedef struct gbr_probabilities gbr_probabilities;
typedef struct gbr_simulation gbr_simulation;
typedef struct gbr_result gbr_result;

GBRSIM_API const char *gbr_version(void);
GBRSIM_API const char *gbr_status_name(gbr_status status);
/* Diagnostic for the last failed call on this thread; "" if none. */
GBRSIM_API const char *gbr_last_error(void);
GBRSIM_API void gbr_string_free(char *s);

/* ---- experiment configuration ---- */

/* Built-in presets: "paper", "ci". */
GBRSIM_API gbr_status gbr_config_preset(const char *name, gbr_config **out);
/* Parses a JSON config; absent keys take the paper-preset defaults, or the
   preset named by a "preset" key. */
GBRSIM_API gbr_status gbr_config_from_json(const char *json, gbr_config **out);
/* Applies the keys present in `json` on top of `config`. */
GBRSIM_API gbr_status gbr_config_merge_json(gbr_config *config, const char *json);
GBRSIM_API gbr_status gbr_config_to_json(const gbr_config *config, char **out_json);
/* Writes 1 to *out_ok when valid. `out_report` (optional) receives a JSON
   object {"violations": [...], "warnings": [...]}. */
GBRSIM_API gbr_status gbr_config_validate(const gbr_config *config, int *out_ok, char **out_report);
GBRSIM_API void gbr_config_free(gbr_config *config);

/* ---- topology ---- */

/* Deploys sensors and builds the communication graph from a config. */
GBRSIM_API gbr_status gbr_topology_generate(const gbr_config *config, gbr_topology **out);
GBRSIM_API gbr_status gbr_topology_from_json(const char *json, gbr_topology **out);
GBRSIM_API gbr_status gbr_topology_load(const char *path, gbr_topology **out);
GBRSIM_API gbr_status gbr_topology_to_json(const gbr_topology *topology, char **out_json);
GBRSIM_API gbr_status gbr_topology_save(const gbr_topology *topology, const char *path);
GBRSIM_API gbr_status gbr_topology_node_count(const gbr_topology *topology, size_t *out);
GBRSIM_API gbr_status gbr_topology_reachable_count(const gbr_topology *topology, size_t *out);
GBRSIM_API gbr_status gbr_topology_max_height(const gbr_topology *topology, int *out);
/* Height of `node`, -1 when unreachable. */
GBRSIM_API gbr_status gbr_topology_height(const gbr_topology *topology, uint32_t node, int *out);
GBRSIM_API void gbr_topology_free(gbr_topology *topology);

/* ---- slice optimizer ---- */

/* Minimax per-height direct-send probabilities for `topology`. */
GBRSIM_API gbr_status gbr_probabilities_solve(const gbr_topology *topology, double tolerance,
                                              double direct_cost_exponent, gbr_probabilities **out);
GBRSIM_API gbr_status gbr_probabilities_create(const double *by_height, size_t count, gbr_probabilities **out);
GBRSIM_API gbr_status gbr_probabilities_from_json(const char *json, gbr_probabilities **out);
GBRSIM_API gbr_status gbr_probabilities_to_json(const gbr_probabilities *probs, char **out_json);
GBRSIM_API gbr_status gbr_probabilities_count(const gbr_probabilities *probs, size_t *out);
/* Probability for 1-based `height`. */
GBRSIM_API gbr_status gbr_probabilities_get(const gbr_probabilities *probs, int height, double *out);
/* Max per-sensor slice energy per round under `probs` (slice abstraction). */
GBRSIM_API gbr_status gbr_probabilities_objective(const gbr_probabilities *probs, const gbr_topology *topology,
                                                  double direct_cost_exponent, double *out);
GBRSIM_API void gbr_probabilities_free(gbr_probabilities *probs);

/* ---- round-by-round simulation ---- */

/* `probs` is required for GBR_STRATEGY_RANDOMIZED and ignored otherwise.
   The topology must outlive the simulation. */
GBRSIM_API gbr_status gbr_simulation_create(const gbr_topology *topology, gbr_strategy strategy,
                                            const gbr_probabilities *probs, uint64_t trace_seed,
                                            uint64_t decision_seed, gbr_simulation **out);
/* Advances `rounds` rounds, drawing events from the trace seed. */
GBRSIM_API gbr_status gbr_simulation_run(gbr_simulation *sim, uint64_t rounds);
/* Advances one round with the event injected at `event_node`. */
GBRSIM_API gbr_status gbr_simulation_step_with_event(gbr_simulation *sim, uint32_t event_node);
GBRSIM_API gbr_status gbr_simulation_round(const gbr_simulation *sim, uint64_t *out);
GBRSIM_API gbr_status gbr_simulation_counts(const gbr_simulation *sim, uint64_t *generated, uint64_t *delivered,
                                            uint64_t *queued);
/* Copies per-node energy into `out` (capacity `len`, must be >= node count). */
GBRSIM_API gbr_status gbr_simulation_energies(const gbr_simulation *sim, double *out, size_t len);
GBRSIM_API gbr_status gbr_simulation_max_energy(const gbr_simulation *sim, double *out);
GBRSIM_API void gbr_simulation_free(gbr_simulation *sim);

/* ---- full experiments ---- */

/* Runs the experiment and writes every output file into the config's
   output_dir. `topology` may be NULL to deploy from the config. */
GBRSIM_API gbr_status gbr_experiment_run(const gbr_config *config, const gbr_topology *topology, gbr_result **out);
GBRSIM_API gbr_status gbr_result_strategy_count(const gbr_result *result, size_t *out);
GBRSIM_API gbr_status gbr_result_strategy_label(const gbr_result *result, size_t index, char **out);
GBRSIM_API gbr_status gbr_result_max_energy(const gbr_result *result, size_t index, double *out);
GBRSIM_API gbr_status gbr_result_summary_json(const gbr_result *result, char **out_json);
/* Plain-text table of max energies and pairwise ratios. */
GBRSIM_API gbr_status gbr_result_summary_table(const gbr_result *result, char **out_text);
/* Newline-separated list of the files written. */
GBRSIM_API gbr_status gbr_result_files(const gbr_result *result, char **out_text);
GBRSIM_API void gbr_result_free(gbr_result *result);

#ifdef __cplusplus
}
#endif

#endif /* GBRSIM_GBRSIM_H */
