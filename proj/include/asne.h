/* ASNE — ant swarm neuro-evolution for recurrent network topology search.
 *
 * C interface to the shared library. All functions return an asne_status;
 * every out-parameter is only written on ASNE_OK (except where noted).
 * Strings returned through char** are heap-allocated and must be released
 * with asne_string_free. Handles are opaque and single-threaded; distinct
 * handles may be used from distinct threads.
 */

#ifndef ASNE_H
#define ASNE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum asne_status {
    ASNE_OK = 0,
    ASNE_ERROR = 1,          /* internal or unexpected failure */
    ASNE_CONFIG_ERROR = 2,   /* invalid configuration */
    ASNE_DATA_ERROR = 3,     /* unusable input data */
    ASNE_PARTIAL_FAILURE = 4,/* run finished but some repeats failed */
    ASNE_IO_ERROR = 5        /* filesystem failure */
} asne_status;

typedef struct asne_config asne_config; /* opaque experiment configuration */

const char* asne_version(void);
const char* asne_status_name(asne_status status);

/* Thread-local message for the most recent failure on this thread. */
const char* asne_last_error(void);

void asne_string_free(char* s);

/* --- configuration ----------------------------------------------------- */

asne_status asne_config_create(asne_config** out);
asne_status asne_config_from_json(const char* json_text, asne_config** out);
asne_status asne_config_from_file(const char* path, asne_config** out);

/* Sets one option by its config-file key (e.g. "ants", "species", "phi",
 * "reward", "gamma", "iterations", "data.path", "trainer.epochs"). Values
 * are parsed from their string form. */
asne_status asne_config_set(asne_config* config, const char* key, const char* value);

asne_status asne_config_to_json(const asne_config* config, char** json_out);
asne_status asne_config_validate(const asne_config* config);
void asne_config_free(asne_config* config);

/* --- operations --------------------------------------------------------- */

/* Runs the configured experiment (all repeats); writes logs, checkpoints,
 * genomes and summary.json under out_dir. On ASNE_PARTIAL_FAILURE the
 * summary is still produced and returned. */
asne_status asne_run_experiment(const asne_config* config, const char* out_dir,
                                char** summary_json_out);

/* Writes one config file per point of the full option grid; n_out receives
 * the number of files written. */
asne_status asne_grid_expand(const asne_config* base, const char* out_dir, int* n_out);

/* Generates a synthetic series ("sine_mix" or "mackey_glass_like") as CSV. */
asne_status asne_synth_csv(const char* kind, long length, long width, double noise,
                           uint64_t seed, const char* path);

/* Ranks experiments by their summary.json files; writes ranking.csv under
 * out_dir (pass NULL to skip) and returns the CSV text. */
asne_status asne_rank(const char* const* summary_paths, size_t count, const char* out_dir,
                      char** csv_out);

/* Pretty-prints a colony / genome / checkpoint / summary JSON document. */
asne_status asne_inspect(const char* path, char** text_out);

/* MAE of the constant mean predictor on the validation split. */
asne_status asne_baseline_constant(const asne_config* config, double* mae_out);

/* Median validation MAE of n untrained-colony genomes trained identically. */
asne_status asne_baseline_random(const asne_config* config, int n_genomes, uint64_t seed,
                                 double* median_mae_out);

/* (1 - MAE) / weight_count. */
asne_status asne_fitness_structure_coefficient(double mae, size_t weight_count,
                                               double* coefficient_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ASNE_H */
