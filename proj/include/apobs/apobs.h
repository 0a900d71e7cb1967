#ifndef APOBS_APOBS_H
#define APOBS_APOBS_H

/* C interface of the apobs verification library. All strings are UTF-8.
 * Strings returned through char** out-parameters are owned by the caller and
 * released with apobs_string_free. On failure a function returns a nonzero
 * status and apobs_last_error() describes the problem (per thread). */

#include <stddef.h>

#if defined(APOBS_BUILDING_LIB)
#define APOBS_API __attribute__((visibility("default")))
#else
#define APOBS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum apobs_status {
  APOBS_OK = 0,
  APOBS_ERR_PARSE = 1,
  APOBS_ERR_UNSUPPORTED = 2,
  APOBS_ERR_INVALID_ARGUMENT = 3,
  APOBS_ERR_CHOPPING = 4,
  APOBS_ERR_SPEC = 5,
  APOBS_ERR_TAU = 6,
  APOBS_ERR_PRECONDITION = 7,
  APOBS_ERR_ALPHABET = 8,
  APOBS_ERR_IO = 9,
  APOBS_ERR_INTERNAL = 10
} apobs_status;

typedef struct apobs_system apobs_system;
typedef struct apobs_report apobs_report;

typedef struct apobs_verify_options {
  int repeat;               /* >= 1 */
  int allow_unsound_tau;    /* nonzero: build even if the tau bound fails */
  int single_change_filter; /* nonzero: drop labels where two APs change */
} apobs_verify_options;

APOBS_API const char* apobs_version(void);
APOBS_API const char* apobs_last_error(void);
/* Stage that raised the last error ("parse", "automaton", "tau", ...), or "". */
APOBS_API const char* apobs_last_error_stage(void);
APOBS_API void apobs_string_free(char* s);

APOBS_API void apobs_verify_options_init(apobs_verify_options* opt);

/* Scenario JSON. name: "drone". r_mode: "or" / "and" or NULL for the default.
 * eta <= 0 keeps the default grid pitch. */
APOBS_API apobs_status apobs_scenario_json(const char* name, double eta, const char* r_mode, char** out_json);

APOBS_API apobs_status apobs_system_from_json(const char* json, apobs_system** out);
APOBS_API apobs_status apobs_system_from_file(const char* path, apobs_system** out);
/* eta/tau <= 0 leave the value unchanged. */
APOBS_API apobs_status apobs_system_override(apobs_system* sys, double eta, double tau);
APOBS_API apobs_status apobs_system_to_json(const apobs_system* sys, char** out_json);
APOBS_API size_t apobs_system_cells(const apobs_system* sys);
APOBS_API void apobs_system_free(apobs_system* sys);

/* Automaton of a formula. format: "dot" or "json". states may be NULL. */
APOBS_API apobs_status apobs_formula_automaton(const char* formula, const char* format, char** out_text,
                                               size_t* states);

/* Runs the pipeline. opt may be NULL for defaults. */
APOBS_API apobs_status apobs_verify(const apobs_system* sys, const char* formula, const apobs_verify_options* opt,
                                    apobs_report** out);
/* Like apobs_verify, also returning the automaton (DOT) and game (JSON) when
 * the corresponding out-pointers are non-NULL. */
APOBS_API apobs_status apobs_verify_export(const apobs_system* sys, const char* formula,
                                           const apobs_verify_options* opt, apobs_report** out,
                                           char** automaton_dot, char** game_json);

APOBS_API int apobs_report_verified(const apobs_report* r);
APOBS_API size_t apobs_report_automaton_states(const apobs_report* r);
APOBS_API size_t apobs_report_game_player(const apobs_report* r);
APOBS_API size_t apobs_report_game_opponent(const apobs_report* r);
APOBS_API size_t apobs_report_model_states(const apobs_report* r);
APOBS_API double apobs_report_total_time(const apobs_report* r);
/* averaged stage timings in seconds; any pointer may be NULL */
APOBS_API void apobs_report_times(const apobs_report* r, double* automaton, double* model, double* game, double* solve,
                                  double* total);
/* nonzero when the tau bound held (zero means the unsound override was used) */
APOBS_API int apobs_report_tau_pass(const apobs_report* r);
APOBS_API apobs_status apobs_report_json(const apobs_report* r, char** out_json);
APOBS_API apobs_status apobs_report_csv_row(const apobs_report* r, int with_header, char** out_csv);
APOBS_API apobs_status apobs_report_from_json(const char* json, apobs_report** out);
APOBS_API void apobs_report_free(apobs_report* r);

/* Reference rows of the published benchmark table (count = 9). */
APOBS_API size_t apobs_bench_count(void);
APOBS_API const char* apobs_bench_formula(size_t i);
/* fields: automaton_states, game_player, game_opponent */
APOBS_API int apobs_bench_paper_sizes(size_t i, size_t* automaton_states, size_t* game_player, size_t* game_opponent);
/* fields: automaton, game, solve, total (seconds) */
APOBS_API int apobs_bench_paper_times(size_t i, double* automaton, double* game, double* solve, double* total);

#ifdef __cplusplus
}
#endif

#endif
