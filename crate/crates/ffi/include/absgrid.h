#ifndef ABSGRID_H
#define ABSGRID_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AbsgridStatus {
  ABSGRID_STATUS_OK = 0,
  ABSGRID_STATUS_NULL_ARGUMENT = 1,
  ABSGRID_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed input text: a mapping, an instance or a name.
   */
  ABSGRID_STATUS_PARSE = 3,
  /**
   * Grid sizes or regions that do not fit together.
   */
  ABSGRID_STATUS_GRID = 4,
  /**
   * Any other library error.
   */
  ABSGRID_STATUS_FAILED = 5,
  /**
   * The run ended on its global timeout.
   */
  ABSGRID_STATUS_TIMEOUT = 6,
  ABSGRID_STATUS_PANIC = 7,
} AbsgridStatus;

typedef enum AbsgridRunStatus {
  ABSGRID_RUN_STATUS_CONCRETE = 0,
  ABSGRID_RUN_STATUS_ABSTRACT_UNSAT = 1,
  ABSGRID_RUN_STATUS_UNKNOWN = 2,
} AbsgridRunStatus;

/**
 * A benchmark instance.
 */
typedef struct AbsgridInstance AbsgridInstance;

/**
 * A quad-tree grid mapping.
 */
typedef struct AbsgridMapping AbsgridMapping;

/**
 * The result of a refinement run, with its JSON report.
 */
typedef struct AbsgridOutcome AbsgridOutcome;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *absgrid_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not be freed yet, or be null.
 */
void absgrid_string_free(char *s);

/**
 * Parses the text form `n=8 b=2; x=1..4 y=1..4; ...`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum AbsgridStatus absgrid_mapping_parse(const char *text, struct AbsgridMapping **out);

/**
 * The root region of side `n` split once into `branching²` regions.
 *
 * # Safety
 * `out` must be writable.
 */
enum AbsgridStatus absgrid_mapping_initial(uint32_t n,
                                           uint32_t branching,
                                           struct AbsgridMapping **out);

/**
 * # Safety
 * `m` must come from this library and not be freed yet, or be null.
 */
void absgrid_mapping_free(struct AbsgridMapping *m);

/**
 * Number of leaf regions.
 *
 * # Safety
 * `m` must be a live mapping handle and `out` writable.
 */
enum AbsgridStatus absgrid_mapping_leaf_count(const struct AbsgridMapping *m, size_t *out);

/**
 * Cost of the mapping; `per_level_count` selects the alternative
 * denominator.
 *
 * # Safety
 * `m` must be a live mapping handle and `out` writable.
 */
enum AbsgridStatus absgrid_mapping_cost(const struct AbsgridMapping *m,
                                        bool per_level_count,
                                        double *out);

/**
 * Splits the leaf containing cell `(x, y)` into a new mapping.
 *
 * # Safety
 * `m` must be a live mapping handle and `out` writable.
 */
enum AbsgridStatus absgrid_mapping_split_at(const struct AbsgridMapping *m,
                                            uint32_t x,
                                            uint32_t y,
                                            struct AbsgridMapping **out);

/**
 * Text form of the mapping; free with [`absgrid_string_free`].
 *
 * # Safety
 * `m` must be a live mapping handle and `out` writable.
 */
enum AbsgridStatus absgrid_mapping_to_string(const struct AbsgridMapping *m, char **out);

/**
 * Reads an instance file produced by the generator.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum AbsgridStatus absgrid_instance_parse(const char *text, struct AbsgridInstance **out);

/**
 * Generates an instance of `problem` (`reachability`, `sudoku`,
 * `knights_tour`, `visitall_plan`, `visitall_kt` or a short alias).
 * With `certify`, only oracle-proven unsatisfiable instances are returned.
 *
 * # Safety
 * `problem` must be a NUL-terminated string and `out` writable.
 */
enum AbsgridStatus absgrid_instance_generate(const char *problem,
                                             uint32_t n,
                                             uint64_t seed,
                                             bool certify,
                                             struct AbsgridInstance **out);

/**
 * # Safety
 * `i` must come from this library and not be freed yet, or be null.
 */
void absgrid_instance_free(struct AbsgridInstance *i);

/**
 * The instance as a facts file; free with [`absgrid_string_free`].
 *
 * # Safety
 * `i` must be a live instance handle and `out` writable.
 */
enum AbsgridStatus absgrid_instance_to_lp(const struct AbsgridInstance *i, char **out);

/**
 * Draws `m` over `i`, as SVG when `svg` is set and ASCII otherwise.
 *
 * # Safety
 * `m` and `i` must be live handles and `out` writable.
 */
enum AbsgridStatus absgrid_render(const struct AbsgridMapping *m,
                                  const struct AbsgridInstance *i,
                                  bool svg,
                                  char **out);

/**
 * Runs abstraction refinement on `i` from its initial mapping with the
 * named strategy (`default`, `two-phase`, `time-inc`, `grid-inc`) and
 * default options otherwise. `timeout_ms = 0` means no global timeout;
 * when it hits, the outcome is still written and `TIMEOUT` returned.
 *
 * # Safety
 * `i` must be a live instance handle, `strategy` a NUL-terminated string
 * and `out` writable.
 */
enum AbsgridStatus absgrid_refine(const struct AbsgridInstance *i,
                                  const char *strategy,
                                  uint64_t timeout_ms,
                                  struct AbsgridOutcome **out);

/**
 * # Safety
 * `o` must come from this library and not be freed yet, or be null.
 */
void absgrid_outcome_free(struct AbsgridOutcome *o);

/**
 * # Safety
 * `o` must be a live outcome handle and `out` writable.
 */
enum AbsgridStatus absgrid_outcome_status(const struct AbsgridOutcome *o,
                                          enum AbsgridRunStatus *out);

/**
 * Refinement steps taken.
 *
 * # Safety
 * `o` must be a live outcome handle and `out` writable.
 */
enum AbsgridStatus absgrid_outcome_steps(const struct AbsgridOutcome *o, size_t *out);

/**
 * Cost of the final mapping.
 *
 * # Safety
 * `o` must be a live outcome handle and `out` writable.
 */
enum AbsgridStatus absgrid_outcome_cost(const struct AbsgridOutcome *o, double *out);

/**
 * A copy of the final mapping.
 *
 * # Safety
 * `o` must be a live outcome handle and `out` writable.
 */
enum AbsgridStatus absgrid_outcome_final_mapping(const struct AbsgridOutcome *o,
                                                 struct AbsgridMapping **out);

/**
 * The run report as JSON; free with [`absgrid_string_free`].
 *
 * # Safety
 * `o` must be a live outcome handle and `out` writable.
 */
enum AbsgridStatus absgrid_outcome_report_json(const struct AbsgridOutcome *o, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ABSGRID_H */
