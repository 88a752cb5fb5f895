#ifndef SCHREIER_ISING_H
#define SCHREIER_ISING_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes for every fallible entry point.
 */
typedef enum SiStatus {
  SI_STATUS_OK = 0,
  SI_STATUS_INVALID_ARGUMENT = 1,
  SI_STATUS_UNSUPPORTED = 2,
  SI_STATUS_BUDGET_EXCEEDED = 3,
  SI_STATUS_VERIFICATION_FAILED = 4,
  SI_STATUS_INTERNAL = 5,
} SiStatus;

/**
 * Opaque labeled multigraph handle.
 */
typedef struct SiGraph SiGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message from the most recent failing call on this thread. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *si_last_error_message(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be a pointer previously returned through a `char**` out-param of
 * this library, or null.
 */
void si_string_free(char *s);

/**
 * Builds a graph. `family` is one of "grigorchuk", "basilica", "hanoi",
 * "sierpinski"; `labeling` is "plain", "labels" or "rotation".
 *
 * # Safety
 * `family` and `labeling` must be valid NUL-terminated strings and
 * `out_graph` a valid pointer.
 */
enum SiStatus si_graph_build(const char *family,
                             uint32_t level,
                             const char *labeling,
                             struct SiGraph **out_graph);

/**
 * Contracts a Hanoi Schreier graph to its Sierpinski graph.
 *
 * # Safety
 * `graph` must be a live handle from this library, `out_graph` valid.
 */
enum SiStatus si_graph_contract(const struct SiGraph *graph, struct SiGraph **out_graph);

/**
 * Applies the polygon-to-dimer vertex-gadget transform.
 *
 * # Safety
 * `graph` must be a live handle from this library, `out_graph` valid.
 */
enum SiStatus si_graph_fisher_transform(const struct SiGraph *graph, struct SiGraph **out_graph);

/**
 * Number of vertices.
 *
 * # Safety
 * `graph` must be a live handle.
 */
uint64_t si_graph_vertex_count(const struct SiGraph *graph);

/**
 * Number of edges; loops are excluded when `loopless` is true.
 *
 * # Safety
 * `graph` must be a live handle.
 */
uint64_t si_graph_edge_count(const struct SiGraph *graph, bool loopless);

/**
 * Serializes the graph as JSON.
 *
 * # Safety
 * `graph` must be a live handle and `out_json` a valid pointer.
 */
enum SiStatus si_graph_to_json(const struct SiGraph *graph, char **out_json);

/**
 * Serializes the graph as DOT.
 *
 * # Safety
 * `graph` must be a live handle and `out_dot` a valid pointer.
 */
enum SiStatus si_graph_to_dot(const struct SiGraph *graph, bool include_loops, char **out_dot);

/**
 * Releases a graph handle.
 *
 * # Safety
 * `graph` must be a handle from this library (or null), not yet freed.
 */
void si_graph_free(struct SiGraph *graph);

/**
 * Computes the closed-polygon generating function and returns its JSON,
 * including the metadata header.
 *
 * # Safety
 * String arguments must be valid NUL-terminated strings; `out_json` valid.
 */
enum SiStatus si_genfun_json(const char *family,
                             uint32_t level,
                             const char *labeling,
                             char **out_json);

/**
 * log Z_n at z = tanh(beta J), evaluated from the closed forms at ~115
 * decimal digits and rounded to f64.
 *
 * # Safety
 * `family` must be a valid string, `out_log_z` a valid pointer.
 */
enum SiStatus si_log_partition(const char *family, uint32_t level, double z, double *out_log_z);

/**
 * Thermodynamic limit at z = tanh(beta J) with truncation error <= tol;
 * also reports the tail bound actually achieved.
 *
 * # Safety
 * `family` must be a valid string; out-pointers valid.
 */
enum SiStatus si_thermodynamic_limit(const char *family,
                                     double z,
                                     double tol,
                                     double *out_value,
                                     double *out_tail_bound);

/**
 * One renormalization step: f(y) and c(y). `variant` is "sierpinski" or
 * "hanoi".
 *
 * # Safety
 * `variant` must be a valid string; out-pointers valid.
 */
enum SiStatus si_renormalization_step(const char *variant, double y, double *out_f, double *out_c);

/**
 * Exact per-label statistics as CSV.
 *
 * # Safety
 * String arguments must be valid NUL-terminated strings; `out_csv` valid.
 */
enum SiStatus si_label_statistics_csv(const char *family,
                                      uint32_t level,
                                      const char *labeling,
                                      char **out_csv);

/**
 * Runs one acceptance criterion (1..=11). Returns Ok when it passes,
 * VerificationFailed (with the detail in the error message) otherwise.
 */
enum SiStatus si_verify_criterion(uint32_t id);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCHREIER_ISING_H */
