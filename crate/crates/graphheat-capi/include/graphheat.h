/* C interface to the graphheat metric-graph heat kernel library. */

#ifndef GRAPHHEAT_H
#define GRAPHHEAT_H

#pragma once

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum GhStatus {
  GH_STATUS_OK = 0,
  GH_STATUS_NULL_ARGUMENT = 1,
  GH_STATUS_INVALID_UTF8 = 2,
  GH_STATUS_PARSE_ERROR = 3,
  GH_STATUS_INVALID_ARGUMENT = 4,
  GH_STATUS_COMPUTE_ERROR = 5,
} GhStatus;

/**
 * Opaque metric-graph handle.
 */
typedef struct GhGraph GhGraph;

/**
 * Opaque spectrum handle.
 */
typedef struct GhSpectrum GhSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread.  The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *gh_last_error_message(void);

/**
 * Parse a JSON graph description (see the library README for the
 * schema) into a new graph handle.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a valid
 * pointer; the result must be released with [`gh_graph_free`].
 */
enum GhStatus gh_graph_parse_json(const char *json, struct GhGraph **out);

/**
 * Release a graph handle; a null pointer is ignored.
 *
 * # Safety
 * `g` must come from [`gh_graph_parse_json`] and not be freed twice.
 */
void gh_graph_free(struct GhGraph *g);

/**
 * Number of vertices.
 *
 * # Safety
 * `g` must be a live graph handle.
 */
size_t gh_graph_vertex_count(const struct GhGraph *g);

/**
 * Number of edges.
 *
 * # Safety
 * `g` must be a live graph handle.
 */
size_t gh_graph_edge_count(const struct GhGraph *g);

/**
 * Total metric length.
 *
 * # Safety
 * `g` must be a live graph handle.
 */
double gh_graph_total_length(const struct GhGraph *g);

/**
 * Heat kernel `H(t, (edge1, x1), (edge2, x2))` with a certified
 * truncation bound, cutoff chosen so the bound is at most `tol`.
 *
 * # Safety
 * Pointer arguments must be valid; strings NUL-terminated.
 */
enum GhStatus gh_heat_kernel(const struct GhGraph *g,
                             double t,
                             const char *edge1,
                             double x1,
                             const char *edge2,
                             double x2,
                             double tol,
                             double *out_value,
                             double *out_bound);

/**
 * Diagonal heat kernel `h(t, (edge, x))`.
 *
 * # Safety
 * Pointer arguments must be valid; strings NUL-terminated.
 */
enum GhStatus gh_heat_diagonal(const struct GhGraph *g,
                               double t,
                               const char *edge,
                               double x,
                               double tol,
                               double *out_value,
                               double *out_bound);

/**
 * Diagonal kernel on `samples + 1` equispaced points of an edge.
 * `out_xs` and `out_values` must hold `samples + 1` doubles; the
 * certified bound shared by all rows lands in `out_bound`.
 *
 * # Safety
 * Buffers must be caller-allocated with capacity `samples + 1`.
 */
enum GhStatus gh_heat_diagonal_grid(const struct GhGraph *g,
                                    double t,
                                    const char *edge,
                                    size_t samples,
                                    double tol,
                                    double *out_xs,
                                    double *out_values,
                                    double *out_bound);

/**
 * Rigorous bound on the path-sum tail beyond cutoff `l_cut`.
 *
 * # Safety
 * `g` and `out_bound` must be valid pointers.
 */
enum GhStatus gh_truncation_bound(const struct GhGraph *g,
                                  double t,
                                  double l_cut,
                                  double *out_bound);

/**
 * Cycle-expansion heat trace truncated at iterate length `l_max`.
 *
 * # Safety
 * `g` and `out_value` must be valid pointers.
 */
enum GhStatus gh_roth_trace(const struct GhGraph *g, double t, double l_max, double *out_value);

/**
 * Compute the spectrum up to `sigma_max` with the secular solver.
 *
 * # Safety
 * `g` and `out` must be valid; release the result with
 * [`gh_spectrum_free`].
 */
enum GhStatus gh_spectrum_secular(const struct GhGraph *g,
                                  double sigma_max,
                                  struct GhSpectrum **out);

/**
 * Number of distinct eigenvalue levels.
 *
 * # Safety
 * `s` must be a live spectrum handle.
 */
size_t gh_spectrum_level_count(const struct GhSpectrum *s);

/**
 * Frequency and multiplicity of level `index` (ascending).
 *
 * # Safety
 * `s` must be live; output pointers valid.
 */
enum GhStatus gh_spectrum_level(const struct GhSpectrum *s,
                                size_t index,
                                double *out_sigma,
                                size_t *out_multiplicity);

/**
 * Release a spectrum handle; a null pointer is ignored.
 *
 * # Safety
 * `s` must come from [`gh_spectrum_secular`] and not be freed twice.
 */
void gh_spectrum_free(struct GhSpectrum *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GRAPHHEAT_H */
