#ifndef SEEDOPT_H
#define SEEDOPT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SeedoptStatus {
  SEEDOPT_STATUS_OK = 0,
  SEEDOPT_STATUS_NULL_POINTER = 1,
  SEEDOPT_STATUS_INVALID_ARGUMENT = 2,
  SEEDOPT_STATUS_IO = 3,
  SEEDOPT_STATUS_PARSE = 4,
  SEEDOPT_STATUS_INFEASIBLE = 5,
  SEEDOPT_STATUS_CAP_EXCEEDED = 6,
  SEEDOPT_STATUS_UNIMPLEMENTED = 7,
  SEEDOPT_STATUS_BUFFER_TOO_SMALL = 8,
  SEEDOPT_STATUS_PANIC = 9,
} SeedoptStatus;

typedef enum SeedoptModel {
  SEEDOPT_MODEL_IC = 0,
  SEEDOPT_MODEL_LT = 1,
} SeedoptModel;

/**
 * Opaque graph handle.
 */
typedef struct SeedoptGraph SeedoptGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the next failing call on
 * the same thread.
 */
const char *seedopt_last_error_message(void);

/**
 * Builds a graph on nodes `0..n` from `m` arcs `tails[i] -> heads[i]` with probability
 * `probs[i]`.
 *
 * # Safety
 * `tails`, `heads` and `probs` must each point to `m` readable elements; `out` must be writable.
 */
enum SeedoptStatus seedopt_graph_from_arcs(size_t n,
                                           const uint32_t *tails,
                                           const uint32_t *heads,
                                           const double *probs,
                                           size_t m,
                                           struct SeedoptGraph **out);

/**
 * Loads a tab-separated edge list. `default_prob` fills arcs without a probability column; pass
 * a negative value to require the column.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum SeedoptStatus seedopt_graph_load(const char *path,
                                      double default_prob,
                                      bool symmetrize,
                                      struct SeedoptGraph **out);

/**
 * Releases a graph. NULL is ignored.
 *
 * # Safety
 * `g` must come from this library and not have been freed.
 */
void seedopt_graph_free(struct SeedoptGraph *g);

/**
 * Node count, or 0 for NULL.
 *
 * # Safety
 * `g` must be NULL or a live handle.
 */
size_t seedopt_graph_node_count(const struct SeedoptGraph *g);

/**
 * Arc count, or 0 for NULL.
 *
 * # Safety
 * `g` must be NULL or a live handle.
 */
size_t seedopt_graph_arc_count(const struct SeedoptGraph *g);

/**
 * New graph with every probability set to `p`.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum SeedoptStatus seedopt_graph_assign_uniform(const struct SeedoptGraph *g,
                                                double p,
                                                struct SeedoptGraph **out);

/**
 * New graph with weighted-cascade probabilities `1 / in_degree(head)`.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum SeedoptStatus seedopt_graph_assign_weighted_cascade(const struct SeedoptGraph *g,
                                                         struct SeedoptGraph **out);

/**
 * Monte Carlo spread of `seeds`. A negative `horizon` means unbounded.
 *
 * # Safety
 * `g` must be a live handle, `seeds` must hold `n_seeds` ids, and the outputs must be writable.
 */
enum SeedoptStatus seedopt_estimate_spread(const struct SeedoptGraph *g,
                                           enum SeedoptModel model,
                                           const uint32_t *seeds,
                                           size_t n_seeds,
                                           int64_t horizon,
                                           size_t n_sims,
                                           uint64_t master_seed,
                                           double *out_mean,
                                           double *out_std_err);

/**
 * Exact expected spread by live-edge enumeration, with the default size caps.
 *
 * # Safety
 * As [`seedopt_estimate_spread`].
 */
enum SeedoptStatus seedopt_exact_spread(const struct SeedoptGraph *g,
                                        enum SeedoptModel model,
                                        const uint32_t *seeds,
                                        size_t n_seeds,
                                        int64_t horizon,
                                        double *out);

/**
 * Greedy MAXINF: writes `k` seeds in pick order to `out_seeds` and their estimated spread to
 * `out_value`.
 *
 * # Safety
 * `g` must be a live handle; `out_seeds` must have room for `k` ids; `out_value` must be writable.
 */
enum SeedoptStatus seedopt_greedy_maxinf(const struct SeedoptGraph *g,
                                         enum SeedoptModel model,
                                         size_t k,
                                         int64_t horizon,
                                         size_t n_sims,
                                         uint64_t master_seed,
                                         bool lazy,
                                         uint32_t *out_seeds,
                                         double *out_value);

/**
 * Greedy MINTSS with the graph's node costs. On return `*out_len` holds the number of seeds
 * (also when the buffer of `cap` ids was too small) and `*out_feasible` whether `η - ε` was met.
 *
 * # Safety
 * `g` must be a live handle; `out_seeds` must have room for `cap` ids; other outputs writable.
 */
enum SeedoptStatus seedopt_greedy_mintss(const struct SeedoptGraph *g,
                                         enum SeedoptModel model,
                                         double eta,
                                         double eps,
                                         int64_t horizon,
                                         size_t n_sims,
                                         uint64_t master_seed,
                                         bool lazy,
                                         uint32_t *out_seeds,
                                         size_t cap,
                                         size_t *out_len,
                                         double *out_coverage,
                                         bool *out_feasible);

/**
 * MINTIME with at most `ceil(k (1 + ln(η/ε)))` seeds. `*out_time` is the first horizon that met
 * `η - ε`, or -1 on failure.
 *
 * # Safety
 * `g` must be a live handle; `out_seeds` must have room for `cap` ids; other outputs writable.
 */
enum SeedoptStatus seedopt_mintime(const struct SeedoptGraph *g,
                                   enum SeedoptModel model,
                                   size_t k,
                                   double eta,
                                   double eps,
                                   size_t n_sims,
                                   uint64_t master_seed,
                                   uint32_t *out_seeds,
                                   size_t cap,
                                   size_t *out_len,
                                   int64_t *out_time,
                                   double *out_coverage);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SEEDOPT_H */
