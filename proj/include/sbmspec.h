/* Copyright 2026 The sbmspec Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the sbmspec library: stochastic block model simulation,
 * perturbation decompositions, spectral goodness-of-fit statistics, and the
 * seeded Monte Carlo replication engine.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Every fallible function returns sbmspec_status; on failure the thread-local
 * message from sbmspec_last_error() describes the problem. Functions are
 * thread-safe on distinct handles.
 */

#ifndef SBMSPEC_H
#define SBMSPEC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sbmspec_status {
  SBMSPEC_OK = 0,
  SBMSPEC_ERR_INVALID_ARGUMENT = 1,
  SBMSPEC_ERR_NON_SYMMETRIC_B = 2,
  SBMSPEC_ERR_PROBABILITY_OUT_OF_RANGE = 3,
  SBMSPEC_ERR_COMMUNITY_TOO_SMALL = 4,
  SBMSPEC_ERR_LABEL_OUT_OF_RANGE = 5,
  SBMSPEC_ERR_K_TOO_LARGE = 6,
  SBMSPEC_ERR_EMPTY_CLUSTER = 7,
  SBMSPEC_ERR_MISMATCHED_LENGTH = 8,
  SBMSPEC_ERR_DEGENERATE_ESTIMATE = 9,
  SBMSPEC_ERR_CLAMPED_STACK = 10,
  SBMSPEC_ERR_NON_SYMMETRIC = 11,
  SBMSPEC_ERR_NO_CONVERGENCE = 12,
  SBMSPEC_ERR_DEGENERATE_VARIANCE = 13,
  SBMSPEC_ERR_INVALID_LAW = 14,
  SBMSPEC_ERR_INSUFFICIENT_REPS = 15,
  SBMSPEC_ERR_EMPTY_SAMPLE = 16,
  SBMSPEC_ERR_ALL_FLAGGED = 17,
  SBMSPEC_ERR_PARSE = 18,
  SBMSPEC_ERR_SCHEMA = 19,
  SBMSPEC_ERR_SELF_LOOP = 20,
  SBMSPEC_ERR_NODE_INDEX_OUT_OF_RANGE = 21,
  SBMSPEC_ERR_IO = 22,
  SBMSPEC_ERR_INTERNAL = 99
} sbmspec_status;

typedef enum sbmspec_label_mode {
  SBMSPEC_LABELS_ORACLE = 0,
  SBMSPEC_LABELS_SPECTRAL = 1
} sbmspec_label_mode;

typedef enum sbmspec_statistic {
  SBMSPEC_STAT_CHI_SIMPLE_CROSS = 0,
  SBMSPEC_STAT_CHI_SIMPLE_SQ = 1,
  SBMSPEC_STAT_CHI_COMPOSITE_SQ = 2,
  SBMSPEC_STAT_Z_COMPOSITE_CROSS = 3,
  SBMSPEC_STAT_Z_BIAS_CROSS = 4,
  SBMSPEC_STAT_Z_ASTAR_SQ = 5,
  SBMSPEC_STAT_TW_LAMBDA1 = 6,
  SBMSPEC_STAT_Z_LSS = 7
} sbmspec_statistic;

typedef enum sbmspec_law_kind {
  SBMSPEC_LAW_CHI_SQUARE = 0,
  SBMSPEC_LAW_STANDARD_NORMAL = 1,
  SBMSPEC_LAW_TRACY_WIDOM_1 = 2
} sbmspec_law_kind;

typedef enum sbmspec_gof_statistic {
  SBMSPEC_GOF_LAMBDA1_TW = 0,
  SBMSPEC_GOF_LSS_NORMAL = 1
} sbmspec_gof_statistic;

typedef struct sbmspec_model sbmspec_model;
typedef struct sbmspec_labels sbmspec_labels;
typedef struct sbmspec_graph sbmspec_graph;
typedef struct sbmspec_sim_config sbmspec_sim_config;
typedef struct sbmspec_sim_result sbmspec_sim_result;

typedef struct sbmspec_test_outcome {
  int statistic;           /* sbmspec_gof_statistic */
  double value;
  double p_value;
  int reject;              /* 1 iff p_value < alpha */
  int k0;
  int label_mode;          /* sbmspec_label_mode */
  int has_misclustering;   /* diagnostics available (truth was supplied) */
  double misclustering_rate;
} sbmspec_test_outcome;

typedef struct sbmspec_summary {
  int statistic;           /* sbmspec_statistic */
  int reference_kind;      /* sbmspec_law_kind */
  int reference_df;        /* chi-square df, 0 otherwise */
  double mean;
  double variance;
  double ks;
  double reject_rate;
  int64_t used;            /* unflagged replications */
  int64_t flagged;
} sbmspec_summary;

const char* sbmspec_version(void);

/* Thread-local message for the most recent failure on this thread. */
const char* sbmspec_last_error(void);

/* ---- Block models -------------------------------------------------- */

/* B is K x K row-major with entries strictly inside (0, 1); sizes holds K
 * community sizes, each >= 2. */
sbmspec_status sbmspec_model_create(int32_t K, const double* B,
                                    const int32_t* sizes,
                                    sbmspec_model** out);

/* Splits n nodes over K communities as evenly as possible (remainders to the
 * lowest-index communities). */
sbmspec_status sbmspec_model_create_balanced(int32_t K, const double* B,
                                             int32_t n, sbmspec_model** out);

void sbmspec_model_destroy(sbmspec_model* model);

int32_t sbmspec_model_n(const sbmspec_model* model);
int32_t sbmspec_model_k(const sbmspec_model* model);

/* min_ratio = K min_k n_k / n; max_ratio = log(K) max_k n_k / n. */
sbmspec_status sbmspec_model_balance(const sbmspec_model* model,
                                     double* min_ratio, double* max_ratio);

/* ---- Labels --------------------------------------------------------- */

/* Canonical ground-truth labels: nodes 1..n_1 get 1, the next n_2 get 2, ... */
sbmspec_status sbmspec_labels_oracle(const sbmspec_model* model,
                                     sbmspec_labels** out);

/* g holds n labels, 1-based, every value in 1..K present. */
sbmspec_status sbmspec_labels_create(const int32_t* g, int32_t n,
                                     sbmspec_labels** out);

void sbmspec_labels_destroy(sbmspec_labels* labels);

int32_t sbmspec_labels_n(const sbmspec_labels* labels);

/* Copies the n labels into out (1-based values). */
sbmspec_status sbmspec_labels_get(const sbmspec_labels* labels, int32_t* out);

/* Spectral clustering of a graph into K communities (top-K adjacency
 * eigenvectors + seeded k-means). */
sbmspec_status sbmspec_labels_spectral(const sbmspec_graph* graph, int32_t K,
                                       uint64_t seed, sbmspec_labels** out);

/* Misclustering rate after the optimal relabeling of estimate against truth. */
sbmspec_status sbmspec_labels_align(const sbmspec_labels* truth,
                                    const sbmspec_labels* estimate,
                                    double* misclustering_rate);

/* ---- Graphs ---------------------------------------------------------- */

/* Bernoulli draw from the model under the given labels. The map from seed to
 * adjacency is pure: equal arguments give bit-identical graphs. */
sbmspec_status sbmspec_graph_sample(const sbmspec_model* model,
                                    const sbmspec_labels* labels,
                                    uint64_t seed, sbmspec_graph** out);

/* Builds an undirected graph on n nodes from m edges (0-based endpoints).
 * Duplicate and mirrored pairs collapse to one edge; self-loops are
 * rejected. */
sbmspec_status sbmspec_graph_from_edges(int32_t n, const int32_t* ei,
                                        const int32_t* ej, int64_t m,
                                        sbmspec_graph** out);

void sbmspec_graph_destroy(sbmspec_graph* graph);

int32_t sbmspec_graph_n(const sbmspec_graph* graph);
int64_t sbmspec_graph_edge_count(const sbmspec_graph* graph);

/* Copies the edges, i < j, ordered lexicographically, into ei/ej (each with
 * capacity sbmspec_graph_edge_count). */
sbmspec_status sbmspec_graph_edges(const sbmspec_graph* graph, int32_t* ei,
                                   int32_t* ej);

/* ---- Reference laws --------------------------------------------------- */

/* df is the chi-square degrees of freedom and is ignored by the other laws. */
sbmspec_status sbmspec_law_cdf(sbmspec_law_kind kind, int32_t df, double x,
                               double* out);
sbmspec_status sbmspec_law_pdf(sbmspec_law_kind kind, int32_t df, double x,
                               double* out);
sbmspec_status sbmspec_law_quantile(sbmspec_law_kind kind, int32_t df,
                                    double p, double* out);

/* Scaled largest eigenvalues of `reps` seeded GOE draws of size m, sorted
 * ascending, written to out (capacity reps). threads <= 0 uses all cores. */
sbmspec_status sbmspec_tw1_calibrate(int32_t m, int32_t reps, uint64_t seed,
                                     int32_t threads, double* out);

/* ---- Goodness-of-fit tests -------------------------------------------- */

/* Tests H0: the graph is an SBM with k0 communities. truth may be NULL for
 * spectral label mode; it is required for oracle mode. seed drives spectral
 * clustering restarts. */
sbmspec_status sbmspec_gof_test(const sbmspec_graph* graph, int32_t k0,
                                sbmspec_gof_statistic statistic, double alpha,
                                sbmspec_label_mode label_mode,
                                const sbmspec_labels* truth, uint64_t seed,
                                sbmspec_test_outcome* out);

/* Sequential scan k0 = 1..kmax stopping at the first acceptance. *k_hat is
 * kmax + 1 when every k0 is rejected. trail (capacity kmax) receives the
 * outcomes actually computed; *trail_len their number. */
sbmspec_status sbmspec_estimate_k(const sbmspec_graph* graph, int32_t kmax,
                                  sbmspec_gof_statistic statistic,
                                  double alpha, uint64_t seed, int32_t* k_hat,
                                  sbmspec_test_outcome* trail,
                                  int32_t* trail_len);

/* ---- Monte Carlo ------------------------------------------------------- */

sbmspec_status sbmspec_sim_config_create(const sbmspec_model* model,
                                         int32_t reps, uint64_t seed,
                                         sbmspec_label_mode label_mode,
                                         double alpha,
                                         sbmspec_sim_config** out);

void sbmspec_sim_config_destroy(sbmspec_sim_config* config);

sbmspec_status sbmspec_sim_config_add_statistic(sbmspec_sim_config* config,
                                                sbmspec_statistic statistic);

/* Runs the configured replications. threads <= 0 uses all cores; the result
 * is identical for any thread count. */
sbmspec_status sbmspec_simulate(const sbmspec_sim_config* config,
                                int32_t threads, sbmspec_sim_result** out);

void sbmspec_sim_result_destroy(sbmspec_sim_result* result);

int64_t sbmspec_sim_result_rows(const sbmspec_sim_result* result);

/* Row layout: replications in order, the configured statistics within each.
 * value is NaN and *flagged is 1 for replications whose plug-in estimate
 * degenerated. */
sbmspec_status sbmspec_sim_result_row(const sbmspec_sim_result* result,
                                      int64_t index, int32_t* rep,
                                      int32_t* statistic, double* value,
                                      uint64_t* derived_seed, int32_t* flagged);

/* Summary of one configured statistic against its reference law. */
sbmspec_status sbmspec_sim_result_summary(const sbmspec_sim_result* result,
                                          sbmspec_statistic statistic,
                                          double alpha, sbmspec_summary* out);

const char* sbmspec_statistic_name(sbmspec_statistic statistic);

/* Parses a statistic name; returns SBMSPEC_ERR_INVALID_ARGUMENT on unknown
 * names. */
sbmspec_status sbmspec_statistic_from_name(const char* name,
                                           sbmspec_statistic* out);

#ifdef __cplusplus
}
#endif

#endif /* SBMSPEC_H */
