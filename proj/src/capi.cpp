// Copyright 2026 The sbmspec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sbmspec.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "block_model.hpp"
#include "errors.hpp"
#include "estimation.hpp"
#include "gof.hpp"
#include "reference_laws.hpp"
#include "simulation.hpp"
#include "spectral.hpp"

struct sbmspec_model {
  sbmspec::BlockModel impl;
};

struct sbmspec_labels {
  sbmspec::LabelVector impl;
};

struct sbmspec_graph {
  Eigen::MatrixXd adjacency;
};

struct sbmspec_sim_config {
  sbmspec::SimulationConfig impl;
};

struct sbmspec_sim_result {
  sbmspec::ReplicationTable table;
};

namespace {

thread_local std::string g_last_error;

sbmspec_status map_code(sbmspec::ErrorCode code) {
  using sbmspec::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return SBMSPEC_ERR_INVALID_ARGUMENT;
    case ErrorCode::non_symmetric_b: return SBMSPEC_ERR_NON_SYMMETRIC_B;
    case ErrorCode::probability_out_of_range:
      return SBMSPEC_ERR_PROBABILITY_OUT_OF_RANGE;
    case ErrorCode::community_too_small: return SBMSPEC_ERR_COMMUNITY_TOO_SMALL;
    case ErrorCode::label_out_of_range: return SBMSPEC_ERR_LABEL_OUT_OF_RANGE;
    case ErrorCode::k_too_large: return SBMSPEC_ERR_K_TOO_LARGE;
    case ErrorCode::empty_cluster: return SBMSPEC_ERR_EMPTY_CLUSTER;
    case ErrorCode::mismatched_length: return SBMSPEC_ERR_MISMATCHED_LENGTH;
    case ErrorCode::degenerate_estimate:
      return SBMSPEC_ERR_DEGENERATE_ESTIMATE;
    case ErrorCode::clamped_stack: return SBMSPEC_ERR_CLAMPED_STACK;
    case ErrorCode::non_symmetric: return SBMSPEC_ERR_NON_SYMMETRIC;
    case ErrorCode::no_convergence: return SBMSPEC_ERR_NO_CONVERGENCE;
    case ErrorCode::degenerate_variance:
      return SBMSPEC_ERR_DEGENERATE_VARIANCE;
    case ErrorCode::invalid_law: return SBMSPEC_ERR_INVALID_LAW;
    case ErrorCode::insufficient_reps: return SBMSPEC_ERR_INSUFFICIENT_REPS;
    case ErrorCode::empty_sample: return SBMSPEC_ERR_EMPTY_SAMPLE;
    case ErrorCode::all_flagged: return SBMSPEC_ERR_ALL_FLAGGED;
    case ErrorCode::parse_error: return SBMSPEC_ERR_PARSE;
    case ErrorCode::schema_violation: return SBMSPEC_ERR_SCHEMA;
    case ErrorCode::self_loop: return SBMSPEC_ERR_SELF_LOOP;
    case ErrorCode::node_index_out_of_range:
      return SBMSPEC_ERR_NODE_INDEX_OUT_OF_RANGE;
    case ErrorCode::io_error: return SBMSPEC_ERR_IO;
  }
  return SBMSPEC_ERR_INTERNAL;
}

template <typename Fn>
sbmspec_status wrap(Fn&& fn) {
  try {
    fn();
    return SBMSPEC_OK;
  } catch (const sbmspec::Error& error) {
    g_last_error = error.what();
    return map_code(error.code());
  } catch (const std::exception& error) {
    g_last_error = error.what();
    return SBMSPEC_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SBMSPEC_ERR_INTERNAL;
  }
}

sbmspec_status invalid(const char* message) {
  g_last_error = message;
  return SBMSPEC_ERR_INVALID_ARGUMENT;
}

sbmspec::LabelMode to_label_mode(sbmspec_label_mode mode) {
  return mode == SBMSPEC_LABELS_ORACLE ? sbmspec::LabelMode::oracle
                                       : sbmspec::LabelMode::spectral;
}

sbmspec::GofStatistic to_gof_statistic(sbmspec_gof_statistic statistic) {
  return statistic == SBMSPEC_GOF_LAMBDA1_TW
             ? sbmspec::GofStatistic::lambda1_tw
             : sbmspec::GofStatistic::lss_normal;
}

sbmspec::Statistic to_statistic(sbmspec_statistic statistic) {
  using sbmspec::Statistic;
  switch (statistic) {
    case SBMSPEC_STAT_CHI_SIMPLE_CROSS: return Statistic::chi_simple_cross;
    case SBMSPEC_STAT_CHI_SIMPLE_SQ: return Statistic::chi_simple_sq;
    case SBMSPEC_STAT_CHI_COMPOSITE_SQ: return Statistic::chi_composite_sq;
    case SBMSPEC_STAT_Z_COMPOSITE_CROSS: return Statistic::z_composite_cross;
    case SBMSPEC_STAT_Z_BIAS_CROSS: return Statistic::z_bias_cross;
    case SBMSPEC_STAT_Z_ASTAR_SQ: return Statistic::z_astar_sq;
    case SBMSPEC_STAT_TW_LAMBDA1: return Statistic::tw_lambda1;
    case SBMSPEC_STAT_Z_LSS: return Statistic::z_lss;
  }
  sbmspec::fail(sbmspec::ErrorCode::invalid_argument, "unknown statistic");
}

sbmspec_statistic from_statistic(sbmspec::Statistic statistic) {
  using sbmspec::Statistic;
  switch (statistic) {
    case Statistic::chi_simple_cross: return SBMSPEC_STAT_CHI_SIMPLE_CROSS;
    case Statistic::chi_simple_sq: return SBMSPEC_STAT_CHI_SIMPLE_SQ;
    case Statistic::chi_composite_sq: return SBMSPEC_STAT_CHI_COMPOSITE_SQ;
    case Statistic::z_composite_cross: return SBMSPEC_STAT_Z_COMPOSITE_CROSS;
    case Statistic::z_bias_cross: return SBMSPEC_STAT_Z_BIAS_CROSS;
    case Statistic::z_astar_sq: return SBMSPEC_STAT_Z_ASTAR_SQ;
    case Statistic::tw_lambda1: return SBMSPEC_STAT_TW_LAMBDA1;
    case Statistic::z_lss: return SBMSPEC_STAT_Z_LSS;
  }
  return SBMSPEC_STAT_CHI_SIMPLE_CROSS;
}

sbmspec::ReferenceLaw to_law(sbmspec_law_kind kind, int df) {
  switch (kind) {
    case SBMSPEC_LAW_CHI_SQUARE: return sbmspec::ReferenceLaw::chi_square(df);
    case SBMSPEC_LAW_STANDARD_NORMAL:
      return sbmspec::ReferenceLaw::standard_normal();
    case SBMSPEC_LAW_TRACY_WIDOM_1:
      return sbmspec::ReferenceLaw::tracy_widom_1();
  }
  sbmspec::fail(sbmspec::ErrorCode::invalid_law, "unknown law kind");
}

void fill_outcome(const sbmspec::TestOutcome& outcome,
                  sbmspec_test_outcome* out) {
  out->statistic = outcome.kind == sbmspec::GofStatistic::lambda1_tw
                       ? SBMSPEC_GOF_LAMBDA1_TW
                       : SBMSPEC_GOF_LSS_NORMAL;
  out->value = outcome.value;
  out->p_value = outcome.p_value;
  out->reject = outcome.reject ? 1 : 0;
  out->k0 = outcome.k0_tested;
  out->label_mode = outcome.label_mode == sbmspec::LabelMode::oracle
                        ? SBMSPEC_LABELS_ORACLE
                        : SBMSPEC_LABELS_SPECTRAL;
  out->has_misclustering = outcome.has_misclustering ? 1 : 0;
  out->misclustering_rate = outcome.misclustering_rate;
}

}  // namespace

extern "C" {

const char* sbmspec_version(void) { return "1.0.0"; }

const char* sbmspec_last_error(void) { return g_last_error.c_str(); }

sbmspec_status sbmspec_model_create(int32_t K, const double* B,
                                    const int32_t* sizes,
                                    sbmspec_model** out) {
  if (!B || !sizes || !out) return invalid("null argument");
  return wrap([&] {
    Eigen::MatrixXd b(K, K);
    for (int u = 0; u < K; ++u) {
      for (int v = 0; v < K; ++v) b(u, v) = B[u * K + v];
    }
    std::vector<int> s(sizes, sizes + K);
    auto model = std::make_unique<sbmspec_model>();
    model->impl = sbmspec::build_model(K, b, std::move(s));
    *out = model.release();
  });
}

sbmspec_status sbmspec_model_create_balanced(int32_t K, const double* B,
                                             int32_t n, sbmspec_model** out) {
  if (!B || !out) return invalid("null argument");
  return wrap([&] {
    Eigen::MatrixXd b(K, K);
    for (int u = 0; u < K; ++u) {
      for (int v = 0; v < K; ++v) b(u, v) = B[u * K + v];
    }
    auto model = std::make_unique<sbmspec_model>();
    model->impl = sbmspec::build_model(K, b, sbmspec::balanced_sizes(n, K));
    *out = model.release();
  });
}

void sbmspec_model_destroy(sbmspec_model* model) { delete model; }

int32_t sbmspec_model_n(const sbmspec_model* model) {
  return model ? model->impl.n : 0;
}

int32_t sbmspec_model_k(const sbmspec_model* model) {
  return model ? model->impl.K : 0;
}

sbmspec_status sbmspec_model_balance(const sbmspec_model* model,
                                     double* min_ratio, double* max_ratio) {
  if (!model || !min_ratio || !max_ratio) return invalid("null argument");
  return wrap([&] {
    const sbmspec::BalanceDiagnostics d = sbmspec::check_assumptions(model->impl);
    *min_ratio = d.min_ratio;
    *max_ratio = d.max_ratio;
  });
}

sbmspec_status sbmspec_labels_oracle(const sbmspec_model* model,
                                     sbmspec_labels** out) {
  if (!model || !out) return invalid("null argument");
  return wrap([&] {
    auto labels = std::make_unique<sbmspec_labels>();
    labels->impl = sbmspec::oracle_labels(model->impl);
    *out = labels.release();
  });
}

sbmspec_status sbmspec_labels_create(const int32_t* g, int32_t n,
                                     sbmspec_labels** out) {
  if (!g || !out) return invalid("null argument");
  return wrap([&] {
    sbmspec::require(n >= 1, sbmspec::ErrorCode::invalid_argument,
                     "need at least one label");
    sbmspec::LabelVector labels(g, g + n);
    int K = 0;
    for (int value : labels) K = std::max(K, value);
    sbmspec::require(K >= 1, sbmspec::ErrorCode::label_out_of_range,
                     "labels must be positive");
    const std::vector<long long> counts = sbmspec::community_counts(labels, K);
    for (int k = 0; k < K; ++k) {
      sbmspec::require(counts[k] > 0, sbmspec::ErrorCode::label_out_of_range,
                       "community " + std::to_string(k + 1) +
                           " never appears in the labels");
    }
    auto handle = std::make_unique<sbmspec_labels>();
    handle->impl = std::move(labels);
    *out = handle.release();
  });
}

void sbmspec_labels_destroy(sbmspec_labels* labels) { delete labels; }

int32_t sbmspec_labels_n(const sbmspec_labels* labels) {
  return labels ? static_cast<int32_t>(labels->impl.size()) : 0;
}

sbmspec_status sbmspec_labels_get(const sbmspec_labels* labels, int32_t* out) {
  if (!labels || !out) return invalid("null argument");
  std::copy(labels->impl.begin(), labels->impl.end(), out);
  return SBMSPEC_OK;
}

sbmspec_status sbmspec_labels_spectral(const sbmspec_graph* graph, int32_t K,
                                       uint64_t seed, sbmspec_labels** out) {
  if (!graph || !out) return invalid("null argument");
  return wrap([&] {
    auto labels = std::make_unique<sbmspec_labels>();
    labels->impl = sbmspec::estimate_labels(
        graph->adjacency, K, sbmspec::LabelMode::spectral, nullptr, seed);
    *out = labels.release();
  });
}

sbmspec_status sbmspec_labels_align(const sbmspec_labels* truth,
                                    const sbmspec_labels* estimate,
                                    double* misclustering_rate) {
  if (!truth || !estimate || !misclustering_rate) {
    return invalid("null argument");
  }
  return wrap([&] {
    *misclustering_rate =
        sbmspec::align_labels(truth->impl, estimate->impl).misclustering_rate;
  });
}

sbmspec_status sbmspec_graph_sample(const sbmspec_model* model,
                                    const sbmspec_labels* labels,
                                    uint64_t seed, sbmspec_graph** out) {
  if (!model || !labels || !out) return invalid("null argument");
  return wrap([&] {
    auto graph = std::make_unique<sbmspec_graph>();
    graph->adjacency =
        sbmspec::sample_adjacency(model->impl, labels->impl, seed);
    *out = graph.release();
  });
}

sbmspec_status sbmspec_graph_from_edges(int32_t n, const int32_t* ei,
                                        const int32_t* ej, int64_t m,
                                        sbmspec_graph** out) {
  if (!out || (m > 0 && (!ei || !ej))) return invalid("null argument");
  return wrap([&] {
    sbmspec::require(n >= 1, sbmspec::ErrorCode::invalid_argument,
                     "n must be >= 1");
    auto graph = std::make_unique<sbmspec_graph>();
    graph->adjacency = Eigen::MatrixXd::Zero(n, n);
    for (int64_t e = 0; e < m; ++e) {
      const int32_t i = ei[e];
      const int32_t j = ej[e];
      if (i < 0 || i >= n || j < 0 || j >= n) {
        sbmspec::fail(sbmspec::ErrorCode::node_index_out_of_range,
                      "edge endpoint " + std::to_string(std::max(i, j)) +
                          " is outside 0.." + std::to_string(n - 1));
      }
      if (i == j) {
        sbmspec::fail(sbmspec::ErrorCode::self_loop,
                      "self-loop at node " + std::to_string(i));
      }
      graph->adjacency(i, j) = 1.0;
      graph->adjacency(j, i) = 1.0;
    }
    *out = graph.release();
  });
}

void sbmspec_graph_destroy(sbmspec_graph* graph) { delete graph; }

int32_t sbmspec_graph_n(const sbmspec_graph* graph) {
  return graph ? static_cast<int32_t>(graph->adjacency.rows()) : 0;
}

int64_t sbmspec_graph_edge_count(const sbmspec_graph* graph) {
  if (!graph) return 0;
  const int n = static_cast<int>(graph->adjacency.rows());
  int64_t count = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (graph->adjacency(i, j) != 0.0) ++count;
    }
  }
  return count;
}

sbmspec_status sbmspec_graph_edges(const sbmspec_graph* graph, int32_t* ei,
                                   int32_t* ej) {
  if (!graph || !ei || !ej) return invalid("null argument");
  const int n = static_cast<int>(graph->adjacency.rows());
  int64_t next = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (graph->adjacency(i, j) != 0.0) {
        ei[next] = i;
        ej[next] = j;
        ++next;
      }
    }
  }
  return SBMSPEC_OK;
}

sbmspec_status sbmspec_law_cdf(sbmspec_law_kind kind, int32_t df, double x,
                               double* out) {
  if (!out) return invalid("null argument");
  return wrap([&] { *out = to_law(kind, df).cdf(x); });
}

sbmspec_status sbmspec_law_pdf(sbmspec_law_kind kind, int32_t df, double x,
                               double* out) {
  if (!out) return invalid("null argument");
  return wrap([&] { *out = to_law(kind, df).pdf(x); });
}

sbmspec_status sbmspec_law_quantile(sbmspec_law_kind kind, int32_t df,
                                    double p, double* out) {
  if (!out) return invalid("null argument");
  return wrap([&] { *out = to_law(kind, df).quantile(p); });
}

sbmspec_status sbmspec_tw1_calibrate(int32_t m, int32_t reps, uint64_t seed,
                                     int32_t threads, double* out) {
  if (!out) return invalid("null argument");
  return wrap([&] {
    const std::vector<double> values =
        sbmspec::calibrate_tw1(m, reps, seed, threads);
    std::copy(values.begin(), values.end(), out);
  });
}

sbmspec_status sbmspec_gof_test(const sbmspec_graph* graph, int32_t k0,
                                sbmspec_gof_statistic statistic, double alpha,
                                sbmspec_label_mode label_mode,
                                const sbmspec_labels* truth, uint64_t seed,
                                sbmspec_test_outcome* out) {
  if (!graph || !out) return invalid("null argument");
  return wrap([&] {
    const sbmspec::TestOutcome outcome = sbmspec::gof_test(
        graph->adjacency, k0, to_gof_statistic(statistic), alpha,
        to_label_mode(label_mode), truth ? &truth->impl : nullptr, seed);
    fill_outcome(outcome, out);
  });
}

sbmspec_status sbmspec_estimate_k(const sbmspec_graph* graph, int32_t kmax,
                                  sbmspec_gof_statistic statistic,
                                  double alpha, uint64_t seed, int32_t* k_hat,
                                  sbmspec_test_outcome* trail,
                                  int32_t* trail_len) {
  if (!graph || !k_hat) return invalid("null argument");
  return wrap([&] {
    const sbmspec::KSelectionResult result = sbmspec::estimate_num_communities(
        graph->adjacency, kmax, to_gof_statistic(statistic), alpha, seed);
    *k_hat = result.k_hat;
    if (trail_len) *trail_len = static_cast<int32_t>(result.trail.size());
    if (trail) {
      for (std::size_t i = 0; i < result.trail.size(); ++i) {
        fill_outcome(result.trail[i], &trail[i]);
      }
    }
  });
}

sbmspec_status sbmspec_sim_config_create(const sbmspec_model* model,
                                         int32_t reps, uint64_t seed,
                                         sbmspec_label_mode label_mode,
                                         double alpha,
                                         sbmspec_sim_config** out) {
  if (!model || !out) return invalid("null argument");
  return wrap([&] {
    sbmspec::require(reps >= 0, sbmspec::ErrorCode::invalid_argument,
                     "reps must be nonnegative");
    sbmspec::require(alpha > 0.0 && alpha < 1.0,
                     sbmspec::ErrorCode::invalid_argument,
                     "alpha must lie in (0, 1)");
    auto config = std::make_unique<sbmspec_sim_config>();
    config->impl.model = model->impl;
    config->impl.reps = reps;
    config->impl.seed = seed;
    config->impl.label_mode = to_label_mode(label_mode);
    config->impl.alpha = alpha;
    *out = config.release();
  });
}

void sbmspec_sim_config_destroy(sbmspec_sim_config* config) { delete config; }

sbmspec_status sbmspec_sim_config_add_statistic(sbmspec_sim_config* config,
                                                sbmspec_statistic statistic) {
  if (!config) return invalid("null argument");
  return wrap([&] {
    const sbmspec::Statistic value = to_statistic(statistic);
    for (sbmspec::Statistic existing : config->impl.statistics) {
      sbmspec::require(existing != value, sbmspec::ErrorCode::invalid_argument,
                       "statistic already configured");
    }
    config->impl.statistics.push_back(value);
  });
}

sbmspec_status sbmspec_simulate(const sbmspec_sim_config* config,
                                int32_t threads, sbmspec_sim_result** out) {
  if (!config || !out) return invalid("null argument");
  return wrap([&] {
    auto result = std::make_unique<sbmspec_sim_result>();
    result->table = sbmspec::run_replications(config->impl, threads);
    *out = result.release();
  });
}

void sbmspec_sim_result_destroy(sbmspec_sim_result* result) { delete result; }

int64_t sbmspec_sim_result_rows(const sbmspec_sim_result* result) {
  return result ? static_cast<int64_t>(result->table.rows.size()) : 0;
}

sbmspec_status sbmspec_sim_result_row(const sbmspec_sim_result* result,
                                      int64_t index, int32_t* rep,
                                      int32_t* statistic, double* value,
                                      uint64_t* derived_seed,
                                      int32_t* flagged) {
  if (!result) return invalid("null argument");
  if (index < 0 || index >= static_cast<int64_t>(result->table.rows.size())) {
    return invalid("row index out of range");
  }
  const sbmspec::ReplicationRow& row = result->table.rows[index];
  if (rep) *rep = row.rep;
  if (statistic) *statistic = from_statistic(row.statistic);
  if (value) *value = row.value;
  if (derived_seed) *derived_seed = row.derived_seed;
  if (flagged) *flagged = row.flagged ? 1 : 0;
  return SBMSPEC_OK;
}

sbmspec_status sbmspec_sim_result_summary(const sbmspec_sim_result* result,
                                          sbmspec_statistic statistic,
                                          double alpha, sbmspec_summary* out) {
  if (!result || !out) return invalid("null argument");
  return wrap([&] {
    const sbmspec::EmpiricalDistributionReport report =
        sbmspec::summarize(result->table, alpha);
    const sbmspec::Statistic wanted = to_statistic(statistic);
    for (const sbmspec::StatisticSummary& summary : report.statistics) {
      if (summary.statistic != wanted) continue;
      out->statistic = from_statistic(summary.statistic);
      switch (summary.reference.kind()) {
        case sbmspec::LawKind::chi_square:
          out->reference_kind = SBMSPEC_LAW_CHI_SQUARE;
          break;
        case sbmspec::LawKind::standard_normal:
          out->reference_kind = SBMSPEC_LAW_STANDARD_NORMAL;
          break;
        case sbmspec::LawKind::tracy_widom_1:
          out->reference_kind = SBMSPEC_LAW_TRACY_WIDOM_1;
          break;
      }
      out->reference_df = summary.reference.df();
      out->mean = summary.mean;
      out->variance = summary.variance;
      out->ks = summary.ks;
      out->reject_rate = summary.reject_rate;
      out->used = summary.used;
      out->flagged = summary.flagged;
      return;
    }
    sbmspec::fail(sbmspec::ErrorCode::invalid_argument,
                  "statistic was not configured for this run");
  });
}

const char* sbmspec_statistic_name(sbmspec_statistic statistic) {
  switch (statistic) {
    case SBMSPEC_STAT_CHI_SIMPLE_CROSS:
    case SBMSPEC_STAT_CHI_SIMPLE_SQ:
    case SBMSPEC_STAT_CHI_COMPOSITE_SQ:
    case SBMSPEC_STAT_Z_COMPOSITE_CROSS:
    case SBMSPEC_STAT_Z_BIAS_CROSS:
    case SBMSPEC_STAT_Z_ASTAR_SQ:
    case SBMSPEC_STAT_TW_LAMBDA1:
    case SBMSPEC_STAT_Z_LSS:
      return sbmspec::statistic_name(to_statistic(statistic));
  }
  return "unknown";
}

sbmspec_status sbmspec_statistic_from_name(const char* name,
                                           sbmspec_statistic* out) {
  if (!name || !out) return invalid("null argument");
  return wrap([&] { *out = from_statistic(sbmspec::statistic_from_name(name)); });
}

}  // extern "C"
