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

#include "simulation.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "errors.hpp"
#include "perturbation.hpp"
#include "rng.hpp"
#include "spectral.hpp"

namespace sbmspec {

const char* statistic_name(Statistic stat) {
  switch (stat) {
    case Statistic::chi_simple_cross: return "chi_simple_cross";
    case Statistic::chi_simple_sq: return "chi_simple_sq";
    case Statistic::chi_composite_sq: return "chi_composite_sq";
    case Statistic::z_composite_cross: return "z_composite_cross";
    case Statistic::z_bias_cross: return "z_bias_cross";
    case Statistic::z_astar_sq: return "z_astar_sq";
    case Statistic::tw_lambda1: return "tw_lambda1";
    case Statistic::z_lss: return "z_lss";
  }
  return "unknown";
}

Statistic statistic_from_name(const std::string& name) {
  for (Statistic stat : all_statistics()) {
    if (name == statistic_name(stat)) return stat;
  }
  fail(ErrorCode::invalid_argument, "unknown statistic '" + name + "'");
}

std::vector<Statistic> all_statistics() {
  return {Statistic::chi_simple_cross, Statistic::chi_simple_sq,
          Statistic::chi_composite_sq, Statistic::z_composite_cross,
          Statistic::z_bias_cross,     Statistic::z_astar_sq,
          Statistic::tw_lambda1,       Statistic::z_lss};
}

ReferenceLaw reference_for(Statistic stat, int K) {
  switch (stat) {
    case Statistic::chi_simple_cross:
    case Statistic::chi_simple_sq:
    case Statistic::chi_composite_sq:
      return ReferenceLaw::chi_square(K * (K + 1) / 2);
    case Statistic::z_composite_cross:
    case Statistic::z_bias_cross:
    case Statistic::z_astar_sq:
    case Statistic::z_lss:
      return ReferenceLaw::standard_normal();
    case Statistic::tw_lambda1:
      return ReferenceLaw::tracy_widom_1();
  }
  fail(ErrorCode::invalid_argument, "unknown statistic");
}

double statistic_p_value(Statistic stat, const ReferenceLaw& law,
                         double value) {
  switch (stat) {
    case Statistic::chi_simple_cross:
    case Statistic::chi_simple_sq:
    case Statistic::chi_composite_sq:
    case Statistic::tw_lambda1:
      return 1.0 - law.cdf(value);
    case Statistic::z_composite_cross:
    case Statistic::z_bias_cross:
    case Statistic::z_astar_sq:
    case Statistic::z_lss:
      return 2.0 * (1.0 - law.cdf(std::abs(value)));
  }
  fail(ErrorCode::invalid_argument, "unknown statistic");
}

namespace {

double pick_statistic(const StandardizedStatistics& s, Statistic stat) {
  switch (stat) {
    case Statistic::chi_simple_cross: return s.chi_simple_cross;
    case Statistic::chi_simple_sq: return s.chi_simple_sq;
    case Statistic::chi_composite_sq: return s.chi_composite_sq;
    case Statistic::z_composite_cross: return s.z_composite_cross;
    case Statistic::z_bias_cross: return s.z_bias_cross;
    case Statistic::z_astar_sq: return s.z_astar_sq;
    case Statistic::tw_lambda1: return s.tw_lambda1;
    case Statistic::z_lss: return s.z_lss;
  }
  fail(ErrorCode::invalid_argument, "unknown statistic");
}

}  // namespace

ReplicationTable run_replications(const SimulationConfig& config,
                                  int threads) {
  require(config.reps >= 0, ErrorCode::invalid_argument,
          "reps must be nonnegative");
  require(!config.statistics.empty(), ErrorCode::invalid_argument,
          "a run needs at least one statistic");

  ReplicationTable table;
  table.config = config;
  if (config.reps == 0) return table;

  const int n = config.model.n;
  const int K = config.model.K;
  const std::size_t n_stats = config.statistics.size();
  const LabelVector truth = oracle_labels(config.model);
  const Eigen::MatrixXd P = probability_matrix(config.model, truth);

  TraceOptions options;
  options.l_source = LSource::true_p;
  options.with_lambda1 = false;
  options.with_cube = false;
  for (Statistic stat : config.statistics) {
    if (stat == Statistic::tw_lambda1) options.with_lambda1 = true;
    if (stat == Statistic::z_lss) options.with_cube = true;
  }

  std::vector<double> values(static_cast<std::size_t>(config.reps) * n_stats);
  std::vector<std::uint8_t> flagged(config.reps, 0);

  const auto run_one = [&](int rep) {
    const std::uint64_t seed_r = derive_seed(config.seed, rep);
    const Eigen::MatrixXd A = sample_adjacency(config.model, truth, seed_r);
    try {
      const LabelVector labels =
          estimate_labels(A, K, config.label_mode, &truth,
                          derive_seed(seed_r, 0x1ABE15ull));
      const BlockEstimate estimate = estimate_block_matrix(A, labels, K);
      const PerturbationStack stack = build_stack(A, P, estimate);
      const TraceReport report =
          trace_report(stack, config.model, estimate, options);
      const StandardizedStatistics stats = standardize(report, n, K);

      // Exact-identity audit on every replication.
      if (std::abs(report.tr_ahat_sq - (n - 1)) > 1e-9 * n) {
        throw std::logic_error("audit failed: tr(ahat^2) deviates from n - 1");
      }
      if (config.label_mode == LabelMode::oracle &&
          std::abs(stats.chi_simple_cross - stats.chi_simple_sq) >
              1e-10 * n * (1.0 + report.eta)) {
        throw std::logic_error(
            "audit failed: the two simple chi-square routes disagree");
      }

      for (std::size_t s = 0; s < n_stats; ++s) {
        values[rep * n_stats + s] = pick_statistic(stats, config.statistics[s]);
      }
    } catch (const Error& error) {
      // Data-dependent per-replication failures become flagged rows; anything
      // else is a real error and aborts the run.
      if (error.code() != ErrorCode::degenerate_estimate &&
          error.code() != ErrorCode::community_too_small &&
          error.code() != ErrorCode::empty_cluster) {
        throw;
      }
      flagged[rep] = 1;
      for (std::size_t s = 0; s < n_stats; ++s) {
        values[rep * n_stats + s] = std::numeric_limits<double>::quiet_NaN();
      }
    }
  };

  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  threads = std::min<int>(threads, config.reps);
  if (threads <= 1) {
    for (int rep = 0; rep < config.reps; ++rep) run_one(rep);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto worker = [&] {
      for (;;) {
        const int rep = next.fetch_add(1);
        if (rep >= config.reps) return;
        try {
          run_one(rep);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();
    if (failure) std::rethrow_exception(failure);
  }

  table.rows.reserve(values.size());
  for (int rep = 0; rep < config.reps; ++rep) {
    table.flagged_reps += flagged[rep];
    for (std::size_t s = 0; s < n_stats; ++s) {
      ReplicationRow row;
      row.rep = rep;
      row.statistic = config.statistics[s];
      row.value = values[rep * n_stats + s];
      row.derived_seed = derive_seed(config.seed, rep);
      row.flagged = flagged[rep] != 0;
      table.rows.push_back(row);
    }
  }
  if (table.flagged_reps > 0.01 * config.reps) {
    fail(ErrorCode::degenerate_estimate,
         std::to_string(table.flagged_reps) + " of " +
             std::to_string(config.reps) +
             " replications had a degenerate plug-in estimate (> 1% budget)");
  }
  return table;
}

EmpiricalDistributionReport summarize(const ReplicationTable& table,
                                      double alpha) {
  require(alpha > 0.0 && alpha < 1.0, ErrorCode::invalid_argument,
          "alpha must lie in (0, 1)");
  EmpiricalDistributionReport report;
  report.alpha = alpha;
  const int K = table.config.model.K;
  for (Statistic stat : table.config.statistics) {
    StatisticSummary summary;
    summary.statistic = stat;
    summary.reference = reference_for(stat, K);
    std::vector<double> sample;
    for (const ReplicationRow& row : table.rows) {
      if (row.statistic != stat) continue;
      if (row.flagged) {
        summary.flagged += 1;
      } else {
        sample.push_back(row.value);
      }
    }
    if (sample.empty()) {
      fail(ErrorCode::all_flagged,
           std::string("all replications flagged for ") +
               statistic_name(stat));
    }
    summary.used = static_cast<int>(sample.size());
    double mean = 0.0;
    for (double v : sample) mean += v;
    mean /= sample.size();
    double variance = 0.0;
    for (double v : sample) variance += (v - mean) * (v - mean);
    variance = sample.size() > 1 ? variance / (sample.size() - 1) : 0.0;
    summary.mean = mean;
    summary.variance = variance;
    int rejections = 0;
    for (double v : sample) {
      if (statistic_p_value(stat, summary.reference, v) < alpha) ++rejections;
    }
    summary.reject_rate = static_cast<double>(rejections) / sample.size();
    summary.ks = ks_distance(sample, summary.reference);
    report.statistics.push_back(summary);
  }
  return report;
}

}  // namespace sbmspec
