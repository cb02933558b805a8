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

#ifndef SBMSPEC_SIMULATION_HPP
#define SBMSPEC_SIMULATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "block_model.hpp"
#include "estimation.hpp"
#include "reference_laws.hpp"

namespace sbmspec {

enum class Statistic {
  chi_simple_cross,   // -(n/2) tr(astar delta)
  chi_simple_sq,      // (n/2) tr(delta^2)
  chi_composite_sq,   // (n/2) tr(delta_tilde^2)
  z_composite_cross,  // 2 tr(astar delta_tilde) / sqrt(2L-2)
  z_bias_cross,       // 2 tr(astar a_check) / sqrt(2L-2)
  z_astar_sq,         // (tr(astar^2) - (n-1)) / sqrt(2L-2)
  tw_lambda1,         // n^{2/3} (lambda1(ahat) - 2)
  z_lss,              // tr(ahat^3) / sqrt(6)
};

const char* statistic_name(Statistic stat);
Statistic statistic_from_name(const std::string& name);
std::vector<Statistic> all_statistics();

struct SimulationConfig {
  BlockModel model;
  int reps = 0;
  std::uint64_t seed = 0;
  LabelMode label_mode = LabelMode::oracle;
  std::vector<Statistic> statistics;
  double alpha = 0.05;
};

struct ReplicationRow {
  int rep = 0;
  Statistic statistic = Statistic::chi_simple_cross;
  double value = 0.0;
  std::uint64_t derived_seed = 0;
  bool flagged = false;  // value is NaN: the plug-in degenerated for this rep
};

struct ReplicationTable {
  SimulationConfig config;
  std::vector<ReplicationRow> rows;  // reps x |statistics|, rep-major
  int flagged_reps = 0;
};

struct StatisticSummary {
  Statistic statistic = Statistic::chi_simple_cross;
  // Bound law: chi_* -> chi2_{K(K+1)/2}, z_* -> N(0,1), tw_lambda1 -> TW1.
  ReferenceLaw reference = ReferenceLaw::standard_normal();
  double mean = 0.0;
  double variance = 0.0;
  double ks = 0.0;
  double reject_rate = 0.0;
  int flagged = 0;
  int used = 0;
};

struct EmpiricalDistributionReport {
  double alpha = 0.05;
  std::vector<StatisticSummary> statistics;
};

// Runs `config.reps` independent replications: sample an adjacency from the
// model, estimate labels and block probabilities, build the perturbation
// stack, and record the requested statistics. Replication r uses the
// substream derive_seed(config.seed, r), so the table is a pure function of
// the config and is identical for any thread count (threads <= 0 uses the
// hardware count).
//
// A replication whose plug-in estimate saturates a block is recorded as
// flagged rows rather than aborting the run; the run fails only when more
// than 1% of replications are flagged.
ReplicationTable run_replications(const SimulationConfig& config,
                                  int threads = 0);

EmpiricalDistributionReport summarize(const ReplicationTable& table,
                                      double alpha);

ReferenceLaw reference_for(Statistic stat, int K);

// The rejection tail convention per statistic: one-sided upper for the
// chi-square and Tracy-Widom statistics, two-sided for the normal ones.
double statistic_p_value(Statistic stat, const ReferenceLaw& law, double value);

}  // namespace sbmspec

#endif  // SBMSPEC_SIMULATION_HPP
