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

#ifndef SBMSPEC_CLI_LIB_HPP
#define SBMSPEC_CLI_LIB_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sbmspec.h"

namespace sbmspec_cli {

// Exit codes of the tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;
inline constexpr int kExitReject = 3;

// Raised for failures of input files or library calls; main maps it to
// kExitRuntime.
class RuntimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parsed simulation configuration, ready to feed the C API.
struct RunConfig {
  int n = 0;
  int K = 0;
  std::vector<double> B;  // K x K row-major
  std::optional<std::vector<int32_t>> sizes;
  int reps = 0;
  std::uint64_t seed = 0;
  sbmspec_label_mode label_mode = SBMSPEC_LABELS_ORACLE;
  std::vector<sbmspec_statistic> statistics;
  double alpha = 0.05;
};

struct EdgeList {
  int32_t n = 0;
  std::vector<int32_t> ei, ej;
  std::int64_t duplicates = 0;  // dropped duplicate or mirrored pairs
};

// Strict JSON schema: unknown keys are rejected, B must be symmetric with
// entries in (0, 1), sizes (when present) must sum to n. Defaults: balanced
// sizes, oracle labels, all statistics, alpha 0.05.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Figure presets fig1..fig5; K and n stay overridable downstream.
RunConfig figure_preset(const std::string& fig_id);

// Edge list file: first line "n <N>", then one "i j" pair (0-based) per line.
EdgeList load_edge_list(const std::string& path);
void save_edge_list(const std::string& path, const EdgeList& edges);

// One 1-based label per line, n lines.
std::vector<int32_t> load_labels_file(const std::string& path, int32_t n);

struct SimulateOptions {
  int threads = 0;
  bool with_timestamp = true;
  std::string dump_graph_path;  // when nonempty, write replication 0's graph
};

// Runs the replications and writes replications.csv, summary.json, and one
// density_<statistic>.csv per configured statistic into out_dir.
void run_simulation_command(const RunConfig& config, const std::string& out_dir,
                            const SimulateOptions& options, std::ostream& err);

int run_gof_command(const std::string& adjacency_path, int k0,
                    sbmspec_gof_statistic statistic, double alpha,
                    const std::string& labels_path, bool spectral,
                    std::uint64_t seed, std::ostream& out, std::ostream& err);

int run_estimate_k_command(const std::string& adjacency_path, int kmax,
                           sbmspec_gof_statistic statistic, double alpha,
                           std::uint64_t seed, std::ostream& out,
                           std::ostream& err);

int run_tw1_command(std::optional<double> quantile_p, std::optional<double> cdf_x,
                    std::ostream& out);

}  // namespace sbmspec_cli

#endif  // SBMSPEC_CLI_LIB_HPP
