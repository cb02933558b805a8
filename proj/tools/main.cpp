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

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cli_lib.hpp"
#include "sbmspec.h"

namespace {

using namespace sbmspec_cli;

sbmspec_gof_statistic parse_statistic(const std::string& name) {
  if (name == "lambda1_tw") return SBMSPEC_GOF_LAMBDA1_TW;
  if (name == "lss_normal") return SBMSPEC_GOF_LSS_NORMAL;
  throw CLI::ValidationError("--statistic",
                             "expected 'lambda1_tw' or 'lss_normal'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Stochastic block model spectral statistics: simulation, "
      "goodness-of-fit tests, and community-count estimation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sbmspec_version()));

  // simulate
  std::string config_path, out_dir, dump_graph;
  int threads = 0;
  bool no_timestamp = false;
  auto* simulate = app.add_subcommand(
      "simulate", "Run a Monte Carlo study described by a JSON config");
  simulate->add_option("--config", config_path, "JSON config file")
      ->required();
  simulate->add_option("--out", out_dir, "output directory")->required();
  simulate->add_option("--threads", threads, "worker threads (0 = auto)");
  simulate->add_flag("--no-timestamp", no_timestamp,
                     "omit the timestamp field from summary.json");
  simulate->add_option("--dump-graph", dump_graph,
                       "also write replication 0's sampled graph to this path");

  // figure
  std::string fig_id;
  std::optional<int> fig_n, fig_k, fig_reps;
  std::optional<std::uint64_t> fig_seed;
  auto* figure = app.add_subcommand(
      "figure", "Run a preset study (fig1..fig5) at overridable scale");
  figure->add_option("--id", fig_id, "preset id, fig1..fig5")->required();
  figure->add_option("--out", out_dir, "output directory")->required();
  figure->add_option("--n", fig_n, "override node count");
  figure->add_option("--k", fig_k, "override community count");
  figure->add_option("--reps", fig_reps, "override replication count");
  figure->add_option("--seed", fig_seed, "override the master seed");
  figure->add_option("--threads", threads, "worker threads (0 = auto)");
  figure->add_flag("--no-timestamp", no_timestamp,
                   "omit the timestamp field from summary.json");

  // gof-test
  std::string graph_path, labels_path, statistic_name = "lss_normal";
  std::string label_mode = "spectral";
  int k0 = 1, kmax = 1;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  auto* gof = app.add_subcommand(
      "gof-test", "Test H0: the network is an SBM with K0 communities "
                  "(exit code 3 when rejected)");
  gof->add_option("--graph", graph_path, "edge list file")->required();
  gof->add_option("--k0", k0, "null community count")->required();
  gof->add_option("--statistic", statistic_name,
                  "lambda1_tw or lss_normal (default lss_normal)");
  gof->add_option("--alpha", alpha, "test level (default 0.05)");
  gof->add_option("--labels", labels_path,
                  "labels file (used as given labels instead of spectral "
                  "clustering)");
  gof->add_option("--label-mode", label_mode,
                  "oracle (default when --labels is given) or spectral; "
                  "spectral plus --labels reports the misclustering rate")
      ->check(CLI::IsMember({"oracle", "spectral"}));
  gof->add_option("--seed", seed, "seed for spectral clustering restarts");

  // estimate-k
  auto* estimate = app.add_subcommand(
      "estimate-k", "Sequential goodness-of-fit scan for the community count");
  estimate->add_option("--graph", graph_path, "edge list file")->required();
  estimate->add_option("--kmax", kmax, "largest K0 to test")->required();
  estimate->add_option("--statistic", statistic_name,
                       "lambda1_tw or lss_normal (default lss_normal)");
  estimate->add_option("--alpha", alpha, "test level (default 0.05)");
  estimate->add_option("--seed", seed, "seed for spectral clustering restarts");

  // tw1
  std::optional<double> tw1_quantile, tw1_cdf;
  auto* tw1 = app.add_subcommand(
      "tw1", "Evaluate the embedded Tracy-Widom (beta = 1) reference law");
  auto* q_opt = tw1->add_option("--quantile", tw1_quantile,
                                "print the p-quantile, p in (0,1)");
  auto* c_opt = tw1->add_option("--cdf", tw1_cdf, "print the CDF at x");
  q_opt->excludes(c_opt);
  tw1->require_option(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::CallForVersion& version) {
    return app.exit(version);
  } catch (const CLI::ParseError& error) {
    app.exit(error);
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) {
      RunConfig config = parse_config_file(config_path);
      SimulateOptions options;
      options.threads = threads;
      options.with_timestamp = !no_timestamp;
      options.dump_graph_path = dump_graph;
      run_simulation_command(config, out_dir, options, std::cerr);
      return kExitOk;
    }
    if (figure->parsed()) {
      RunConfig config = figure_preset(fig_id);
      if (fig_k) {
        config.K = *fig_k;
        config.n = 200 * config.K;
        config.B.assign(static_cast<std::size_t>(config.K) * config.K, 0.1);
        for (int u = 0; u < config.K; ++u) config.B[u * config.K + u] = 0.4;
      }
      if (fig_n) config.n = *fig_n;
      if (fig_reps) config.reps = *fig_reps;
      if (fig_seed) config.seed = *fig_seed;
      SimulateOptions options;
      options.threads = threads;
      options.with_timestamp = !no_timestamp;
      run_simulation_command(config, out_dir, options, std::cerr);
      return kExitOk;
    }
    if (gof->parsed()) {
      const bool spectral =
          gof->count("--label-mode") ? label_mode == "spectral"
                                     : labels_path.empty();
      if (!spectral && labels_path.empty()) {
        std::cerr << "error: oracle label mode needs --labels\n";
        return kExitUsage;
      }
      return run_gof_command(graph_path, k0, parse_statistic(statistic_name),
                             alpha, labels_path, spectral, seed, std::cout,
                             std::cerr);
    }
    if (estimate->parsed()) {
      return run_estimate_k_command(graph_path, kmax,
                                    parse_statistic(statistic_name), alpha,
                                    seed, std::cout, std::cerr);
    }
    if (tw1->parsed()) {
      return run_tw1_command(tw1_quantile, tw1_cdf, std::cout);
    }
  } catch (const CLI::ValidationError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
