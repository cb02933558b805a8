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

#include "cli_lib.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "json.hpp"

namespace sbmspec_cli {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void fail_runtime(const std::string& message) {
  throw RuntimeError(message);
}

void check(sbmspec_status status, const std::string& context) {
  if (status != SBMSPEC_OK) {
    fail_runtime(context + ": " + sbmspec_last_error());
  }
}

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

const std::vector<sbmspec_statistic>& all_statistics() {
  static const std::vector<sbmspec_statistic> all = {
      SBMSPEC_STAT_CHI_SIMPLE_CROSS, SBMSPEC_STAT_CHI_SIMPLE_SQ,
      SBMSPEC_STAT_CHI_COMPOSITE_SQ, SBMSPEC_STAT_Z_COMPOSITE_CROSS,
      SBMSPEC_STAT_Z_BIAS_CROSS,     SBMSPEC_STAT_Z_ASTAR_SQ,
      SBMSPEC_STAT_TW_LAMBDA1,       SBMSPEC_STAT_Z_LSS};
  return all;
}

std::string law_name(int kind, int df) {
  switch (kind) {
    case SBMSPEC_LAW_CHI_SQUARE:
      return "chi_square(df=" + std::to_string(df) + ")";
    case SBMSPEC_LAW_STANDARD_NORMAL:
      return "standard_normal";
    case SBMSPEC_LAW_TRACY_WIDOM_1:
      return "tracy_widom_1";
  }
  return "unknown";
}

struct ModelHandle {
  sbmspec_model* ptr = nullptr;
  ~ModelHandle() { sbmspec_model_destroy(ptr); }
};

struct LabelsHandle {
  sbmspec_labels* ptr = nullptr;
  ~LabelsHandle() { sbmspec_labels_destroy(ptr); }
};

struct GraphHandle {
  sbmspec_graph* ptr = nullptr;
  ~GraphHandle() { sbmspec_graph_destroy(ptr); }
};

struct ConfigHandle {
  sbmspec_sim_config* ptr = nullptr;
  ~ConfigHandle() { sbmspec_sim_config_destroy(ptr); }
};

struct ResultHandle {
  sbmspec_sim_result* ptr = nullptr;
  ~ResultHandle() { sbmspec_sim_result_destroy(ptr); }
};

void create_model(const RunConfig& config, ModelHandle& model) {
  if (config.sizes) {
    check(sbmspec_model_create(config.K, config.B.data(), config.sizes->data(),
                               &model.ptr),
          "invalid model");
  } else {
    check(sbmspec_model_create_balanced(config.K, config.B.data(), config.n,
                                        &model.ptr),
          "invalid model");
  }
}

GraphHandle graph_from_file(const std::string& path, std::ostream& err) {
  const EdgeList edges = load_edge_list(path);
  if (edges.duplicates > 0) {
    err << "warning: " << edges.duplicates
        << " duplicate edge(s) collapsed while reading " << path << "\n";
  }
  GraphHandle graph;
  check(sbmspec_graph_from_edges(edges.n, edges.ei.data(), edges.ej.data(),
                                 static_cast<int64_t>(edges.ei.size()),
                                 &graph.ptr),
        "invalid edge list");
  return graph;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  ordered_json root;
  try {
    root = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& error) {
    fail_runtime(std::string("config parse error: ") + error.what());
  }
  if (!root.is_object()) fail_runtime("config must be a JSON object");

  static const std::set<std::string> known = {
      "n", "K", "B", "sizes", "balanced", "reps",
      "seed", "label_mode", "statistics", "alpha"};
  for (const auto& item : root.items()) {
    if (!known.count(item.key())) {
      fail_runtime("config schema violation: unknown key '" + item.key() + "'");
    }
  }
  for (const char* key : {"n", "K", "B", "reps", "seed"}) {
    if (!root.contains(key)) {
      fail_runtime(std::string("config schema violation: missing key '") + key +
                   "'");
    }
  }

  RunConfig config;
  if (!root["n"].is_number_integer()) fail_runtime("'n' must be an integer");
  if (!root["K"].is_number_integer()) fail_runtime("'K' must be an integer");
  if (!root["reps"].is_number_integer()) {
    fail_runtime("'reps' must be an integer");
  }
  if (!root["seed"].is_number_integer() && !root["seed"].is_number_unsigned()) {
    fail_runtime("'seed' must be an integer");
  }
  config.n = root["n"].get<int>();
  config.K = root["K"].get<int>();
  config.reps = root["reps"].get<int>();
  config.seed = root["seed"].get<std::uint64_t>();
  if (config.n < 1 || config.K < 1) fail_runtime("'n' and 'K' must be >= 1");
  if (config.reps < 0) fail_runtime("'reps' must be >= 0");

  const auto& b = root["B"];
  if (!b.is_array() || static_cast<int>(b.size()) != config.K) {
    fail_runtime("config schema violation: 'B' must be a K x K matrix");
  }
  config.B.resize(static_cast<std::size_t>(config.K) * config.K);
  for (int u = 0; u < config.K; ++u) {
    const auto& row = b[u];
    if (!row.is_array() || static_cast<int>(row.size()) != config.K) {
      fail_runtime("config schema violation: 'B' must be a K x K matrix");
    }
    for (int v = 0; v < config.K; ++v) {
      if (!row[v].is_number()) fail_runtime("'B' entries must be numbers");
      config.B[u * config.K + v] = row[v].get<double>();
    }
  }
  for (int u = 0; u < config.K; ++u) {
    for (int v = 0; v < config.K; ++v) {
      const double value = config.B[u * config.K + v];
      if (value != config.B[v * config.K + u]) {
        fail_runtime("config schema violation: B[" + std::to_string(u + 1) +
                     "][" + std::to_string(v + 1) + "] != B[" +
                     std::to_string(v + 1) + "][" + std::to_string(u + 1) +
                     "]");
      }
      if (!(value > 0.0 && value < 1.0)) {
        fail_runtime("config schema violation: B[" + std::to_string(u + 1) +
                     "][" + std::to_string(v + 1) + "] = " +
                     format_double(value) + " is outside (0,1)");
      }
    }
  }

  const bool balanced =
      root.contains("balanced") ? root["balanced"].get<bool>() : true;
  if (root.contains("sizes")) {
    if (root.contains("balanced") && balanced) {
      fail_runtime(
          "config schema violation: 'sizes' and 'balanced: true' conflict");
    }
    const auto& sizes = root["sizes"];
    if (!sizes.is_array() || static_cast<int>(sizes.size()) != config.K) {
      fail_runtime("config schema violation: 'sizes' must have K entries");
    }
    std::vector<int32_t> values;
    long long total = 0;
    for (const auto& entry : sizes) {
      if (!entry.is_number_integer()) fail_runtime("'sizes' must be integers");
      values.push_back(entry.get<int32_t>());
      total += values.back();
    }
    if (total != config.n) {
      fail_runtime("config schema violation: sizes sum to " +
                   std::to_string(total) + ", expected n = " +
                   std::to_string(config.n));
    }
    config.sizes = std::move(values);
  } else if (!balanced) {
    fail_runtime(
        "config schema violation: 'balanced: false' requires explicit sizes");
  }

  if (root.contains("label_mode")) {
    const std::string mode = root["label_mode"].get<std::string>();
    if (mode == "oracle") {
      config.label_mode = SBMSPEC_LABELS_ORACLE;
    } else if (mode == "spectral") {
      config.label_mode = SBMSPEC_LABELS_SPECTRAL;
    } else {
      fail_runtime("config schema violation: label_mode '" + mode + "'");
    }
  }

  if (root.contains("statistics")) {
    const auto& stats = root["statistics"];
    if (!stats.is_array() || stats.empty()) {
      fail_runtime("config schema violation: 'statistics' must be a nonempty "
                   "array");
    }
    for (const auto& entry : stats) {
      sbmspec_statistic stat;
      const std::string name = entry.get<std::string>();
      if (sbmspec_statistic_from_name(name.c_str(), &stat) != SBMSPEC_OK) {
        fail_runtime("config schema violation: unknown statistic '" + name +
                     "'");
      }
      config.statistics.push_back(stat);
    }
  } else {
    config.statistics = all_statistics();
  }

  if (root.contains("alpha")) {
    if (!root["alpha"].is_number()) fail_runtime("'alpha' must be a number");
    config.alpha = root["alpha"].get<double>();
    if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
      fail_runtime("config schema violation: alpha must lie in (0,1)");
    }
  }
  return config;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_runtime("cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

RunConfig figure_preset(const std::string& fig_id) {
  static const std::map<std::string, sbmspec_statistic> presets = {
      {"fig1", SBMSPEC_STAT_CHI_SIMPLE_CROSS},
      {"fig2", SBMSPEC_STAT_Z_COMPOSITE_CROSS},
      {"fig3", SBMSPEC_STAT_Z_BIAS_CROSS},
      {"fig4", SBMSPEC_STAT_CHI_SIMPLE_SQ},
      {"fig5", SBMSPEC_STAT_CHI_COMPOSITE_SQ}};
  const auto preset = presets.find(fig_id);
  if (preset == presets.end()) {
    fail_runtime("unknown figure id '" + fig_id + "' (expected fig1..fig5)");
  }
  RunConfig config;
  config.K = 2;
  config.n = 200 * config.K;
  config.B = {0.4, 0.1, 0.1, 0.4};
  config.reps = 1000;
  config.seed = 1;
  config.label_mode = SBMSPEC_LABELS_ORACLE;
  config.statistics = {preset->second};
  config.alpha = 0.05;
  return config;
}

EdgeList load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_runtime("cannot open adjacency file " + path);
  EdgeList edges;
  std::string line;
  int line_no = 0;
  std::set<std::pair<int32_t, int32_t>> seen;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    if (!have_header) {
      std::string tag;
      fields >> tag;
      long long n = 0;
      if (tag != "n" || !(fields >> n) || n < 1) {
        fail_runtime(path + ":" + std::to_string(line_no) +
                     ": expected header 'n <N>'");
      }
      edges.n = static_cast<int32_t>(n);
      have_header = true;
      continue;
    }
    long long i = -1, j = -1;
    if (!(fields >> i >> j)) {
      fail_runtime(path + ":" + std::to_string(line_no) +
                   ": expected an 'i j' pair");
    }
    if (i < 0 || j < 0 || i >= edges.n || j >= edges.n) {
      fail_runtime(path + ":" + std::to_string(line_no) + ": node index " +
                   std::to_string(std::max(i, j)) + " is outside 0.." +
                   std::to_string(edges.n - 1));
    }
    if (i == j) {
      fail_runtime(path + ":" + std::to_string(line_no) + ": self-loop at " +
                   std::to_string(i));
    }
    const int32_t lo = static_cast<int32_t>(std::min(i, j));
    const int32_t hi = static_cast<int32_t>(std::max(i, j));
    if (!seen.insert(std::make_pair(lo, hi)).second) {
      edges.duplicates += 1;
      continue;
    }
    edges.ei.push_back(lo);
    edges.ej.push_back(hi);
  }
  if (!have_header) fail_runtime(path + ": missing 'n <N>' header");
  return edges;
}

void save_edge_list(const std::string& path, const EdgeList& edges) {
  std::ofstream out(path);
  if (!out) fail_runtime("cannot write " + path);
  out << "n " << edges.n << "\n";
  std::vector<std::pair<int32_t, int32_t>> pairs;
  pairs.reserve(edges.ei.size());
  for (std::size_t e = 0; e < edges.ei.size(); ++e) {
    pairs.emplace_back(std::min(edges.ei[e], edges.ej[e]),
                       std::max(edges.ei[e], edges.ej[e]));
  }
  std::sort(pairs.begin(), pairs.end());
  for (const auto& [i, j] : pairs) out << i << " " << j << "\n";
  if (!out) fail_runtime("write failed for " + path);
}

std::vector<int32_t> load_labels_file(const std::string& path, int32_t n) {
  std::ifstream in(path);
  if (!in) fail_runtime("cannot open labels file " + path);
  std::vector<int32_t> labels;
  long long value;
  while (in >> value) labels.push_back(static_cast<int32_t>(value));
  if (static_cast<int32_t>(labels.size()) != n) {
    fail_runtime(path + ": expected " + std::to_string(n) + " labels, found " +
                 std::to_string(labels.size()));
  }
  return labels;
}

namespace {

ordered_json config_echo(const RunConfig& config) {
  ordered_json echo;
  echo["n"] = config.n;
  echo["K"] = config.K;
  ordered_json b = ordered_json::array();
  for (int u = 0; u < config.K; ++u) {
    ordered_json row = ordered_json::array();
    for (int v = 0; v < config.K; ++v) row.push_back(config.B[u * config.K + v]);
    b.push_back(row);
  }
  echo["B"] = b;
  if (config.sizes) echo["sizes"] = *config.sizes;
  echo["reps"] = config.reps;
  echo["seed"] = config.seed;
  echo["label_mode"] =
      config.label_mode == SBMSPEC_LABELS_ORACLE ? "oracle" : "spectral";
  ordered_json stats = ordered_json::array();
  for (sbmspec_statistic stat : config.statistics) {
    stats.push_back(sbmspec_statistic_name(stat));
  }
  echo["statistics"] = stats;
  echo["alpha"] = config.alpha;
  return echo;
}

void write_density_grid(const std::string& path, sbmspec_statistic stat,
                        int reference_kind, int reference_df) {
  double lo, hi;
  switch (reference_kind) {
    case SBMSPEC_LAW_CHI_SQUARE: {
      lo = 0.0;
      check(sbmspec_law_quantile(SBMSPEC_LAW_CHI_SQUARE, reference_df, 0.9995,
                                 &hi),
            "density grid");
      break;
    }
    case SBMSPEC_LAW_STANDARD_NORMAL:
      lo = -4.5;
      hi = 4.5;
      break;
    default:
      lo = -5.0;
      hi = 3.0;
      break;
  }
  std::ofstream out(path);
  if (!out) fail_runtime("cannot write " + path);
  out << "x,density\n";
  const int points = 400;
  for (int i = 0; i <= points; ++i) {
    const double x = lo + (hi - lo) * i / points;
    double density = 0.0;
    check(sbmspec_law_pdf(static_cast<sbmspec_law_kind>(reference_kind),
                          reference_df, x, &density),
          "density grid");
    out << format_double(x) << "," << format_double(density) << "\n";
  }
  (void)stat;
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buffer[32];
  std::tm tm_utc;
  gmtime_r(&t, &tm_utc);
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buffer;
}

}  // namespace

void run_simulation_command(const RunConfig& config, const std::string& out_dir,
                            const SimulateOptions& options, std::ostream& err) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) fail_runtime("cannot create output directory " + out_dir);

  ModelHandle model;
  create_model(config, model);

  ConfigHandle sim;
  check(sbmspec_sim_config_create(model.ptr, config.reps, config.seed,
                                  config.label_mode, config.alpha, &sim.ptr),
        "invalid simulation config");
  for (sbmspec_statistic stat : config.statistics) {
    check(sbmspec_sim_config_add_statistic(sim.ptr, stat), "invalid statistic");
  }

  ResultHandle result;
  if (config.reps > 0) {
    check(sbmspec_simulate(sim.ptr, options.threads, &result.ptr),
          "simulation failed");
  }

  if (!options.dump_graph_path.empty()) {
    if (!result.ptr || sbmspec_sim_result_rows(result.ptr) == 0) {
      fail_runtime("--dump-graph needs at least one replication");
    }
    LabelsHandle truth;
    check(sbmspec_labels_oracle(model.ptr, &truth.ptr), "labels");
    GraphHandle graph;
    // Replication r draws with substream r of the master seed; the first
    // row carries replication 0's derived seed.
    uint64_t seed0 = 0;
    int32_t rep, stat_kind, flagged;
    double value;
    check(sbmspec_sim_result_row(result.ptr, 0, &rep, &stat_kind, &value,
                                 &seed0, &flagged),
          "row");
    check(sbmspec_graph_sample(model.ptr, truth.ptr, seed0, &graph.ptr),
          "sample");
    const int64_t edge_count = sbmspec_graph_edge_count(graph.ptr);
    EdgeList edges;
    edges.n = sbmspec_graph_n(graph.ptr);
    edges.ei.resize(edge_count);
    edges.ej.resize(edge_count);
    check(sbmspec_graph_edges(graph.ptr, edges.ei.data(), edges.ej.data()),
          "edges");
    save_edge_list(options.dump_graph_path, edges);
  }

  // Per-replication CSV.
  {
    std::ofstream csv(out_dir + "/replications.csv");
    if (!csv) fail_runtime("cannot write replications.csv");
    csv << "rep,statistic,value,seed\n";
    const int64_t rows = result.ptr ? sbmspec_sim_result_rows(result.ptr) : 0;
    for (int64_t r = 0; r < rows; ++r) {
      int32_t rep, stat_kind, flagged;
      double value;
      uint64_t seed;
      check(sbmspec_sim_result_row(result.ptr, r, &rep, &stat_kind, &value,
                                   &seed, &flagged),
            "row");
      csv << rep << ","
          << sbmspec_statistic_name(static_cast<sbmspec_statistic>(stat_kind))
          << "," << (flagged ? "nan" : format_double(value)) << "," << seed
          << "\n";
    }
  }

  // Summary JSON plus plot-ready reference densities.
  ordered_json summary;
  summary["command"] = "simulate";
  summary["config"] = config_echo(config);
  ordered_json stats = ordered_json::array();
  int64_t flagged_total = 0;
  for (sbmspec_statistic stat : config.statistics) {
    ordered_json entry;
    entry["statistic"] = sbmspec_statistic_name(stat);
    if (config.reps > 0) {
      sbmspec_summary s;
      check(sbmspec_sim_result_summary(result.ptr, stat, config.alpha, &s),
            "summary");
      entry["reference"] = law_name(s.reference_kind, s.reference_df);
      entry["ks"] = s.ks;
      entry["mean"] = s.mean;
      entry["var"] = s.variance;
      entry["reject_rate"] = s.reject_rate;
      entry["flagged"] = s.flagged;
      flagged_total = std::max<int64_t>(flagged_total, s.flagged);
      write_density_grid(
          out_dir + "/density_" + sbmspec_statistic_name(stat) + ".csv", stat,
          s.reference_kind, s.reference_df);
    }
    stats.push_back(entry);
  }
  summary["statistics"] = stats;
  summary["flagged"] = flagged_total;
  if (options.with_timestamp) summary["timestamp"] = timestamp_utc();

  std::ofstream json_out(out_dir + "/summary.json");
  if (!json_out) fail_runtime("cannot write summary.json");
  json_out << summary.dump(2) << "\n";
  (void)err;
}

int run_gof_command(const std::string& adjacency_path, int k0,
                    sbmspec_gof_statistic statistic, double alpha,
                    const std::string& labels_path, bool spectral,
                    std::uint64_t seed, std::ostream& out, std::ostream& err) {
  GraphHandle graph = graph_from_file(adjacency_path, err);
  LabelsHandle labels;
  sbmspec_label_mode mode = SBMSPEC_LABELS_SPECTRAL;
  if (!labels_path.empty()) {
    const std::vector<int32_t> values =
        load_labels_file(labels_path, sbmspec_graph_n(graph.ptr));
    check(sbmspec_labels_create(values.data(),
                                static_cast<int32_t>(values.size()),
                                &labels.ptr),
          "invalid labels file");
    mode = spectral ? SBMSPEC_LABELS_SPECTRAL : SBMSPEC_LABELS_ORACLE;
  }

  sbmspec_test_outcome outcome;
  check(sbmspec_gof_test(graph.ptr, k0, statistic, alpha, mode, labels.ptr,
                         seed, &outcome),
        "gof test failed");

  ordered_json report;
  report["command"] = "gof_test";
  report["k0"] = outcome.k0;
  report["statistic"] = outcome.statistic == SBMSPEC_GOF_LAMBDA1_TW
                            ? "lambda1_tw"
                            : "lss_normal";
  report["value"] = outcome.value;
  report["p_value"] = outcome.p_value;
  report["alpha"] = alpha;
  report["reject"] = outcome.reject != 0;
  report["label_mode"] =
      outcome.label_mode == SBMSPEC_LABELS_ORACLE ? "oracle" : "spectral";
  if (outcome.has_misclustering) {
    report["misclustering_rate"] = outcome.misclustering_rate;
  }
  out << report.dump(2) << "\n";
  return outcome.reject ? kExitReject : kExitOk;
}

int run_estimate_k_command(const std::string& adjacency_path, int kmax,
                           sbmspec_gof_statistic statistic, double alpha,
                           std::uint64_t seed, std::ostream& out,
                           std::ostream& err) {
  GraphHandle graph = graph_from_file(adjacency_path, err);
  std::vector<sbmspec_test_outcome> trail(std::max(kmax, 1));
  int32_t k_hat = 0;
  int32_t trail_len = 0;
  check(sbmspec_estimate_k(graph.ptr, kmax, statistic, alpha, seed, &k_hat,
                           trail.data(), &trail_len),
        "estimate-k failed");

  ordered_json report;
  report["command"] = "estimate_k";
  report["kmax"] = kmax;
  report["statistic"] =
      statistic == SBMSPEC_GOF_LAMBDA1_TW ? "lambda1_tw" : "lss_normal";
  report["alpha"] = alpha;
  report["k_hat"] = k_hat;
  report["all_rejected"] = k_hat > kmax;
  ordered_json steps = ordered_json::array();
  for (int32_t i = 0; i < trail_len; ++i) {
    ordered_json step;
    step["k0"] = trail[i].k0;
    step["value"] = trail[i].value;
    step["p_value"] = trail[i].p_value;
    step["reject"] = trail[i].reject != 0;
    steps.push_back(step);
  }
  report["trail"] = steps;
  out << report.dump(2) << "\n";
  return kExitOk;
}

int run_tw1_command(std::optional<double> quantile_p,
                    std::optional<double> cdf_x, std::ostream& out) {
  double value = 0.0;
  if (quantile_p) {
    check(sbmspec_law_quantile(SBMSPEC_LAW_TRACY_WIDOM_1, 0, *quantile_p,
                               &value),
          "tw1 quantile");
  } else if (cdf_x) {
    check(sbmspec_law_cdf(SBMSPEC_LAW_TRACY_WIDOM_1, 0, *cdf_x, &value),
          "tw1 cdf");
  } else {
    fail_runtime("tw1 needs --quantile or --cdf");
  }
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  out << buffer << "\n";
  return kExitOk;
}

}  // namespace sbmspec_cli
