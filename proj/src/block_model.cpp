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

#include "block_model.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "errors.hpp"
#include "rng.hpp"

namespace sbmspec {

BlockModel build_model(int K, const Eigen::MatrixXd& B,
                       std::vector<int> sizes) {
  require(K >= 1, ErrorCode::invalid_argument, "K must be >= 1");
  require(B.rows() == K && B.cols() == K, ErrorCode::invalid_argument,
          "B must be K x K");
  require(static_cast<int>(sizes.size()) == K, ErrorCode::invalid_argument,
          "sizes must have K entries");
  for (int u = 0; u < K; ++u) {
    for (int v = 0; v < K; ++v) {
      if (B(u, v) != B(v, u)) {
        fail(ErrorCode::non_symmetric_b,
             "B is not symmetric at (" + std::to_string(u + 1) + "," +
                 std::to_string(v + 1) + ")");
      }
      if (!(B(u, v) > 0.0 && B(u, v) < 1.0)) {
        fail(ErrorCode::probability_out_of_range,
             "B(" + std::to_string(u + 1) + "," + std::to_string(v + 1) +
                 ") = " + std::to_string(B(u, v)) +
                 " is outside the open interval (0,1)");
      }
    }
  }
  long long n = 0;
  for (int k = 0; k < K; ++k) {
    if (sizes[k] < 2) {
      fail(ErrorCode::community_too_small,
           "community " + std::to_string(k + 1) + " has size " +
               std::to_string(sizes[k]) + " (< 2)");
    }
    n += sizes[k];
  }
  require(n <= (1 << 30), ErrorCode::invalid_argument, "n too large");

  BlockModel model;
  model.K = K;
  model.B = B;
  model.sizes = std::move(sizes);
  model.n = static_cast<int>(n);
  return model;
}

std::vector<int> balanced_sizes(int n, int K) {
  require(K >= 1, ErrorCode::invalid_argument, "K must be >= 1");
  require(n >= 2 * K, ErrorCode::community_too_small,
          "n must be at least 2K for balanced sizes");
  std::vector<int> sizes(K, n / K);
  for (int k = 0; k < n % K; ++k) sizes[k] += 1;
  return sizes;
}

LabelVector oracle_labels(const BlockModel& model) {
  LabelVector g;
  g.reserve(model.n);
  for (int k = 0; k < model.K; ++k) {
    g.insert(g.end(), model.sizes[k], k + 1);
  }
  return g;
}

std::vector<long long> community_counts(const LabelVector& labels, int K) {
  std::vector<long long> counts(K, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int g = labels[i];
    if (g < 1 || g > K) {
      fail(ErrorCode::label_out_of_range,
           "label " + std::to_string(g) + " at node " + std::to_string(i) +
               " is outside 1.." + std::to_string(K));
    }
    counts[g - 1] += 1;
  }
  return counts;
}

Eigen::MatrixXd probability_matrix(const BlockModel& model,
                                   const LabelVector& labels) {
  require(static_cast<int>(labels.size()) == model.n,
          ErrorCode::invalid_argument, "labels must have length n");
  community_counts(labels, model.K);
  const int n = model.n;
  Eigen::MatrixXd P(n, n);
  for (int i = 0; i < n; ++i) {
    const int gi = labels[i] - 1;
    for (int j = 0; j < n; ++j) {
      P(i, j) = model.B(gi, labels[j] - 1);
    }
  }
  return P;
}

Eigen::MatrixXd sample_adjacency(const BlockModel& model,
                                 const LabelVector& labels,
                                 std::uint64_t seed) {
  require(static_cast<int>(labels.size()) == model.n,
          ErrorCode::invalid_argument, "labels must have length n");
  const int n = model.n;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const int gi = labels[i] - 1;
    for (int j = i + 1; j < n; ++j) {
      const double p = model.B(gi, labels[j] - 1);
      const double a = edge_uniform(seed, i, j) < p ? 1.0 : 0.0;
      A(i, j) = a;
      A(j, i) = a;
    }
  }
  return A;
}

BalanceDiagnostics check_assumptions(const BlockModel& model) {
  int min_size = model.sizes[0];
  int max_size = model.sizes[0];
  for (int s : model.sizes) {
    min_size = std::min(min_size, s);
    max_size = std::max(max_size, s);
  }
  BalanceDiagnostics d;
  d.min_ratio = static_cast<double>(model.K) * min_size / model.n;
  d.max_ratio =
      model.K == 1 ? 0.0 : std::log(static_cast<double>(model.K)) * max_size / model.n;
  return d;
}

}  // namespace sbmspec
