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

#ifndef SBMSPEC_BLOCK_MODEL_HPP
#define SBMSPEC_BLOCK_MODEL_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace sbmspec {

// Community labels, 1-based (values in 1..K).
using LabelVector = std::vector<int>;

/// Ground-truth block model: K communities, symmetric connection
/// probabilities B with every entry strictly inside (0, 1), and explicit
/// community sizes (each >= 2 so that within-block pair counts are positive).
struct BlockModel {
  int K = 0;
  Eigen::MatrixXd B;       // K x K, symmetric, entries in (0, 1)
  std::vector<int> sizes;  // K entries, each >= 2
  int n = 0;               // total node count
};

struct BalanceDiagnostics {
  double min_ratio = 0.0;  // K * min_k n_k / n
  double max_ratio = 0.0;  // log(K) * max_k n_k / n, 0 when K == 1
};

BlockModel build_model(int K, const Eigen::MatrixXd& B, std::vector<int> sizes);

// Splits n nodes over K communities as evenly as possible, remainders going
// to the lowest-index communities.
std::vector<int> balanced_sizes(int n, int K);

// Canonical block ordering: nodes 1..n_1 get label 1, the next n_2 label 2, ...
LabelVector oracle_labels(const BlockModel& model);

// P_ij = B_{g_i g_j} for all i, j, diagonal included.
Eigen::MatrixXd probability_matrix(const BlockModel& model,
                                   const LabelVector& labels);

// Bernoulli draw of a symmetric, zero-diagonal adjacency matrix. The
// (seed -> adjacency) map is pure: entries come from a counter-based stream
// keyed by (seed, i, j), so the draw is independent of evaluation order.
Eigen::MatrixXd sample_adjacency(const BlockModel& model,
                                 const LabelVector& labels,
                                 std::uint64_t seed);

BalanceDiagnostics check_assumptions(const BlockModel& model);

// Validates that labels are 1..K with every community present; returns the
// community sizes under the labels.
std::vector<long long> community_counts(const LabelVector& labels, int K);

}  // namespace sbmspec

#endif  // SBMSPEC_BLOCK_MODEL_HPP
