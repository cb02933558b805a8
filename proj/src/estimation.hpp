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

#ifndef SBMSPEC_ESTIMATION_HPP
#define SBMSPEC_ESTIMATION_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "block_model.hpp"

namespace sbmspec {

/// Maximum-likelihood block probabilities under a fixed label vector.
///
/// Off-diagonal blocks average over all n_u * n_v ordered pairs; diagonal
/// blocks average over the n_u (n_u - 1) / 2 unordered within-block pairs.
/// Entries are kept raw (a saturated block yields exactly 0 or 1).
struct BlockEstimate {
  int K = 0;
  Eigen::MatrixXd B_hat;              // K x K, symmetric, entries in [0, 1]
  std::vector<long long> counts_n_u;  // community sizes under labels_used
  Eigen::MatrixXd counts_n_uv;        // n_u*n_v off-diagonal, n_u(n_u-1)/2 on it
  LabelVector labels_used;
};

enum class LabelMode { oracle, spectral };

struct LabelAlignment {
  std::vector<int> permutation;  // permutation[est - 1] = matched truth label
  double misclustering_rate = 0.0;
};

BlockEstimate estimate_block_matrix(const Eigen::MatrixXd& A,
                                    const LabelVector& labels, int K);

// Expands a block estimate to the node level: P_hat_ij = B_hat_{g_i g_j}.
Eigen::MatrixXd expand_estimate(const BlockEstimate& estimate);

// Oracle mode returns `truth` unchanged. Spectral mode embeds nodes with the
// top-K eigenvectors of A (largest algebraic eigenvalues) and clusters the
// rows with seeded k-means (k-means++ start, 10 restarts, 100 iterations);
// the result is relabeled to first-appearance order.
LabelVector estimate_labels(const Eigen::MatrixXd& A, int K, LabelMode mode,
                            const LabelVector* truth, std::uint64_t seed);

// Optimal relabeling match between two label vectors: exhaustive over the K!
// permutations for K <= 8, greedy on the confusion matrix above that.
LabelAlignment align_labels(const LabelVector& truth,
                            const LabelVector& estimate);

// Row clustering with k-means++ seeding; returns 0-based assignments.
// Equidistant points go to the lowest-index centroid.
std::vector<int> kmeans_rows(const Eigen::MatrixXd& points, int k,
                             std::uint64_t seed, int restarts = 10,
                             int max_iterations = 100);

}  // namespace sbmspec

#endif  // SBMSPEC_ESTIMATION_HPP
