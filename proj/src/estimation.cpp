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

#include "estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "errors.hpp"
#include "rng.hpp"

namespace sbmspec {

BlockEstimate estimate_block_matrix(const Eigen::MatrixXd& A,
                                    const LabelVector& labels, int K) {
  const int n = static_cast<int>(A.rows());
  require(A.cols() == n, ErrorCode::invalid_argument, "A must be square");
  require(static_cast<int>(labels.size()) == n, ErrorCode::mismatched_length,
          "labels must have length n");
  const std::vector<long long> counts = community_counts(labels, K);
  for (int k = 0; k < K; ++k) {
    if (counts[k] < 2) {
      fail(ErrorCode::community_too_small,
           "community " + std::to_string(k + 1) + " has " +
               std::to_string(counts[k]) + " nodes under these labels");
    }
  }

  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(K, K);
  for (int i = 0; i < n; ++i) {
    const int u = labels[i] - 1;
    for (int j = i + 1; j < n; ++j) {
      if (A(i, j) != 0.0) {
        const int v = labels[j] - 1;
        sums(u, v) += 1.0;
        if (u != v) sums(v, u) += 1.0;
      }
    }
  }

  BlockEstimate est;
  est.K = K;
  est.counts_n_u = counts;
  est.counts_n_uv.resize(K, K);
  est.B_hat.resize(K, K);
  for (int u = 0; u < K; ++u) {
    for (int v = 0; v < K; ++v) {
      const double n_uv = (u == v)
                              ? static_cast<double>(counts[u]) * (counts[u] - 1) / 2.0
                              : static_cast<double>(counts[u]) * counts[v];
      est.counts_n_uv(u, v) = n_uv;
      est.B_hat(u, v) = sums(u, v) / n_uv;
    }
  }
  est.labels_used = labels;
  return est;
}

Eigen::MatrixXd expand_estimate(const BlockEstimate& estimate) {
  const int n = static_cast<int>(estimate.labels_used.size());
  Eigen::MatrixXd P_hat(n, n);
  for (int i = 0; i < n; ++i) {
    const int gi = estimate.labels_used[i] - 1;
    for (int j = 0; j < n; ++j) {
      P_hat(i, j) = estimate.B_hat(gi, estimate.labels_used[j] - 1);
    }
  }
  return P_hat;
}

namespace {

// One k-means pass from a k-means++ start. Returns false if a cluster
// emptied (caller retries with fresh seeding).
bool kmeans_once(const Eigen::MatrixXd& points, int k, Rng& rng,
                 int max_iterations, std::vector<int>& assignment,
                 double& objective) {
  const int n = static_cast<int>(points.rows());
  const int d = static_cast<int>(points.cols());

  // k-means++ seeding: first centroid uniform, later ones proportional to
  // the squared distance to the nearest chosen centroid.
  Eigen::MatrixXd centroids(k, d);
  std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
  centroids.row(0) = points.row(static_cast<int>(rng.next_below(n)));
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double dist = (points.row(i) - centroids.row(c - 1)).squaredNorm();
      min_dist[i] = std::min(min_dist[i], dist);
      total += min_dist[i];
    }
    int chosen = -1;
    if (total > 0.0) {
      const double target = rng.next_unit() * total;
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        acc += min_dist[i];
        if (acc >= target) {
          chosen = i;
          break;
        }
      }
    }
    if (chosen < 0) chosen = static_cast<int>(rng.next_below(n));
    centroids.row(c) = points.row(chosen);
  }

  assignment.assign(n, 0);
  std::vector<int> cluster_size(k, 0);
  for (int iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_dist = (points.row(i) - centroids.row(0)).squaredNorm();
      for (int c = 1; c < k; ++c) {
        const double dist = (points.row(i) - centroids.row(c)).squaredNorm();
        if (dist < best_dist) {  // strict: ties keep the lowest index
          best_dist = dist;
          best = c;
        }
      }
      if (assignment[i] != best) {
        assignment[i] = best;
        changed = true;
      }
    }
    std::fill(cluster_size.begin(), cluster_size.end(), 0);
    for (int i = 0; i < n; ++i) cluster_size[assignment[i]] += 1;
    for (int c = 0; c < k; ++c) {
      if (cluster_size[c] == 0) return false;
    }
    centroids.setZero();
    for (int i = 0; i < n; ++i) centroids.row(assignment[i]) += points.row(i);
    for (int c = 0; c < k; ++c) centroids.row(c) /= cluster_size[c];
    if (!changed && iter > 0) break;
  }

  objective = 0.0;
  for (int i = 0; i < n; ++i) {
    objective += (points.row(i) - centroids.row(assignment[i])).squaredNorm();
  }
  return true;
}

}  // namespace

std::vector<int> kmeans_rows(const Eigen::MatrixXd& points, int k,
                             std::uint64_t seed, int restarts,
                             int max_iterations) {
  const int n = static_cast<int>(points.rows());
  require(k >= 1, ErrorCode::invalid_argument, "k must be >= 1");
  require(n >= k, ErrorCode::k_too_large, "k exceeds the number of points");

  std::vector<int> best_assignment;
  double best_objective = std::numeric_limits<double>::infinity();
  int failures = 0;
  int done = 0;
  std::uint64_t attempt = 0;
  while (done < restarts) {
    Rng rng(derive_seed(seed, attempt++));
    std::vector<int> assignment;
    double objective = 0.0;
    if (!kmeans_once(points, k, rng, max_iterations, assignment, objective)) {
      if (++failures >= 10) {
        fail(ErrorCode::empty_cluster,
             "k-means produced an empty cluster in 10 consecutive seedings");
      }
      continue;
    }
    if (objective < best_objective) {
      best_objective = objective;
      best_assignment = std::move(assignment);
    }
    ++done;
  }
  return best_assignment;
}

namespace {

LabelVector relabel_first_appearance(const std::vector<int>& assignment,
                                     int k) {
  std::vector<int> remap(k, 0);
  int next = 0;
  LabelVector labels(assignment.size());
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    int& slot = remap[assignment[i]];
    if (slot == 0) slot = ++next;
    labels[i] = slot;
  }
  return labels;
}

}  // namespace

LabelVector estimate_labels(const Eigen::MatrixXd& A, int K, LabelMode mode,
                            const LabelVector* truth, std::uint64_t seed) {
  const int n = static_cast<int>(A.rows());
  require(K >= 1, ErrorCode::invalid_argument, "K must be >= 1");
  require(K <= n, ErrorCode::k_too_large, "K exceeds the node count");

  if (mode == LabelMode::oracle) {
    require(truth != nullptr, ErrorCode::invalid_argument,
            "oracle mode needs the true labels");
    require(static_cast<int>(truth->size()) == n, ErrorCode::mismatched_length,
            "true labels must have length n");
    return *truth;
  }
  if (K == 1) return LabelVector(n, 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A);
  require(solver.info() == Eigen::Success, ErrorCode::no_convergence,
          "eigendecomposition failed");
  // Eigen sorts ascending; the last K columns span the top-K eigenvectors.
  const Eigen::MatrixXd embedding = solver.eigenvectors().rightCols(K);
  const std::vector<int> assignment = kmeans_rows(embedding, K, seed);
  return relabel_first_appearance(assignment, K);
}

LabelAlignment align_labels(const LabelVector& truth,
                            const LabelVector& estimate) {
  require(truth.size() == estimate.size(), ErrorCode::mismatched_length,
          "label vectors differ in length");
  const int n = static_cast<int>(truth.size());
  require(n > 0, ErrorCode::invalid_argument, "empty label vectors");
  int K = 0;
  for (int g : truth) K = std::max(K, g);
  for (int g : estimate) K = std::max(K, g);
  community_counts(truth, K);

  Eigen::MatrixXi confusion = Eigen::MatrixXi::Zero(K, K);
  for (int i = 0; i < n; ++i) {
    require(estimate[i] >= 1 && estimate[i] <= K, ErrorCode::label_out_of_range,
            "estimate label out of range");
    confusion(estimate[i] - 1, truth[i] - 1) += 1;
  }

  LabelAlignment alignment;
  alignment.permutation.resize(K);
  if (K <= 8) {
    std::vector<int> perm(K);
    std::iota(perm.begin(), perm.end(), 0);
    long long best_matches = -1;
    do {
      long long matches = 0;
      for (int e = 0; e < K; ++e) matches += confusion(e, perm[e]);
      if (matches > best_matches) {
        best_matches = matches;
        for (int e = 0; e < K; ++e) alignment.permutation[e] = perm[e] + 1;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    alignment.misclustering_rate =
        static_cast<double>(n - best_matches) / n;
  } else {
    // Greedy assignment: repeatedly take the largest remaining confusion cell.
    std::vector<bool> est_used(K, false), truth_used(K, false);
    long long matches = 0;
    for (int step = 0; step < K; ++step) {
      int best_e = -1, best_t = -1, best_count = -1;
      for (int e = 0; e < K; ++e) {
        if (est_used[e]) continue;
        for (int t = 0; t < K; ++t) {
          if (truth_used[t]) continue;
          if (confusion(e, t) > best_count) {
            best_count = confusion(e, t);
            best_e = e;
            best_t = t;
          }
        }
      }
      est_used[best_e] = true;
      truth_used[best_t] = true;
      alignment.permutation[best_e] = best_t + 1;
      matches += best_count;
    }
    alignment.misclustering_rate = static_cast<double>(n - matches) / n;
  }
  return alignment;
}

}  // namespace sbmspec
