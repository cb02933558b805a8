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

#include <cmath>

#include "doctest.h"
#include "errors.hpp"
#include "rng.hpp"

using namespace sbmspec;

namespace {

Eigen::MatrixXd clique_pair(int size) {
  const int n = 2 * size;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if ((i < size) == (j < size)) {
        a(i, j) = 1.0;
        a(j, i) = 1.0;
      }
    }
  }
  return a;
}

BlockModel paper_model() {
  Eigen::MatrixXd b(2, 2);
  b << 0.4, 0.1, 0.1, 0.4;
  return build_model(2, b, {200, 200});
}

}  // namespace

TEST_CASE("block estimate on saturated and empty blocks") {
  const Eigen::MatrixXd a = clique_pair(3);
  const LabelVector labels = {1, 1, 1, 2, 2, 2};
  const BlockEstimate est = estimate_block_matrix(a, labels, 2);
  CHECK(est.B_hat(0, 0) == 1.0);
  CHECK(est.B_hat(1, 1) == 1.0);
  CHECK(est.B_hat(0, 1) == 0.0);
  CHECK(est.counts_n_uv(0, 0) == 3.0);
  CHECK(est.counts_n_uv(0, 1) == 9.0);
}

TEST_CASE("block estimate single community, one edge in three pairs") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a(0, 1) = a(1, 0) = 1.0;
  const BlockEstimate est = estimate_block_matrix(a, {1, 1, 1}, 1);
  CHECK(est.B_hat(0, 0) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("block estimate hand-counted example") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(5, 5);
  const auto add = [&](int i, int j) { a(i, j) = a(j, i) = 1.0; };
  add(0, 1);
  add(0, 2);
  add(0, 3);
  add(3, 4);
  const BlockEstimate est = estimate_block_matrix(a, {1, 1, 1, 2, 2}, 2);
  CHECK(est.B_hat(0, 0) == doctest::Approx(2.0 / 3.0));
  CHECK(est.B_hat(1, 1) == doctest::Approx(1.0));
  CHECK(est.B_hat(0, 1) == doctest::Approx(1.0 / 6.0));
  CHECK(est.B_hat(1, 0) == est.B_hat(0, 1));
}

TEST_CASE("block estimate rejects undersized communities") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  try {
    estimate_block_matrix(a, {1, 1, 2}, 2);
    FAIL("expected community_too_small");
  } catch (const Error& error) {
    CHECK(error.code() == ErrorCode::community_too_small);
  }
}

TEST_CASE("weighted block sums recover the edge count exactly") {
  const BlockModel model = paper_model();
  const LabelVector labels = oracle_labels(model);
  for (std::uint64_t seed = 5; seed < 10; ++seed) {
    const Eigen::MatrixXd a = sample_adjacency(model, labels, seed);
    const BlockEstimate est = estimate_block_matrix(a, labels, 2);
    double weighted = 0.0;
    for (int u = 0; u < 2; ++u) {
      for (int v = u; v < 2; ++v) {
        weighted += est.counts_n_uv(u, v) * est.B_hat(u, v);
      }
    }
    CHECK(weighted == doctest::Approx(a.sum() / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("block estimate is equivariant under relabeling") {
  const BlockModel model = paper_model();
  const LabelVector labels = oracle_labels(model);
  const Eigen::MatrixXd a = sample_adjacency(model, labels, 31);
  const BlockEstimate est = estimate_block_matrix(a, labels, 2);

  LabelVector swapped(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    swapped[i] = labels[i] == 1 ? 2 : 1;
  }
  const BlockEstimate est_swapped = estimate_block_matrix(a, swapped, 2);
  CHECK(est_swapped.B_hat(0, 0) == est.B_hat(1, 1));
  CHECK(est_swapped.B_hat(1, 1) == est.B_hat(0, 0));
  CHECK(est_swapped.B_hat(0, 1) == est.B_hat(1, 0));
}

TEST_CASE("oracle-label estimates stay within 0.05 of the truth") {
  const BlockModel model = paper_model();
  const LabelVector labels = oracle_labels(model);
  const int reps = 500;
  int hits = 0;
  for (int r = 0; r < reps; ++r) {
    const Eigen::MatrixXd a = sample_adjacency(model, labels, 40000 + r);
    const BlockEstimate est = estimate_block_matrix(a, labels, 2);
    const double err = (est.B_hat - model.B).cwiseAbs().maxCoeff();
    if (err < 0.05) ++hits;
  }
  CHECK(hits >= static_cast<int>(0.99 * reps));
}

TEST_CASE("oracle mode returns the supplied truth verbatim") {
  const BlockModel model = paper_model();
  const LabelVector truth = oracle_labels(model);
  const Eigen::MatrixXd a = sample_adjacency(model, truth, 3);
  CHECK(estimate_labels(a, 2, LabelMode::oracle, &truth, 0) == truth);
}

TEST_CASE("spectral clustering separates two disconnected cliques") {
  const Eigen::MatrixXd a = clique_pair(5);
  const LabelVector truth = {1, 1, 1, 1, 1, 2, 2, 2, 2, 2};
  const LabelVector est = estimate_labels(a, 2, LabelMode::spectral, nullptr, 7);
  CHECK(align_labels(truth, est).misclustering_rate == 0.0);
}

TEST_CASE("spectral clustering recovers the paper setting almost always") {
  const BlockModel model = paper_model();
  const LabelVector truth = oracle_labels(model);
  const int reps = 100;
  int exact = 0;
  for (int r = 0; r < reps; ++r) {
    const Eigen::MatrixXd a = sample_adjacency(model, truth, 7000 + r);
    const LabelVector est =
        estimate_labels(a, 2, LabelMode::spectral, nullptr, 91 + r);
    if (align_labels(truth, est).misclustering_rate == 0.0) ++exact;
  }
  CHECK(exact >= 95);
}

TEST_CASE("estimate_labels rejects K larger than n") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  try {
    estimate_labels(a, 4, LabelMode::spectral, nullptr, 0);
    FAIL("expected k_too_large");
  } catch (const Error& error) {
    CHECK(error.code() == ErrorCode::k_too_large);
  }
  CHECK_THROWS_AS(estimate_labels(a, 2, LabelMode::oracle, nullptr, 0), Error);
}

TEST_CASE("alignment handles pure relabelings and mixtures") {
  const LabelAlignment swap = align_labels({1, 1, 2, 2}, {2, 2, 1, 1});
  CHECK(swap.misclustering_rate == 0.0);
  CHECK(swap.permutation == std::vector<int>{2, 1});

  const LabelAlignment identity = align_labels({1, 1, 2, 2}, {1, 1, 2, 2});
  CHECK(identity.misclustering_rate == 0.0);
  CHECK(identity.permutation == std::vector<int>{1, 2});

  const LabelAlignment half = align_labels({1, 1, 2, 2}, {1, 2, 1, 2});
  CHECK(half.misclustering_rate == doctest::Approx(0.5));

  CHECK_THROWS_AS(align_labels({1, 2}, {1, 2, 1}), Error);
}

TEST_CASE("alignment is invariant under any permutation of many labels") {
  // Property: relabeling by a random permutation never changes the rate.
  Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const int K = 2 + static_cast<int>(rng.next_below(5));
    const int n = 40;
    LabelVector truth(n);
    for (int i = 0; i < n; ++i) {
      truth[i] = 1 + static_cast<int>(rng.next_below(K));
    }
    for (int k = 1; k <= K; ++k) truth[k - 1] = k;  // every class present
    std::vector<int> perm(K);
    for (int k = 0; k < K; ++k) perm[k] = k + 1;
    for (int k = K - 1; k > 0; --k) {
      std::swap(perm[k], perm[rng.next_below(k + 1)]);
    }
    LabelVector renamed(n);
    for (int i = 0; i < n; ++i) renamed[i] = perm[truth[i] - 1];
    CHECK(align_labels(truth, renamed).misclustering_rate == 0.0);
  }
}

TEST_CASE("spectral labels use first-appearance numbering") {
  const Eigen::MatrixXd a = clique_pair(4);
  const LabelVector est = estimate_labels(a, 2, LabelMode::spectral, nullptr, 3);
  CHECK(est[0] == 1);  // node 0 always opens community 1
  CHECK(est[4] == 2);
}

TEST_CASE("kmeans reports an empty cluster after ten failed seedings") {
  // All points coincide: a second cluster can never retain members.
  const Eigen::MatrixXd points = Eigen::MatrixXd::Ones(6, 2);
  try {
    kmeans_rows(points, 2, 9);
    FAIL("expected empty_cluster");
  } catch (const Error& error) {
    CHECK(error.code() == ErrorCode::empty_cluster);
  }
}

TEST_CASE("alignment falls back to greedy matching above K = 8") {
  const int K = 10;
  LabelVector truth;
  for (int k = 1; k <= K; ++k) truth.insert(truth.end(), 3, k);
  LabelVector renamed(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    renamed[i] = truth[i] == K ? 1 : truth[i] + 1;  // cyclic shift
  }
  const LabelAlignment alignment = align_labels(truth, renamed);
  CHECK(alignment.misclustering_rate == 0.0);
  CHECK(alignment.permutation[0] == K);
}

TEST_CASE("kmeans tie-break prefers the lowest centroid index") {
  // Two coincident point groups: equidistant points must go to the
  // lowest-index centroid deterministically.
  Eigen::MatrixXd points(4, 1);
  points << 0.0, 0.0, 1.0, 1.0;
  const std::vector<int> assignment = kmeans_rows(points, 2, 5);
  CHECK(assignment[0] == assignment[1]);
  CHECK(assignment[2] == assignment[3]);
  CHECK(assignment[0] != assignment[2]);
}
