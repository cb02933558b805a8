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

#include "doctest.h"
#include "errors.hpp"
#include "rng.hpp"

using namespace sbmspec;

namespace {

Eigen::MatrixXd matrix2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

BlockModel paper_model(int per_community = 200) {
  return build_model(2, matrix2(0.4, 0.1, 0.1, 0.4),
                     {per_community, per_community});
}

}  // namespace

TEST_CASE("build_model validates and computes n") {
  Eigen::MatrixXd b1(1, 1);
  b1 << 0.5;
  const BlockModel minimal = build_model(1, b1, {4});
  CHECK(minimal.n == 4);
  CHECK(minimal.K == 1);

  const BlockModel paper = paper_model();
  CHECK(paper.n == 400);

  CHECK_THROWS_AS(build_model(2, matrix2(0.4, 0.1, 0.2, 0.4), {5, 5}), Error);
  try {
    build_model(2, matrix2(0.4, 0.1, 0.2, 0.4), {5, 5});
  } catch (const Error& error) {
    CHECK(error.code() == ErrorCode::non_symmetric_b);
  }

  try {
    Eigen::MatrixXd degenerate(1, 1);
    degenerate << 1.0;
    build_model(1, degenerate, {4});
    FAIL("expected probability_out_of_range");
  } catch (const Error& error) {
    CHECK(error.code() == ErrorCode::probability_out_of_range);
  }

  try {
    build_model(2, matrix2(0.4, 0.1, 0.1, 0.4), {1, 5});
    FAIL("expected community_too_small");
  } catch (const Error& error) {
    CHECK(error.code() == ErrorCode::community_too_small);
  }
}

TEST_CASE("balanced sizes put remainders on the lowest communities") {
  CHECK(balanced_sizes(400, 2) == std::vector<int>{200, 200});
  CHECK(balanced_sizes(11, 3) == std::vector<int>{4, 4, 3});
  CHECK_THROWS_AS(balanced_sizes(3, 2), Error);
}

TEST_CASE("oracle labels follow the block layout") {
  Eigen::MatrixXd b(2, 2);
  b << 0.3, 0.2, 0.2, 0.3;
  const BlockModel model = build_model(2, b, {2, 3});
  CHECK(oracle_labels(model) == LabelVector{1, 1, 2, 2, 2});

  Eigen::MatrixXd b1(1, 1);
  b1 << 0.5;
  CHECK(oracle_labels(build_model(1, b1, {4})) == LabelVector{1, 1, 1, 1});
}

TEST_CASE("probability matrix expands block probabilities") {
  Eigen::MatrixXd b1(1, 1);
  b1 << 0.3;
  const BlockModel tiny = build_model(1, b1, {3});
  const Eigen::MatrixXd p = probability_matrix(tiny, oracle_labels(tiny));
  CHECK(p.minCoeff() == 0.3);
  CHECK(p.maxCoeff() == 0.3);

  const BlockModel paper = paper_model();
  const Eigen::MatrixXd pp = probability_matrix(paper, oracle_labels(paper));
  CHECK(pp(0, 1) == 0.4);    // same block
  CHECK(pp(0, 0) == 0.4);    // diagonal is defined as well
  CHECK(pp(0, 399) == 0.1);  // different blocks
  CHECK(pp(399, 399) == 0.4);

  try {
    LabelVector bad = oracle_labels(paper);
    bad[7] = 3;
    probability_matrix(paper, bad);
    FAIL("expected label_out_of_range");
  } catch (const Error& error) {
    CHECK(error.code() == ErrorCode::label_out_of_range);
  }
}

TEST_CASE("probability matrix is invariant under consistent relabeling") {
  const BlockModel model = build_model(2, matrix2(0.4, 0.1, 0.1, 0.4), {3, 4});
  const LabelVector labels = oracle_labels(model);
  const Eigen::MatrixXd p = probability_matrix(model, labels);

  // Swap community indices 1 <-> 2 in both B and g.
  Eigen::MatrixXd swapped_b(2, 2);
  swapped_b << model.B(1, 1), model.B(1, 0), model.B(0, 1), model.B(0, 0);
  const BlockModel swapped = build_model(2, swapped_b, {4, 3});
  LabelVector swapped_labels(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    swapped_labels[i] = labels[i] == 1 ? 2 : 1;
  }
  const Eigen::MatrixXd q = probability_matrix(swapped, swapped_labels);
  CHECK((p - q).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("relabeling invariance holds for arbitrary permutations") {
  Rng rng(808);
  for (int trial = 0; trial < 15; ++trial) {
    const int K = 2 + static_cast<int>(rng.next_below(4));
    std::vector<int> sizes(K);
    for (int& s : sizes) s = 2 + static_cast<int>(rng.next_below(5));
    Eigen::MatrixXd b(K, K);
    for (int u = 0; u < K; ++u) {
      b(u, u) = 0.2 + 0.6 * rng.next_unit();
      for (int v = u + 1; v < K; ++v) {
        b(u, v) = b(v, u) = 0.1 + 0.5 * rng.next_unit();
      }
    }
    const BlockModel model = build_model(K, b, sizes);
    const LabelVector labels = oracle_labels(model);
    const Eigen::MatrixXd p = probability_matrix(model, labels);

    std::vector<int> perm(K);  // perm[old] = new, random shuffle
    for (int k = 0; k < K; ++k) perm[k] = k;
    for (int k = K - 1; k > 0; --k) {
      std::swap(perm[k], perm[rng.next_below(k + 1)]);
    }
    Eigen::MatrixXd pb(K, K);
    std::vector<int> psizes(K);
    for (int u = 0; u < K; ++u) {
      psizes[perm[u]] = sizes[u];
      for (int v = 0; v < K; ++v) pb(perm[u], perm[v]) = b(u, v);
    }
    LabelVector plabels(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      plabels[i] = perm[labels[i] - 1] + 1;
    }
    const BlockModel renamed = build_model(K, pb, psizes);
    CHECK((probability_matrix(renamed, plabels) - p).cwiseAbs().maxCoeff() ==
          0.0);
  }
}

TEST_CASE("two-node sample is the zero or one-edge matrix") {
  Eigen::MatrixXd b1(1, 1);
  b1 << 0.5;
  const BlockModel model = build_model(1, b1, {2});
  const LabelVector labels = oracle_labels(model);
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    const Eigen::MatrixXd a = sample_adjacency(model, labels, seed);
    CHECK(a(0, 0) == 0.0);
    CHECK(a(1, 1) == 0.0);
    CHECK(a(0, 1) == a(1, 0));
    CHECK((a(0, 1) == 0.0 || a(0, 1) == 1.0));
  }
}

TEST_CASE("sampled adjacency is symmetric, binary, hollow for every seed") {
  const BlockModel model = build_model(2, matrix2(0.4, 0.1, 0.1, 0.4), {13, 9});
  const LabelVector labels = oracle_labels(model);
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const Eigen::MatrixXd a = sample_adjacency(model, labels, seed);
    CHECK(a.diagonal().cwiseAbs().maxCoeff() == 0.0);
    CHECK((a - a.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (int i = 0; i < model.n; ++i) {
      for (int j = 0; j < model.n; ++j) {
        CHECK((a(i, j) == 0.0 || a(i, j) == 1.0));
      }
    }
  }
}

TEST_CASE("paper-setting edge count is within five standard deviations") {
  // 39800 within pairs at 0.4 plus 40000 cross pairs at 0.1:
  // mean 19920, variance 39800 * 0.24 + 40000 * 0.09 = 13152.
  const BlockModel model = paper_model();
  const LabelVector labels = oracle_labels(model);
  const Eigen::MatrixXd a = sample_adjacency(model, labels, 20260101);
  const double edges = a.sum() / 2.0;
  const double sd = std::sqrt(13152.0);
  CHECK(edges > 19920.0 - 5.0 * sd);
  CHECK(edges < 19920.0 + 5.0 * sd);
}

TEST_CASE("same seed reproduces the draw bit for bit") {
  const BlockModel model = build_model(2, matrix2(0.4, 0.1, 0.1, 0.4), {20, 20});
  const LabelVector labels = oracle_labels(model);
  const Eigen::MatrixXd a = sample_adjacency(model, labels, 99);
  const Eigen::MatrixXd b = sample_adjacency(model, labels, 99);
  const Eigen::MatrixXd c = sample_adjacency(model, labels, 100);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a - c).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("block densities concentrate over 200 draws") {
  const BlockModel model = build_model(2, matrix2(0.4, 0.1, 0.1, 0.4), {30, 30});
  const LabelVector labels = oracle_labels(model);
  const int reps = 200;
  double sum11 = 0.0, sum12 = 0.0, sum22 = 0.0;
  const double pairs11 = 30.0 * 29.0 / 2.0;
  const double pairs12 = 30.0 * 30.0;
  for (int r = 0; r < reps; ++r) {
    const Eigen::MatrixXd a = sample_adjacency(model, labels, 1000 + r);
    double e11 = 0.0, e12 = 0.0, e22 = 0.0;
    for (int i = 0; i < 60; ++i) {
      for (int j = i + 1; j < 60; ++j) {
        if (a(i, j) == 0.0) continue;
        if (i < 30 && j < 30) {
          e11 += 1.0;
        } else if (i >= 30) {
          e22 += 1.0;
        } else {
          e12 += 1.0;
        }
      }
    }
    sum11 += e11 / pairs11;
    sum12 += e12 / pairs12;
    sum22 += e22 / pairs11;
  }
  const double bound_diag = 4.0 * std::sqrt(0.4 * 0.6 / (reps * pairs11));
  const double bound_cross = 4.0 * std::sqrt(0.1 * 0.9 / (reps * pairs12));
  CHECK(std::abs(sum11 / reps - 0.4) < bound_diag);
  CHECK(std::abs(sum22 / reps - 0.4) < bound_diag);
  CHECK(std::abs(sum12 / reps - 0.1) < bound_cross);
}

TEST_CASE("balance diagnostics") {
  const BalanceDiagnostics balanced = check_assumptions(paper_model());
  CHECK(balanced.min_ratio == doctest::Approx(1.0));
  CHECK(balanced.max_ratio == doctest::Approx(std::log(2.0) * 0.5));

  const BlockModel skewed =
      build_model(2, matrix2(0.4, 0.1, 0.1, 0.4), {100, 300});
  CHECK(check_assumptions(skewed).min_ratio == doctest::Approx(0.5));

  Eigen::MatrixXd b1(1, 1);
  b1 << 0.2;
  CHECK(check_assumptions(build_model(1, b1, {10})).max_ratio == 0.0);
}
