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

#include "spectral.hpp"

#include <cmath>

#include "doctest.h"
#include "errors.hpp"
#include "oracles.hpp"
#include "rng.hpp"

using namespace sbmspec;

namespace {

BlockModel paper_model() {
  Eigen::MatrixXd b(2, 2);
  b << 0.4, 0.1, 0.1, 0.4;
  return build_model(2, b, {200, 200});
}

struct Realization {
  Eigen::MatrixXd a, p;
  BlockEstimate estimate;
  PerturbationStack stack;
};

Realization draw(const BlockModel& model, std::uint64_t seed) {
  const LabelVector labels = oracle_labels(model);
  Realization r;
  r.a = sample_adjacency(model, labels, seed);
  r.p = probability_matrix(model, labels);
  r.estimate = estimate_block_matrix(r.a, labels, model.K);
  r.stack = build_stack(r.a, r.p, r.estimate);
  return r;
}

// Independent route: closed-form block sums with ordered-pair counts.
double blocked_L(const BlockModel& model) {
  double total = 0.0;
  const double n2 = static_cast<double>(model.n) * model.n;
  for (int u = 0; u < model.K; ++u) {
    for (int v = 0; v < model.K; ++v) {
      const double pairs =
          u == v ? static_cast<double>(model.sizes[u]) * (model.sizes[u] - 1)
                 : static_cast<double>(model.sizes[u]) * model.sizes[v];
      const double p = model.B(u, v);
      const double q = 1.0 - p;
      total += pairs * (p * p * p + q * q * q) / (n2 * p * q);
    }
  }
  return total;
}

}  // namespace

TEST_CASE("L at p = 1/2 degenerates to (n-1)/n") {
  for (int n : {3, 10, 57}) {
    const Eigen::MatrixXd p = Eigen::MatrixXd::Constant(n, n, 0.5);
    CHECK(compute_L(p) ==
          doctest::Approx((n - 1.0) / n).epsilon(1e-12));
  }
}

TEST_CASE("L for a single sparse community") {
  // 9900 ordered pairs, fourth moment (0.001 + 0.729) / (0.1 * 0.9) per n^2.
  const Eigen::MatrixXd p = Eigen::MatrixXd::Constant(100, 100, 0.1);
  CHECK(compute_L(p) == doctest::Approx(8.03).epsilon(1e-6));
}

TEST_CASE("L for the paper setting, against the blocked closed form") {
  const BlockModel model = paper_model();
  const Eigen::MatrixXd p = probability_matrix(model, oracle_labels(model));
  const double l = compute_L(p);
  CHECK(l == doctest::Approx(4.63597).epsilon(1e-5));
  CHECK(2.0 * l - 2.0 == doctest::Approx(7.27194).epsilon(1e-5));
  CHECK(l == doctest::Approx(blocked_L(model)).epsilon(1e-12));
}

TEST_CASE("L rejects boundary probabilities") {
  Eigen::MatrixXd p = Eigen::MatrixXd::Constant(4, 4, 0.3);
  p(1, 2) = 1.0;
  CHECK_THROWS_AS(compute_L(p), Error);
}

TEST_CASE("trace report on the single-community single-edge example") {
  // K = 1, n = 3, B = 0.5, one edge: B_hat = 1/3, eta = 1/3,
  // tr(delta^2) = 2/9, tr(astar delta) = -2/9.
  Eigen::MatrixXd b(1, 1);
  b << 0.5;
  const BlockModel model = build_model(1, b, {3});
  const LabelVector labels = oracle_labels(model);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a(0, 1) = a(1, 0) = 1.0;
  const Eigen::MatrixXd p = probability_matrix(model, labels);
  const BlockEstimate est = estimate_block_matrix(a, labels, 1);
  CHECK(est.B_hat(0, 0) == doctest::Approx(1.0 / 3.0));
  const PerturbationStack stack = build_stack(a, p, est);
  const TraceReport report = trace_report(stack, model, est);
  CHECK(report.eta == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(report.sq_simple == doctest::Approx(2.0 / 9.0).epsilon(1e-12));
  CHECK(report.cross_simple == doctest::Approx(-2.0 / 9.0).epsilon(1e-12));
  CHECK(report.tr_ahat_sq == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("exact identity suite on seeded paper draws") {
  const BlockModel model = paper_model();
  for (std::uint64_t seed = 700; seed < 710; ++seed) {
    const Realization r = draw(model, seed);
    const TraceReport report = trace_report(r.stack, model, r.estimate);
    const int n = model.n;

    CHECK(std::abs(report.tr_ahat_sq - (n - 1)) < 1e-9 * n);
    const double tol = 1e-10 * (1.0 + report.eta);
    CHECK(std::abs(report.cross_simple + 2.0 / n * report.eta) < tol);
    CHECK(std::abs(report.sq_simple - 2.0 / n * report.eta) < tol);

    // Additivity of both decompositions.
    CHECK(std::abs(report.tr_abar_sq -
                   (report.tr_astar_sq + 2.0 * report.cross_simple +
                    report.sq_simple)) < 1e-9 * n);
    CHECK(std::abs(report.tr_ahat_sq -
                   (report.tr_astar_sq + 2.0 * report.cross_composite +
                    report.sq_composite)) < 1e-9 * n);

    const StandardizedStatistics stats = standardize(report, n, model.K);
    CHECK(stats.chi_simple_cross ==
          doctest::Approx(stats.chi_simple_sq).epsilon(1e-9));
    CHECK(stats.chi_simple_cross == doctest::Approx(report.eta).epsilon(1e-9));
    CHECK(stats.df_chi == 3);
  }
}

TEST_CASE("clamped stacks are refused") {
  Eigen::MatrixXd b(2, 2);
  b << 0.7, 0.2, 0.2, 0.7;
  const BlockModel model = build_model(2, b, {3, 3});
  const LabelVector labels = oracle_labels(model);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(6, 6);
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 1; j < 6; ++j) {
      if ((i < 3) == (j < 3)) a(i, j) = a(j, i) = 1.0;
    }
  }
  const Eigen::MatrixXd p = probability_matrix(model, labels);
  const BlockEstimate est = estimate_block_matrix(a, labels, 2);
  const PerturbationStack stack = build_stack(a, p, est, 1e-6);
  try {
    trace_report(stack, model, est);
    FAIL("expected clamped_stack");
  } catch (const Error& error) {
    CHECK(error.code() == ErrorCode::clamped_stack);
  }
}

TEST_CASE("standardize fills the degrees of freedom and rejects p = 1/2") {
  TraceReport report;
  report.L_value = 4.0;
  report.lambda1_ahat = 2.0;
  report.tr_ahat_cube = 0.0;
  CHECK(standardize(report, 100, 2).df_chi == 3);
  CHECK(standardize(report, 100, 5).df_chi == 15);

  report.L_value = (100.0 - 1.0) / 100.0;  // P identically 1/2
  try {
    standardize(report, 100, 2);
    FAIL("expected degenerate_variance");
  } catch (const Error& error) {
    CHECK(error.code() == ErrorCode::degenerate_variance);
  }
}

TEST_CASE("zero perturbation zeroes the chi statistics") {
  const BlockModel model = paper_model();
  const LabelVector labels = oracle_labels(model);
  const Eigen::MatrixXd a = sample_adjacency(model, labels, 3);
  const Eigen::MatrixXd p = probability_matrix(model, labels);
  BlockEstimate exact;
  exact.K = model.K;
  exact.B_hat = model.B;
  exact.labels_used = labels;
  exact.counts_n_u.assign(model.sizes.begin(), model.sizes.end());
  exact.counts_n_uv.resize(2, 2);
  exact.counts_n_uv << 19900.0, 40000.0, 40000.0, 19900.0;
  const PerturbationStack stack = build_stack(a, p, exact);
  const TraceReport report = trace_report(stack, model, exact);
  const StandardizedStatistics stats = standardize(report, model.n, model.K);
  CHECK(stats.chi_simple_cross == 0.0);
  CHECK(stats.chi_simple_sq == 0.0);
  CHECK(stats.chi_composite_sq == 0.0);
  // ahat == astar here, so the LSS is tr(astar^3) / sqrt(6).
  const double cube = (stack.astar * stack.astar)
                          .cwiseProduct(stack.astar)
                          .sum();
  CHECK(stats.z_lss == doctest::Approx(cube / std::sqrt(6.0)).epsilon(1e-12));
}

TEST_CASE("largest eigenvalue on closed-form matrices") {
  Eigen::MatrixXd m(2, 2);
  m << 0.0, 3.0, 3.0, 0.0;
  CHECK(largest_eigenvalue(m) == doctest::Approx(3.0).epsilon(1e-10));

  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
  d.diagonal() << 1.0, 5.0, 2.0;
  CHECK(largest_eigenvalue(d) == doctest::Approx(5.0).epsilon(1e-10));

  Eigen::MatrixXd one(1, 1);
  one << -7.5;
  CHECK(largest_eigenvalue(one) == -7.5);
}

TEST_CASE("largest eigenvalue rejects asymmetric input") {
  Eigen::MatrixXd m(2, 2);
  m << 0.0, 1.0, 1.0 + 1e-9, 0.0;
  try {
    largest_eigenvalue(m);
    FAIL("expected non_symmetric");
  } catch (const Error& error) {
    CHECK(error.code() == ErrorCode::non_symmetric);
  }
}

TEST_CASE("largest eigenvalue agrees with the dense solver on random input") {
  Rng rng(515);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(199));
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
      m(i, i) = 2.0 * rng.next_unit() - 1.0;
      for (int j = i + 1; j < n; ++j) {
        const double v = 2.0 * rng.next_unit() - 1.0;
        m(i, j) = v;
        m(j, i) = v;
      }
    }
    const double expected = oracles::largest_eigenvalue_dense(m);
    CHECK(largest_eigenvalue(m) ==
          doctest::Approx(expected).epsilon(1e-8));
  }
}

TEST_CASE("largest eigenvalue of stack matrices matches the dense route") {
  Eigen::MatrixXd b(2, 2);
  b << 0.45, 0.15, 0.15, 0.45;
  const BlockModel model = build_model(2, b, {60, 60});
  for (std::uint64_t seed = 40; seed < 44; ++seed) {
    const LabelVector labels = oracle_labels(model);
    const Eigen::MatrixXd a = sample_adjacency(model, labels, seed);
    const Eigen::MatrixXd p = probability_matrix(model, labels);
    const BlockEstimate est = estimate_block_matrix(a, labels, 2);
    const PerturbationStack stack = build_stack(a, p, est);
    for (const Eigen::MatrixXd* m :
         {&stack.ahat, &stack.astar, &stack.delta_tilde}) {
      CHECK(largest_eigenvalue(*m) ==
            doctest::Approx(oracles::largest_eigenvalue_dense(*m))
                .epsilon(1e-8));
    }
  }
}

TEST_CASE("plug-in ahat equals the stack's composite matrix") {
  const BlockModel model = paper_model();
  const Realization r = draw(model, 77);
  const Eigen::MatrixXd direct = build_ahat(r.a, expand_estimate(r.estimate));
  CHECK((direct - r.stack.ahat).cwiseAbs().maxCoeff() == 0.0);

  Eigen::MatrixXd saturated = expand_estimate(r.estimate);
  saturated(0, 1) = 1.0;
  saturated(1, 0) = 1.0;
  try {
    build_ahat(r.a, saturated);
    FAIL("expected degenerate_estimate");
  } catch (const Error& error) {
    CHECK(error.code() == ErrorCode::degenerate_estimate);
  }
}
