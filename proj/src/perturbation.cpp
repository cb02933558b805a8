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

#include "perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"

namespace sbmspec {

namespace {

double scaling_factor(double p_true, double p_hat) {
  // (p - p_hat)(1 - p_hat - p) / [ sqrt(p_hat(1-p_hat)) *
  //   (sqrt(p(1-p)) + sqrt(p_hat(1-p_hat))) ]
  const double s_true = std::sqrt(p_true * (1.0 - p_true));
  const double s_hat = std::sqrt(p_hat * (1.0 - p_hat));
  return (p_true - p_hat) * (1.0 - p_hat - p_true) / (s_hat * (s_true + s_hat));
}

}  // namespace

PerturbationStack build_stack(const Eigen::MatrixXd& A,
                              const Eigen::MatrixXd& P_true,
                              const BlockEstimate& estimate,
                              std::optional<double> clamp_epsilon) {
  const int n = static_cast<int>(A.rows());
  require(A.cols() == n && P_true.rows() == n && P_true.cols() == n,
          ErrorCode::invalid_argument, "A and P must be n x n");
  require(static_cast<int>(estimate.labels_used.size()) == n,
          ErrorCode::invalid_argument, "estimate labels must have length n");
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!(P_true(i, j) > 0.0 && P_true(i, j) < 1.0)) {
        fail(ErrorCode::probability_out_of_range,
             "P entry outside (0,1) at (" + std::to_string(i) + "," +
                 std::to_string(j) + ")");
      }
    }
  }

  PerturbationStack stack;
  stack.n = n;
  stack.p_true = P_true;
  stack.p_hat = expand_estimate(estimate);

  if (clamp_epsilon) {
    const double eps = *clamp_epsilon;
    require(eps > 0.0 && eps < 0.5, ErrorCode::invalid_argument,
            "clamp epsilon must lie in (0, 0.5)");
    if (stack.p_hat.minCoeff() < eps || stack.p_hat.maxCoeff() > 1.0 - eps) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          stack.p_hat(i, j) = std::clamp(stack.p_hat(i, j), eps, 1.0 - eps);
        }
      }
      stack.clamp_applied = true;
    }
  } else if (stack.p_hat.minCoeff() <= 0.0 || stack.p_hat.maxCoeff() >= 1.0) {
    fail(ErrorCode::degenerate_estimate,
         "a plug-in probability hit 0 or 1; supply a clamp epsilon to "
         "proceed");
  }

  stack.astar = Eigen::MatrixXd::Zero(n, n);
  stack.abar = Eigen::MatrixXd::Zero(n, n);
  stack.ahat = Eigen::MatrixXd::Zero(n, n);
  stack.delta = Eigen::MatrixXd::Zero(n, n);
  stack.delta_tilde = Eigen::MatrixXd::Zero(n, n);
  stack.a_check = Eigen::MatrixXd::Zero(n, n);
  stack.delta_check = Eigen::MatrixXd::Zero(n, n);
  stack.delta_hat = Eigen::MatrixXd::Zero(n, n);
  stack.alpha.resize(n, n);
  stack.gamma.resize(n, n);
  stack.upsilon.resize(n);
  stack.upsilon_check.resize(n);

  const double root_n = std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) {
    // Diagonal: alpha and gamma are defined pointwise from the probability
    // entries (gamma with the realized A_ii = 0); the scaled matrices stay
    // zero there by definition.
    {
      const double p = stack.p_true(i, i);
      const double ph = stack.p_hat(i, i);
      stack.alpha(i, i) = scaling_factor(p, ph);
      const double s_true = std::sqrt(p * (1.0 - p));
      const double s_hat = std::sqrt(ph * (1.0 - ph));
      stack.gamma(i, i) =
          (0.0 - ph) * (1.0 - ph - p) / (s_hat * (s_true + s_hat));
      stack.upsilon(i) = (p - ph) / (root_n * s_true);
      stack.upsilon_check(i) = (1.0 + stack.alpha(i, i)) * stack.upsilon(i);
      stack.delta_hat(i, i) = stack.upsilon_check(i);
    }
    for (int j = i + 1; j < n; ++j) {
      const double a = A(i, j);
      const double p = stack.p_true(i, j);
      const double ph = stack.p_hat(i, j);
      const double w_true = root_n * std::sqrt(p * (1.0 - p));
      const double w_hat = root_n * std::sqrt(ph * (1.0 - ph));

      const double astar = (a - p) / w_true;
      const double abar = (a - ph) / w_true;
      const double ahat = (a - ph) / w_hat;
      const double delta = (p - ph) / w_true;
      const double alpha = scaling_factor(p, ph);
      const double s_true = std::sqrt(p * (1.0 - p));
      const double s_hat = std::sqrt(ph * (1.0 - ph));
      const double gamma =
          (a - ph) * (1.0 - ph - p) / (s_hat * (s_true + s_hat));

      stack.astar(i, j) = stack.astar(j, i) = astar;
      stack.abar(i, j) = stack.abar(j, i) = abar;
      stack.ahat(i, j) = stack.ahat(j, i) = ahat;
      stack.delta(i, j) = stack.delta(j, i) = delta;
      stack.delta_tilde(i, j) = stack.delta_tilde(j, i) = (1.0 + gamma) * delta;
      stack.a_check(i, j) = stack.a_check(j, i) = alpha * astar;
      stack.delta_check(i, j) = stack.delta_check(j, i) = alpha * delta;
      stack.delta_hat(i, j) = stack.delta_hat(j, i) = (1.0 + alpha) * delta;
      stack.alpha(i, j) = stack.alpha(j, i) = alpha;
      stack.gamma(i, j) = stack.gamma(j, i) = gamma;
    }
  }

  stack.delta_bar = stack.delta;
  stack.delta_bar.diagonal() = stack.upsilon;
  return stack;
}

DecompositionReport verify_decompositions(const PerturbationStack& stack) {
  require(!stack.clamp_applied, ErrorCode::clamped_stack,
          "identities are not guaranteed for a clamped stack");
  const int n = stack.n;
  DecompositionReport report;

  report.residual_abar =
      (stack.abar - (stack.astar + stack.delta)).cwiseAbs().maxCoeff();
  report.residual_ahat =
      (stack.ahat - (stack.astar + stack.delta_tilde)).cwiseAbs().maxCoeff();
  report.residual_unified =
      (stack.delta_tilde - (stack.a_check + stack.delta + stack.delta_check))
          .cwiseAbs()
          .maxCoeff();

  Eigen::MatrixXd delta_bar_ref = stack.delta;
  delta_bar_ref.diagonal() = stack.upsilon;
  report.residual_delta_bar =
      (stack.delta_bar - delta_bar_ref).cwiseAbs().maxCoeff();

  Eigen::MatrixXd delta_hat_ref = stack.delta + stack.delta_check;
  delta_hat_ref.diagonal() += stack.upsilon_check;
  report.residual_delta_hat =
      (stack.delta_hat - delta_hat_ref).cwiseAbs().maxCoeff();

  double scaling = 0.0;
  double gamma_max = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      scaling = std::max(scaling,
                         std::abs(stack.ahat(i, j) -
                                  (1.0 + stack.alpha(i, j)) * stack.abar(i, j)));
      gamma_max = std::max(gamma_max, std::abs(stack.gamma(i, j)));
    }
  }
  report.residual_scaling = scaling;
  report.gamma_max = gamma_max;
  report.alpha_max = stack.alpha.cwiseAbs().maxCoeff();

  double c = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      c = std::max(c, 1.0 / (stack.p_true(i, j) * (1.0 - stack.p_true(i, j))));
    }
  }
  report.gamma_bound = c / 2.0;
  return report;
}

namespace {

Eigen::VectorXd symmetric_singular_values(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M,
                                                        Eigen::EigenvaluesOnly);
  require(solver.info() == Eigen::Success, ErrorCode::no_convergence,
          "eigendecomposition failed");
  Eigen::VectorXd sv = solver.eigenvalues().cwiseAbs();
  std::sort(sv.data(), sv.data() + sv.size(), std::greater<double>());
  return sv;
}

int numeric_rank(const Eigen::VectorXd& singular_values) {
  if (singular_values.size() == 0) return 0;
  const double cutoff = 1e-10 * singular_values(0);
  int rank = 0;
  for (int i = 0; i < singular_values.size(); ++i) {
    if (singular_values(i) > cutoff && singular_values(i) > 0.0) ++rank;
  }
  return rank;
}

}  // namespace

LowRankDiagnostics low_rank_diagnostics(const PerturbationStack& stack,
                                        const LabelVector& labels) {
  const int n = stack.n;
  require(static_cast<int>(labels.size()) == n, ErrorCode::mismatched_length,
          "labels must have length n");
  int K = 0;
  for (int g : labels) K = std::max(K, g);
  const std::vector<long long> counts = community_counts(labels, K);

  LowRankDiagnostics diag;
  diag.theta_used = Eigen::MatrixXd::Zero(n, K);
  for (int i = 0; i < n; ++i) {
    const int k = labels[i] - 1;
    diag.theta_used(i, k) = 1.0 / std::sqrt(static_cast<double>(counts[k]));
  }

  diag.singular_values_delta_bar = symmetric_singular_values(stack.delta_bar);
  diag.singular_values_delta_hat = symmetric_singular_values(stack.delta_hat);
  diag.singular_values_delta_tilde =
      symmetric_singular_values(stack.delta_tilde);
  diag.numeric_rank_delta_bar = numeric_rank(diag.singular_values_delta_bar);
  diag.numeric_rank_delta_hat = numeric_rank(diag.singular_values_delta_hat);
  diag.numeric_rank_delta_tilde =
      numeric_rank(diag.singular_values_delta_tilde);

  const Eigen::MatrixXd sigma =
      diag.theta_used.transpose() * stack.delta_bar * diag.theta_used;
  const Eigen::MatrixXd sigma_hat =
      diag.theta_used.transpose() * stack.delta_hat * diag.theta_used;
  diag.sigma_norm = symmetric_singular_values(sigma)(0);
  diag.sigma_hat_norm = symmetric_singular_values(sigma_hat)(0);
  diag.delta_bar_norm = diag.singular_values_delta_bar(0);
  diag.delta_hat_norm = diag.singular_values_delta_hat(0);
  diag.a_check_norm = symmetric_singular_values(stack.a_check)(0);
  return diag;
}

}  // namespace sbmspec
