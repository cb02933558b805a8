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

#ifndef SBMSPEC_PERTURBATION_HPP
#define SBMSPEC_PERTURBATION_HPP

#include <Eigen/Dense>
#include <optional>

#include "block_model.hpp"
#include "estimation.hpp"

namespace sbmspec {

/// All matrices of the simple/composite perturbation decomposition for one
/// network realization.
///
/// With w_ij = sqrt(n P_ij (1 - P_ij)) and w_hat_ij the same under the
/// plug-in P_hat (off-diagonal entries; diagonals of the dense matrices are
/// zero):
///
///   astar        (A_ij - P_ij) / w_ij
///   abar         (A_ij - P_hat_ij) / w_ij            = astar + delta
///   ahat         (A_ij - P_hat_ij) / w_hat_ij        = astar + delta_tilde
///   delta        (P_ij - P_hat_ij) / w_ij
///   delta_tilde  (1 + gamma_ij) delta_ij
///   a_check      alpha_ij * astar_ij
///   delta_check  alpha_ij * delta_ij
///   delta_bar    delta + diag(upsilon)
///   delta_hat    (1 + alpha_ij) delta_ij, diagonal (1 + alpha_ii) upsilon_i
///   upsilon_i    (P_ii - P_hat_ii) / sqrt(n P_ii (1 - P_ii))
///
/// gamma couples the realized adjacency with the scaling mismatch; alpha is
/// the same expression with A_ij replaced by P_ij, so it depends on the two
/// probability matrices only.
struct PerturbationStack {
  int n = 0;
  Eigen::MatrixXd astar, abar, ahat;
  Eigen::MatrixXd delta, delta_tilde, delta_bar;
  Eigen::MatrixXd a_check, delta_check, delta_hat;
  Eigen::MatrixXd alpha, gamma;
  Eigen::VectorXd upsilon, upsilon_check;
  Eigen::MatrixXd p_true, p_hat;  // p_hat after clamping, when applied
  bool clamp_applied = false;
};

struct DecompositionReport {
  // Max absolute entrywise residuals of the six defining identities.
  double residual_abar = 0.0;        // abar - (astar + delta)
  double residual_ahat = 0.0;        // ahat - (astar + delta_tilde)
  double residual_unified = 0.0;     // delta_tilde - (a_check + delta + delta_check)
  double residual_delta_bar = 0.0;   // delta_bar - (delta + diag(upsilon))
  double residual_delta_hat = 0.0;   // delta_hat - (delta + delta_check + diag(upsilon_check))
  double residual_scaling = 0.0;     // ahat - (1 + alpha) .* abar, off-diagonal
  double gamma_max = 0.0;            // max_{i != j} |gamma_ij|
  double alpha_max = 0.0;            // max_{i, j}  |alpha_ij|
  double gamma_bound = 0.0;          // C / 2 with C = max_uv 1 / (B_uv (1 - B_uv))
};

struct LowRankDiagnostics {
  Eigen::VectorXd singular_values_delta_bar;    // nonincreasing
  Eigen::VectorXd singular_values_delta_hat;
  Eigen::VectorXd singular_values_delta_tilde;
  int numeric_rank_delta_bar = 0;               // count above 1e-10 * sigma_1
  int numeric_rank_delta_hat = 0;
  int numeric_rank_delta_tilde = 0;
  double sigma_norm = 0.0;      // ||Theta^T delta_bar Theta||
  double sigma_hat_norm = 0.0;  // ||Theta^T delta_hat Theta||
  double delta_bar_norm = 0.0;
  double delta_hat_norm = 0.0;
  double a_check_norm = 0.0;
  Eigen::MatrixXd theta_used;   // n x K community indicators, columns unit norm
};

// Conventional clamp width for callers that opt in.
inline constexpr double kDefaultClampEpsilon = 1e-6;

// Builds the full stack from an adjacency draw, the true probability matrix,
// and a block estimate. If some plug-in entry hits 0 or 1 the scaled matrices
// are undefined; supplying clamp_epsilon clips P_hat into
// [epsilon, 1 - epsilon] when any entry leaves that interval (and marks the
// stack), otherwise the build fails on a degenerate entry.
PerturbationStack build_stack(const Eigen::MatrixXd& A,
                              const Eigen::MatrixXd& P_true,
                              const BlockEstimate& estimate,
                              std::optional<double> clamp_epsilon = std::nullopt);

// Residuals of the defining identities. Refuses clamped stacks: clamping
// breaks the exact algebra.
DecompositionReport verify_decompositions(const PerturbationStack& stack);

LowRankDiagnostics low_rank_diagnostics(const PerturbationStack& stack,
                                        const LabelVector& labels);

}  // namespace sbmspec

#endif  // SBMSPEC_PERTURBATION_HPP
