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

#ifndef SBMSPEC_SPECTRAL_HPP
#define SBMSPEC_SPECTRAL_HPP

#include <Eigen/Dense>

#include "block_model.hpp"
#include "estimation.hpp"
#include "perturbation.hpp"

namespace sbmspec {

/// Every trace component of the two sum-of-squares decompositions plus the
/// block-level error functionals.
///
///   eta        sum_{u <= v} n_uv (B_uv - B_hat_uv)^2 / (B_uv (1 - B_uv))
///   eta_prime  (2/n) sum_{u <= v} n_uv (B_uv - B_hat_uv)(1 - 2 B_uv)
///                                / (B_uv (1 - B_uv))
///   L_value    sum_{i != j} (P_ij^3 + (1 - P_ij)^3) / (n^2 P_ij (1 - P_ij))
struct TraceReport {
  double tr_astar_sq = 0.0;
  double tr_abar_sq = 0.0;
  double tr_ahat_sq = 0.0;
  double cross_simple = 0.0;     // tr(astar * delta)
  double cross_composite = 0.0;  // tr(astar * delta_tilde)
  double cross_bias = 0.0;       // tr(astar * a_check)
  double sq_simple = 0.0;        // tr(delta^2)
  double sq_composite = 0.0;     // tr(delta_tilde^2)
  double eta = 0.0;
  double eta_prime = 0.0;
  double L_value = 0.0;
  double tr_ahat_cube = 0.0;
  double lambda1_ahat = 0.0;
};

// Which probability matrix feeds L: the true P (simulation mode, matching
// the theory) or the plug-in expansion (data mode, where P is unknown).
enum class LSource { true_p, plugin };

struct TraceOptions {
  bool with_cube = true;     // tr(ahat^3) costs one dense multiply
  bool with_lambda1 = true;  // largest eigenvalue of ahat
  LSource l_source = LSource::true_p;
};

struct StandardizedStatistics {
  double chi_simple_cross = 0.0;   // -(n/2) tr(astar delta)
  double chi_simple_sq = 0.0;      // (n/2) tr(delta^2)
  double chi_composite_sq = 0.0;   // (n/2) tr(delta_tilde^2)
  double z_composite_cross = 0.0;  // 2 tr(astar delta_tilde) / sqrt(2L-2)
  double z_bias_cross = 0.0;       // 2 tr(astar a_check) / sqrt(2L-2)
  double z_astar_sq = 0.0;         // (tr(astar^2) - (n-1)) / sqrt(2L-2)
  double tw_lambda1 = 0.0;         // n^{2/3} (lambda1(ahat) - 2)
  double z_lss = 0.0;              // tr(ahat^3) / sqrt(6)
  int df_chi = 0;                  // K (K + 1) / 2
};

double compute_L(const Eigen::MatrixXd& P);

double eta_from_estimate(const Eigen::MatrixXd& B_true,
                         const BlockEstimate& estimate);

double eta_prime_from_estimate(const Eigen::MatrixXd& B_true,
                               const BlockEstimate& estimate, int n);

TraceReport trace_report(const PerturbationStack& stack,
                         const BlockModel& model, const BlockEstimate& estimate,
                         const TraceOptions& options = {});

StandardizedStatistics standardize(const TraceReport& report, int n, int K);

// Largest algebraic eigenvalue of a symmetric matrix via Lanczos with full
// reorthogonalization. Deterministic given M; converges to a relative
// tolerance of rel_tol within a budget of 10 n matrix products.
double largest_eigenvalue(const Eigen::MatrixXd& M, double rel_tol = 1e-10);

// Plug-in normalized adjacency: (A_ij - P_hat_ij) / sqrt(n P_hat_ij
// (1 - P_hat_ij)), zero diagonal. This is the only matrix of the stack that
// is computable from data alone.
Eigen::MatrixXd build_ahat(const Eigen::MatrixXd& A,
                           const Eigen::MatrixXd& P_hat);

}  // namespace sbmspec

#endif  // SBMSPEC_SPECTRAL_HPP
