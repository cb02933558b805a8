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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace sbmspec {

double compute_L(const Eigen::MatrixXd& P) {
  const int n = static_cast<int>(P.rows());
  require(P.cols() == n, ErrorCode::invalid_argument, "P must be square");
  const double n2 = static_cast<double>(n) * n;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double p = P(i, j);
      if (!(p > 0.0 && p < 1.0)) {
        fail(ErrorCode::probability_out_of_range,
             "P entry outside (0,1) at (" + std::to_string(i) + "," +
                 std::to_string(j) + ")");
      }
      const double q = 1.0 - p;
      total += (p * p * p + q * q * q) / (n2 * p * q);
    }
  }
  return total;
}

double eta_from_estimate(const Eigen::MatrixXd& B_true,
                         const BlockEstimate& estimate) {
  const int K = estimate.K;
  require(B_true.rows() == K && B_true.cols() == K,
          ErrorCode::invalid_argument, "B and the estimate disagree on K");
  double eta = 0.0;
  for (int u = 0; u < K; ++u) {
    for (int v = u; v < K; ++v) {
      const double b = B_true(u, v);
      const double diff = b - estimate.B_hat(u, v);
      eta += estimate.counts_n_uv(u, v) * diff * diff / (b * (1.0 - b));
    }
  }
  return eta;
}

double eta_prime_from_estimate(const Eigen::MatrixXd& B_true,
                               const BlockEstimate& estimate, int n) {
  const int K = estimate.K;
  require(B_true.rows() == K && B_true.cols() == K,
          ErrorCode::invalid_argument, "B and the estimate disagree on K");
  double total = 0.0;
  for (int u = 0; u < K; ++u) {
    for (int v = u; v < K; ++v) {
      const double b = B_true(u, v);
      const double diff = b - estimate.B_hat(u, v);
      total += estimate.counts_n_uv(u, v) * diff * (1.0 - 2.0 * b) /
               (b * (1.0 - b));
    }
  }
  return 2.0 / n * total;
}

TraceReport trace_report(const PerturbationStack& stack,
                         const BlockModel& model, const BlockEstimate& estimate,
                         const TraceOptions& options) {
  require(!stack.clamp_applied, ErrorCode::clamped_stack,
          "trace identities are void for a clamped stack");
  TraceReport report;
  // For symmetric M, N: tr(M N) = sum_ij M_ij N_ij.
  report.tr_astar_sq = stack.astar.squaredNorm();
  report.tr_abar_sq = stack.abar.squaredNorm();
  report.tr_ahat_sq = stack.ahat.squaredNorm();
  report.cross_simple = stack.astar.cwiseProduct(stack.delta).sum();
  report.cross_composite = stack.astar.cwiseProduct(stack.delta_tilde).sum();
  report.cross_bias = stack.astar.cwiseProduct(stack.a_check).sum();
  report.sq_simple = stack.delta.squaredNorm();
  report.sq_composite = stack.delta_tilde.squaredNorm();
  report.eta = eta_from_estimate(model.B, estimate);
  report.eta_prime = eta_prime_from_estimate(model.B, estimate, stack.n);
  report.L_value = compute_L(options.l_source == LSource::true_p ? stack.p_true
                                                                 : stack.p_hat);
  if (options.with_cube) {
    report.tr_ahat_cube =
        (stack.ahat * stack.ahat).cwiseProduct(stack.ahat).sum();
  } else {
    report.tr_ahat_cube = std::numeric_limits<double>::quiet_NaN();
  }
  if (options.with_lambda1) {
    report.lambda1_ahat = largest_eigenvalue(stack.ahat);
  } else {
    report.lambda1_ahat = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

StandardizedStatistics standardize(const TraceReport& report, int n, int K) {
  const double variance = 2.0 * report.L_value - 2.0;
  if (variance <= 1e-8) {
    fail(ErrorCode::degenerate_variance,
         "2L - 2 = " + std::to_string(variance) +
             " is too small to standardize");
  }
  StandardizedStatistics s;
  s.chi_simple_cross = -0.5 * n * report.cross_simple;
  s.chi_simple_sq = 0.5 * n * report.sq_simple;
  s.chi_composite_sq = 0.5 * n * report.sq_composite;
  const double scale = std::sqrt(variance);
  s.z_composite_cross = 2.0 * report.cross_composite / scale;
  s.z_bias_cross = 2.0 * report.cross_bias / scale;
  s.z_astar_sq = (report.tr_astar_sq - (n - 1)) / scale;
  s.tw_lambda1 =
      std::pow(static_cast<double>(n), 2.0 / 3.0) * (report.lambda1_ahat - 2.0);
  s.z_lss = report.tr_ahat_cube / std::sqrt(6.0);
  s.df_chi = K * (K + 1) / 2;
  return s;
}

Eigen::MatrixXd build_ahat(const Eigen::MatrixXd& A,
                           const Eigen::MatrixXd& P_hat) {
  const int n = static_cast<int>(A.rows());
  require(A.cols() == n && P_hat.rows() == n && P_hat.cols() == n,
          ErrorCode::invalid_argument, "A and P_hat must be n x n");
  Eigen::MatrixXd ahat = Eigen::MatrixXd::Zero(n, n);
  const double root_n = std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double p = P_hat(i, j);
      if (!(p > 0.0 && p < 1.0)) {
        fail(ErrorCode::degenerate_estimate,
             "plug-in probability hit 0 or 1 at (" + std::to_string(i) + "," +
                 std::to_string(j) + ")");
      }
      const double value = (A(i, j) - p) / (root_n * std::sqrt(p * (1.0 - p)));
      ahat(i, j) = value;
      ahat(j, i) = value;
    }
  }
  return ahat;
}

namespace {

// Eigenvalues of the symmetric tridiagonal matrix (diag, subdiag).
Eigen::VectorXd tridiagonal_eigenvalues(const std::vector<double>& diag,
                                        const std::vector<double>& subdiag) {
  const int k = static_cast<int>(diag.size());
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    T(i, i) = diag[i];
    if (i + 1 < k) {
      T(i + 1, i) = subdiag[i];
      T(i, i + 1) = subdiag[i];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(T,
                                                        Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

}  // namespace

double largest_eigenvalue(const Eigen::MatrixXd& M, double rel_tol) {
  const int n = static_cast<int>(M.rows());
  require(M.cols() == n && n >= 1, ErrorCode::invalid_argument,
          "M must be square and nonempty");
  const double asymmetry = (M - M.transpose()).cwiseAbs().maxCoeff();
  if (asymmetry > 1e-12) {
    fail(ErrorCode::non_symmetric,
         "max asymmetry " + std::to_string(asymmetry) + " exceeds 1e-12");
  }
  if (n == 1) return M(0, 0);

  const long long budget = 10LL * n;
  const int max_dim = static_cast<int>(std::min<long long>(n, budget));
  // Grown on demand: convergence typically needs far fewer than n vectors.
  Eigen::MatrixXd basis(n, std::min(max_dim, 64));
  std::vector<double> diag, subdiag;
  diag.reserve(64);
  subdiag.reserve(64);

  // Deterministic start vector; the seed is fixed so equal inputs give
  // equal iterates.
  Rng rng(0x5BD1E995C0FFEE11ull ^ static_cast<std::uint64_t>(n));
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.next_normal();
  v.normalize();
  basis.col(0) = v;

  const double scale_hint = std::max(1.0, M.cwiseAbs().maxCoeff());
  long long matvecs = 0;
  double previous = -std::numeric_limits<double>::infinity();
  int stable_checks = 0;
  int k = 0;  // number of completed Lanczos vectors

  while (k < max_dim) {
    if (k + 1 >= basis.cols() && k + 1 < max_dim) {
      basis.conservativeResize(Eigen::NoChange,
                               std::min(max_dim, 2 * static_cast<int>(basis.cols())));
    }
    Eigen::VectorXd w = M * basis.col(k);
    ++matvecs;
    const double alpha = basis.col(k).dot(w);
    diag.push_back(alpha);
    w -= alpha * basis.col(k);
    if (k > 0) w -= subdiag[k - 1] * basis.col(k - 1);
    // Full reorthogonalization, two passes.
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j <= k; ++j) {
        w -= basis.col(j).dot(w) * basis.col(j);
      }
    }
    const double beta = w.norm();
    ++k;
    if (k == max_dim || k == n) break;

    if (beta <= 1e-14 * scale_hint) {
      // Invariant subspace: decouple with a zero coupling and continue the
      // search from a fresh direction orthogonal to everything so far.
      subdiag.push_back(0.0);
      Eigen::VectorXd fresh(n);
      double norm = 0.0;
      do {
        for (int i = 0; i < n; ++i) fresh(i) = rng.next_normal();
        for (int pass = 0; pass < 2; ++pass) {
          for (int j = 0; j < k; ++j) {
            fresh -= basis.col(j).dot(fresh) * basis.col(j);
          }
        }
        norm = fresh.norm();
      } while (norm <= 1e-8);
      basis.col(k) = fresh / norm;
    } else {
      subdiag.push_back(beta);
      basis.col(k) = w / beta;
    }

    if (k % 5 == 0) {
      const Eigen::VectorXd ritz = tridiagonal_eigenvalues(diag, subdiag);
      const double current = ritz(ritz.size() - 1);
      const double tol = rel_tol * std::max(1.0, std::abs(current));
      if (std::abs(current - previous) <= tol) {
        if (++stable_checks >= 2) {
          return current;
        }
      } else {
        stable_checks = 0;
      }
      previous = current;
    }
    if (matvecs >= budget) {
      fail(ErrorCode::no_convergence,
           "largest_eigenvalue did not converge within " +
               std::to_string(budget) + " matrix products");
    }
  }

  // Krylov space exhausted the full dimension: the tridiagonal spectrum is
  // the spectrum of M (up to roundoff).
  const Eigen::VectorXd ritz = tridiagonal_eigenvalues(diag, subdiag);
  return ritz(ritz.size() - 1);
}

}  // namespace sbmspec
