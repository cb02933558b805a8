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

#include "gof.hpp"

#include <cmath>

#include "errors.hpp"
#include "reference_laws.hpp"
#include "rng.hpp"
#include "spectral.hpp"

namespace sbmspec {

double gof_p_value(GofStatistic kind, double value) {
  switch (kind) {
    case GofStatistic::lambda1_tw:
      // Underfitting pushes the largest eigenvalue up: one-sided upper tail.
      return 1.0 - ReferenceLaw::tracy_widom_1().cdf(value);
    case GofStatistic::lss_normal:
      return 2.0 * (1.0 - ReferenceLaw::standard_normal().cdf(std::abs(value)));
  }
  fail(ErrorCode::invalid_argument, "unknown statistic kind");
}

TestOutcome gof_test(const Eigen::MatrixXd& A, int k0, GofStatistic kind,
                     double alpha, LabelMode label_mode,
                     const LabelVector* truth, std::uint64_t seed) {
  const int n = static_cast<int>(A.rows());
  require(k0 >= 1, ErrorCode::invalid_argument, "k0 must be >= 1");
  require(alpha > 0.0 && alpha < 1.0, ErrorCode::invalid_argument,
          "alpha must lie in (0, 1)");

  const LabelVector labels = estimate_labels(A, k0, label_mode, truth, seed);
  const BlockEstimate estimate = estimate_block_matrix(A, labels, k0);
  const Eigen::MatrixXd ahat = build_ahat(A, expand_estimate(estimate));

  TestOutcome outcome;
  outcome.kind = kind;
  outcome.k0_tested = k0;
  outcome.label_mode = label_mode;
  if (kind == GofStatistic::lambda1_tw) {
    outcome.value = std::pow(static_cast<double>(n), 2.0 / 3.0) *
                    (largest_eigenvalue(ahat) - 2.0);
  } else {
    outcome.value = (ahat * ahat).cwiseProduct(ahat).sum() / std::sqrt(6.0);
  }
  outcome.p_value = gof_p_value(kind, outcome.value);
  outcome.reject = outcome.p_value < alpha;
  if (label_mode == LabelMode::spectral && truth != nullptr) {
    outcome.has_misclustering = true;
    outcome.misclustering_rate = align_labels(*truth, labels).misclustering_rate;
  }
  return outcome;
}

KSelectionResult estimate_num_communities(const Eigen::MatrixXd& A, int kmax,
                                          GofStatistic kind, double alpha,
                                          std::uint64_t seed) {
  require(kmax >= 1, ErrorCode::invalid_argument, "kmax must be >= 1");
  KSelectionResult result;
  result.k_hat = kmax + 1;
  for (int k0 = 1; k0 <= kmax; ++k0) {
    const TestOutcome outcome = gof_test(A, k0, kind, alpha,
                                         LabelMode::spectral, nullptr,
                                         derive_seed(seed, k0));
    result.trail.push_back(outcome);
    if (!outcome.reject) {
      result.k_hat = k0;
      break;
    }
  }
  return result;
}

}  // namespace sbmspec
