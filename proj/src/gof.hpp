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

#ifndef SBMSPEC_GOF_HPP
#define SBMSPEC_GOF_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "block_model.hpp"
#include "estimation.hpp"

namespace sbmspec {

enum class GofStatistic { lambda1_tw, lss_normal };

struct TestOutcome {
  GofStatistic kind = GofStatistic::lss_normal;
  double value = 0.0;
  double p_value = 1.0;
  bool reject = false;
  int k0_tested = 0;
  LabelMode label_mode = LabelMode::spectral;
  // Filled when the true labels were supplied alongside spectral estimation.
  bool has_misclustering = false;
  double misclustering_rate = 0.0;
};

struct KSelectionResult {
  int k_hat = 0;  // first non-rejected K0, or kmax + 1 if all rejected
  std::vector<TestOutcome> trail;
};

// Goodness-of-fit test of H0: the network is an SBM with k0 communities.
//
// Labels come from `label_mode` (`truth` required for oracle mode, optional
// under spectral mode where it only feeds the misclustering diagnostic).
// The statistic is computed from the plug-in normalized adjacency alone:
//   lambda1_tw  n^{2/3} (lambda_1 - 2), one-sided upper against TW1
//   lss_normal  tr(ahat^3) / sqrt(6),   two-sided against N(0, 1)
TestOutcome gof_test(const Eigen::MatrixXd& A, int k0, GofStatistic kind,
                     double alpha, LabelMode label_mode,
                     const LabelVector* truth, std::uint64_t seed);

// Sequential scan K0 = 1, 2, ... with spectral labels, stopping at the first
// acceptance.
KSelectionResult estimate_num_communities(const Eigen::MatrixXd& A, int kmax,
                                          GofStatistic kind, double alpha,
                                          std::uint64_t seed);

// p-value conventions used by gof_test, exposed for direct use on a
// statistic value.
double gof_p_value(GofStatistic kind, double value);

}  // namespace sbmspec

#endif  // SBMSPEC_GOF_HPP
