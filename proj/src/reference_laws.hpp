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

#ifndef SBMSPEC_REFERENCE_LAWS_HPP
#define SBMSPEC_REFERENCE_LAWS_HPP

#include <cstdint>
#include <memory>
#include <vector>

namespace sbmspec {

enum class LawKind { chi_square, standard_normal, tracy_widom_1 };

enum class Tw1Source { embedded, calibrated };

namespace detail {
class Tw1Interpolant;
}

/// One of the three reference laws the test statistics are compared against.
/// The Tracy-Widom CDF is a monotone cubic interpolant of a grid on [-5, 3]
/// with 0.01 spacing: the embedded grid by default, or a grid rebuilt from a
/// calibration sample.
class ReferenceLaw {
 public:
  static ReferenceLaw chi_square(int df);
  static ReferenceLaw standard_normal();
  static ReferenceLaw tracy_widom_1();
  // Builds the TW1 law from a calibration sample (see calibrate_tw1).
  static ReferenceLaw tracy_widom_1_from_sample(const std::vector<double>& sample);

  LawKind kind() const { return kind_; }
  int df() const { return df_; }
  Tw1Source tw1_source() const { return source_; }

  double cdf(double x) const;
  double pdf(double x) const;
  // Monotone inverse of cdf by bisection to 1e-8; p must lie in (0, 1).
  double quantile(double p) const;

 private:
  ReferenceLaw(LawKind kind, int df) : kind_(kind), df_(df) {}

  LawKind kind_;
  int df_ = 0;
  Tw1Source source_ = Tw1Source::embedded;
  std::shared_ptr<const detail::Tw1Interpolant> grid_;  // TW1 only
};

// Regularized lower incomplete gamma P(a, x), the chi-square CDF backbone.
double regularized_gamma_p(double a, double x);

// Kolmogorov-Smirnov distance between the empirical CDF of `sample` and the
// law, evaluated on both sides of every sample point.
double ks_distance(std::vector<double> sample, const ReferenceLaw& law);

// Scaled largest eigenvalues m^{2/3} (lambda_1 - 2) of `reps` independent
// GOE draws: symmetric m x m with N(0, 1/m) off-diagonal and N(0, 2/m)
// diagonal entries, so the spectral edge sits at 2. Returns the sorted
// sample (the empirical CDF grid). Draws use per-index substreams of `seed`,
// so the result does not depend on `threads`.
std::vector<double> calibrate_tw1(int m, int reps, std::uint64_t seed,
                                  int threads = 1);

}  // namespace sbmspec

#endif  // SBMSPEC_REFERENCE_LAWS_HPP
