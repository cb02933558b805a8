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

// Test-only oracles, independent of the library code paths they check.

#ifndef SBMSPEC_TESTS_ORACLES_HPP
#define SBMSPEC_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <functional>

namespace oracles {

// Adaptive Simpson quadrature.
inline double simpson_step(const std::function<double(double)>& f, double a,
                           double b, double fa, double fm, double fb,
                           double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-12) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, 48);
}

inline double chi_square_pdf(int df, double x) {
  if (x <= 0.0) return 0.0;
  const double half = 0.5 * df;
  return std::exp((half - 1.0) * std::log(x) - 0.5 * x -
                  half * std::log(2.0) - std::lgamma(half));
}

// Chi-square CDF by quadrature of the density, integrated in u = sqrt(t) so
// the df = 1 endpoint singularity disappears.
inline double chi_square_cdf_quadrature(int df, double x) {
  if (x <= 0.0) return 0.0;
  return integrate(
      [df](double u) { return 2.0 * u * chi_square_pdf(df, u * u); }, 0.0,
      std::sqrt(x));
}

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

// Standard normal CDF by quadrature from 0 (plus the 1/2 mass below 0).
inline double normal_cdf_quadrature(double x) {
  if (x >= 0.0) return 0.5 + integrate(normal_pdf, 0.0, x);
  return 0.5 - integrate(normal_pdf, x, 0.0);
}

// Full symmetric eigendecomposition, the independent route for eigenvalue
// checks.
inline double largest_eigenvalue_dense(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M,
                                                        Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

}  // namespace oracles

#endif  // SBMSPEC_TESTS_ORACLES_HPP
