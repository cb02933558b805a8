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

#include "reference_laws.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "errors.hpp"
#include "rng.hpp"
#include "spectral.hpp"

namespace sbmspec {

namespace {

// Series expansion of P(a, x), reliable for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int i = 0; i < 1000; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz continued fraction for Q(a, x), reliable for x >= a + 1.
double gamma_q_continued_fraction(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  require(a > 0.0, ErrorCode::invalid_argument, "shape must be positive");
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_continued_fraction(a, x);
}

namespace detail {

// Fritsch-Carlson monotone cubic interpolant of a nondecreasing grid, with
// linear tail extrapolation clipped to [0, 1].
class Tw1Interpolant {
 public:
  Tw1Interpolant(std::vector<double> x, std::vector<double> f)
      : x_(std::move(x)), f_(std::move(f)) {
    const std::size_t n = x_.size();
    require(n >= 4 && f_.size() == n, ErrorCode::invalid_law,
            "TW1 grid too short");
    require(f_.front() >= 0.0 && f_.back() <= 1.0, ErrorCode::invalid_law,
            "TW1 grid cdf must lie in [0, 1]");
    std::vector<double> secant(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      require(x_[i + 1] > x_[i], ErrorCode::invalid_law,
              "TW1 grid x must be strictly increasing");
      require(f_[i + 1] >= f_[i], ErrorCode::invalid_law,
              "TW1 grid cdf must be nondecreasing");
      secant[i] = (f_[i + 1] - f_[i]) / (x_[i + 1] - x_[i]);
    }
    slope_.assign(n, 0.0);
    slope_[0] = secant[0];
    slope_[n - 1] = secant[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      slope_[i] = (secant[i - 1] * secant[i] <= 0.0)
                      ? 0.0
                      : 0.5 * (secant[i - 1] + secant[i]);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (secant[i] == 0.0) {
        slope_[i] = 0.0;
        slope_[i + 1] = 0.0;
        continue;
      }
      const double a = slope_[i] / secant[i];
      const double b = slope_[i + 1] / secant[i];
      const double s = a * a + b * b;
      if (s > 9.0) {
        const double t = 3.0 / std::sqrt(s);
        slope_[i] = t * a * secant[i];
        slope_[i + 1] = t * b * secant[i];
      }
    }
  }

  double cdf(double x) const {
    // Tail slopes get a small floor so the clipped linear extrapolation
    // reaches 0 and 1 at finite x.
    if (x <= x_.front()) {
      const double slope = std::max(slope_.front(), 1e-3);
      return std::clamp(f_.front() + slope * (x - x_.front()), 0.0,
                        f_.front());
    }
    if (x >= x_.back()) {
      const double slope = std::max(slope_.back(), 1e-3);
      return std::clamp(f_.back() + slope * (x - x_.back()), f_.back(), 1.0);
    }
    const std::size_t hi =
        std::upper_bound(x_.begin(), x_.end(), x) - x_.begin();
    const std::size_t lo = hi - 1;
    const double h = x_[hi] - x_[lo];
    const double t = (x - x_[lo]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    const double value = h00 * f_[lo] + h10 * h * slope_[lo] + h01 * f_[hi] +
                         h11 * h * slope_[hi];
    // Clamping into the segment range absorbs roundoff wobble on flat
    // segments and keeps the evaluation globally monotone.
    return std::clamp(value, f_[lo], f_[hi]);
  }

  double pdf(double x) const {
    if (x <= x_.front() || x >= x_.back()) return 0.0;
    const std::size_t hi =
        std::upper_bound(x_.begin(), x_.end(), x) - x_.begin();
    const std::size_t lo = hi - 1;
    const double h = x_[hi] - x_[lo];
    const double t = (x - x_[lo]) / h;
    const double t2 = t * t;
    const double dh00 = (6.0 * t2 - 6.0 * t) / h;
    const double dh10 = 3.0 * t2 - 4.0 * t + 1.0;
    const double dh01 = (-6.0 * t2 + 6.0 * t) / h;
    const double dh11 = 3.0 * t2 - 2.0 * t;
    const double d = dh00 * f_[lo] + dh10 * slope_[lo] + dh01 * f_[hi] +
                     dh11 * slope_[hi];
    return std::max(d, 0.0);
  }

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

 private:
  std::vector<double> x_;
  std::vector<double> f_;
  std::vector<double> slope_;
};

namespace {

#include "tw1_grid.inc"

std::shared_ptr<const Tw1Interpolant> embedded_tw1() {
  static const auto grid = std::make_shared<const Tw1Interpolant>(
      std::vector<double>(std::begin(kTw1GridX), std::end(kTw1GridX)),
      std::vector<double>(std::begin(kTw1GridCdf), std::end(kTw1GridCdf)));
  return grid;
}

}  // namespace

}  // namespace detail

ReferenceLaw ReferenceLaw::chi_square(int df) {
  require(df >= 1, ErrorCode::invalid_law, "chi-square df must be >= 1");
  return ReferenceLaw(LawKind::chi_square, df);
}

ReferenceLaw ReferenceLaw::standard_normal() {
  return ReferenceLaw(LawKind::standard_normal, 0);
}

ReferenceLaw ReferenceLaw::tracy_widom_1() {
  ReferenceLaw law(LawKind::tracy_widom_1, 0);
  law.grid_ = detail::embedded_tw1();
  law.source_ = Tw1Source::embedded;
  return law;
}

ReferenceLaw ReferenceLaw::tracy_widom_1_from_sample(
    const std::vector<double>& sample) {
  require(!sample.empty(), ErrorCode::empty_sample,
          "calibration sample is empty");
  std::vector<double> sorted = sample;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> xs, fs;
  xs.reserve(801);
  fs.reserve(801);
  const double count = static_cast<double>(sorted.size());
  for (int i = 0; i <= 800; ++i) {
    const double x = -5.0 + 0.01 * i;
    const std::size_t below =
        std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
    xs.push_back(x);
    fs.push_back(static_cast<double>(below) / count);
  }
  ReferenceLaw law(LawKind::tracy_widom_1, 0);
  law.grid_ = std::make_shared<const detail::Tw1Interpolant>(std::move(xs),
                                                             std::move(fs));
  law.source_ = Tw1Source::calibrated;
  return law;
}

double ReferenceLaw::cdf(double x) const {
  switch (kind_) {
    case LawKind::chi_square:
      return regularized_gamma_p(0.5 * df_, 0.5 * x);
    case LawKind::standard_normal:
      return 0.5 * std::erfc(-x / std::sqrt(2.0));
    case LawKind::tracy_widom_1:
      return grid_->cdf(x);
  }
  fail(ErrorCode::invalid_law, "unknown law");
}

double ReferenceLaw::pdf(double x) const {
  switch (kind_) {
    case LawKind::chi_square: {
      if (x <= 0.0) return 0.0;
      const double half_df = 0.5 * df_;
      return std::exp((half_df - 1.0) * std::log(x) - 0.5 * x -
                      half_df * std::log(2.0) - std::lgamma(half_df));
    }
    case LawKind::standard_normal:
      return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    case LawKind::tracy_widom_1:
      return grid_->pdf(x);
  }
  fail(ErrorCode::invalid_law, "unknown law");
}

double ReferenceLaw::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    fail(ErrorCode::probability_out_of_range,
         "quantile needs p in (0, 1), got " + std::to_string(p));
  }
  double lo, hi;
  switch (kind_) {
    case LawKind::chi_square:
      lo = 0.0;
      hi = 8.0 * df_ + 200.0;
      break;
    case LawKind::standard_normal:
      lo = -14.0;
      hi = 14.0;
      break;
    case LawKind::tracy_widom_1:
      lo = grid_->x_min() - 2.0;
      hi = grid_->x_max() + 2.0;
      break;
    default:
      fail(ErrorCode::invalid_law, "unknown law");
  }
  while (hi - lo > 1e-8) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double ks_distance(std::vector<double> sample, const ReferenceLaw& law) {
  require(!sample.empty(), ErrorCode::empty_sample, "sample is empty");
  std::sort(sample.begin(), sample.end());
  const double count = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = law.cdf(sample[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / count));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / count - f));
  }
  return d;
}

std::vector<double> calibrate_tw1(int m, int reps, std::uint64_t seed,
                                  int threads) {
  require(m >= 200, ErrorCode::invalid_argument,
          "calibration needs m >= 200");
  require(reps >= 500, ErrorCode::insufficient_reps,
          "calibration needs at least 500 replications");
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  threads = std::min(threads, reps);

  std::vector<double> values(reps);
  const double edge_scale = std::pow(static_cast<double>(m), 2.0 / 3.0);
  const double off_sd = 1.0 / std::sqrt(static_cast<double>(m));
  const double diag_sd = std::sqrt(2.0 / static_cast<double>(m));

  const auto worker = [&](int first, int step) {
    Eigen::MatrixXd goe(m, m);
    for (int r = first; r < reps; r += step) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
      for (int i = 0; i < m; ++i) {
        goe(i, i) = diag_sd * rng.next_normal();
        for (int j = i + 1; j < m; ++j) {
          const double value = off_sd * rng.next_normal();
          goe(i, j) = value;
          goe(j, i) = value;
        }
      }
      values[r] = edge_scale * (largest_eigenvalue(goe, 1e-9) - 2.0);
    }
  };

  if (threads == 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t, threads);
    for (auto& thread : pool) thread.join();
  }
  std::sort(values.begin(), values.end());
  return values;
}

}  // namespace sbmspec
