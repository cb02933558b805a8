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

// Regenerates the embedded Tracy-Widom CDF grid (data/tw1_cdf.txt) from a
// seeded GOE calibration run. The shipped grid was produced with
//   tw1-grid --m 2000 --reps 20000 --seed 20260808 --out data/tw1_cdf.txt

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sbmspec.h"

int main(int argc, char** argv) {
  CLI::App app{"GOE calibration of the Tracy-Widom (beta = 1) CDF grid"};
  int m = 2000;
  int reps = 20000;
  std::uint64_t seed = 20260808;
  int threads = 0;
  std::string out_path = "tw1_cdf.txt";
  std::string raw_path;
  app.add_option("--m", m, "GOE matrix size (default 2000)");
  app.add_option("--reps", reps, "number of draws (default 20000)");
  app.add_option("--seed", seed, "master seed (default 20260808)");
  app.add_option("--threads", threads, "worker threads (0 = auto)");
  app.add_option("--out", out_path, "grid output path")->required();
  app.add_option("--raw", raw_path, "optional raw sorted values output path");
  CLI11_PARSE(app, argc, argv);

  std::vector<double> values(reps);
  const sbmspec_status status =
      sbmspec_tw1_calibrate(m, reps, seed, threads, values.data());
  if (status != SBMSPEC_OK) {
    std::fprintf(stderr, "calibration failed: %s\n", sbmspec_last_error());
    return 2;
  }

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= reps;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= (reps - 1);
  std::fprintf(stderr, "m=%d reps=%d mean=%.4f sd=%.4f\n", m, reps, mean,
               std::sqrt(var));

  FILE* out = std::fopen(out_path.c_str(), "w");
  if (!out) {
    std::fprintf(stderr, "cannot write %s\n", out_path.c_str());
    return 2;
  }
  std::fprintf(out,
               "# tracy-widom beta=1 cdf grid (GOE calibration: m=%d reps=%d "
               "seed=%llu)\n",
               m, reps, static_cast<unsigned long long>(seed));
  for (int i = 0; i <= 800; ++i) {
    const double x = -5.0 + 0.01 * i;
    const std::size_t below =
        std::upper_bound(values.begin(), values.end(), x) - values.begin();
    std::fprintf(out, "%.2f %.10f\n", x,
                 static_cast<double>(below) / static_cast<double>(reps));
  }
  std::fclose(out);

  if (!raw_path.empty()) {
    FILE* raw = std::fopen(raw_path.c_str(), "w");
    if (!raw) {
      std::fprintf(stderr, "cannot write %s\n", raw_path.c_str());
      return 2;
    }
    for (double v : values) std::fprintf(raw, "%.17g\n", v);
    std::fclose(raw);
  }
  return 0;
}
