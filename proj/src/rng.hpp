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

#ifndef SBMSPEC_RNG_HPP
#define SBMSPEC_RNG_HPP

#include <cstdint>

namespace sbmspec {

// splitmix64 finalizer: a full-avalanche 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Substream seed for replication `index` of a run keyed by `seed`.
// Pure, order-independent, and collision-free for practical purposes.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed) ^ mix64(index + 0x632BE59BD9B4E019ull));
}

inline double to_unit_double(std::uint64_t x) {
  // 53 high bits -> [0, 1)
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// Counter-based uniform for the (i, j) edge of the draw keyed by `seed`.
// The (seed, i, j) -> value map is pure and platform-stable, so adjacency
// sampling parallelizes and replays without generator state.
inline double edge_uniform(std::uint64_t seed, std::uint64_t i,
                           std::uint64_t j) {
  std::uint64_t h = mix64(seed ^ (i * 0xD6E8FEB86659FD93ull));
  h = mix64(h ^ (j * 0xA3B195354A39B70Dull));
  return to_unit_double(h);
}

// Small sequential engine (splitmix64 stream) with uniform and normal
// variates. Normals use the Marsaglia polar method so the stream does not
// depend on library-specific distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

  double next_unit() { return to_unit_double(next_u64()); }

  // Uniform integer in [0, bound) by rejection (unbiased).
  std::uint64_t next_below(std::uint64_t bound);

  double next_normal();

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sbmspec

#endif  // SBMSPEC_RNG_HPP
