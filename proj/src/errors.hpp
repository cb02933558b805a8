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

#ifndef SBMSPEC_ERRORS_HPP
#define SBMSPEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sbmspec {

/// Error categories surfaced through both the C++ and C interfaces.
enum class ErrorCode : int {
  invalid_argument = 1,
  non_symmetric_b,
  probability_out_of_range,
  community_too_small,
  label_out_of_range,
  k_too_large,
  empty_cluster,
  mismatched_length,
  degenerate_estimate,
  clamped_stack,
  non_symmetric,
  no_convergence,
  degenerate_variance,
  invalid_law,
  insufficient_reps,
  empty_sample,
  all_flagged,
  parse_error,
  schema_violation,
  self_loop,
  node_index_out_of_range,
  io_error,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool ok, ErrorCode code, const std::string& message) {
  if (!ok) fail(code, message);
}

}  // namespace sbmspec

#endif  // SBMSPEC_ERRORS_HPP
