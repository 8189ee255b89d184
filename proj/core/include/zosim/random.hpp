// Copyright 2026 The zosim Authors
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

#pragma once

#include <Eigen/Core>
#include <cstdint>

namespace zosim {

using Vector = Eigen::VectorXd;

/// Role of a stream within a run. Streams with different purposes are
/// statistically independent even under the same seed and owner.
enum class StreamPurpose : std::uint32_t {
  kPerturbation = 1,
  kSample = 2,
  kSchedule = 3,
  kDelay = 4,
  kInit = 5,
};

// Counter-based keyed generator. The key is a 64-bit hash of
// (master_seed, agent_id, purpose); the i-th output is
// mix64(key + i * 0x9e3779b97f4a7c15) where mix64 is the splitmix64
// finalizer. Copying a stream copies its position; two streams with equal
// fields and counters produce identical sequences. Uniform doubles take the
// top 53 bits of one word; Gaussians use the Box-Muller transform on two
// words per pair so that consumption is a fixed function of the request.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint32_t agent_id,
               StreamPurpose purpose);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1).
  double next_uniform();

  /// Standard normal draw; always consumes exactly two words.
  double next_gaussian();

  /// Uniform integer in [0, bound); bound must be positive.
  int next_int(int bound);

  /// True with probability p.
  bool next_bernoulli(double p);

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// dim i.i.d. standard normal entries; consumes 2 * ceil(dim / 2) words.
/// dim == 0 yields an empty vector without touching the stream.
Vector gaussian_vector(RandomStream& stream, Eigen::Index dim);

}  // namespace zosim
