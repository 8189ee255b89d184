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

#include "zosim/random.hpp"

#include <cmath>
#include <numbers>

#include "zosim/errors.hpp"

namespace zosim {
namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

}  // namespace

RandomStream::RandomStream(std::uint64_t master_seed, std::uint32_t agent_id,
                           StreamPurpose purpose) {
  std::uint64_t k = mix64(master_seed + kGamma);
  k = mix64(k ^ (static_cast<std::uint64_t>(agent_id) + 0xd1b54a32d192ed03ULL));
  k = mix64(k ^ (static_cast<std::uint64_t>(purpose) + 0x8cb92ba72f3d8dd7ULL));
  key_ = k;
}

std::uint64_t RandomStream::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

double RandomStream::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::next_gaussian() {
  // Box-Muller; the sine branch is discarded so that a scalar draw costs the
  // same two words as one pair inside gaussian_vector.
  const double u1 = 1.0 - next_uniform();  // (0, 1], keeps log finite
  const double u2 = next_uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

int RandomStream::next_int(int bound) {
  if (bound <= 0) {
    throw ConfigError("RandomStream::next_int: bound must be positive");
  }
  return static_cast<int>(next_u64() % static_cast<std::uint64_t>(bound));
}

bool RandomStream::next_bernoulli(double p) { return next_uniform() < p; }

Vector gaussian_vector(RandomStream& stream, Eigen::Index dim) {
  if (dim < 0) {
    throw DimensionError("gaussian_vector: dim must be non-negative");
  }
  Vector out(dim);
  for (Eigen::Index i = 0; i < dim; i += 2) {
    const double u1 = 1.0 - stream.next_uniform();
    const double u2 = stream.next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    out(i) = r * std::cos(angle);
    if (i + 1 < dim) {
      out(i + 1) = r * std::sin(angle);
    }
  }
  return out;
}

}  // namespace zosim
