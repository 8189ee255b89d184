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

#include "zosim/verification.hpp"

#include "doctest.h"

using namespace zosim;

// Reduced-sample smoke runs of the statistical checks; the acceptance
// binary repeats them at full reporting scale.

TEST_CASE("oracle mean check passes in both sampling modes") {
  for (const bool paired : {false, true}) {
    CAPTURE(paired);
    const CheckResult r = check_unbiased_oracle(paired, 20000, 1);
    CHECK(r.passed);
    CHECK(r.observed <= r.bound);
    CHECK_FALSE(r.name.empty());
    CHECK_FALSE(r.detail.empty());
  }
}

TEST_CASE("oracle variance check passes across batch sizes") {
  for (const bool paired : {false, true}) {
    for (const int batch : {1, 10}) {
      CAPTURE(paired);
      CAPTURE(batch);
      const CheckResult r = check_variance_bound(paired, batch, 4000, 1);
      CHECK(r.passed);
      CHECK(r.observed < r.bound);
    }
  }
}

TEST_CASE("value smoothing error stays within the quadratic bound") {
  for (const double mu : {0.1, 0.5, 1.0}) {
    CAPTURE(mu);
    const CheckResult r = check_value_smoothing(mu, 20000, 1);
    CHECK(r.passed);
  }
}

TEST_CASE("gradient smoothing error stays within the analytic bound") {
  for (const double mu : {0.1, 0.5, 1.0}) {
    CAPTURE(mu);
    const CheckResult r = check_gradient_smoothing(mu, 20000, 1);
    CHECK(r.passed);
  }
}

TEST_CASE("surrogate smoothness holds on random point pairs") {
  const CheckResult r = check_surrogate_smoothness(200, 1);
  CHECK(r.passed);
  CHECK(r.observed <= r.bound);
}
