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

#include <stdexcept>
#include <string>

namespace zosim {

/// Base class for all library errors.
class SimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration value, unknown config field, or violated setup
/// precondition (divisibility, connectivity, ranges).
class ConfigError : public SimError {
 public:
  using SimError::SimError;
};

/// Mismatched vector/matrix dimensions.
class DimensionError : public SimError {
 public:
  using SimError::SimError;
};

/// Non-finite value produced where a finite one is required.
class NumericError : public SimError {
 public:
  using SimError::SimError;
};

/// Violation of a message-passing or bookkeeping contract at runtime.
class ProtocolError : public SimError {
 public:
  using SimError::SimError;
};

/// A perturbation was requested for a timestamp that has already been
/// evicted (or never stored); signals a delay-bound violation.
class BufferUnderrunError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

}  // namespace zosim
