// Copyright 2026 The qgen Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <stdexcept>
#include <string>

namespace qgen {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Requested register size exceeds the simulator cap.
class CapacityError : public Error {
  public:
    using Error::Error;
};

/// Qubit or slot index outside the valid range.
class IndexError : public Error {
  public:
    using Error::Error;
};

/// Invalid argument value (counts, lengths, ranges).
class ArgumentError : public Error {
  public:
    using Error::Error;
};

/// Input outside the domain of an encoding map or its derivative.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Mismatched vector or matrix dimensions.
class ShapeError : public Error {
  public:
    using Error::Error;
};

/// Operation invoked in the wrong lifecycle state (e.g. backward before forward).
class StateError : public Error {
  public:
    using Error::Error;
};

/// Tape evaluated with missing bindings.
class EvaluationError : public Error {
  public:
    using Error::Error;
};

/// Gate slot with no supported shift rule.
class UnsupportedGateError : public Error {
  public:
    using Error::Error;
};

/// Circuits with different register sizes.
class CompositionError : public Error {
  public:
    using Error::Error;
};

/// Malformed or inconsistent configuration.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Malformed serialized artifact; carries the byte offset where parsing failed.
class ParseError : public Error {
  public:
    ParseError(const std::string &what, std::size_t offset)
        : Error(what + " (at byte offset " + std::to_string(offset) + ")"),
          offset_(offset) {}
    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

  private:
    std::size_t offset_;
};

} // namespace qgen
