// Copyright 2026 The SearchRef DEA Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dea {

/// Vectors or matrices whose sizes do not agree.
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Rejected SolverConfig (e.g. big_m < 1, size cap below init_size + delta).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ValidationErrorKind {
  kEmptyDataset,
  kNonPositiveEntry,
  kDuplicateOrProportionateRows,
  kDuplicateId,
  kDimensionMismatch,
};

/// Raised by dataset validation. `first`/`second` carry row indices for row
/// errors; `column` is the offending column (inputs first, then outputs).
class ValidationError : public std::runtime_error {
 public:
  ValidationError(ValidationErrorKind kind, const std::string& what,
                  std::size_t first = 0, std::size_t second = 0,
                  std::size_t column = 0)
      : std::runtime_error(what),
        kind_(kind),
        first_(first),
        second_(second),
        column_(column) {}

  ValidationErrorKind kind() const noexcept { return kind_; }
  std::size_t first() const noexcept { return first_; }
  std::size_t second() const noexcept { return second_; }
  std::size_t column() const noexcept { return column_; }

 private:
  ValidationErrorKind kind_;
  std::size_t first_;
  std::size_t second_;
  std::size_t column_;
};

/// The size cap leaves no room for new members without dropping a member
/// that carries positive weight.
class CapInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The Result-2 rescaling denominator v*y_k + w* is not safely positive.
class DegenerateDenominator : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dea
