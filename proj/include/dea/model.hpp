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

// Domain types shared by every solver: the peer of DMUs, supporting
// hyperplanes, solver configuration and per-DMU results.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dea/errors.hpp"

namespace dea {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class Dataset;

enum class ValidationMode {
  kStrict,  // duplicate or proportionate rows raise ValidationError
  kWarn,    // ... are reported through on_warning and accepted
};

struct ValidationOptions {
  ValidationMode mode = ValidationMode::kStrict;
  // The pairwise proportionality check can be skipped for huge peers.
  bool check_proportionate = true;
  double relative_tol = 1e-9;
  // Receives warn-mode diagnostics; std::cerr when empty.
  std::function<void(const std::string&)> on_warning;
};

Dataset validate_dataset(std::vector<std::string> ids, const RowMatrix& raw,
                         int m, int n, const ValidationOptions& options = {});

/// Immutable peer of |D| DMUs. Row r holds the m inputs and n outputs of DMU
/// r; all entries are strictly positive. Only validate_dataset constructs it.
class Dataset {
 public:
  std::size_t size() const noexcept { return ids_.size(); }
  int num_inputs() const noexcept { return static_cast<int>(inputs_.cols()); }
  int num_outputs() const noexcept {
    return static_cast<int>(outputs_.cols());
  }
  int dimension() const noexcept { return num_inputs() + num_outputs(); }

  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::string& id(std::size_t r) const { return ids_.at(r); }
  const RowMatrix& inputs() const noexcept { return inputs_; }
  const RowMatrix& outputs() const noexcept { return outputs_; }

  auto input(std::size_t r) const {
    return inputs_.row(static_cast<Eigen::Index>(r));
  }
  auto output(std::size_t r) const {
    return outputs_.row(static_cast<Eigen::Index>(r));
  }

  std::optional<std::size_t> find(std::string_view id) const {
    for (std::size_t r = 0; r < ids_.size(); ++r) {
      if (ids_[r] == id) return r;
    }
    return std::nullopt;
  }

  /// Inputs and outputs side by side, as accepted by validate_dataset.
  RowMatrix raw() const {
    RowMatrix out(inputs_.rows(), inputs_.cols() + outputs_.cols());
    out << inputs_, outputs_;
    return out;
  }

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.ids_ == b.ids_ && a.inputs_ == b.inputs_ &&
           a.outputs_ == b.outputs_;
  }

 private:
  friend Dataset validate_dataset(std::vector<std::string>, const RowMatrix&,
                                  int, int, const ValidationOptions&);
  Dataset() = default;

  std::vector<std::string> ids_;
  RowMatrix inputs_;
  RowMatrix outputs_;
};

namespace detail {

inline bool nearly_equal(double a, double b, double rel_tol) {
  return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b));
}

// Returns the first (i, j), i < j, of rows that coincide after dividing each
// row by its first entry. Candidates are bucketed by their second normalized
// entry so the full comparison only runs on near neighbours.
inline std::optional<std::pair<std::size_t, std::size_t>>
find_proportionate_pair(const RowMatrix& raw, double rel_tol) {
  const Eigen::Index rows = raw.rows();
  if (rows < 2) return std::nullopt;
  RowMatrix normalized = raw;
  for (Eigen::Index r = 0; r < rows; ++r) normalized.row(r) /= raw(r, 0);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(rows));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return normalized(a, 1) < normalized(b, 1);
  });

  std::optional<std::pair<std::size_t, std::size_t>> best;
  for (std::size_t a = 0; a < order.size(); ++a) {
    const Eigen::Index i = order[a];
    const double key = normalized(i, 1);
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      const Eigen::Index j = order[b];
      if (normalized(j, 1) > key * (1.0 + 2.0 * rel_tol)) break;
      bool same = true;
      for (Eigen::Index c = 1; c < raw.cols() && same; ++c) {
        same = nearly_equal(normalized(i, c), normalized(j, c), rel_tol);
      }
      if (!same) continue;
      std::pair<std::size_t, std::size_t> hit{
          static_cast<std::size_t>(std::min(i, j)),
          static_cast<std::size_t>(std::max(i, j))};
      if (!best || hit < *best) best = hit;
    }
  }
  return best;
}

}  // namespace detail

/// Checks the peer assumptions and builds a Dataset. The raw matrix has one
/// row per DMU: m inputs followed by n outputs.
inline Dataset validate_dataset(std::vector<std::string> ids,
                                const RowMatrix& raw, int m, int n,
                                const ValidationOptions& options) {
  if (m < 1 || n < 1) {
    throw ValidationError(ValidationErrorKind::kDimensionMismatch,
                          "need at least one input and one output");
  }
  if (raw.rows() == 0 || ids.empty()) {
    throw ValidationError(ValidationErrorKind::kEmptyDataset,
                          "dataset has no DMUs");
  }
  if (raw.cols() != m + n || static_cast<std::size_t>(raw.rows()) != ids.size()) {
    throw ValidationError(
        ValidationErrorKind::kDimensionMismatch,
        "expected " + std::to_string(ids.size()) + " rows of " +
            std::to_string(m + n) + " values, got " +
            std::to_string(raw.rows()) + "x" + std::to_string(raw.cols()));
  }

  std::unordered_set<std::string> seen;
  for (std::size_t r = 0; r < ids.size(); ++r) {
    if (!seen.insert(ids[r]).second) {
      throw ValidationError(ValidationErrorKind::kDuplicateId,
                            "duplicate DMU id '" + ids[r] + "'", r, r);
    }
  }

  for (Eigen::Index r = 0; r < raw.rows(); ++r) {
    for (Eigen::Index c = 0; c < raw.cols(); ++c) {
      const double value = raw(r, c);
      if (!(value > 0.0) || !std::isfinite(value)) {
        const bool is_input = c < m;
        const auto ordinal = is_input ? c + 1 : c - m + 1;
        const auto ur = static_cast<std::size_t>(r);
        throw ValidationError(
            ValidationErrorKind::kNonPositiveEntry,
            "DMU '" + ids[ur] + "' has non-positive " +
                (is_input ? "input " : "output ") + std::to_string(ordinal),
            ur, ur, static_cast<std::size_t>(c));
      }
    }
  }

  if (options.check_proportionate) {
    if (auto pair = detail::find_proportionate_pair(raw, options.relative_tol)) {
      const std::string msg = "DMUs '" + ids[pair->first] + "' and '" +
                              ids[pair->second] +
                              "' are duplicate or proportionate";
      if (options.mode == ValidationMode::kStrict) {
        throw ValidationError(ValidationErrorKind::kDuplicateOrProportionateRows,
                              msg, pair->first, pair->second);
      }
      if (options.on_warning) {
        options.on_warning(msg);
      } else {
        std::cerr << "warning: " << msg << '\n';
      }
    }
  }

  Dataset d;
  d.ids_ = std::move(ids);
  d.inputs_ = raw.leftCols(m);
  d.outputs_ = raw.rightCols(n);
  return d;
}

/// Re-validates an existing dataset; returns an equal copy.
inline Dataset validate_dataset(const Dataset& d,
                                const ValidationOptions& options = {}) {
  return validate_dataset(d.ids(), d.raw(), d.num_inputs(), d.num_outputs(),
                          options);
}

/// A dual triple (u, v, w): the hyperplane -u.x + v.y + w = 0.
struct Hyperplane {
  Eigen::VectorXd u;  // input multipliers, >= 0
  Eigen::VectorXd v;  // output multipliers, >= 0
  double w = 0.0;     // intercept, unrestricted

  Hyperplane scaled(double u_factor, double vw_factor) const {
    return Hyperplane{u * u_factor, v * vw_factor, w * vw_factor};
  }
};

/// -u.x + v.y + w. Positive puts (x, y) strictly beyond the hyperplane (in
/// H++), nonpositive puts it in the closed half-space H-.
template <class XVec, class YVec>
double margin(const Hyperplane& h, const Eigen::MatrixBase<XVec>& x,
              const Eigen::MatrixBase<YVec>& y) {
  if (x.size() != h.u.size() || y.size() != h.v.size()) {
    throw DimensionMismatch("margin: hyperplane is " +
                            std::to_string(h.u.size()) + "+" +
                            std::to_string(h.v.size()) + " dimensional, point is " +
                            std::to_string(x.size()) + "+" +
                            std::to_string(y.size()));
  }
  double value = h.w;
  for (Eigen::Index i = 0; i < x.size(); ++i) value -= h.u[i] * x[i];
  for (Eigen::Index j = 0; j < y.size(); ++j) value += h.v[j] * y[j];
  return value;
}

inline double margin(const Hyperplane& h, const Dataset& d, std::size_t r) {
  return margin(h, d.input(r), d.output(r));
}

enum class SolveStatus {
  kOptimal,
  kNumericalFailure,
  kIterationLimit,
  kCapInfeasible,
  kDegenerateDenominator,
};

inline std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kNumericalFailure: return "numerical_failure";
    case SolveStatus::kIterationLimit: return "iteration_limit";
    case SolveStatus::kCapInfeasible: return "cap_infeasible";
    case SolveStatus::kDegenerateDenominator: return "degenerate_denominator";
  }
  return "unknown";
}

/// Efficiency of one DMU with its reference weights and the supporting
/// hyperplane (u, v, w) certifying it.
struct EfficiencyResult {
  std::size_t index = 0;
  std::string dmu;
  double theta = 0.0;
  std::map<std::size_t, double> lambdas;  // row index -> positive weight
  Hyperplane dual;
  int iterations = 0;
  std::size_t max_lp_columns = 0;
  SolveStatus status = SolveStatus::kOptimal;
  std::string message;

  bool ok() const noexcept { return status == SolveStatus::kOptimal; }
};

enum class InitStrategy { kMinMax, kRandom };

inline std::string_view to_string(InitStrategy s) {
  return s == InitStrategy::kMinMax ? "minmax" : "random";
}

struct SolverConfig {
  double big_m = 10.0;
  int delta = 100;
  double eff_tol = 1e-5;
  double term_tol = 1e-6;
  double lp_tol = 1e-6;
  InitStrategy init_strategy = InitStrategy::kMinMax;
  std::optional<int> init_size;  // defaults to m + n + 1
  std::optional<int> size_cap;   // max lambda columns per LP
  unsigned long long seed = 0;
  int threads = 1;
  // Safety net for the capped variant, where samples can shrink.
  int max_iterations = 10000;
  bool warm_start = true;

  int resolved_init_size(int m, int n) const {
    return init_size.value_or(m + n + 1);
  }

  void validate(int m, int n) const {
    if (!(big_m >= 1.0)) throw ConfigError("big_m must be >= 1");
    if (delta < 1) throw ConfigError("delta must be >= 1");
    if (!(eff_tol > 0.0) || !(term_tol > 0.0) || !(lp_tol > 0.0)) {
      throw ConfigError("tolerances must be positive");
    }
    const int init = resolved_init_size(m, n);
    if (init < 1) throw ConfigError("init_size must be >= 1");
    if (size_cap && *size_cap < init + delta) {
      throw ConfigError("size_cap must be >= init_size + delta (" +
                        std::to_string(init + delta) + ")");
    }
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  }
};

}  // namespace dea
