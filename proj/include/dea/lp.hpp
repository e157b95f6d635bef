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

// Dense revised simplex for small LPs with few rows.
//
//   minimize    c.x
//   subject to  A_i.x {<=, >=, =} b_i     for each row i
//               x_j >= 0  or  x_j free
//
// The solver keeps an explicit basis inverse (rows are few), prices with
// Dantzig's rule and falls back to Bland's rule after a run of degenerate
// pivots. Rows are equilibrated internally; reported duals are in the
// caller's units with the usual minimization signs: y_i <= 0 on <= rows,
// y_i >= 0 on >= rows, free on = rows, and c - A^T y >= 0 on x >= 0 columns.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "dea/errors.hpp"

namespace dea {

enum class RowSense { kLessEqual, kGreaterEqual, kEqual };
enum class VarBound { kNonNegative, kFree };
enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };

inline std::string_view to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kNumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

struct LpProblem {
  Eigen::VectorXd objective;  // minimized
  Eigen::MatrixXd columns;    // rows x variables
  std::vector<RowSense> row_senses;
  Eigen::VectorXd rhs;
  std::vector<VarBound> var_bounds;

  Eigen::Index num_rows() const { return columns.rows(); }
  Eigen::Index num_vars() const { return columns.cols(); }

  void check_dimensions() const {
    const auto rows = static_cast<std::size_t>(columns.rows());
    const auto vars = static_cast<std::size_t>(columns.cols());
    if (static_cast<std::size_t>(objective.size()) != vars ||
        var_bounds.size() != vars || row_senses.size() != rows ||
        static_cast<std::size_t>(rhs.size()) != rows) {
      throw DimensionMismatch("LpProblem: inconsistent dimensions");
    }
  }
};

/// One entry per row. Entries below num_vars() name structural columns;
/// num_vars() + i names the slack of inequality row i.
using Basis = std::vector<Eigen::Index>;

struct LpSolution {
  LpStatus status = LpStatus::kNumericalFailure;
  double objective_value = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXd primal;
  Eigen::VectorXd dual;        // one per row, signs as documented above
  Eigen::VectorXd row_slacks;  // |b - A.x| measured in the row's sense
  Basis basis;                 // empty when an artificial stayed basic
  int pivots = 0;
  bool warm_started = false;

  bool optimal() const noexcept { return status == LpStatus::kOptimal; }
};

struct LpOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  int degenerate_limit = 50;  // consecutive degenerate pivots before Bland
  int refactor_interval = 64;
  int max_pivots = 0;  // 0 picks a size-based limit

  /// Internal tolerances three orders below the accuracy the caller asks
  /// for, floored at 1e-12.
  static LpOptions for_tolerance(double lp_tol) {
    LpOptions o;
    const double t = std::clamp(lp_tol * 1e-3, 1e-12, 1e-7);
    o.feasibility_tol = t;
    o.optimality_tol = t;
    return o;
  }
};

namespace detail {

class DenseSimplex {
 public:
  DenseSimplex(const LpProblem& p, const LpOptions& o)
      : problem_(p), opt_(o), rows_(p.num_rows()), nvars_(p.num_vars()) {
    row_scale_.resize(rows_);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const double big = rows_ > 0 && nvars_ > 0
                             ? p.columns.row(i).cwiseAbs().maxCoeff()
                             : 0.0;
      row_scale_[i] = big > 0.0 ? 1.0 / big : 1.0;
    }
    b_ = row_scale_.cwiseProduct(p.rhs);

    // Structural columns followed by one slack per inequality row.
    slack_of_row_.assign(static_cast<std::size_t>(rows_), -1);
    Eigen::Index nslack = 0;
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (p.row_senses[static_cast<std::size_t>(i)] != RowSense::kEqual) ++nslack;
    }
    a_.setZero(rows_, nvars_ + nslack);
    a_.leftCols(nvars_) = row_scale_.asDiagonal() * p.columns;
    cost_.setZero(nvars_ + nslack);
    cost_.head(nvars_) = p.objective;
    free_.assign(static_cast<std::size_t>(nvars_ + nslack), false);
    artificial_.assign(static_cast<std::size_t>(nvars_ + nslack), false);
    for (Eigen::Index j = 0; j < nvars_; ++j) {
      free_[static_cast<std::size_t>(j)] =
          p.var_bounds[static_cast<std::size_t>(j)] == VarBound::kFree;
    }
    Eigen::Index col = nvars_;
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const RowSense s = p.row_senses[static_cast<std::size_t>(i)];
      if (s == RowSense::kEqual) continue;
      a_(i, col) = s == RowSense::kLessEqual ? 1.0 : -1.0;
      slack_of_row_[static_cast<std::size_t>(i)] = col;
      ++col;
    }
    structural_end_ = a_.cols();
    cost_scale_ = std::max(1.0, p.objective.size() > 0
                                    ? p.objective.cwiseAbs().maxCoeff()
                                    : 0.0);
    max_pivots_ = o.max_pivots > 0
                      ? o.max_pivots
                      : static_cast<int>(50 * (rows_ + a_.cols()) + 1000);
  }

  LpSolution solve(const Basis* warm) {
    LpSolution out;
    if (rows_ == 0) return solve_without_rows();

    bool phase2_ready = false;
    if (warm != nullptr && try_warm_start(*warm)) {
      phase2_ready = true;
      out.warm_started = true;
    }
    if (!phase2_ready) {
      cold_start();
      const Outcome phase1 = iterate(/*phase=*/1);
      if (phase1 == Outcome::kFailure) return failure(out);
      double infeasibility = 0.0;
      for (Eigen::Index r = 0; r < rows_; ++r) {
        if (artificial_[idx(basis_[idx(r)])]) {
          infeasibility += std::abs(x_basic_[r]);
        }
      }
      const double bmax = b_.cwiseAbs().maxCoeff();
      if (infeasibility > 1e3 * opt_.feasibility_tol * (1.0 + bmax)) {
        out.status = LpStatus::kInfeasible;
        out.pivots = pivots_;
        return out;
      }
      drive_out_artificials();
    }

    const Outcome phase2 = iterate(/*phase=*/2);
    out.pivots = pivots_;
    if (phase2 == Outcome::kFailure) return failure(out);
    if (phase2 == Outcome::kUnbounded) {
      out.status = LpStatus::kUnbounded;
      return out;
    }
    if (!refactor()) return failure(out);
    // A fresh factorization can expose small infeasibilities hidden by the
    // update sequence; polish once more from the refactored state.
    if (iterate(2) != Outcome::kOptimal || !refactor()) return failure(out);
    out.pivots = pivots_;
    return extract(out);
  }

 private:
  enum class Outcome { kOptimal, kUnbounded, kFailure };

  static std::size_t idx(Eigen::Index i) { return static_cast<std::size_t>(i); }

  LpSolution solve_without_rows() {
    LpSolution out;
    out.primal.setZero(nvars_);
    for (Eigen::Index j = 0; j < nvars_; ++j) {
      const double c = problem_.objective[j];
      const bool can_decrease = free_[idx(j)];
      if (c < -opt_.optimality_tol || (can_decrease && c > opt_.optimality_tol)) {
        out.status = LpStatus::kUnbounded;
        return out;
      }
    }
    out.status = LpStatus::kOptimal;
    out.objective_value = 0.0;
    return out;
  }

  LpSolution& failure(LpSolution& out) {
    out.status = LpStatus::kNumericalFailure;
    out.pivots = pivots_;
    return out;
  }

  bool try_warm_start(const Basis& warm) {
    if (static_cast<Eigen::Index>(warm.size()) != rows_) return false;
    std::vector<Eigen::Index> internal;
    internal.reserve(warm.size());
    std::vector<bool> used(idx(a_.cols()), false);
    for (Eigen::Index e : warm) {
      Eigen::Index col = -1;
      if (e >= 0 && e < nvars_) {
        col = e;
      } else if (e >= nvars_ && e < nvars_ + rows_) {
        col = slack_of_row_[idx(e - nvars_)];
      }
      if (col < 0 || used[idx(col)]) return false;
      used[idx(col)] = true;
      internal.push_back(col);
    }
    basis_ = std::move(internal);
    rebuild_position();
    if (!refactor()) return false;
    for (Eigen::Index r = 0; r < rows_; ++r) {
      if (!free_[idx(basis_[idx(r)])] &&
          x_basic_[r] < -opt_.feasibility_tol) {
        return false;
      }
    }
    return true;
  }

  void cold_start() {
    // Drop artificials of a previous attempt.
    a_.conservativeResize(Eigen::NoChange, structural_end_);
    cost_.conservativeResize(structural_end_);
    free_.resize(idx(structural_end_));
    artificial_.resize(idx(structural_end_));

    basis_.assign(idx(rows_), -1);
    std::vector<Eigen::Index> need_artificial;
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const Eigen::Index s = slack_of_row_[idx(i)];
      if (s >= 0 && a_(i, s) * b_[i] >= 0.0) {
        basis_[idx(i)] = s;
      } else {
        need_artificial.push_back(i);
      }
    }
    const Eigen::Index first = a_.cols();
    const auto extra = static_cast<Eigen::Index>(need_artificial.size());
    a_.conservativeResize(Eigen::NoChange, first + extra);
    a_.rightCols(extra).setZero();
    cost_.conservativeResize(first + extra);
    cost_.tail(extra).setZero();
    for (Eigen::Index t = 0; t < extra; ++t) {
      const Eigen::Index i = need_artificial[idx(t)];
      a_(i, first + t) = b_[i] < 0.0 ? -1.0 : 1.0;
      basis_[idx(i)] = first + t;
      free_.push_back(false);
      artificial_.push_back(true);
    }
    rebuild_position();
    // The starting basis is diagonal with +-1 entries.
    binv_.setZero(rows_, rows_);
    for (Eigen::Index r = 0; r < rows_; ++r) {
      binv_(r, r) = 1.0 / a_(r, basis_[idx(r)]);
    }
    x_basic_ = binv_ * b_;
  }

  void rebuild_position() {
    position_.assign(idx(a_.cols()), -1);
    for (Eigen::Index r = 0; r < rows_; ++r) position_[idx(basis_[idx(r)])] = r;
  }

  bool refactor() {
    Eigen::MatrixXd basis_matrix(rows_, rows_);
    for (Eigen::Index r = 0; r < rows_; ++r) {
      basis_matrix.col(r) = a_.col(basis_[idx(r)]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis_matrix);
    lu.setThreshold(1e-11);
    if (!lu.isInvertible()) return false;
    binv_ = lu.inverse();
    x_basic_ = binv_ * b_;
    since_refactor_ = 0;
    return binv_.allFinite();
  }

  Eigen::VectorXd phase_cost(int phase) const {
    if (phase == 2) return cost_;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(a_.cols());
    for (Eigen::Index j = 0; j < a_.cols(); ++j) {
      if (artificial_[idx(j)]) c[j] = 1.0;
    }
    return c;
  }

  Outcome iterate(int phase) {
    const Eigen::VectorXd c = phase_cost(phase);
    const double tol = opt_.optimality_tol * (phase == 2 ? cost_scale_ : 1.0);
    int degenerate_run = 0;
    bool bland = false;
    Eigen::VectorXd cb(rows_);

    while (true) {
      if (pivots_ >= max_pivots_) return Outcome::kFailure;
      for (Eigen::Index r = 0; r < rows_; ++r) cb[r] = c[basis_[idx(r)]];
      const Eigen::VectorXd y = binv_.transpose() * cb;
      const Eigen::VectorXd reduced = c - a_.transpose() * y;

      // Pricing.
      Eigen::Index entering = -1;
      double direction = 1.0;
      double best = 0.0;
      for (Eigen::Index j = 0; j < a_.cols(); ++j) {
        if (position_[idx(j)] >= 0 || artificial_[idx(j)]) continue;
        const double d = reduced[j];
        double score = 0.0;
        double dir = 1.0;
        if (d < -tol) {
          score = -d;
        } else if (free_[idx(j)] && d > tol) {
          score = d;
          dir = -1.0;
        } else {
          continue;
        }
        if (bland) {
          entering = j;
          direction = dir;
          break;
        }
        if (score > best) {
          best = score;
          entering = j;
          direction = dir;
        }
      }
      if (entering < 0) return Outcome::kOptimal;

      const Eigen::VectorXd alpha_raw = binv_ * a_.col(entering);
      const Eigen::VectorXd alpha = alpha_raw * direction;

      // Harris two-pass ratio test; Bland mode takes the exact minimum ratio
      // and breaks ties on the smallest variable index.
      auto eligible = [&](Eigen::Index r) {
        const Eigen::Index var = basis_[idx(r)];
        if (free_[idx(var)]) return false;
        if (artificial_[idx(var)] && phase == 2) {
          return std::abs(alpha[r]) > opt_.pivot_tol;
        }
        return alpha[r] > opt_.pivot_tol;
      };
      auto exact_ratio = [&](Eigen::Index r) {
        return std::max(x_basic_[r], 0.0) / std::abs(alpha[r]);
      };

      Eigen::Index leaving = -1;
      if (bland) {
        double min_ratio = std::numeric_limits<double>::infinity();
        for (Eigen::Index r = 0; r < rows_; ++r) {
          if (!eligible(r)) continue;
          const double ratio = exact_ratio(r);
          if (ratio < min_ratio - 1e-14 ||
              (ratio <= min_ratio + 1e-14 &&
               (leaving < 0 || basis_[idx(r)] < basis_[idx(leaving)]))) {
            min_ratio = std::min(min_ratio, ratio);
            leaving = r;
          }
        }
      } else {
        double bound = std::numeric_limits<double>::infinity();
        for (Eigen::Index r = 0; r < rows_; ++r) {
          if (!eligible(r)) continue;
          bound = std::min(bound, (std::max(x_basic_[r], 0.0) +
                                   opt_.feasibility_tol) /
                                      std::abs(alpha[r]));
        }
        double largest = 0.0;
        for (Eigen::Index r = 0; r < rows_; ++r) {
          if (!eligible(r)) continue;
          if (exact_ratio(r) <= bound && std::abs(alpha[r]) > largest) {
            largest = std::abs(alpha[r]);
            leaving = r;
          }
        }
      }
      if (leaving < 0) {
        if (phase == 1) return Outcome::kFailure;
        return Outcome::kUnbounded;
      }

      const double step = exact_ratio(leaving);
      x_basic_ -= step * alpha;
      x_basic_[leaving] = step * direction;
      pivot(leaving, entering, alpha_raw);

      if (step <= opt_.feasibility_tol) {
        if (++degenerate_run >= opt_.degenerate_limit) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
      if (since_refactor_ >= opt_.refactor_interval && !refactor()) {
        return Outcome::kFailure;
      }
    }
  }

  void pivot(Eigen::Index leaving, Eigen::Index entering,
             const Eigen::VectorXd& alpha_raw) {
    const double p = alpha_raw[leaving];
    binv_.row(leaving) /= p;
    for (Eigen::Index r = 0; r < rows_; ++r) {
      if (r == leaving || alpha_raw[r] == 0.0) continue;
      binv_.row(r) -= alpha_raw[r] * binv_.row(leaving);
    }
    position_[idx(basis_[idx(leaving)])] = -1;
    basis_[idx(leaving)] = entering;
    position_[idx(entering)] = leaving;
    ++pivots_;
    ++since_refactor_;
  }

  // Degenerate pivots that swap zero-valued artificials for real columns.
  // Rows where no real column has weight are redundant and keep theirs.
  void drive_out_artificials() {
    for (Eigen::Index r = 0; r < rows_; ++r) {
      if (!artificial_[idx(basis_[idx(r)])]) continue;
      const Eigen::RowVectorXd row = binv_.row(r) * a_;
      Eigen::Index best = -1;
      double best_abs = 1e-7;
      for (Eigen::Index j = 0; j < structural_end_; ++j) {
        if (position_[idx(j)] >= 0) continue;
        if (std::abs(row[j]) > best_abs) {
          best_abs = std::abs(row[j]);
          best = j;
        }
      }
      if (best < 0) continue;
      const Eigen::VectorXd alpha_raw = binv_ * a_.col(best);
      const double moved = x_basic_[r] / alpha_raw[r];
      x_basic_ -= moved * alpha_raw;
      x_basic_[r] = moved;
      pivot(r, best, alpha_raw);
    }
  }

  LpSolution& extract(LpSolution& out) {
    out.primal.setZero(nvars_);
    bool has_artificial = false;
    for (Eigen::Index r = 0; r < rows_; ++r) {
      const Eigen::Index var = basis_[idx(r)];
      if (var < nvars_) {
        double value = x_basic_[r];
        if (!free_[idx(var)] && value < 0.0) value = 0.0;
        out.primal[var] = value;
      }
      if (artificial_[idx(var)]) has_artificial = true;
    }

    Eigen::VectorXd cb(rows_);
    for (Eigen::Index r = 0; r < rows_; ++r) cb[r] = cost_[basis_[idx(r)]];
    const Eigen::VectorXd y_scaled = binv_.transpose() * cb;
    out.dual = row_scale_.cwiseProduct(y_scaled);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      // Inactive sign clutter from roundoff on one-signed duals.
      const RowSense s = problem_.row_senses[idx(i)];
      if (s == RowSense::kLessEqual && out.dual[i] > 0.0) out.dual[i] = 0.0;
      if (s == RowSense::kGreaterEqual && out.dual[i] < 0.0) out.dual[i] = 0.0;
    }

    const Eigen::VectorXd activity = problem_.columns * out.primal;
    out.row_slacks.resize(rows_);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const double diff = problem_.rhs[i] - activity[i];
      switch (problem_.row_senses[idx(i)]) {
        case RowSense::kLessEqual: out.row_slacks[i] = std::max(diff, 0.0); break;
        case RowSense::kGreaterEqual: out.row_slacks[i] = std::max(-diff, 0.0); break;
        case RowSense::kEqual: out.row_slacks[i] = std::abs(diff); break;
      }
    }
    out.objective_value = problem_.objective.dot(out.primal);

    out.basis.clear();
    if (!has_artificial) {
      std::vector<Eigen::Index> row_of_slack(idx(structural_end_), -1);
      for (Eigen::Index i = 0; i < rows_; ++i) {
        if (slack_of_row_[idx(i)] >= 0) row_of_slack[idx(slack_of_row_[idx(i)])] = i;
      }
      for (Eigen::Index r = 0; r < rows_; ++r) {
        const Eigen::Index var = basis_[idx(r)];
        out.basis.push_back(var < nvars_ ? var : nvars_ + row_of_slack[idx(var)]);
      }
    }
    out.status = LpStatus::kOptimal;
    return out;
  }

  const LpProblem& problem_;
  LpOptions opt_;
  Eigen::Index rows_;
  Eigen::Index nvars_;
  Eigen::Index structural_end_ = 0;
  Eigen::VectorXd row_scale_;
  Eigen::VectorXd b_;
  Eigen::MatrixXd a_;
  Eigen::VectorXd cost_;
  double cost_scale_ = 1.0;
  std::vector<bool> free_;
  std::vector<bool> artificial_;
  std::vector<Eigen::Index> slack_of_row_;
  std::vector<Eigen::Index> basis_;
  std::vector<Eigen::Index> position_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd x_basic_;
  int pivots_ = 0;
  int since_refactor_ = 0;
  int max_pivots_ = 0;
};

}  // namespace detail

inline LpSolution solve_lp(const LpProblem& p, const LpOptions& options,
                           const Basis* warm = nullptr) {
  p.check_dimensions();
  detail::DenseSimplex simplex(p, options);
  return simplex.solve(warm);
}

/// Solves p so that primal/dual feasibility and the duality gap hold within
/// lp_tol. An optional starting basis (e.g. from a previous solve before
/// columns were appended) skips phase 1 when it is still primal feasible.
inline LpSolution solve_lp(const LpProblem& p, double lp_tol,
                           const Basis* warm = nullptr) {
  return solve_lp(p, LpOptions::for_tolerance(lp_tol), warm);
}

}  // namespace dea
