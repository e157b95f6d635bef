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

// Reference solver: one LP over the whole peer per DMU,
//
//   min theta  s.t.  sum_r lambda_r x_r <= theta x_k,
//                    sum_r lambda_r y_r >= y_k,
//                    sum_r lambda_r = 1,  lambda >= 0.
//
// Slow but direct; used to check the reference-searching solver and to
// measure the density of a peer.

#pragma once

#include <cstddef>
#include <exception>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "dea/lp.hpp"
#include "dea/model.hpp"
#include "dea/searchref.hpp"

namespace dea {

/// Keeps one full-size problem and rewrites only the k-dependent theta
/// column and output right-hand side between DMUs. The previous optimal
/// basis is offered as a warm start and dropped when it is infeasible for
/// the new DMU.
class FullSolver {
 public:
  FullSolver(const Dataset& d, double lp_tol) : d_(d), lp_tol_(lp_tol) {
    const int m = d.num_inputs();
    const int n = d.num_outputs();
    const auto rows = static_cast<Eigen::Index>(m + n + 1);
    const auto cols = static_cast<Eigen::Index>(d.size() + 1);
    shell_.objective.setZero(cols);
    shell_.objective[0] = 1.0;
    shell_.columns.setZero(rows, cols);
    shell_.rhs.setZero(rows);
    shell_.row_senses.assign(static_cast<std::size_t>(rows), RowSense::kLessEqual);
    for (int j = 0; j < n; ++j) {
      shell_.row_senses[static_cast<std::size_t>(m + j)] = RowSense::kGreaterEqual;
    }
    shell_.row_senses.back() = RowSense::kEqual;
    shell_.rhs[m + n] = 1.0;
    shell_.var_bounds.assign(static_cast<std::size_t>(cols), VarBound::kNonNegative);
    shell_.var_bounds[0] = VarBound::kFree;
    for (std::size_t r = 0; r < d.size(); ++r) {
      const auto col = static_cast<Eigen::Index>(r + 1);
      shell_.columns.block(0, col, m, 1) = d.input(r).transpose();
      shell_.columns.block(m, col, n, 1) = d.output(r).transpose();
      shell_.columns(m + n, col) = 1.0;
    }
  }

  EfficiencyResult solve(std::size_t k) {
    detail::check_index(d_, k);
    const int m = d_.num_inputs();
    const int n = d_.num_outputs();
    shell_.columns.block(0, 0, m, 1) = -d_.input(k).transpose();
    shell_.rhs.segment(m, n) = d_.output(k).transpose();

    LpSolution sol = solve_lp(shell_, lp_tol_, basis_.empty() ? nullptr : &basis_);
    if (!sol.optimal() && sol.warm_started) sol = solve_lp(shell_, lp_tol_);

    EfficiencyResult r;
    r.index = k;
    r.dmu = d_.id(k);
    r.iterations = 1;
    r.max_lp_columns = d_.size();
    if (!sol.optimal()) {
      r.theta = std::numeric_limits<double>::quiet_NaN();
      r.status = SolveStatus::kNumericalFailure;
      r.message = "full LP returned " + std::string(to_string(sol.status));
      basis_.clear();
      return r;
    }
    basis_ = sol.basis;
    r.theta = sol.primal[0];
    for (std::size_t c = 0; c < d_.size(); ++c) {
      const double w = sol.primal[static_cast<Eigen::Index>(c + 1)];
      if (w > detail::kZeroWeight) r.lambdas[c] = w;
    }
    r.dual = detail::hyperplane_from_duals(sol.dual, m, n);
    return r;
  }

  const LpProblem& problem() const noexcept { return shell_; }

 private:
  const Dataset& d_;
  double lp_tol_;
  LpProblem shell_;
  Basis basis_;
};

/// Efficiency, references and supporting hyperplane of DMU k from the
/// full-size LP.
inline EfficiencyResult solve_full(const Dataset& d, std::size_t k,
                                   double lp_tol) {
  FullSolver solver(d, lp_tol);
  return solver.solve(k);
}

/// Every DMU of the peer, in row order. Each worker owns one problem shell.
inline std::vector<EfficiencyResult> solve_full_batch(const Dataset& d,
                                                      double lp_tol,
                                                      int threads = 1) {
  std::vector<EfficiencyResult> out(d.size());
  const auto workers =
      static_cast<std::size_t>(std::max(1, std::min<int>(threads, static_cast<int>(d.size()))));
  const std::size_t chunk = (d.size() + workers - 1) / workers;
  detail::parallel_for(workers, static_cast<int>(workers), [&](std::size_t w) {
    FullSolver solver(d, lp_tol);
    const std::size_t end = std::min(d.size(), (w + 1) * chunk);
    for (std::size_t k = w * chunk; k < end; ++k) {
      try {
        out[k] = solver.solve(k);
      } catch (const std::exception& e) {
        out[k].index = k;
        out[k].dmu = d.id(k);
        out[k].theta = std::numeric_limits<double>::quiet_NaN();
        out[k].status = SolveStatus::kNumericalFailure;
        out[k].message = e.what();
      }
    }
  });
  return out;
}

}  // namespace dea
