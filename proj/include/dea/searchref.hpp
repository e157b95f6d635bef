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

// Reference searching for input-oriented VRS efficiency.
//
// Instead of one LP over the whole peer, each DMU k is evaluated on a sample
// S of the peer that always contains k. The evaluated column is (M x_k, y_k)
// with M >= 1, which makes efficient DMUs look inefficient in the small LP
// and so (usually) pins down a unique dual. After each solve the optimal dual
// (u, v, w) is checked against every DMU outside the sample:
//
//     -u.x_t + v.y_t + w <= 0   for all t not in S
//
// When this holds the sample optimum equals the full-peer optimum. Otherwise
// the most violating DMUs join the sample and the LP is re-solved. The final
// small-LP solution is mapped back to the unscaled problem: theta = M theta^
// when (x_k, y_k) lies in the closed half-space of the dual hyperplane, and
// theta = 1 otherwise.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dea/errors.hpp"
#include "dea/lp.hpp"
#include "dea/model.hpp"
#include "dea/rng.hpp"

namespace dea {

/// Index subset of the peer evaluated in one small LP; k is always a member.
struct Sample {
  std::vector<std::size_t> members;
  std::size_t k = 0;

  bool contains(std::size_t r) const {
    return std::find(members.begin(), members.end(), r) != members.end();
  }

  friend bool operator==(const Sample&, const Sample&) = default;
};

struct IterationRecord {
  std::size_t sample_size = 0;  // lambda columns of the LP
  double theta_hat = 0.0;
  std::size_t violation_count = 0;
  double max_violation = 0.0;  // 0 when nothing violates
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  Sample final_sample;
  Hyperplane sample_dual;  // optimal dual of the last small LP
  double final_theta_hat = 0.0;
};

struct DmuSolve {
  EfficiencyResult result;
  IterationTrace trace;
};

struct Violation {
  std::size_t index = 0;
  double value = 0.0;

  friend bool operator==(const Violation&, const Violation&) = default;
};

namespace detail {

inline void check_index(const Dataset& d, std::size_t k) {
  if (k >= d.size()) {
    throw std::out_of_range("DMU index " + std::to_string(k) +
                            " out of range for peer of " +
                            std::to_string(d.size()));
  }
}

inline std::vector<bool> membership(const Dataset& d, const Sample& s) {
  std::vector<bool> in(d.size(), false);
  for (std::size_t r : s.members) in[r] = true;
  return in;
}

// Duals of the small LP in (u, v, w) orientation: u = -y on the input rows,
// v = y on the output rows, w = y on the convexity row.
inline Hyperplane hyperplane_from_duals(const Eigen::VectorXd& dual, int m,
                                        int n) {
  Hyperplane h;
  h.u = (-dual.head(m)).cwiseMax(0.0);
  h.v = dual.segment(m, n).cwiseMax(0.0);
  h.w = dual[m + n];
  return h;
}

constexpr double kZeroWeight = 1e-12;

}  // namespace detail

/// Starting sample. MinMax takes k, an argmin of every input and an argmax of
/// every output (lowest index on ties), then tops up from a seeded shuffle of
/// the rest. Random takes k plus init_size - 1 seeded draws. A peer no larger
/// than init_size is taken whole.
inline Sample initial_sample(const Dataset& d, std::size_t k,
                             const SolverConfig& cfg) {
  detail::check_index(d, k);
  const int m = d.num_inputs();
  const int n = d.num_outputs();
  const auto target = static_cast<std::size_t>(cfg.resolved_init_size(m, n));
  if (target < 1) throw ConfigError("init_size must be >= 1");

  Sample s;
  s.k = k;
  s.members.push_back(k);
  if (d.size() <= target) {
    for (std::size_t r = 0; r < d.size(); ++r) {
      if (r != k) s.members.push_back(r);
    }
    return s;
  }

  std::vector<bool> taken(d.size(), false);
  taken[k] = true;
  auto take = [&](std::size_t r) {
    if (!taken[r]) {
      taken[r] = true;
      s.members.push_back(r);
    }
  };

  if (cfg.init_strategy == InitStrategy::kMinMax) {
    for (int i = 0; i < m; ++i) {
      Eigen::Index best = 0;
      d.inputs().col(i).minCoeff(&best);
      take(static_cast<std::size_t>(best));
    }
    for (int j = 0; j < n; ++j) {
      Eigen::Index best = 0;
      d.outputs().col(j).maxCoeff(&best);
      take(static_cast<std::size_t>(best));
    }
  }

  if (s.members.size() < target) {
    std::vector<std::size_t> rest;
    rest.reserve(d.size());
    for (std::size_t r = 0; r < d.size(); ++r) {
      if (!taken[r]) rest.push_back(r);
    }
    const std::size_t need = target - s.members.size();
    Rng rng = Rng::stream(cfg.seed, k);
    rng.partial_shuffle(rest, need);
    for (std::size_t i = 0; i < need && i < rest.size(); ++i) take(rest[i]);
  }
  return s;
}

/// Small LP over the sample. Variables are [theta, lambda_{members...}];
/// rows are m input rows (sum lambda_r x_r - theta M x_k <= 0, with M x_k
/// as k's own column), n output rows (>= y_k) and the convexity row (= 1).
inline LpProblem formulate_ps(const Dataset& d, const Sample& s,
                              const SolverConfig& cfg) {
  detail::check_index(d, s.k);
  const int m = d.num_inputs();
  const int n = d.num_outputs();
  const auto rows = static_cast<Eigen::Index>(m + n + 1);
  const auto cols = static_cast<Eigen::Index>(s.members.size() + 1);
  const double big_m = cfg.big_m;

  LpProblem p;
  p.objective.setZero(cols);
  p.objective[0] = 1.0;
  p.columns.setZero(rows, cols);
  p.rhs.setZero(rows);
  p.row_senses.assign(static_cast<std::size_t>(rows), RowSense::kLessEqual);
  p.var_bounds.assign(static_cast<std::size_t>(cols), VarBound::kNonNegative);
  p.var_bounds[0] = VarBound::kFree;

  const auto xk = d.input(s.k);
  const auto yk = d.output(s.k);
  for (int i = 0; i < m; ++i) p.columns(i, 0) = -big_m * xk[i];
  for (int j = 0; j < n; ++j) {
    p.row_senses[static_cast<std::size_t>(m + j)] = RowSense::kGreaterEqual;
    p.rhs[m + j] = yk[j];
  }
  p.row_senses.back() = RowSense::kEqual;
  p.rhs[m + n] = 1.0;

  for (std::size_t c = 0; c < s.members.size(); ++c) {
    const std::size_t r = s.members[c];
    if (r >= d.size()) throw DimensionMismatch("sample member out of range");
    const auto col = static_cast<Eigen::Index>(c + 1);
    const double scale = r == s.k ? big_m : 1.0;
    for (int i = 0; i < m; ++i) p.columns(i, col) = scale * d.input(r)[i];
    for (int j = 0; j < n; ++j) p.columns(m + j, col) = d.output(r)[j];
    p.columns(m + n, col) = 1.0;
  }
  return p;
}

/// DMUs outside the sample that lie beyond the hyperplane by more than
/// term_tol, most violating first (ascending index on ties). Empty means the
/// sample optimum is the full-peer optimum.
inline std::vector<Violation> check_termination(const Dataset& d,
                                                const Sample& s,
                                                const Hyperplane& h,
                                                double term_tol) {
  const std::vector<bool> in = detail::membership(d, s);
  std::vector<Violation> out;
  for (std::size_t t = 0; t < d.size(); ++t) {
    if (in[t]) continue;
    const double value = margin(h, d, t);
    if (value > term_tol) out.push_back({t, value});
  }
  std::sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
    return a.value != b.value ? a.value > b.value : a.index < b.index;
  });
  return out;
}

/// Appends the top min(delta, |violations|) violators. Under a size cap,
/// zero-weight members other than k are evicted first, deepest inside the
/// half-space (most negative margin) first. member_lambdas and member_margins
/// are indexed like s.members.
inline Sample expand_sample(const Sample& s,
                            std::span<const Violation> violations,
                            const SolverConfig& cfg,
                            std::span<const double> member_lambdas = {},
                            std::span<const double> member_margins = {}) {
  if (violations.empty()) {
    throw std::invalid_argument("expand_sample: no violations to add");
  }
  const std::size_t add =
      std::min(static_cast<std::size_t>(cfg.delta), violations.size());
  Sample out = s;

  if (cfg.size_cap && s.members.size() + add >
                          static_cast<std::size_t>(*cfg.size_cap)) {
    const std::size_t evict =
        s.members.size() + add - static_cast<std::size_t>(*cfg.size_cap);
    std::vector<std::size_t> candidates;  // positions in s.members
    const bool have_state = member_lambdas.size() == s.members.size() &&
                            member_margins.size() == s.members.size();
    if (have_state) {
      for (std::size_t p = 0; p < s.members.size(); ++p) {
        if (s.members[p] == s.k) continue;
        if (member_lambdas[p] > detail::kZeroWeight) continue;
        candidates.push_back(p);
      }
    }
    if (candidates.size() < evict) {
      throw CapInfeasible("size cap " + std::to_string(*cfg.size_cap) +
                          " cannot admit " + std::to_string(add) +
                          " members: only " + std::to_string(candidates.size()) +
                          " zero-weight members can be evicted, " +
                          std::to_string(evict) + " needed");
    }
    std::sort(candidates.begin(), candidates.end(),
              [&](std::size_t a, std::size_t b) {
                if (member_margins[a] != member_margins[b]) {
                  return member_margins[a] < member_margins[b];
                }
                return s.members[a] < s.members[b];
              });
    std::vector<bool> drop(s.members.size(), false);
    for (std::size_t e = 0; e < evict; ++e) drop[candidates[e]] = true;
    out.members.clear();
    for (std::size_t p = 0; p < s.members.size(); ++p) {
      if (!drop[p]) out.members.push_back(s.members[p]);
    }
  }

  for (std::size_t i = 0; i < add; ++i) out.members.push_back(violations[i].index);
  return out;
}

/// Maps the certified small-LP optimum onto the unscaled efficiency problem.
/// lambdas_hat is keyed by peer row index.
inline EfficiencyResult transform_solution(
    double theta_hat, const std::map<std::size_t, double>& lambdas_hat,
    const Hyperplane& h, const Dataset& d, std::size_t k,
    const SolverConfig& cfg) {
  detail::check_index(d, k);
  const double big_m = cfg.big_m;
  EfficiencyResult r;
  r.index = k;
  r.dmu = d.id(k);
  if (margin(h, d, k) <= cfg.term_tol) {
    // theta_hat <= u.x_k = 1/M up to term_tol; cap the roundoff above 1.
    r.theta = std::min(big_m * theta_hat, 1.0);
    for (const auto& [index, weight] : lambdas_hat) {
      if (weight > detail::kZeroWeight) r.lambdas[index] = weight;
    }
    r.dual = h.scaled(big_m, big_m);
  } else {
    const double tau = h.v.dot(d.output(k).transpose()) + h.w;
    if (!(tau > cfg.lp_tol)) {
      throw DegenerateDenominator("v.y_k + w = " + std::to_string(tau) +
                                  " for DMU '" + d.id(k) + "'");
    }
    r.theta = 1.0;
    r.lambdas[k] = 1.0;
    r.dual = h.scaled(big_m, 1.0 / tau);
  }
  return r;
}

namespace detail {

// Carries a basis across a change of sample. Returns false when a basic
// lambda column left the sample.
inline bool remap_basis(const Basis& old_basis,
                        const std::vector<std::size_t>& old_members,
                        const std::vector<std::size_t>& new_members,
                        Basis& out) {
  const auto old_vars = static_cast<Eigen::Index>(old_members.size() + 1);
  const auto new_vars = static_cast<Eigen::Index>(new_members.size() + 1);
  std::unordered_map<std::size_t, Eigen::Index> column_of;
  column_of.reserve(new_members.size());
  for (std::size_t c = 0; c < new_members.size(); ++c) {
    column_of[new_members[c]] = static_cast<Eigen::Index>(c + 1);
  }
  out.clear();
  out.reserve(old_basis.size());
  for (Eigen::Index e : old_basis) {
    if (e == 0) {
      out.push_back(0);
    } else if (e < old_vars) {
      auto it = column_of.find(old_members[static_cast<std::size_t>(e - 1)]);
      if (it == column_of.end()) return false;
      out.push_back(it->second);
    } else {
      out.push_back(new_vars + (e - old_vars));
    }
  }
  return true;
}

inline std::map<std::size_t, double> sample_lambdas(const Sample& s,
                                                    const LpSolution& sol) {
  std::map<std::size_t, double> out;
  for (std::size_t c = 0; c < s.members.size(); ++c) {
    const double w = sol.primal[static_cast<Eigen::Index>(c + 1)];
    if (w > kZeroWeight) out[s.members[c]] = w;
  }
  return out;
}

}  // namespace detail

/// Efficiency of DMU k by iterated small LPs. Solver failures come back as a
/// non-optimal status with the trace up to the failure.
inline DmuSolve solve_dmu(const Dataset& d, std::size_t k,
                          const SolverConfig& cfg) {
  detail::check_index(d, k);
  cfg.validate(d.num_inputs(), d.num_outputs());
  const int m = d.num_inputs();
  const int n = d.num_outputs();

  DmuSolve out;
  auto fail = [&](SolveStatus status, std::string message) {
    out.result.index = k;
    out.result.dmu = d.id(k);
    out.result.theta = std::numeric_limits<double>::quiet_NaN();
    out.result.status = status;
    out.result.message = std::move(message);
    out.result.iterations = static_cast<int>(out.trace.records.size());
    for (const auto& rec : out.trace.records) {
      out.result.max_lp_columns =
          std::max(out.result.max_lp_columns, rec.sample_size);
    }
    return out;
  };

  Sample s = initial_sample(d, k, cfg);
  Basis previous_basis;
  std::vector<std::size_t> previous_members;
  LpSolution sol;
  Hyperplane h;

  for (int iteration = 1;; ++iteration) {
    if (iteration > cfg.max_iterations) {
      return fail(SolveStatus::kIterationLimit,
                  "no certificate after " + std::to_string(cfg.max_iterations) +
                      " iterations");
    }
    const LpProblem p = formulate_ps(d, s, cfg);
    Basis warm;
    const bool use_warm =
        cfg.warm_start && !previous_basis.empty() &&
        detail::remap_basis(previous_basis, previous_members, s.members, warm);
    sol = solve_lp(p, cfg.lp_tol, use_warm ? &warm : nullptr);
    if (!sol.optimal() && use_warm) sol = solve_lp(p, cfg.lp_tol);
    if (!sol.optimal()) {
      return fail(SolveStatus::kNumericalFailure,
                  "small LP returned " + std::string(to_string(sol.status)) +
                      " at iteration " + std::to_string(iteration));
    }

    h = detail::hyperplane_from_duals(sol.dual, m, n);
    const double theta_hat = sol.primal[0];
    const std::vector<Violation> violations =
        check_termination(d, s, h, cfg.term_tol);
    out.trace.records.push_back(
        {s.members.size(), theta_hat, violations.size(),
         violations.empty() ? 0.0 : violations.front().value});
    if (violations.empty()) break;

    std::vector<double> lambdas;
    std::vector<double> margins;
    if (cfg.size_cap) {
      lambdas.resize(s.members.size());
      margins.resize(s.members.size());
      for (std::size_t c = 0; c < s.members.size(); ++c) {
        lambdas[c] = sol.primal[static_cast<Eigen::Index>(c + 1)];
        margins[c] = margin(h, d, s.members[c]);
      }
    }
    previous_basis = sol.basis;
    previous_members = s.members;
    try {
      s = expand_sample(s, violations, cfg, lambdas, margins);
    } catch (const CapInfeasible& e) {
      return fail(SolveStatus::kCapInfeasible, e.what());
    }
  }

  out.trace.final_sample = s;
  out.trace.sample_dual = h;
  out.trace.final_theta_hat = sol.primal[0];
  try {
    out.result = transform_solution(sol.primal[0], detail::sample_lambdas(s, sol),
                                    h, d, k, cfg);
  } catch (const DegenerateDenominator& e) {
    return fail(SolveStatus::kDegenerateDenominator, e.what());
  }
  out.result.iterations = static_cast<int>(out.trace.records.size());
  for (const auto& rec : out.trace.records) {
    out.result.max_lp_columns = std::max(out.result.max_lp_columns, rec.sample_size);
  }
  return out;
}

namespace detail {

/// Runs fn(i) for i in [0, count) on up to `threads` workers.
template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  const std::size_t spawn = std::min(workers, count);
  pool.reserve(spawn);
  for (std::size_t w = 0; w < spawn; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

inline void check_subset(const Dataset& d, std::span<const std::size_t> subset) {
  if (subset.empty()) throw std::invalid_argument("empty subset");
  for (std::size_t k : subset) check_index(d, k);
}

}  // namespace detail

/// solve_dmu for each index of `subset`, in subset order, with traces.
inline std::vector<DmuSolve> solve_batch_traced(
    const Dataset& d, std::span<const std::size_t> subset,
    const SolverConfig& cfg) {
  detail::check_subset(d, subset);
  cfg.validate(d.num_inputs(), d.num_outputs());
  std::vector<DmuSolve> out(subset.size());
  detail::parallel_for(subset.size(), cfg.threads, [&](std::size_t i) {
    try {
      out[i] = solve_dmu(d, subset[i], cfg);
    } catch (const std::exception& e) {
      out[i].result.index = subset[i];
      out[i].result.dmu = d.id(subset[i]);
      out[i].result.theta = std::numeric_limits<double>::quiet_NaN();
      out[i].result.status = SolveStatus::kNumericalFailure;
      out[i].result.message = e.what();
    }
  });
  return out;
}

inline std::vector<EfficiencyResult> solve_batch(
    const Dataset& d, std::span<const std::size_t> subset,
    const SolverConfig& cfg) {
  std::vector<DmuSolve> traced = solve_batch_traced(d, subset, cfg);
  std::vector<EfficiencyResult> out;
  out.reserve(traced.size());
  for (auto& t : traced) out.push_back(std::move(t.result));
  return out;
}

inline std::vector<std::size_t> all_indices(const Dataset& d) {
  std::vector<std::size_t> out(d.size());
  for (std::size_t r = 0; r < d.size(); ++r) out[r] = r;
  return out;
}

}  // namespace dea
