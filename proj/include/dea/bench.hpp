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

// Benchmark grid and run reports.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dea/full_solver.hpp"
#include "dea/model.hpp"
#include "dea/searchref.hpp"

namespace dea {

struct ReportRow {
  std::string id;
  double theta = 0.0;
  int iterations = 0;
  std::size_t max_lp_columns = 0;
  std::size_t lp_columns_solved = 0;  // summed over the DMU's LPs
  std::string status;
};

struct IterationStats {
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population
  int p90 = 0;          // nearest-rank 90th percentile
  int max = 0;
};

/// Statistics over iteration counts. Empty input gives all zeros.
inline IterationStats iteration_stats(std::span<const int> iterations) {
  IterationStats s;
  s.count = iterations.size();
  if (iterations.empty()) return s;
  std::vector<int> sorted(iterations.begin(), iterations.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (int it : sorted) sum += it;
  s.mean = sum / static_cast<double>(sorted.size());
  double sq = 0.0;
  for (int it : sorted) sq += (it - s.mean) * (it - s.mean);
  s.stddev = std::sqrt(sq / static_cast<double>(sorted.size()));
  const auto rank = static_cast<std::size_t>(
      std::ceil(0.9 * static_cast<double>(sorted.size())));
  s.p90 = sorted[std::max<std::size_t>(rank, 1) - 1];
  s.max = sorted.back();
  return s;
}

struct RunReport {
  std::string label;
  std::string algorithm;  // "searchref" or "full"
  SolverConfig config;
  std::vector<ReportRow> rows;
  IterationStats all;
  IterationStats eff;    // theta >= 1 - eff_tol
  IterationStats ineff;
  std::size_t failures = 0;
  std::size_t total_lp_columns = 0;
  double wall_seconds = 0.0;
  std::optional<double> max_abs_delta;  // against the full-size oracle
};

/// Recomputes the aggregate fields of `report` from its rows.
inline void summarize(RunReport& report) {
  std::vector<int> all, eff, ineff;
  report.failures = 0;
  report.total_lp_columns = 0;
  for (const auto& row : report.rows) {
    report.total_lp_columns += row.lp_columns_solved;
    if (row.status != to_string(SolveStatus::kOptimal)) {
      ++report.failures;
      continue;
    }
    all.push_back(row.iterations);
    (row.theta >= 1.0 - report.config.eff_tol ? eff : ineff).push_back(row.iterations);
  }
  report.all = iteration_stats(all);
  report.eff = iteration_stats(eff);
  report.ineff = iteration_stats(ineff);
}

inline RunReport make_report(std::string label, std::string algorithm,
                             const SolverConfig& cfg,
                             std::span<const EfficiencyResult> results,
                             std::span<const std::size_t> lp_columns_solved,
                             double wall_seconds) {
  RunReport report;
  report.label = std::move(label);
  report.algorithm = std::move(algorithm);
  report.config = cfg;
  report.wall_seconds = wall_seconds;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    report.rows.push_back({r.dmu, r.theta, r.iterations, r.max_lp_columns,
                           i < lp_columns_solved.size() ? lp_columns_solved[i] : 0,
                           std::string(to_string(r.status))});
  }
  summarize(report);
  return report;
}

/// Largest |theta_a - theta_b| over rows that are optimal in both runs;
/// nullopt when the runs cover different DMUs.
inline std::optional<double> max_theta_gap(const RunReport& a, const RunReport& b) {
  if (a.rows.size() != b.rows.size()) return std::nullopt;
  double gap = 0.0;
  const std::string ok(to_string(SolveStatus::kOptimal));
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i].id != b.rows[i].id) return std::nullopt;
    if (a.rows[i].status != ok || b.rows[i].status != ok) continue;
    gap = std::max(gap, std::abs(a.rows[i].theta - b.rows[i].theta));
  }
  return gap;
}

struct BenchGrid {
  std::vector<int> deltas{100};
  std::vector<InitStrategy> inits{InitStrategy::kMinMax};
  std::vector<std::optional<int>> caps{std::nullopt};
  bool with_oracle = true;
};

struct BenchOutcome {
  nlohmann::json source;  // where the peer came from
  std::size_t peer_size = 0;
  int m = 0;
  int n = 0;
  std::optional<RunReport> oracle;
  std::vector<RunReport> runs;
};

inline std::string run_label(const SolverConfig& cfg) {
  std::string label = "searchref delta=" + std::to_string(cfg.delta) +
                      " init=" + std::string(to_string(cfg.init_strategy));
  label += cfg.size_cap ? " cap=" + std::to_string(*cfg.size_cap) : " cap=none";
  return label;
}

inline RunReport run_searchref(const Dataset& d, std::span<const std::size_t> subset,
                               const SolverConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<DmuSolve> solved = solve_batch_traced(d, subset, cfg);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::vector<EfficiencyResult> results;
  std::vector<std::size_t> columns;
  for (auto& s : solved) {
    std::size_t total = 0;
    for (const auto& rec : s.trace.records) total += rec.sample_size;
    columns.push_back(total);
    results.push_back(std::move(s.result));
  }
  return make_report(run_label(cfg), "searchref", cfg, results, columns, wall);
}

inline RunReport run_full(const Dataset& d, const SolverConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<EfficiencyResult> results = solve_full_batch(d, cfg.lp_tol, cfg.threads);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::vector<std::size_t> columns(results.size(), d.size());
  return make_report("full-size LP", "full", cfg, results, columns, wall);
}

/// Every grid cell is a SearchRef run on all DMUs; the oracle row solves the
/// full-size LPs once. A failing DMU is marked in its row and the grid goes on.
inline BenchOutcome run_bench(const Dataset& d, const BenchGrid& grid,
                              const SolverConfig& base, nlohmann::json source = {}) {
  BenchOutcome out;
  out.source = std::move(source);
  out.peer_size = d.size();
  out.m = d.num_inputs();
  out.n = d.num_outputs();
  const std::vector<std::size_t> subset = all_indices(d);
  if (grid.with_oracle) out.oracle = run_full(d, base);
  for (auto cap : grid.caps) {
    for (auto init : grid.inits) {
      for (int delta : grid.deltas) {
        SolverConfig cfg = base;
        cfg.delta = delta;
        cfg.init_strategy = init;
        cfg.size_cap = cap;
        RunReport report = run_searchref(d, subset, cfg);
        if (out.oracle) report.max_abs_delta = max_theta_gap(report, *out.oracle);
        out.runs.push_back(std::move(report));
      }
    }
  }
  return out;
}

inline nlohmann::json to_json(const SolverConfig& cfg, int m, int n) {
  nlohmann::json j;
  j["big_m"] = cfg.big_m;
  j["delta"] = cfg.delta;
  j["eff_tol"] = cfg.eff_tol;
  j["term_tol"] = cfg.term_tol;
  j["lp_tol"] = cfg.lp_tol;
  j["init"] = std::string(to_string(cfg.init_strategy));
  j["init_size"] = cfg.resolved_init_size(m, n);
  j["size_cap"] = cfg.size_cap ? nlohmann::json(*cfg.size_cap) : nlohmann::json(nullptr);
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  j["max_iterations"] = cfg.max_iterations;
  j["warm_start"] = cfg.warm_start;
  return j;
}

inline nlohmann::json to_json(const IterationStats& s) {
  return {{"count", s.count}, {"mean", s.mean}, {"stddev", s.stddev},
          {"p90", s.p90},     {"max", s.max}};
}

inline nlohmann::json to_json(const RunReport& r, int m, int n) {
  nlohmann::json j;
  j["label"] = r.label;
  j["algorithm"] = r.algorithm;
  j["config"] = to_json(r.config, m, n);
  j["iterations"] = to_json(r.all);
  j["eff"] = to_json(r.eff);
  j["ineff"] = to_json(r.ineff);
  j["failures"] = r.failures;
  j["total_lp_columns"] = r.total_lp_columns;
  j["wall_seconds"] = r.wall_seconds;
  j["max_abs_delta_vs_oracle"] =
      r.max_abs_delta ? nlohmann::json(*r.max_abs_delta) : nlohmann::json(nullptr);
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"id", row.id},
                    {"theta", std::isfinite(row.theta) ? nlohmann::json(row.theta)
                                                       : nlohmann::json(nullptr)},
                    {"iterations", row.iterations},
                    {"max_lp_columns", row.max_lp_columns},
                    {"lp_columns_solved", row.lp_columns_solved},
                    {"status", row.status}});
  }
  j["rows"] = std::move(rows);
  return j;
}

inline nlohmann::json to_json(const BenchOutcome& b) {
  nlohmann::json j;
  j["source"] = b.source;
  j["peer"] = {{"size", b.peer_size}, {"m", b.m}, {"n", b.n}};
  j["timing_note"] =
      "wall-clock seconds on this machine and LP kernel; not comparable to "
      "timings from other hardware or solvers";
  j["oracle"] = b.oracle ? to_json(*b.oracle, b.m, b.n) : nlohmann::json(nullptr);
  j["runs"] = nlohmann::json::array();
  for (const auto& r : b.runs) j["runs"].push_back(to_json(r, b.m, b.n));
  return j;
}

namespace detail {

inline std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string format_gap(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

inline std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

}  // namespace detail

/// Plain-text tables: convergence (avg / 90th / max iterations),
/// eff-vs-ineff split, the delta x init x cap grid of time and average
/// iterations, and oracle agreement.
inline std::string summary_text(const BenchOutcome& b) {
  using detail::fixed;
  using detail::pad;
  std::ostringstream os;
  os << "peer: " << b.peer_size << " DMUs, " << b.m << " inputs, " << b.n
     << " outputs (dimension " << b.m + b.n << ")\n";
  if (b.oracle) {
    const double density =
        b.oracle->rows.empty()
            ? 0.0
            : static_cast<double>(b.oracle->eff.count) /
                  static_cast<double>(b.oracle->rows.size());
    os << "measured density: " << fixed(100.0 * density, 2) << "%\n";
  }
  os << "times are wall-clock seconds on this machine; not comparable to other "
        "hardware or solvers\n\n";

  os << "Convergence (iterations per DMU)\n";
  os << pad("run", 44) << pad("avg", 8) << pad("90th", 6) << pad("max", 6)
     << pad("fail", 6) << '\n';
  for (const auto& r : b.runs) {
    os << pad(r.label, 44) << pad(fixed(r.all.mean, 2), 8)
       << pad(std::to_string(r.all.p90), 6) << pad(std::to_string(r.all.max), 6)
       << pad(std::to_string(r.failures), 6) << '\n';
  }

  os << "\nEfficient vs inefficient DMUs\n";
  os << pad("run", 44) << pad("eff no.", 9) << pad("avg", 7) << pad("std", 7)
     << pad("max", 5) << pad("ineff no.", 11) << pad("avg", 7) << pad("std", 7)
     << pad("max", 5) << '\n';
  for (const auto& r : b.runs) {
    os << pad(r.label, 44) << pad(std::to_string(r.eff.count), 9)
       << pad(fixed(r.eff.mean, 2), 7) << pad(fixed(r.eff.stddev, 2), 7)
       << pad(std::to_string(r.eff.max), 5) << pad(std::to_string(r.ineff.count), 11)
       << pad(fixed(r.ineff.mean, 2), 7) << pad(fixed(r.ineff.stddev, 2), 7)
       << pad(std::to_string(r.ineff.max), 5) << '\n';
  }

  // Grid view: one line per (init, cap), one cell per delta.
  std::vector<int> deltas;
  for (const auto& r : b.runs) {
    if (std::find(deltas.begin(), deltas.end(), r.config.delta) == deltas.end()) {
      deltas.push_back(r.config.delta);
    }
  }
  os << "\nIncremental size (cells: time s / avg iterations)\n";
  os << pad("init, cap", 20);
  for (int delta : deltas) os << pad("delta=" + std::to_string(delta), 18);
  os << '\n';
  std::vector<std::string> seen;
  for (const auto& r : b.runs) {
    const std::string key =
        std::string(to_string(r.config.init_strategy)) + ", " +
        (r.config.size_cap ? std::to_string(*r.config.size_cap) : std::string("none"));
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
    seen.push_back(key);
    os << pad(key, 20);
    for (int delta : deltas) {
      std::string cell = "-";
      for (const auto& q : b.runs) {
        if (q.config.delta == delta && q.config.init_strategy == r.config.init_strategy &&
            q.config.size_cap == r.config.size_cap) {
          cell = fixed(q.wall_seconds, 2) + " / " + fixed(q.all.mean, 2);
        }
      }
      os << pad(cell, 18);
    }
    os << '\n';
  }

  if (b.oracle) {
    os << "\nOracle agreement (full-size LP, " << fixed(b.oracle->wall_seconds, 2)
       << " s, " << b.oracle->failures << " failures)\n";
    for (const auto& r : b.runs) {
      os << pad(r.label, 44) << "  max |dtheta| = "
         << (r.max_abs_delta ? detail::format_gap(*r.max_abs_delta) : std::string("n/a"))
         << '\n';
    }
  }
  return os.str();
}

}  // namespace dea
