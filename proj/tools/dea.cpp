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

// dea solve | gen | bench
//
// Exit codes: 0 success, 1 bad flags / unreadable or invalid input,
// 2 solver failure (a DMU did not solve, or --oracle disagreed).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dea/bench.hpp"
#include "dea/csv.hpp"
#include "dea/datagen.hpp"
#include "dea/full_solver.hpp"
#include "dea/model.hpp"
#include "dea/searchref.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitSolver = 2;

struct SolverFlags {
  double big_m = 10.0;
  int delta = 100;
  double eff_tol = 1e-5;
  double term_tol = 1e-6;
  double lp_tol = 1e-6;
  std::string init = "minmax";
  std::optional<int> init_size;
  std::optional<int> size_cap;
  unsigned long long seed = 0;
  int threads = 1;

  dea::SolverConfig config() const {
    dea::SolverConfig cfg;
    cfg.big_m = big_m;
    cfg.delta = delta;
    cfg.eff_tol = eff_tol;
    cfg.term_tol = term_tol;
    cfg.lp_tol = lp_tol;
    cfg.init_strategy =
        init == "random" ? dea::InitStrategy::kRandom : dea::InitStrategy::kMinMax;
    cfg.init_size = init_size;
    cfg.size_cap = size_cap;
    cfg.seed = seed;
    cfg.threads = threads;
    return cfg;
  }
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--big-m", f.big_m, "Scaling M of the evaluated input (>= 1)")
      ->capture_default_str();
  cmd->add_option("--delta", f.delta, "DMUs added per expansion")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--eff-tol", f.eff_tol, "Efficiency accuracy")->capture_default_str();
  cmd->add_option("--term-tol", f.term_tol, "Tolerance of the termination check")
      ->capture_default_str();
  cmd->add_option("--lp-tol", f.lp_tol, "LP optimality/feasibility tolerance")
      ->capture_default_str();
  cmd->add_option("--init", f.init, "Initial sample: minmax or random")
      ->check(CLI::IsMember({"minmax", "random"}))
      ->capture_default_str();
  cmd->add_option("--init-size", f.init_size, "Initial sample size (default m+n+1)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--size-cap", f.size_cap, "Maximum lambda columns per LP")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "Seed for sample fill and random init")
      ->capture_default_str();
  cmd->add_option("--threads", f.threads, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void warn_tolerances(const dea::SolverConfig& cfg) {
  if (cfg.term_tol > cfg.eff_tol / cfg.big_m) {
    std::cerr << "warning: --term-tol " << cfg.term_tol << " exceeds eff-tol/M = "
              << cfg.eff_tol / cfg.big_m << "; efficiencies may miss --eff-tol\n";
  }
}

bool write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
  out.close();
  if (!out) {
    std::cerr << "error: cannot write " << path << '\n';
    return false;
  }
  return true;
}

std::optional<dea::Dataset> load_peer(const std::string& path, int m, int n,
                                      bool lenient) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open " << path << '\n';
    return std::nullopt;
  }
  dea::ValidationOptions options;
  if (lenient) options.mode = dea::ValidationMode::kWarn;
  try {
    return dea::read_dataset_csv(in, m, n, options);
  } catch (const dea::CsvError& e) {
    std::cerr << "error: " << path << ": " << e.what() << '\n';
  } catch (const dea::ValidationError& e) {
    std::cerr << "error: " << path << ": " << e.what() << '\n';
  }
  return std::nullopt;
}

struct SolveFlags {
  std::string input;
  std::string output;
  std::string refs;
  int m = 0;
  int n = 0;
  std::vector<std::string> subset;
  bool oracle = false;
  bool lenient = false;
  std::string algo = "searchref";
  SolverFlags solver;
};

int run_solve(const SolveFlags& f) {
  const auto peer = load_peer(f.input, f.m, f.n, f.lenient);
  if (!peer) return kExitInput;
  const dea::Dataset& d = *peer;
  const dea::SolverConfig cfg = f.solver.config();
  try {
    cfg.validate(d.num_inputs(), d.num_outputs());
  } catch (const dea::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  warn_tolerances(cfg);

  std::vector<std::size_t> subset;
  if (f.subset.empty()) {
    subset = dea::all_indices(d);
  } else {
    for (const auto& id : f.subset) {
      const auto k = d.find(id);
      if (!k) {
        std::cerr << "error: --subset names unknown DMU '" << id << "'\n";
        return kExitInput;
      }
      subset.push_back(*k);
    }
  }

  std::vector<dea::EfficiencyResult> results;
  if (f.algo == "full") {
    dea::FullSolver solver(d, cfg.lp_tol);
    for (std::size_t k : subset) results.push_back(solver.solve(k));
  } else {
    results = dea::solve_batch(d, subset, cfg);
  }

  std::ostringstream body;
  dea::write_results_csv(body, results);
  if (!write_file(f.output, body.str())) return kExitInput;
  if (!f.refs.empty()) {
    std::ostringstream refs;
    dea::write_references_csv(refs, d, results);
    if (!write_file(f.refs, refs.str())) return kExitInput;
  }

  int code = kExitOk;
  std::vector<int> iterations;
  for (const auto& r : results) {
    if (!r.ok()) {
      std::cerr << "error: DMU '" << r.dmu << "': " << dea::to_string(r.status)
                << ": " << r.message << '\n';
      code = kExitSolver;
    } else {
      iterations.push_back(r.iterations);
    }
  }
  const dea::IterationStats stats = dea::iteration_stats(iterations);
  std::cout << "solved " << iterations.size() << "/" << results.size()
            << " DMUs with " << f.algo << "; iterations avg "
            << dea::detail::fixed(stats.mean, 2) << ", 90th " << stats.p90
            << ", max " << stats.max << '\n';

  if (f.oracle) {
    dea::FullSolver solver(d, cfg.lp_tol);
    double gap = 0.0;
    for (const auto& r : results) {
      const dea::EfficiencyResult o = solver.solve(r.index);
      if (!o.ok() || !r.ok()) {
        std::cerr << "error: oracle could not compare DMU '" << r.dmu << "'\n";
        code = kExitSolver;
        continue;
      }
      gap = std::max(gap, std::abs(o.theta - r.theta));
    }
    std::cout << "oracle max |dtheta| = " << dea::format_double(gap)
              << " (eff-tol " << cfg.eff_tol << ")\n";
    if (gap > cfg.eff_tol) {
      std::cerr << "error: oracle disagreement exceeds --eff-tol\n";
      code = kExitSolver;
    }
  }
  return code;
}

struct GenFlags {
  int m = 0;
  int n = 0;
  long long count = 0;
  double density = 0.1;
  unsigned long long seed = 0;
  std::string output;
};

dea::Metadata gen_metadata(const GenFlags& f) {
  return {{"generator", "concave-frontier-v1"},
          {"m", std::to_string(f.m)},
          {"n", std::to_string(f.n)},
          {"count", std::to_string(f.count)},
          {"density", dea::format_double(f.density)},
          {"seed", std::to_string(f.seed)}};
}

int run_gen(const GenFlags& f) {
  const dea::Dataset d = dea::generate(f.m, f.n, static_cast<std::size_t>(f.count),
                                       f.density, f.seed);
  std::ostringstream csv;
  dea::write_dataset_csv(csv, d);
  if (!write_file(f.output, csv.str())) return kExitInput;
  std::ostringstream meta;
  dea::write_metadata(meta, gen_metadata(f));
  if (!write_file(f.output + ".meta", meta.str())) return kExitInput;
  std::cout << "wrote " << d.size() << " DMUs to " << f.output << '\n';
  return kExitOk;
}

struct BenchFlags {
  std::string input;
  int m = 0;
  int n = 0;
  long long count = 0;
  double density = 0.1;
  unsigned long long data_seed = 0;
  std::vector<int> deltas{100};
  std::vector<std::string> inits{"minmax"};
  std::vector<std::string> caps{"none"};
  bool no_oracle = false;
  std::string report;
  std::string summary;
  SolverFlags solver;
};

int run_bench(const BenchFlags& f) {
  std::optional<dea::Dataset> peer;
  nlohmann::json source;
  if (!f.input.empty()) {
    peer = load_peer(f.input, f.m, f.n, false);
    if (!peer) return kExitInput;
    source = {{"kind", "file"}, {"path", f.input}, {"m", f.m}, {"n", f.n}};
  } else {
    if (f.count < 1) {
      std::cerr << "error: bench needs --input or --count >= 1\n";
      return kExitInput;
    }
    peer = dea::generate(f.m, f.n, static_cast<std::size_t>(f.count), f.density,
                         f.data_seed);
    source = {{"kind", "generated"}, {"generator", "concave-frontier-v1"},
              {"m", f.m}, {"n", f.n}, {"count", f.count},
              {"density", f.density}, {"seed", f.data_seed}};
  }

  dea::BenchGrid grid;
  grid.deltas = f.deltas;
  grid.inits.clear();
  for (const auto& s : f.inits) {
    grid.inits.push_back(s == "random" ? dea::InitStrategy::kRandom
                                       : dea::InitStrategy::kMinMax);
  }
  grid.caps.clear();
  for (const auto& s : f.caps) {
    if (s == "none") {
      grid.caps.emplace_back(std::nullopt);
      continue;
    }
    try {
      grid.caps.emplace_back(std::stoi(s));
    } catch (const std::exception&) {
      std::cerr << "error: --caps entry '" << s << "' is neither 'none' nor an integer\n";
      return kExitInput;
    }
  }
  grid.with_oracle = !f.no_oracle;

  const dea::SolverConfig base = f.solver.config();
  for (auto cap : grid.caps) {
    for (int delta : grid.deltas) {
      dea::SolverConfig cfg = base;
      cfg.delta = delta;
      cfg.size_cap = cap;
      try {
        cfg.validate(peer->num_inputs(), peer->num_outputs());
      } catch (const dea::ConfigError& e) {
        std::cerr << "error: grid cell delta=" << delta << ": " << e.what() << '\n';
        return kExitInput;
      }
    }
  }
  warn_tolerances(base);

  const dea::BenchOutcome outcome = dea::run_bench(*peer, grid, base, source);
  const std::string text = dea::summary_text(outcome);
  std::cout << text;
  if (!f.summary.empty() && !write_file(f.summary, text)) return kExitInput;
  if (!f.report.empty() && !write_file(f.report, dea::to_json(outcome).dump(2) + "\n")) {
    return kExitInput;
  }
  std::size_t failures = 0;
  for (const auto& r : outcome.runs) failures += r.failures;
  if (failures > 0) {
    std::cerr << "warning: " << failures << " DMU solves failed; see report rows\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Input-oriented VRS efficiency by reference searching"};
  app.require_subcommand(1, 1);

  SolveFlags solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Compute efficiencies for a peer CSV");
  solve_cmd->add_option("--input", solve.input, "Peer CSV (id,x1..xm,y1..yn)")->required();
  solve_cmd->add_option("--output", solve.output, "Results CSV")->required();
  solve_cmd->add_option("--m", solve.m, "Number of inputs")->required()->check(CLI::PositiveNumber);
  solve_cmd->add_option("--n", solve.n, "Number of outputs")->required()->check(CLI::PositiveNumber);
  solve_cmd->add_option("--subset", solve.subset, "Comma-separated DMU ids to evaluate")
      ->delimiter(',');
  solve_cmd->add_flag("--oracle", solve.oracle, "Also solve full-size LPs and report max |dtheta|");
  solve_cmd->add_option("--algo", solve.algo, "searchref or full")
      ->check(CLI::IsMember({"searchref", "full"}))
      ->capture_default_str();
  solve_cmd->add_option("--refs", solve.refs, "Write references CSV (id,ref_id,lambda)");
  solve_cmd->add_flag("--lenient", solve.lenient,
                      "Warn instead of failing on duplicate or proportionate rows");
  add_solver_flags(solve_cmd, solve.solver);

  GenFlags gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a synthetic peer CSV");
  gen_cmd->add_option("--m", gen.m, "Number of inputs")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--n", gen.n, "Number of outputs")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--count", gen.count, "Number of DMUs")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--density", gen.density, "Target share of efficient DMUs, (0, 1]")
      ->check(CLI::Range(1e-12, 1.0))
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  gen_cmd->add_option("--output", gen.output, "Output CSV (metadata goes to <output>.meta)")
      ->required();

  BenchFlags bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Run the benchmark grid");
  bench_cmd->add_option("--input", bench.input, "Peer CSV; otherwise a peer is generated");
  bench_cmd->add_option("--m", bench.m, "Number of inputs")->required()->check(CLI::PositiveNumber);
  bench_cmd->add_option("--n", bench.n, "Number of outputs")->required()->check(CLI::PositiveNumber);
  bench_cmd->add_option("--count", bench.count, "Generated peer size")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--density", bench.density, "Generated peer density")
      ->check(CLI::Range(1e-12, 1.0))
      ->capture_default_str();
  bench_cmd->add_option("--data-seed", bench.data_seed, "Generator seed")->capture_default_str();
  bench_cmd->add_option("--deltas", bench.deltas, "Comma-separated increments")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--inits", bench.inits, "Comma-separated: minmax,random")
      ->delimiter(',')
      ->check(CLI::IsMember({"minmax", "random"}));
  bench_cmd->add_option("--caps", bench.caps, "Comma-separated size caps or 'none'")
      ->delimiter(',');
  bench_cmd->add_flag("--no-oracle", bench.no_oracle, "Skip the full-size LP row");
  bench_cmd->add_option("--report", bench.report, "Machine-readable JSON report");
  bench_cmd->add_option("--summary", bench.summary, "Human-readable summary file");
  add_solver_flags(bench_cmd, bench.solver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (solve_cmd->parsed()) return run_solve(solve);
    if (gen_cmd->parsed()) return run_gen(gen);
    if (bench_cmd->parsed()) return run_bench(bench);
  } catch (const dea::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const dea::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitInput;
}
