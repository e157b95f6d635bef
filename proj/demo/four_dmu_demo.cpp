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

// Evaluates a one-input, one-output peer of four DMUs with both solvers.

#include <cstdio>

#include "dea/full_solver.hpp"
#include "dea/searchref.hpp"

int main() {
  dea::RowMatrix raw(4, 2);
  raw << 1, 1,  //
      2, 1,     //
      2, 3,     //
      4, 3;
  const dea::Dataset peer = dea::validate_dataset({"A", "B", "C", "D"}, raw, 1, 1);

  dea::SolverConfig cfg;  // M = 10, delta = 100, init size m + n + 1
  for (std::size_t k = 0; k < peer.size(); ++k) {
    const dea::DmuSolve s = dea::solve_dmu(peer, k, cfg);
    const dea::EfficiencyResult full = dea::solve_full(peer, k, cfg.lp_tol);
    std::printf("%s  theta=%.6f (full LP %.6f)  iterations=%d  refs:",
                peer.id(k).c_str(), s.result.theta, full.theta, s.result.iterations);
    for (const auto& [r, w] : s.result.lambdas) {
      std::printf(" %s:%.3f", peer.id(r).c_str(), w);
    }
    std::printf("\n");
  }
  return 0;
}
