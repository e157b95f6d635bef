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


#include "dea/full_solver.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "test_support.hpp"

namespace dea {
namespace {

using testing::brute_force_efficiency;
using testing::four_dmu_peer;
using testing::uniform_peer;

TEST(FullSolver, FourDmuPeer) {
  const Dataset d = four_dmu_peer();
  const double expected[] = {1.0, 0.5, 1.0, 0.5};
  for (std::size_t k = 0; k < 4; ++k) {
    const EfficiencyResult r = solve_full(d, k, 1e-6);
    ASSERT_TRUE(r.ok());
    EXPECT_NEAR(r.theta, expected[k], 1e-9);
    EXPECT_EQ(r.iterations, 1);
    EXPECT_EQ(r.max_lp_columns, 4u);
  }
  EXPECT_NEAR(solve_full(d, 1, 1e-6).lambdas.at(0), 1.0, 1e-9);
  EXPECT_NEAR(solve_full(d, 3, 1e-6).lambdas.at(2), 1.0, 1e-9);
  EXPECT_THROW(solve_full(d, 9, 1e-6), std::out_of_range);
}

TEST(FullSolver, MatchesVertexEnumeration) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const Dataset d = uniform_peer(1 + seed % 2, 1 + (seed / 3) % 2, 6, 100 + seed);
    const auto batch = solve_full_batch(d, 1e-6);
    for (std::size_t k = 0; k < d.size(); ++k) {
      EXPECT_NEAR(batch[k].theta, brute_force_efficiency(d, k), 1e-8) << seed << " " << k;
    }
  }
}

TEST(FullSolver, DualIsACertificate) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Dataset d = uniform_peer(2, 2, 80, seed);
    FullSolver solver(d, 1e-6);
    for (std::size_t k = 0; k < d.size(); ++k) {
      const EfficiencyResult r = solver.solve(k);
      ASSERT_TRUE(r.ok());
      EXPECT_NEAR(r.dual.u.dot(d.input(k).transpose()), 1.0, 1e-7);
      // Strong duality: v.y_k + w equals theta.
      EXPECT_NEAR(r.dual.v.dot(d.output(k).transpose()) + r.dual.w, r.theta, 1e-7);
      double best = -1e300;
      for (std::size_t t = 0; t < d.size(); ++t) {
        const double value = margin(r.dual, d, t);
        EXPECT_LE(value, 1e-6);
        best = std::max(best, value);
      }
      // Some DMU supports the hyperplane.
      EXPECT_GE(best, -1e-6);
      for (const auto& [ref, w] : r.lambdas) EXPECT_NEAR(margin(r.dual, d, ref), 0.0, 1e-6);
    }
  }
}

TEST(FullSolver, RowOrderDoesNotMatter) {
  const Dataset d = uniform_peer(3, 2, 90, 42);
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), std::mt19937_64(1));
  RowMatrix raw(d.raw().rows(), d.raw().cols());
  std::vector<std::string> ids;
  for (std::size_t r = 0; r < order.size(); ++r) {
    raw.row(static_cast<Eigen::Index>(r)) = d.raw().row(static_cast<Eigen::Index>(order[r]));
    ids.push_back(d.id(order[r]));
  }
  const Dataset permuted = validate_dataset(ids, raw, 3, 2);
  const auto a = solve_full_batch(d, 1e-6);
  const auto b = solve_full_batch(permuted, 1e-6);
  for (std::size_t r = 0; r < order.size(); ++r) {
    EXPECT_NEAR(b[r].theta, a[order[r]].theta, 1e-9);
  }
}

TEST(FullSolver, BatchIsThreadIndependent) {
  const Dataset d = uniform_peer(2, 3, 120, 3);
  const auto serial = solve_full_batch(d, 1e-6, 1);
  const auto parallel = solve_full_batch(d, 1e-6, 4);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t k = 0; k < d.size(); ++k) {
    EXPECT_EQ(parallel[k].index, k);
    EXPECT_NEAR(serial[k].theta, parallel[k].theta, 1e-9);
  }
}

}  // namespace
}  // namespace dea
