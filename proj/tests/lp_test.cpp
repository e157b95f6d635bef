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

#include "dea/lp.hpp"

#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

namespace dea {
namespace {

using testing::brute_force_lp;
using testing::check_kkt;

LpProblem make(Eigen::VectorXd c, Eigen::MatrixXd a, std::vector<RowSense> senses,
               Eigen::VectorXd b, std::vector<VarBound> bounds) {
  return LpProblem{std::move(c), std::move(a), std::move(senses), std::move(b),
                   std::move(bounds)};
}

// minimize theta s.t. lambda <= theta, lambda >= 1, lambda = 1.
TEST(SolveLp, SingleSelfReferencingDmu) {
  Eigen::MatrixXd a(3, 2);
  a << -1, 1,  //
      0, 1,    //
      0, 1;
  const LpProblem p = make(Eigen::Vector2d(1, 0), a,
                           {RowSense::kLessEqual, RowSense::kGreaterEqual, RowSense::kEqual},
                           Eigen::Vector3d(0, 1, 1), {VarBound::kFree, VarBound::kNonNegative});
  const LpSolution s = solve_lp(p, 1e-6);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective_value, 1.0, 1e-12);
  EXPECT_NEAR(s.primal[0], 1.0, 1e-12);
  EXPECT_NEAR(s.primal[1], 1.0, 1e-12);
  EXPECT_NEAR(p.rhs.dot(s.dual), 1.0, 1e-12);
  EXPECT_LE(check_kkt(p, s).worst(), 1e-9);
}

// minimize theta s.t. lA + 2 lB <= 2 theta, lA + lB >= 1, lA + lB = 1.
TEST(SolveLp, TwoColumnCaseMatchesVertexEnumeration) {
  Eigen::MatrixXd a(3, 3);
  a << -2, 1, 2,  //
      0, 1, 1,    //
      0, 1, 1;
  const LpProblem p =
      make(Eigen::Vector3d(1, 0, 0), a,
           {RowSense::kLessEqual, RowSense::kGreaterEqual, RowSense::kEqual},
           Eigen::Vector3d(0, 1, 1),
           {VarBound::kFree, VarBound::kNonNegative, VarBound::kNonNegative});
  Eigen::VectorXd vertex;
  const auto oracle = brute_force_lp(p, &vertex);
  ASSERT_TRUE(oracle.has_value());
  EXPECT_NEAR(*oracle, 0.5, 1e-12);

  const LpSolution s = solve_lp(p, 1e-6);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective_value, *oracle, 1e-12);
  EXPECT_NEAR(s.primal[1], 1.0, 1e-12);
  EXPECT_NEAR(s.primal[2], 0.0, 1e-12);
  EXPECT_LE(check_kkt(p, s).worst(), 1e-9);
}

TEST(SolveLp, DetectsInfeasible) {
  Eigen::MatrixXd a(2, 1);
  a << 1, 1;
  const LpProblem p = make(Eigen::VectorXd::Zero(1), a,
                           {RowSense::kLessEqual, RowSense::kGreaterEqual},
                           Eigen::Vector2d(-1, 0), {VarBound::kFree});
  EXPECT_EQ(solve_lp(p, 1e-6).status, LpStatus::kInfeasible);
}

TEST(SolveLp, DetectsUnbounded) {
  Eigen::MatrixXd a(1, 2);
  a << 1, -1;
  const LpProblem p = make(Eigen::Vector2d(-1, 0), a, {RowSense::kLessEqual},
                           Eigen::VectorXd::Constant(1, 1.0),
                           {VarBound::kNonNegative, VarBound::kNonNegative});
  EXPECT_EQ(solve_lp(p, 1e-6).status, LpStatus::kUnbounded);
}

TEST(SolveLp, FreeVariableMovesNegative) {
  // minimize x s.t. x >= -3, x free.
  Eigen::MatrixXd a(1, 1);
  a << 1;
  const LpProblem p = make(Eigen::VectorXd::Ones(1), a, {RowSense::kGreaterEqual},
                           Eigen::VectorXd::Constant(1, -3.0), {VarBound::kFree});
  const LpSolution s = solve_lp(p, 1e-6);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.primal[0], -3.0, 1e-12);
  EXPECT_NEAR(s.dual[0], 1.0, 1e-12);
}

TEST(SolveLp, RejectsInconsistentDimensions) {
  LpProblem p = make(Eigen::Vector2d(1, 0), Eigen::MatrixXd::Ones(1, 2), {RowSense::kEqual},
                     Eigen::VectorXd::Ones(1), {VarBound::kFree});
  EXPECT_THROW(solve_lp(p, 1e-6), DimensionMismatch);
}

TEST(SolveLp, RecoversConstructedOptima) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> size(1, 20);
  int optimal = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto lp = testing::constructed_lp(rng, size(rng), size(rng));
    const LpSolution s = solve_lp(lp.problem, 1e-6);
    ASSERT_EQ(s.status, LpStatus::kOptimal) << "trial " << trial;
    ++optimal;
    EXPECT_NEAR(s.objective_value, lp.optimum, 1e-8) << "trial " << trial;
    const auto kkt = check_kkt(lp.problem, s);
    EXPECT_LE(kkt.primal_infeasibility, 1e-8) << "trial " << trial;
    EXPECT_LE(kkt.dual_infeasibility, 1e-8) << "trial " << trial;
    EXPECT_LE(kkt.duality_gap, 1e-8) << "trial " << trial;
    EXPECT_LE(kkt.complementarity, 1e-8) << "trial " << trial;
  }
  EXPECT_EQ(optimal, 300);
}

TEST(SolveLp, AgreesWithVertexEnumerationOnSmallRandomLps) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> size(1, 5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto lp = testing::constructed_lp(rng, size(rng), size(rng));
    const auto oracle = brute_force_lp(lp.problem);
    const LpSolution s = solve_lp(lp.problem, 1e-6);
    ASSERT_EQ(s.status, LpStatus::kOptimal);
    // Free variables can leave the LP without vertices; skip those.
    if (oracle) {
      EXPECT_NEAR(s.objective_value, *oracle, 1e-8) << "trial " << trial;
    }
  }
}

// Highly degenerate: many identical-ratio columns referencing one point.
TEST(SolveLp, TerminatesOnDegenerateSelfReferencingFamily) {
  const int cols = 40;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, cols + 1);
  a(0, 0) = -1.0;  // theta
  for (int c = 1; c <= cols; ++c) {
    a(0, c) = 1.0;   // identical inputs
    a(1, c) = 1.0;   // identical outputs
    a(2, c) = 1.0;
  }
  Eigen::VectorXd obj = Eigen::VectorXd::Zero(cols + 1);
  obj[0] = 1.0;
  std::vector<VarBound> bounds(static_cast<std::size_t>(cols + 1), VarBound::kNonNegative);
  bounds[0] = VarBound::kFree;
  const LpProblem p =
      make(obj, a, {RowSense::kLessEqual, RowSense::kGreaterEqual, RowSense::kEqual},
           Eigen::Vector3d(0, 1, 1), bounds);
  LpOptions options = LpOptions::for_tolerance(1e-6);
  options.degenerate_limit = 1;  // exercise the Bland path
  const LpSolution s = solve_lp(p, options);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective_value, 1.0, 1e-12);
  EXPECT_LE(check_kkt(p, s).worst(), 1e-9);
}

TEST(SolveLp, BlandModeStillRecoversOptima) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> size(1, 12);
  LpOptions options = LpOptions::for_tolerance(1e-6);
  options.degenerate_limit = 1;
  for (int trial = 0; trial < 100; ++trial) {
    const auto lp = testing::constructed_lp(rng, size(rng), size(rng));
    const LpSolution s = solve_lp(lp.problem, options);
    ASSERT_EQ(s.status, LpStatus::kOptimal);
    EXPECT_NEAR(s.objective_value, lp.optimum, 1e-8);
  }
}

TEST(SolveLp, WarmStartAfterAppendingColumns) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(1.0, 10.0);
  // theta + 12 lambdas over a 2-input, 1-output peer; evaluated point is 0.
  const int total = 12;
  Eigen::MatrixXd data(3, total);
  for (int c = 0; c < total; ++c)
    for (int i = 0; i < 3; ++i) data(i, c) = u(rng);
  auto build = [&](int count) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, count + 1);
    a(0, 0) = -data(0, 0);
    a(1, 0) = -data(1, 0);
    for (int c = 0; c < count; ++c) {
      a.block(0, c + 1, 3, 1) = data.col(c);
      a(3, c + 1) = 1.0;
    }
    Eigen::VectorXd obj = Eigen::VectorXd::Zero(count + 1);
    obj[0] = 1.0;
    std::vector<VarBound> bounds(static_cast<std::size_t>(count + 1), VarBound::kNonNegative);
    bounds[0] = VarBound::kFree;
    return make(obj, a,
                {RowSense::kLessEqual, RowSense::kLessEqual, RowSense::kGreaterEqual,
                 RowSense::kEqual},
                Eigen::Vector4d(0, 0, data(2, 0), 1), bounds);
  };
  const LpProblem small = build(6);
  const LpSolution first = solve_lp(small, 1e-6);
  ASSERT_TRUE(first.optimal());
  ASSERT_EQ(first.basis.size(), 4u);

  const LpProblem big = build(total);
  Basis warm;
  for (Eigen::Index e : first.basis) warm.push_back(e < 7 ? e : e + (total - 6));
  const LpSolution warmed = solve_lp(big, 1e-6, &warm);
  const LpSolution cold = solve_lp(big, 1e-6);
  ASSERT_TRUE(warmed.optimal());
  EXPECT_TRUE(warmed.warm_started);
  EXPECT_NEAR(warmed.objective_value, cold.objective_value, 1e-12);
  EXPECT_LE(check_kkt(big, warmed).worst(), 1e-9);

  // An unusable basis falls back to a cold start.
  Basis junk(4, 0);
  const LpSolution fallback = solve_lp(big, 1e-6, &junk);
  ASSERT_TRUE(fallback.optimal());
  EXPECT_FALSE(fallback.warm_started);
  EXPECT_NEAR(fallback.objective_value, cold.objective_value, 1e-12);
}

TEST(SolveLp, DualSignsFollowRowSenses) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> size(2, 10);
  for (int trial = 0; trial < 100; ++trial) {
    const auto lp = testing::constructed_lp(rng, size(rng), size(rng));
    const LpSolution s = solve_lp(lp.problem, 1e-6);
    ASSERT_TRUE(s.optimal());
    for (Eigen::Index i = 0; i < lp.problem.num_rows(); ++i) {
      const RowSense sense = lp.problem.row_senses[static_cast<std::size_t>(i)];
      if (sense == RowSense::kLessEqual) {
        EXPECT_LE(s.dual[i], 0.0);
      } else if (sense == RowSense::kGreaterEqual) {
        EXPECT_GE(s.dual[i], 0.0);
      }
      EXPECT_GE(s.row_slacks[i], 0.0);
    }
  }
}

}  // namespace
}  // namespace dea
