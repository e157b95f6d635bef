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

// Synthetic peers with a chosen share of efficient DMUs.
//
// Frontier DMUs sit on the boundary of the convex set
//     { (x, y) : |y|_2 <= g(x) },  g(x) = sum_i a_i sqrt(x_i),
// with inputs uniform in [1, 10]. g is concave and increasing, so every such
// point is efficient. Inefficient DMUs are convex combinations of a few
// frontier points whose inputs are then inflated by a factor in (1, 3], which
// bounds their efficiency by the inverse factor.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dea/full_solver.hpp"
#include "dea/model.hpp"
#include "dea/rng.hpp"

namespace dea {

inline Dataset generate(int m, int n, std::size_t count, double target_density,
                        std::uint64_t seed) {
  if (m < 1 || n < 1) throw std::invalid_argument("generate: m, n must be >= 1");
  if (count < 1) throw std::invalid_argument("generate: count must be >= 1");
  if (!(target_density > 0.0) || target_density > 1.0) {
    throw std::invalid_argument("generate: density must be in (0, 1]");
  }

  Rng rng(seed);
  std::vector<double> weight(static_cast<std::size_t>(m));
  for (auto& a : weight) a = rng.uniform(0.5, 1.5);

  const auto frontier_count = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(target_density * static_cast<double>(count))),
      1, count);

  RowMatrix raw(static_cast<Eigen::Index>(count), m + n);
  for (std::size_t r = 0; r < frontier_count; ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    double level = 0.0;
    for (int i = 0; i < m; ++i) {
      const double x = rng.uniform(1.0, 10.0);
      raw(row, i) = x;
      level += weight[static_cast<std::size_t>(i)] * std::sqrt(x);
    }
    double norm = 0.0;
    for (int j = 0; j < n; ++j) {
      const double dir = rng.uniform(0.2, 1.0);
      raw(row, m + j) = dir;
      norm += dir * dir;
    }
    norm = std::sqrt(norm);
    for (int j = 0; j < n; ++j) raw(row, m + j) *= level / norm;
  }

  const auto mix_max = std::min<std::size_t>(static_cast<std::size_t>(m + n), frontier_count);
  for (std::size_t r = frontier_count; r < count; ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    const std::size_t parts = 1 + static_cast<std::size_t>(rng.below(mix_max));
    std::vector<double> mix(parts);
    double total = 0.0;
    for (auto& t : mix) {
      t = rng.uniform(0.05, 1.0);
      total += t;
    }
    raw.row(row).setZero();
    for (std::size_t p = 0; p < parts; ++p) {
      const auto source = static_cast<Eigen::Index>(rng.below(frontier_count));
      raw.row(row) += (mix[p] / total) * raw.row(source);
    }
    // 1 + 2(1 - U) lies in (1, 3].
    const double inflate = 1.0 + 2.0 * (1.0 - rng.uniform());
    raw.row(row).head(m) *= inflate;
  }

  std::vector<std::size_t> order(count);
  for (std::size_t r = 0; r < count; ++r) order[r] = r;
  rng.shuffle(order);
  RowMatrix shuffled(raw.rows(), raw.cols());
  for (std::size_t r = 0; r < count; ++r) {
    shuffled.row(static_cast<Eigen::Index>(r)) =
        raw.row(static_cast<Eigen::Index>(order[r]));
  }

  const std::size_t width = std::to_string(count).size();
  std::vector<std::string> ids;
  ids.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    std::string digits = std::to_string(r + 1);
    ids.push_back("D" + std::string(width - digits.size(), '0') + digits);
  }
  return validate_dataset(std::move(ids), shuffled, m, n);
}

/// Share of DMUs whose full-LP efficiency is at least 1 - eff_tol.
inline double measure_density(const Dataset& d, double lp_tol,
                              double eff_tol = 1e-5, int threads = 1) {
  const std::vector<EfficiencyResult> results = solve_full_batch(d, lp_tol, threads);
  std::size_t efficient = 0;
  for (const auto& r : results) {
    if (!r.ok()) {
      throw std::runtime_error("measure_density: DMU '" + r.dmu + "': " + r.message);
    }
    if (r.theta >= 1.0 - eff_tol) ++efficient;
  }
  return static_cast<double>(efficient) / static_cast<double>(d.size());
}

}  // namespace dea
