// Copyright 2026 The carpool-qoe Authors.
//
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

// Straight-line reference implementations used only by the tests. They
// follow the definitions literally (explicit predecessor sums, all n!
// permutations, all join orders) and share no code with the library beyond
// the passenger type.

#ifndef CARPOOL_TESTS_ORACLE_HPP
#define CARPOOL_TESTS_ORACLE_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "carpool/model.hpp"
#include "carpool/random.hpp"

namespace oracle {

using carpool::passenger;

/// Impatience of every rider when served in `order` (indices into riders).
inline std::vector<double> impatience(std::vector<passenger> const& riders,
                                      std::vector<std::size_t> const& order) {
  std::vector<double> out(riders.size(), 0.0);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    auto const& me = riders[order[pos]];
    double predecessor_theta = 0;
    for (std::size_t before = 0; before < pos; ++before) {
      predecessor_theta += riders[order[before]].theta();
    }
    out[order[pos]] = me.theta() * me.omega() + me.omega() * predecessor_theta;
  }
  return out;
}

inline double total(std::vector<passenger> const& riders,
                    std::vector<std::size_t> const& order) {
  auto const per = impatience(riders, order);
  return std::accumulate(per.begin(), per.end(), 0.0);
}

/// Minimum total impatience over all n! service orders.
inline double best_total(std::vector<passenger> const& riders) {
  if (riders.empty()) return 0;
  std::vector<std::size_t> order(riders.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    best = std::min(best, total(riders, order));
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

inline std::vector<passenger> subset(std::vector<passenger> const& riders,
                                     std::uint64_t mask) {
  std::vector<passenger> out;
  for (std::size_t i = 0; i < riders.size(); ++i) {
    if ((mask >> i) & 1U) out.push_back(riders[i]);
  }
  return out;
}

/// Shapley value as the average marginal contribution over all join orders
/// of `players` (indices), with v(T) = best_total(T).
inline std::map<std::size_t, double> shapley_by_orders(
    std::vector<passenger> const& riders, std::vector<std::size_t> players) {
  std::map<std::uint64_t, double> v;
  auto value = [&](std::uint64_t m) {
    auto it = v.find(m);
    if (it != v.end()) return it->second;
    double const x = best_total(subset(riders, m));
    v[m] = x;
    return x;
  };
  std::map<std::size_t, double> phi;
  std::sort(players.begin(), players.end());
  double orders = 0;
  do {
    std::uint64_t joined = 0;
    for (auto i : players) {
      double const before = value(joined);
      joined |= std::uint64_t{1} << i;
      phi[i] += value(joined) - before;
    }
    orders += 1;
  } while (std::next_permutation(players.begin(), players.end()));
  for (auto& [i, x] : phi) x /= orders;
  return phi;
}

/// Best coalition under the max-min objective with Shapley-proportional
/// compensation, by direct enumeration. Returns the chosen mask.
inline std::uint64_t best_coalition(std::vector<passenger> const& riders,
                                    carpool::pricing_params const& p) {
  std::uint64_t best_mask = 0;
  double best_obj = -1;
  std::vector<std::string> best_ids;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << riders.size()); ++m) {
    std::vector<std::size_t> players;
    for (std::size_t i = 0; i < riders.size(); ++i) {
      if ((m >> i) & 1U) players.push_back(i);
    }
    auto const phi = shapley_by_orders(riders, players);
    double fares = 0, phi_sum = 0;
    for (auto i : players) {
      fares += p.pr_l() * riders[i].trip().distance_km() +
               p.pr_t() * riders[i].trip().expected_time_min();
      phi_sum += phi.at(i);
    }
    double const pool = p.rho() * fares - p.epsilon() * fares;
    double lowest = std::numeric_limits<double>::infinity();
    for (auto i : players) lowest = std::min(lowest, pool * phi.at(i) / phi_sum);
    double const obj = lowest / best_total(subset(riders, m));

    std::vector<std::string> ids;
    for (auto i : players) ids.push_back(riders[i].id());
    std::sort(ids.begin(), ids.end());

    bool take = false;
    double const scale = std::max(1.0, std::max(std::abs(obj), std::abs(best_obj)));
    if (best_mask == 0 || obj > best_obj + 1e-12 * scale) {
      take = true;
    } else if (std::abs(obj - best_obj) <= 1e-12 * scale) {
      take = ids.size() > best_ids.size() ||
             (ids.size() == best_ids.size() && ids < best_ids);
    }
    if (take) {
      best_mask = m;
      best_obj = obj;
      best_ids = ids;
    }
  }
  return best_mask;
}

/// Riders with theta in [5, 30], omega in [0.1, 2], distance in [1, 20] and
/// time in [5, 40], ids p1..pn.
inline std::vector<passenger> random_riders(carpool::rng& gen, std::size_t n) {
  std::vector<passenger> out;
  for (std::size_t i = 1; i <= n; ++i) {
    double const l = gen.uniform(1, 20);
    double const t = gen.uniform(5, 40);
    double const theta = gen.uniform(5, 30);
    double const omega = gen.uniform(0.1, 2.0);
    out.emplace_back("p" + std::to_string(i), carpool::travel(l, t), theta, omega);
  }
  return out;
}

}  // namespace oracle

#endif  // CARPOOL_TESTS_ORACLE_HPP
