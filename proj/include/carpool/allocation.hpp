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

#ifndef CARPOOL_ALLOCATION_HPP
#define CARPOOL_ALLOCATION_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "carpool/coalition.hpp"
#include "carpool/error.hpp"
#include "carpool/impatience.hpp"
#include "carpool/model.hpp"

namespace carpool {

/// How the compensation pool is divided among coalition members.
enum class split_rule {
  shapley,  ///< proportional to Shapley values of the impatience game
  equal,    ///< the same amount to every member
};

struct allocation {
  money x_d = 0;
  /// Compensation per passenger id.
  std::map<std::string, money> x;
  service_sequence sequence;
  /// Member ids in the order of the coalition passed to the allocator.
  std::vector<std::string> coalition;
  /// min_i x_i / I(S, sigma*).
  double objective = 0;
  split_rule rule = split_rule::shapley;
  /// Zero-compensation reference allocation; C5 does not apply.
  bool baseline = false;
};

inline money fare_sum(std::span<passenger const> coalition,
                      pricing_params const& p) {
  money s = 0;
  for (auto const& q : coalition) s += base_fare(q.trip(), p);
  return s;
}

/// The driver's share: epsilon times every base fare served.
inline money driver_revenue(std::span<passenger const> coalition,
                            pricing_params const& p) {
  return p.epsilon() * fare_sum(coalition, p);
}

/// Everything the passengers pay at the surge tariff.
inline money total_collected(std::span<passenger const> coalition,
                             pricing_params const& p) {
  return p.rho() * fare_sum(coalition, p);
}

/// min_i x_i divided by the coalition's minimal total impatience.
inline double evaluate_objective(std::span<passenger const> coalition,
                                 allocation const& a) {
  if (coalition.empty()) throw invariant_error("evaluate_objective: empty coalition");
  money const best = sequence_value(coalition, smith_order(coalition));
  money lowest = std::numeric_limits<money>::infinity();
  for (auto const& q : coalition) {
    auto it = a.x.find(q.id());
    if (it == a.x.end()) {
      throw lookup_error("evaluate_objective: no compensation for " + q.id());
    }
    lowest = std::min(lowest, it->second);
  }
  return lowest / best;
}

/// Divides the pool (rho - epsilon) * sum F among the coalition by `rule`
/// and serves the coalition in its impatience-minimizing order.
inline allocation pca_allocate(std::span<passenger const> coalition,
                               pricing_params const& p,
                               shapley_result const& shapley,
                               split_rule rule = split_rule::shapley) {
  if (coalition.empty()) throw invariant_error("pca_allocate: empty coalition");
  if (!(p.rho() > p.epsilon())) {
    throw infeasible_error(
        "pca_allocate: rho == epsilon leaves an empty compensation pool (C5)");
  }

  std::set<std::string> members;
  for (auto const& q : coalition) members.insert(q.id());
  std::set<std::string> scored(shapley.ids.begin(), shapley.ids.end());
  if (members != scored || shapley.ids.size() != coalition.size()) {
    throw lookup_error(
        "pca_allocate: Shapley players do not match the coalition");
  }

  allocation a;
  a.rule = rule;
  a.x_d = driver_revenue(coalition, p);
  money const pool = total_collected(coalition, p) - a.x_d;

  money const phi_sum = shapley.sum();
  for (auto const& q : coalition) {
    a.coalition.push_back(q.id());
    if (rule == split_rule::equal) {
      a.x[q.id()] = pool / double(coalition.size());
      continue;
    }
    money const phi = shapley.phi_of(q.id());
    if (!(phi > 0)) {
      throw infeasible_error("pca_allocate: Shapley value of " + q.id() +
                             " is not positive");
    }
    a.x[q.id()] = pool * phi / phi_sum;
  }
  a.sequence = optimal_sequence_smith(coalition);
  a.objective = evaluate_objective(coalition, a);
  return a;
}

/// Reference allocation standing in for the comparison pricing scheme: every
/// passenger pays the surge fare and the driver keeps all of it.
inline allocation baseline_allocate(std::span<passenger const> coalition,
                                    pricing_params const& p) {
  if (coalition.empty()) {
    throw invariant_error("baseline_allocate: empty coalition");
  }
  allocation a;
  a.baseline = true;
  a.x_d = total_collected(coalition, p);
  for (auto const& q : coalition) {
    a.coalition.push_back(q.id());
    a.x[q.id()] = 0;
  }
  a.sequence = optimal_sequence_smith(coalition);
  a.objective = evaluate_objective(coalition, a);
  return a;
}

struct coalition_selection {
  std::vector<passenger> coalition;
  allocation result;
  /// Too many passengers to enumerate; the grand coalition was used.
  bool fallback = false;
};

/// Maximizes the max-min objective over every nonempty subset of
/// `passengers`, each allocated by pca_allocate with exact Shapley values.
/// Ties go to the larger coalition, then to the lexicographically smaller
/// sorted member list.
inline coalition_selection select_coalition(
    std::span<passenger const> passengers, pricing_params const& p,
    split_rule rule = split_rule::shapley,
    std::size_t limit = exact_shapley_limit) {
  if (passengers.empty()) {
    throw invariant_error("select_coalition: no passengers");
  }
  impatience_game game({passengers.begin(), passengers.end()});

  auto subset_of = [&](coalition_mask m) {
    std::vector<passenger> out;
    for (auto i : members_of(m)) out.push_back(passengers[i]);
    return out;
  };
  auto sorted_ids = [](std::vector<passenger> const& s) {
    std::vector<std::string> ids;
    for (auto const& q : s) ids.push_back(q.id());
    std::sort(ids.begin(), ids.end());
    return ids;
  };

  if (passengers.size() > limit) {
    auto grand = subset_of(full_mask(passengers.size()));
    auto const phi = shapley_montecarlo(game, 10000, 0);
    auto a = pca_allocate(grand, p, phi, rule);
    return {std::move(grand), std::move(a), true};
  }

  std::optional<coalition_selection> best;
  std::vector<std::string> best_ids;
  for (coalition_mask m = 1; m <= full_mask(passengers.size()); ++m) {
    auto subset = subset_of(m);
    auto a = pca_allocate(subset, p, shapley_exact(game, m, limit), rule);
    auto ids = sorted_ids(subset);
    bool take = !best;
    if (!take) {
      double const cur = best->result.objective;
      if (!detail::close(a.objective, cur, 1e-12)) {
        take = a.objective > cur;
      } else if (subset.size() != best->coalition.size()) {
        take = subset.size() > best->coalition.size();
      } else {
        take = ids < best_ids;
      }
    }
    if (take) {
      best = coalition_selection{std::move(subset), std::move(a), false};
      best_ids = std::move(ids);
    }
  }
  return std::move(*best);
}

struct constraint_entry {
  std::string_view name;
  bool passed = false;
  bool skipped = false;
  /// Signed margin; nonnegative means satisfied (C1 and C6 report the
  /// residual instead, where zero is ideal).
  double slack = 0;
};

struct constraint_audit {
  std::array<constraint_entry, 6> entries{};

  constraint_entry const& operator[](std::size_t k) const { return entries.at(k); }
  constraint_entry const& c(int k) const { return entries.at(std::size_t(k - 1)); }

  bool all_passed() const noexcept {
    return std::all_of(entries.begin(), entries.end(),
                       [](auto const& e) { return e.passed; });
  }
  std::size_t passed_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(
        entries.begin(), entries.end(), [](auto const& e) { return e.passed; }));
  }
};

/// Evaluates the six constraints of the allocation program:
///   C1 budget balance         |x_d + sum x_i - sum G|  <= 1e-9
///   C2 driver paid            x_d > 0
///   C3 driver floor           x_d - beta * sum F >= 0
///   C4 coefficient ordering   min(alpha - rho, rho - beta, beta) >= 0
///   C5 compensations          min x_i > 0 (skipped for baselines)
///   C6 sequence optimal       I(S, sigma) - I(S, sigma*) <= 1e-9, by
///                             enumeration up to 9 riders, beyond that by
///                             checking that no adjacent swap helps
inline constraint_audit audit_constraints(std::span<passenger const> coalition,
                                          allocation const& a,
                                          pricing_params const& p) {
  constraint_audit audit;
  auto& e = audit.entries;
  e[0].name = "C1";
  e[1].name = "C2";
  e[2].name = "C3";
  e[3].name = "C4";
  e[4].name = "C5";
  e[5].name = "C6";

  money paid_out = a.x_d;
  money lowest = std::numeric_limits<money>::infinity();
  for (auto const& q : coalition) {
    auto it = a.x.find(q.id());
    money const xi = it == a.x.end() ? 0 : it->second;
    paid_out += xi;
    lowest = std::min(lowest, xi);
  }
  e[0].slack = std::abs(paid_out - total_collected(coalition, p));
  e[0].passed = e[0].slack <= money_tolerance;

  e[1].slack = a.x_d;
  e[1].passed = a.x_d > 0;

  e[2].slack = a.x_d - p.beta() * fare_sum(coalition, p);
  e[2].passed = e[2].slack >= -money_tolerance;

  e[3].slack = std::min({p.alpha() - p.rho(), p.rho() - p.beta(), p.beta()});
  e[3].passed = p.alpha() >= p.rho() && p.rho() >= p.beta() && p.beta() > 0;

  e[4].slack = coalition.empty() ? 0 : lowest;
  if (a.baseline) {
    e[4].skipped = true;
    e[4].passed = true;
  } else {
    e[4].passed = !coalition.empty() && lowest > 0;
  }

  try {
    auto const order = detail::resolve(coalition, a.sequence);
    money const used = sequence_value(coalition, order);
    if (coalition.size() <= exhaustive_sequence_limit) {
      e[5].slack = used - optimal_sequence_exhaustive(coalition).second;
      e[5].passed = e[5].slack <= money_tolerance;
    } else {
      money worst = 0;
      for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        auto const& x = coalition[order[k]];
        auto const& y = coalition[order[k + 1]];
        worst = std::max(worst, y.omega() * x.theta() - x.omega() * y.theta());
      }
      e[5].slack = worst;
      e[5].passed = worst <= money_tolerance;
    }
  } catch (lookup_error const&) {
    e[5].slack = std::numeric_limits<double>::infinity();
    e[5].passed = false;
  }
  return audit;
}

struct rationality_entry {
  std::string id;
  /// alpha * F - (G - x_i) for passengers, x_d - beta * sum F for the driver.
  money slack = 0;
  bool passed = false;
};

struct rationality_report {
  std::vector<rationality_entry> passengers;
  rationality_entry driver;

  bool all_passed() const noexcept {
    return driver.passed &&
           std::all_of(passengers.begin(), passengers.end(),
                       [](auto const& r) { return r.passed; });
  }
};

/// Nobody is worse off inside the coalition: each passenger's net payment
/// stays within their willingness to pay and the driver earns at least the
/// least expected revenue.
inline rationality_report individual_rationality_check(
    std::span<passenger const> coalition, allocation const& a,
    pricing_params const& p, std::string const& driver_id = "d") {
  rationality_report rep;
  for (auto const& q : coalition) {
    money const f = base_fare(q.trip(), p);
    auto it = a.x.find(q.id());
    money const xi = it == a.x.end() ? 0 : it->second;
    money const slack = p.alpha() * f - (p.rho() * f - xi);
    rep.passengers.push_back({q.id(), slack, slack >= -money_tolerance});
  }
  money const slack = a.x_d - p.beta() * fare_sum(coalition, p);
  rep.driver = {driver_id, slack, slack >= -money_tolerance};
  return rep;
}

}  // namespace carpool

#endif  // CARPOOL_ALLOCATION_HPP
