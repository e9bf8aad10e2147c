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

#ifndef CARPOOL_IMPATIENCE_HPP
#define CARPOOL_IMPATIENCE_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "carpool/error.hpp"
#include "carpool/model.hpp"

namespace carpool {

/// Largest coalition the permutation search accepts (9! = 362880 orders).
inline constexpr std::size_t exhaustive_sequence_limit = 9;

/// Order in which the driver serves the members of a coalition.
class service_sequence {
public:
  service_sequence() = default;

  explicit service_sequence(std::vector<std::string> order)
      : order_(std::move(order)) {
    std::unordered_set<std::string> seen;
    for (auto const& id : order_) {
      if (!seen.insert(id).second) {
        throw invariant_error("sequence: duplicate passenger id " + id);
      }
    }
  }

  std::vector<std::string> const& order() const noexcept { return order_; }
  std::size_t size() const noexcept { return order_.size(); }

  /// Position of `id` in the order; throws lookup_error when absent.
  std::size_t position(std::string const& id) const {
    auto it = std::find(order_.begin(), order_.end(), id);
    if (it == order_.end()) {
      throw lookup_error("sequence: unknown passenger id " + id);
    }
    return static_cast<std::size_t>(it - order_.begin());
  }

  friend bool operator==(service_sequence const&,
                         service_sequence const&) = default;

private:
  std::vector<std::string> order_;
};

struct impatience_breakdown {
  std::map<std::string, money> per_passenger;
  money total = 0;
};

/// Passengers served strictly before `id`.
inline std::set<std::string> predecessors(service_sequence const& seq,
                                          std::string const& id) {
  auto const pos = seq.position(id);
  return {seq.order().begin(),
          seq.order().begin() + static_cast<std::ptrdiff_t>(pos)};
}

namespace detail {

/// Maps each position of `seq` onto the index of that passenger in
/// `coalition`. Throws unless `seq` is a permutation of the coalition.
inline std::vector<std::size_t> resolve(std::span<passenger const> coalition,
                                        service_sequence const& seq) {
  if (seq.size() != coalition.size()) {
    throw lookup_error("sequence has " + std::to_string(seq.size()) +
                       " members but coalition has " +
                       std::to_string(coalition.size()));
  }
  std::vector<std::size_t> idx;
  idx.reserve(seq.size());
  for (auto const& id : seq.order()) {
    auto it = std::find_if(coalition.begin(), coalition.end(),
                           [&](passenger const& p) { return p.id() == id; });
    if (it == coalition.end()) {
      throw lookup_error("sequence member " + id + " is not in the coalition");
    }
    idx.push_back(static_cast<std::size_t>(it - coalition.begin()));
  }
  return idx;
}

/// Indices of `coalition` ordered by passenger id.
inline std::vector<std::size_t> id_order(std::span<passenger const> coalition) {
  std::vector<std::size_t> idx(coalition.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return coalition[a].id() < coalition[b].id();
  });
  return idx;
}

inline service_sequence to_sequence(std::span<passenger const> coalition,
                                    std::span<std::size_t const> order) {
  std::vector<std::string> ids;
  ids.reserve(order.size());
  for (auto i : order) ids.push_back(coalition[i].id());
  return service_sequence(std::move(ids));
}

inline bool improves(money candidate, money best) noexcept {
  return candidate < best - money_tolerance * std::max(1.0, std::abs(best));
}

}  // namespace detail

/// Total impatience of serving `coalition` in the index order `order`.
inline money sequence_value(std::span<passenger const> coalition,
                            std::span<std::size_t const> order) noexcept {
  money total = 0;
  double served_theta = 0;
  for (auto i : order) {
    auto const& p = coalition[i];
    total += p.theta() * p.omega() + p.omega() * served_theta;
    served_theta += p.theta();
  }
  return total;
}

/// Impatience suffered by passenger `id`: its own sojourn cost plus the
/// delay cost of every passenger served ahead of it.
inline money impatience_of(std::string const& id,
                           std::span<passenger const> coalition,
                           service_sequence const& seq) {
  auto const order = detail::resolve(coalition, seq);
  auto const pos = seq.position(id);
  auto const& p = coalition[order[pos]];
  double ahead = 0;
  for (std::size_t k = 0; k < pos; ++k) ahead += coalition[order[k]].theta();
  return p.theta() * p.omega() + p.omega() * ahead;
}

inline impatience_breakdown total_impatience(
    std::span<passenger const> coalition, service_sequence const& seq) {
  auto const order = detail::resolve(coalition, seq);
  impatience_breakdown out;
  double ahead = 0;
  for (auto i : order) {
    auto const& p = coalition[i];
    money const v = p.theta() * p.omega() + p.omega() * ahead;
    out.per_passenger.emplace(p.id(), v);
    out.total += v;
    ahead += p.theta();
  }
  return out;
}

/// Index order sorted by ascending theta/omega, ties by ascending id.
/// Ratios are compared by cross-multiplication.
inline std::vector<std::size_t> smith_order(
    std::span<passenger const> coalition) {
  auto idx = detail::id_order(coalition);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    auto const& pa = coalition[a];
    auto const& pb = coalition[b];
    return pa.theta() * pb.omega() < pb.theta() * pa.omega();
  });
  return idx;
}

/// Impatience-minimizing order by the ratio rule. Optimal because swapping
/// adjacent riders i, j changes the total by omega_i*theta_j - omega_j*theta_i.
inline service_sequence optimal_sequence_smith(
    std::span<passenger const> coalition) {
  if (coalition.empty()) {
    throw invariant_error("optimal_sequence_smith: empty coalition");
  }
  auto const idx = smith_order(coalition);
  return detail::to_sequence(coalition, idx);
}

/// Tries every service order. Among optima, the lexicographically smallest
/// id order wins.
inline std::pair<service_sequence, money> optimal_sequence_exhaustive(
    std::span<passenger const> coalition,
    std::size_t limit = exhaustive_sequence_limit) {
  if (coalition.empty()) {
    throw invariant_error("optimal_sequence_exhaustive: empty coalition");
  }
  if (coalition.size() > limit) {
    throw size_error("optimal_sequence_exhaustive: " +
                     std::to_string(coalition.size()) +
                     " passengers exceed the exhaustive limit of " +
                     std::to_string(limit) + "; use optimal_sequence_smith");
  }
  auto perm = detail::id_order(coalition);
  auto best = perm;
  money best_value = sequence_value(coalition, perm);
  while (std::next_permutation(perm.begin(), perm.end())) {
    money const v = sequence_value(coalition, perm);
    if (detail::improves(v, best_value)) {
      best_value = v;
      best = perm;
    }
  }
  return {detail::to_sequence(coalition, best), best_value};
}

/// Change in total impatience when the riders at positions `k` and `k + 1`
/// trade places.
inline money adjacent_swap_delta(std::span<passenger const> coalition,
                                 service_sequence const& seq, std::size_t k) {
  auto const order = detail::resolve(coalition, seq);
  if (k + 1 >= order.size()) {
    throw lookup_error("adjacent_swap_delta: position out of range");
  }
  auto const& earlier = coalition[order[k]];
  auto const& later = coalition[order[k + 1]];
  return earlier.omega() * later.theta() - later.omega() * earlier.theta();
}

/// True when no adjacent swap lowers the total by more than the tolerance.
inline bool is_exchange_optimal(std::span<passenger const> coalition,
                                service_sequence const& seq) {
  auto const order = detail::resolve(coalition, seq);
  money const total = sequence_value(coalition, order);
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    auto const& a = coalition[order[k]];
    auto const& b = coalition[order[k + 1]];
    money const delta = a.omega() * b.theta() - b.omega() * a.theta();
    if (detail::improves(total + delta, total)) return false;
  }
  return true;
}

}  // namespace carpool

#endif  // CARPOOL_IMPATIENCE_HPP
