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

#ifndef CARPOOL_COALITION_HPP
#define CARPOOL_COALITION_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "carpool/error.hpp"
#include "carpool/impatience.hpp"
#include "carpool/model.hpp"
#include "carpool/random.hpp"

namespace carpool {

/// Bit i set means player i belongs to the coalition.
using coalition_mask = std::uint64_t;

inline constexpr std::size_t max_players = 64;

/// Largest player set the exact Shapley enumeration accepts.
inline constexpr std::size_t exact_shapley_limit = 12;

inline constexpr coalition_mask full_mask(std::size_t n) noexcept {
  return n >= 64 ? ~coalition_mask{0} : (coalition_mask{1} << n) - 1;
}

inline constexpr bool contains(coalition_mask m, std::size_t i) noexcept {
  return (m >> i) & 1U;
}

inline std::vector<std::size_t> members_of(coalition_mask m) {
  std::vector<std::size_t> out;
  out.reserve(static_cast<std::size_t>(std::popcount(m)));
  for (std::size_t i = 0; m != 0; ++i, m >>= 1) {
    if (m & 1U) out.push_back(i);
  }
  return out;
}

/// Anything with a player count and a characteristic value per coalition.
template <class G>
concept cooperative_game = requires(G const& g, coalition_mask m) {
  { g.size() } -> std::convertible_to<std::size_t>;
  { g.value(m) } -> std::convertible_to<money>;
};

template <class G>
concept named_game = cooperative_game<G> && requires(G const& g, std::size_t i) {
  { g.player_id(i) } -> std::convertible_to<std::string>;
};

/// Game given by an explicit table of 2^n values; `values[0]` is forced to 0.
class tabular_game {
public:
  tabular_game(std::size_t n, std::vector<money> values)
      : n_(n), values_(std::move(values)) {
    if (n > 20) throw size_error("tabular_game: at most 20 players");
    if (values_.size() != (std::size_t{1} << n)) {
      throw invariant_error("tabular_game: expected 2^n values");
    }
    values_[0] = 0;
  }

  std::size_t size() const noexcept { return n_; }
  money value(coalition_mask m) const { return values_.at(m); }

  friend tabular_game operator+(tabular_game const& a, tabular_game const& b) {
    if (a.n_ != b.n_) throw invariant_error("tabular_game: size mismatch");
    std::vector<money> sum(a.values_.size());
    for (std::size_t k = 0; k < sum.size(); ++k) {
      sum[k] = a.values_[k] + b.values_[k];
    }
    return {a.n_, std::move(sum)};
  }

private:
  std::size_t n_;
  std::vector<money> values_;
};

/// Game over named players whose value comes from a user function,
/// memoized per coalition. The memo is not synchronized: confine an
/// instance to one thread.
class function_game {
public:
  using value_fn = std::function<money(coalition_mask)>;

  function_game(std::vector<std::string> ids, value_fn fn)
      : ids_(std::move(ids)), fn_(std::move(fn)) {
    if (ids_.size() > max_players) {
      throw size_error("function_game: more than 64 players");
    }
  }

  std::size_t size() const noexcept { return ids_.size(); }
  std::string const& player_id(std::size_t i) const { return ids_.at(i); }

  money value(coalition_mask m) const {
    if (m == 0) return 0;
    if (auto it = memo_.find(m); it != memo_.end()) return it->second;
    money const v = fn_(m);
    memo_.emplace(m, v);
    return v;
  }

  std::size_t cached() const noexcept { return memo_.size(); }

private:
  std::vector<std::string> ids_;
  value_fn fn_;
  mutable std::unordered_map<coalition_mask, money> memo_;
};

/// The passengers' cooperative game: a coalition is worth its minimal total
/// impatience, v(T) = I(T, sigma*(T)), with v(empty) = 0.
class impatience_game {
public:
  explicit impatience_game(std::vector<passenger> players)
      : players_(std::move(players)) {
    if (players_.size() > max_players) {
      throw size_error("impatience_game: more than 64 players");
    }
  }

  std::size_t size() const noexcept { return players_.size(); }
  std::string const& player_id(std::size_t i) const {
    return players_.at(i).id();
  }
  std::vector<passenger> const& players() const noexcept { return players_; }

  money value(coalition_mask m) const {
    if (m == 0) return 0;
    if (auto it = memo_.find(m); it != memo_.end()) return it->second;
    std::vector<passenger> subset;
    for (auto i : members_of(m)) subset.push_back(players_.at(i));
    auto const order = smith_order(subset);
    money const v = sequence_value(subset, order);
    memo_.emplace(m, v);
    return v;
  }

  /// Mask of the named passengers; throws lookup_error on unknown ids.
  coalition_mask mask_of(std::span<std::string const> ids) const {
    coalition_mask m = 0;
    for (auto const& id : ids) {
      auto it = std::find_if(players_.begin(), players_.end(),
                             [&](passenger const& p) { return p.id() == id; });
      if (it == players_.end()) {
        throw lookup_error("impatience_game: unknown passenger id " + id);
      }
      m |= coalition_mask{1} << (it - players_.begin());
    }
    return m;
  }

  money characteristic_value(std::span<std::string const> ids) const {
    return value(mask_of(ids));
  }

private:
  std::vector<passenger> players_;
  mutable std::unordered_map<coalition_mask, money> memo_;
};

/// Presents `inner` with its players relabeled: player k of the view is
/// player `perm[k]` of the wrapped game.
template <cooperative_game G>
class relabeled_game {
public:
  relabeled_game(G const& inner, std::vector<std::size_t> perm)
      : inner_(&inner), perm_(std::move(perm)) {
    if (perm_.size() != inner.size()) {
      throw invariant_error("relabeled_game: permutation size mismatch");
    }
  }

  std::size_t size() const noexcept { return perm_.size(); }
  money value(coalition_mask m) const {
    coalition_mask inner = 0;
    for (auto k : members_of(m)) inner |= coalition_mask{1} << perm_[k];
    return inner_->value(inner);
  }

private:
  G const* inner_;
  std::vector<std::size_t> perm_;
};

enum class shapley_method { exact, monte_carlo };

struct shapley_result {
  /// Game indices of the players, ascending.
  std::vector<std::size_t> players;
  /// Player ids aligned with `players`; index strings for unnamed games.
  std::vector<std::string> ids;
  std::vector<money> phi;
  /// Per-player standard error of the estimate; zeros for exact results.
  std::vector<double> standard_error;
  shapley_method method = shapley_method::exact;
  std::size_t samples = 0;
  std::optional<std::uint64_t> seed;

  money sum() const noexcept {
    money s = 0;
    for (auto v : phi) s += v;
    return s;
  }

  /// Shapley value of the player named `id`; throws lookup_error if absent.
  money phi_of(std::string const& id) const {
    auto it = std::find(ids.begin(), ids.end(), id);
    if (it == ids.end()) throw lookup_error("shapley: unknown player " + id);
    return phi[static_cast<std::size_t>(it - ids.begin())];
  }
};

namespace detail {

template <cooperative_game G>
std::string player_label(G const& g, std::size_t i) {
  if constexpr (named_game<G>) {
    return std::string(g.player_id(i));
  } else {
    return std::to_string(i);
  }
}

template <cooperative_game G>
coalition_mask checked_players(G const& g, std::optional<coalition_mask> m) {
  auto const all = full_mask(g.size());
  auto const players = m.value_or(all);
  if ((players & ~all) != 0) {
    throw lookup_error("shapley: coalition mask names players outside the game");
  }
  return players;
}

}  // namespace detail

/// Exact Shapley values over the players in `players` (all by default):
///
///   phi_i = sum over T in S\{i} of |T|! (|S|-|T|-1)! / |S|! * (v(T+i) - v(T))
///
/// Enumerates 2^(|S|-1) subsets per player.
template <cooperative_game G>
shapley_result shapley_exact(G const& game,
                             std::optional<coalition_mask> players = {},
                             std::size_t limit = exact_shapley_limit) {
  auto const s_mask = detail::checked_players(game, players);
  auto const members = members_of(s_mask);
  auto const s = members.size();
  if (s > limit) {
    throw size_error("shapley_exact: " + std::to_string(s) +
                     " players exceed the exact limit of " +
                     std::to_string(limit) + "; use shapley_montecarlo");
  }

  // weight[k] = k! (s-k-1)! / s! = 1 / (s * C(s-1, k))
  std::vector<double> weight(s);
  double binom = 1;
  for (std::size_t k = 0; k < s; ++k) {
    weight[k] = 1.0 / (double(s) * binom);
    binom = binom * double(s - 1 - k) / double(k + 1);
  }

  shapley_result out;
  out.method = shapley_method::exact;
  for (auto i : members) {
    coalition_mask const bit = coalition_mask{1} << i;
    coalition_mask const rest = s_mask & ~bit;
    money phi = 0;
    // Every submask of `rest`, including the empty set.
    for (coalition_mask t = rest;; t = (t - 1) & rest) {
      auto const k = static_cast<std::size_t>(std::popcount(t));
      phi += weight[k] * (game.value(t | bit) - game.value(t));
      if (t == 0) break;
    }
    out.players.push_back(i);
    out.ids.push_back(detail::player_label(game, i));
    out.phi.push_back(phi);
    out.standard_error.push_back(0);
  }
  return out;
}

/// Shapley estimate from `samples` uniformly random join orders. Each order is
/// a Fisher-Yates shuffle of the ascending player list driven by `rng`
/// (swap position k with below(k + 1), k descending).
template <cooperative_game G>
shapley_result shapley_montecarlo(G const& game, std::size_t samples,
                                  std::uint64_t seed,
                                  std::optional<coalition_mask> players = {}) {
  if (samples == 0) {
    throw invariant_error("shapley_montecarlo: samples must be >= 1");
  }
  auto const s_mask = detail::checked_players(game, players);
  auto const members = members_of(s_mask);
  auto const s = members.size();

  std::vector<double> mean(s, 0.0), m2(s, 0.0);
  std::vector<std::size_t> order(s);
  rng gen(seed);
  for (std::size_t n = 1; n <= samples; ++n) {
    for (std::size_t k = 0; k < s; ++k) order[k] = k;
    for (std::size_t k = s; k-- > 1;) {
      std::swap(order[k], order[gen.below(k + 1)]);
    }
    coalition_mask joined = 0;
    money prev = 0;
    for (auto k : order) {
      joined |= coalition_mask{1} << members[k];
      money const cur = game.value(joined);
      double const x = cur - prev;
      prev = cur;
      // Welford update.
      double const d = x - mean[k];
      mean[k] += d / double(n);
      m2[k] += d * (x - mean[k]);
    }
  }

  shapley_result out;
  out.method = shapley_method::monte_carlo;
  out.samples = samples;
  out.seed = seed;
  for (std::size_t k = 0; k < s; ++k) {
    out.players.push_back(members[k]);
    out.ids.push_back(detail::player_label(game, members[k]));
    out.phi.push_back(mean[k]);
    double const var = samples > 1 ? m2[k] / double(samples - 1) : 0.0;
    out.standard_error.push_back(std::sqrt(var / double(samples)));
  }
  return out;
}

struct axiom_check {
  bool passed = true;
  /// Largest deviation seen (|sum phi - v(S)|, |phi_i - phi_j|, or |phi_i|).
  double worst = 0;
  std::vector<std::string> violations;
};

struct axiom_report {
  axiom_check efficiency;
  axiom_check symmetry;
  axiom_check dummy;

  bool all_passed() const noexcept {
    return efficiency.passed && symmetry.passed && dummy.passed;
  }
};

namespace detail {

inline bool close(money a, money b, double tol) noexcept {
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

inline void record(axiom_check& c, double deviation, double tol,
                   std::string const& what) {
  c.worst = std::max(c.worst, deviation);
  if (deviation > tol) {
    c.passed = false;
    c.violations.push_back(what);
  }
}

}  // namespace detail

/// Checks efficiency, symmetry and the dummy axiom of `result` against
/// `game`. Interchangeable and dummy players are detected by enumerating
/// subsets, so this is exponential in the player count.
template <cooperative_game G>
axiom_report verify_axioms(G const& game, shapley_result const& result,
                           double tolerance = money_tolerance) {
  axiom_report rep;
  coalition_mask s_mask = 0;
  for (auto i : result.players) s_mask |= coalition_mask{1} << i;
  auto const n = result.players.size();

  detail::record(rep.efficiency, std::abs(result.sum() - game.value(s_mask)),
                 tolerance, "sum of phi differs from v(S)");

  for (std::size_t a = 0; a < n; ++a) {
    auto const i = result.players[a];
    coalition_mask const bi = coalition_mask{1} << i;

    bool dummy = true;
    for (coalition_mask t = s_mask & ~bi;; t = (t - 1) & (s_mask & ~bi)) {
      if (!detail::close(game.value(t | bi), game.value(t), money_tolerance)) {
        dummy = false;
        break;
      }
      if (t == 0) break;
    }
    if (dummy) {
      detail::record(rep.dummy, std::abs(result.phi[a]), tolerance,
                     "dummy player " + result.ids[a] + " has nonzero phi");
    }

    for (std::size_t b = a + 1; b < n; ++b) {
      auto const j = result.players[b];
      coalition_mask const bj = coalition_mask{1} << j;
      coalition_mask const rest = s_mask & ~bi & ~bj;
      bool interchangeable = true;
      for (coalition_mask t = rest;; t = (t - 1) & rest) {
        if (!detail::close(game.value(t | bi), game.value(t | bj),
                           money_tolerance)) {
          interchangeable = false;
          break;
        }
        if (t == 0) break;
      }
      if (interchangeable) {
        detail::record(rep.symmetry, std::abs(result.phi[a] - result.phi[b]),
                       tolerance,
                       "players " + result.ids[a] + " and " + result.ids[b] +
                           " are interchangeable but phi differs");
      }
    }
  }
  return rep;
}

}  // namespace carpool

#endif  // CARPOOL_COALITION_HPP
