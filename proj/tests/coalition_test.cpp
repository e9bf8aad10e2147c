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

#include "carpool/coalition.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "gtest/gtest.h"

#include "carpool/random.hpp"
#include "oracle.hpp"

using namespace carpool;

namespace {

constexpr double kTol = 1e-9;

passenger rider(std::string id, double theta, double omega) {
  return {std::move(id), travel(5, 10), theta, omega};
}

tabular_game random_table(rng& gen, std::size_t n) {
  std::vector<money> v(std::size_t{1} << n);
  for (auto& x : v) x = gen.uniform(-10, 10);
  return {n, std::move(v)};
}

}  // namespace

TEST(coalition, characteristic_values) {
  impatience_game game({rider("p1", 10, 2), rider("p2", 20, 1)});
  std::vector<std::string> const one{"p1"}, both{"p1", "p2"}, none{};
  EXPECT_NEAR(game.characteristic_value(one), 20, kTol);
  EXPECT_NEAR(game.characteristic_value(both), 50, kTol);
  EXPECT_EQ(game.characteristic_value(none), 0);
  std::vector<std::string> const bad{"p7"};
  EXPECT_THROW(game.characteristic_value(bad), lookup_error);
}

TEST(coalition, memo_is_shared) {
  rng gen(1);
  impatience_game game(oracle::random_riders(gen, 5));
  (void)shapley_exact(game);
  auto const r1 = shapley_exact(game);
  auto const r2 = shapley_exact(game);
  EXPECT_EQ(r1.phi, r2.phi);
}

TEST(coalition, shapley_exact_worked_pair) {
  impatience_game game({rider("p1", 10, 2), rider("p2", 20, 1)});
  auto const r = shapley_exact(game);
  ASSERT_EQ(r.phi.size(), 2u);
  EXPECT_NEAR(r.phi_of("p1"), 25, kTol);
  EXPECT_NEAR(r.phi_of("p2"), 25, kTol);
  EXPECT_EQ(r.method, shapley_method::exact);
  EXPECT_EQ(r.samples, 0u);
  EXPECT_FALSE(r.seed.has_value());
}

TEST(coalition, shapley_exact_singleton_and_symmetry) {
  impatience_game single({rider("p1", 10, 2)});
  EXPECT_NEAR(shapley_exact(single).phi[0], 20, kTol);

  impatience_game twins({rider("a", 12, 1.5), rider("b", 12, 1.5), rider("c", 3, 0.2)});
  auto const r = shapley_exact(twins);
  EXPECT_NEAR(r.phi_of("a"), r.phi_of("b"), kTol);
}

TEST(coalition, shapley_exact_size_limit) {
  rng gen(2);
  impatience_game game(oracle::random_riders(gen, 13));
  EXPECT_THROW(shapley_exact(game), size_error);
  EXPECT_NO_THROW(shapley_exact(game, coalition_mask{0xfff}));
}

TEST(coalition, shapley_exact_matches_join_order_oracle) {
  rng gen(17);
  for (int k = 0; k < 30; ++k) {
    auto const n = 1 + gen.below(6);
    auto const riders = oracle::random_riders(gen, n);
    impatience_game game(riders);
    auto const r = shapley_exact(game);
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    auto const want = oracle::shapley_by_orders(riders, all);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(r.phi[i], want.at(i), kTol);
  }
}

TEST(coalition, shapley_on_sub_coalition) {
  rng gen(23);
  auto const riders = oracle::random_riders(gen, 6);
  impatience_game game(riders);
  coalition_mask const m = 0b101101;
  auto const r = shapley_exact(game, m);
  auto const want = oracle::shapley_by_orders(riders, {0, 2, 3, 5});
  ASSERT_EQ(r.players, (std::vector<std::size_t>{0, 2, 3, 5}));
  for (std::size_t k = 0; k < r.players.size(); ++k) {
    EXPECT_NEAR(r.phi[k], want.at(r.players[k]), kTol);
  }
  EXPECT_THROW(shapley_exact(game, coalition_mask{1} << 7), lookup_error);
}

TEST(coalition, efficiency_and_positivity) {
  rng gen(99);
  for (int k = 0; k < 40; ++k) {
    auto const n = 1 + gen.below(8);
    auto const riders = oracle::random_riders(gen, n);
    impatience_game game(riders);
    auto const r = shapley_exact(game);
    EXPECT_NEAR(r.sum(), game.value(full_mask(n)), kTol);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_GE(r.phi[i], riders[i].theta() * riders[i].omega() - kTol);
    }
  }
}

TEST(coalition, game_is_monotone_with_floor_marginals) {
  rng gen(31);
  for (int k = 0; k < 10; ++k) {
    auto const riders = oracle::random_riders(gen, 6);
    impatience_game game(riders);
    auto const full = full_mask(6);
    for (std::size_t i = 0; i < 6; ++i) {
      coalition_mask const bit = coalition_mask{1} << i;
      auto const floor = riders[i].theta() * riders[i].omega();
      for (coalition_mask t = 0; t <= full; ++t) {
        if (t & bit) continue;
        EXPECT_GE(game.value(t | bit) - game.value(t), floor - kTol);
      }
    }
    EXPECT_NEAR(game.value(1), riders[0].theta() * riders[0].omega(), kTol);
  }
}

TEST(coalition, montecarlo_determinism_and_singleton) {
  impatience_game single({rider("p1", 10, 2)});
  auto const r = shapley_montecarlo(single, 1, 123);
  EXPECT_NEAR(r.phi[0], 20, kTol);
  EXPECT_EQ(r.method, shapley_method::monte_carlo);
  EXPECT_EQ(r.samples, 1u);
  EXPECT_EQ(r.seed, 123u);

  rng gen(4);
  impatience_game game(oracle::random_riders(gen, 6));
  auto const a = shapley_montecarlo(game, 500, 9);
  auto const b = shapley_montecarlo(game, 500, 9);
  EXPECT_EQ(a.phi, b.phi);
  EXPECT_EQ(a.standard_error, b.standard_error);
  EXPECT_THROW(shapley_montecarlo(game, 0, 9), invariant_error);
}

TEST(coalition, montecarlo_tracks_exact) {
  rng gen(8);
  impatience_game game(oracle::random_riders(gen, 8));
  auto const exact = shapley_exact(game);
  auto const mc = shapley_montecarlo(game, 10000, 2018);
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_NEAR(mc.phi[i], exact.phi[i], 0.02 * exact.phi[i]);
    EXPECT_GT(mc.standard_error[i], 0);
  }
  // Each sampled order telescopes to v(S), so efficiency survives sampling.
  EXPECT_NEAR(mc.sum(), game.value(full_mask(8)), 1e-6);
}

TEST(coalition, axioms_hold_for_exact_results) {
  rng gen(12);
  for (int k = 0; k < 20; ++k) {
    impatience_game game(oracle::random_riders(gen, 1 + gen.below(8)));
    auto const rep = verify_axioms(game, shapley_exact(game));
    EXPECT_TRUE(rep.all_passed());
  }
}

TEST(coalition, dummy_player_gets_zero) {
  // Player 2 never changes the value: v(T) depends on players 0 and 1 only.
  std::vector<money> v(8);
  for (coalition_mask m = 0; m < 8; ++m) {
    v[m] = (m & 1 ? 3.0 : 0.0) + (m & 2 ? 5.0 : 0.0) + ((m & 3) == 3 ? 4.0 : 0.0);
  }
  tabular_game game(3, v);
  auto const r = shapley_exact(game);
  EXPECT_NEAR(r.phi[2], 0, kTol);
  EXPECT_NEAR(r.phi[0], 5, kTol);
  EXPECT_NEAR(r.phi[1], 7, kTol);
  auto const rep = verify_axioms(game, r);
  EXPECT_TRUE(rep.all_passed());

  shapley_result broken = r;
  broken.phi[2] = 0.5;
  broken.phi[0] -= 0.5;
  auto const bad = verify_axioms(game, broken);
  EXPECT_TRUE(bad.efficiency.passed);
  EXPECT_FALSE(bad.dummy.passed);
}

TEST(coalition, symmetry_violation_is_reported) {
  impatience_game twins({rider("a", 12, 1.5), rider("b", 12, 1.5)});
  auto r = shapley_exact(twins);
  r.phi[0] += 1;
  r.phi[1] -= 1;
  auto const rep = verify_axioms(twins, r);
  EXPECT_TRUE(rep.efficiency.passed);
  EXPECT_FALSE(rep.symmetry.passed);
  EXPECT_NEAR(rep.symmetry.worst, 2, kTol);
  r.phi[0] += 1;
  EXPECT_FALSE(verify_axioms(twins, r).efficiency.passed);
}

TEST(coalition, anonymity_under_relabeling) {
  rng gen(77);
  for (int k = 0; k < 10; ++k) {
    auto const n = 2 + gen.below(6);
    impatience_game game(oracle::random_riders(gen, n));
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = n; i-- > 1;) std::swap(perm[i], perm[gen.below(i + 1)]);
    relabeled_game view(game, perm);
    auto const base = shapley_exact(game);
    auto const moved = shapley_exact(view);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(moved.phi[i], base.phi[perm[i]], kTol);
    }
  }
}

TEST(coalition, additivity) {
  rng gen(5);
  for (int k = 0; k < 20; ++k) {
    auto const n = 1 + gen.below(6);
    auto const v = random_table(gen, n);
    auto const w = random_table(gen, n);
    auto const sum = shapley_exact(v + w);
    auto const pv = shapley_exact(v);
    auto const pw = shapley_exact(w);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(sum.phi[i], pv.phi[i] + pw.phi[i], kTol);
    }
  }
}

TEST(coalition, pluggable_value_function) {
  // Additive game: each player's Shapley value is its own weight.
  std::vector<double> weight{1.5, 2.5, 4.0};
  function_game game({"x", "y", "z"}, [&](coalition_mask m) {
    money v = 0;
    for (auto i : members_of(m)) v += weight[i];
    return v;
  });
  auto const r = shapley_exact(game);
  EXPECT_EQ(r.ids, (std::vector<std::string>{"x", "y", "z"}));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(r.phi[i], weight[i], kTol);
  EXPECT_EQ(game.cached(), 7u);
}
