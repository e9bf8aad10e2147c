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

#include "carpool/impatience.hpp"

#include <numeric>
#include <set>
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

std::vector<passenger> worked_pair() {
  return {rider("p1", 10, 2), rider("p2", 20, 1)};
}

service_sequence seq(std::vector<std::string> ids) {
  return service_sequence(std::move(ids));
}

}  // namespace

TEST(impatience, predecessors) {
  auto const s = seq({"p1", "p2", "p3"});
  EXPECT_TRUE(predecessors(s, "p1").empty());
  EXPECT_EQ(predecessors(s, "p3"), (std::set<std::string>{"p1", "p2"}));
  EXPECT_EQ(predecessors(seq({"p2", "p1"}), "p1"), (std::set<std::string>{"p2"}));
  EXPECT_THROW(predecessors(s, "p9"), lookup_error);
}

TEST(impatience, sequence_rejects_duplicates) {
  EXPECT_THROW(seq({"p1", "p1"}), invariant_error);
}

TEST(impatience, impatience_of_worked_pair) {
  auto const riders = worked_pair();
  EXPECT_NEAR(impatience_of("p1", riders, seq({"p1", "p2"})), 20, kTol);
  EXPECT_NEAR(impatience_of("p2", riders, seq({"p1", "p2"})), 30, kTol);
  EXPECT_NEAR(impatience_of("p1", riders, seq({"p2", "p1"})), 60, kTol);
  EXPECT_NEAR(impatience_of("p2", riders, seq({"p2", "p1"})), 20, kTol);
}

TEST(impatience, membership_errors) {
  auto const riders = worked_pair();
  EXPECT_THROW(impatience_of("p1", riders, seq({"p1"})), lookup_error);
  EXPECT_THROW(impatience_of("p1", riders, seq({"p1", "p3"})), lookup_error);
  EXPECT_THROW(impatience_of("p3", riders, seq({"p1", "p2"})), lookup_error);
  EXPECT_THROW(total_impatience(riders, seq({"p2", "p9"})), lookup_error);
}

TEST(impatience, total_impatience_worked_pair) {
  auto const riders = worked_pair();
  auto const a = total_impatience(riders, seq({"p1", "p2"}));
  EXPECT_NEAR(a.total, 50, kTol);
  EXPECT_NEAR(a.per_passenger.at("p1"), 20, kTol);
  EXPECT_NEAR(a.per_passenger.at("p2"), 30, kTol);
  EXPECT_NEAR(total_impatience(riders, seq({"p2", "p1"})).total, 80, kTol);

  std::vector<passenger> one{rider("p1", 10, 2)};
  EXPECT_NEAR(total_impatience(one, seq({"p1"})).total, 20, kTol);
}

TEST(impatience, exhaustive_optimum) {
  std::vector<passenger> one{rider("p1", 10, 2)};
  auto const [s1, v1] = optimal_sequence_exhaustive(one);
  EXPECT_EQ(s1, seq({"p1"}));
  EXPECT_NEAR(v1, 20, kTol);

  auto const [s2, v2] = optimal_sequence_exhaustive(worked_pair());
  EXPECT_EQ(s2, seq({"p1", "p2"}));
  EXPECT_NEAR(v2, 50, kTol);
}

TEST(impatience, exhaustive_ties_resolve_to_id_order) {
  // theta/omega = 5 for everyone.
  std::vector<passenger> riders{rider("p3", 10, 2), rider("p1", 5, 1),
                                rider("p4", 15, 3), rider("p2", 2.5, 0.5)};
  std::vector<std::size_t> order(4);
  std::iota(order.begin(), order.end(), 0);
  std::set<long long> totals;
  do {
    totals.insert(std::llround(oracle::total(riders, order) * 1e6));
  } while (std::next_permutation(order.begin(), order.end()));
  EXPECT_EQ(totals.size(), 1u);

  EXPECT_EQ(optimal_sequence_exhaustive(riders).first,
            seq({"p1", "p2", "p3", "p4"}));
}

TEST(impatience, exhaustive_size_limit) {
  rng gen(7);
  auto const riders = oracle::random_riders(gen, 10);
  EXPECT_THROW(optimal_sequence_exhaustive(riders), size_error);
  EXPECT_THROW(optimal_sequence_exhaustive({}), invariant_error);
}

TEST(impatience, smith_rule) {
  EXPECT_EQ(optimal_sequence_smith(worked_pair()), seq({"p1", "p2"}));
  std::vector<passenger> same{rider("p5", 4, 2), rider("p2", 2, 1),
                              rider("p4", 6, 3), rider("p1", 8, 4),
                              rider("p3", 1, 0.5)};
  EXPECT_EQ(optimal_sequence_smith(same), seq({"p1", "p2", "p3", "p4", "p5"}));
  EXPECT_THROW(optimal_sequence_smith({}), invariant_error);
}

TEST(impatience, smith_matches_exhaustive_on_random_instances) {
  rng gen(42);
  for (int k = 0; k < 200; ++k) {
    auto const n = 2 + gen.below(7);
    auto const riders = oracle::random_riders(gen, n);
    auto const smith = total_impatience(riders, optimal_sequence_smith(riders)).total;
    auto const [s, best] = optimal_sequence_exhaustive(riders);
    EXPECT_NEAR(smith, best, kTol) << "instance " << k;
    EXPECT_NEAR(best, oracle::best_total(riders), kTol) << "instance " << k;
  }
}

TEST(impatience, totals_match_literal_definition) {
  rng gen(3);
  for (int k = 0; k < 100; ++k) {
    auto const n = 1 + gen.below(7);
    auto const riders = oracle::random_riders(gen, n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = n; i-- > 1;) std::swap(order[i], order[gen.below(i + 1)]);
    std::vector<std::string> ids;
    for (auto i : order) ids.push_back(riders[i].id());
    auto const got = total_impatience(riders, seq(ids));
    auto const want = oracle::impatience(riders, order);
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(got.per_passenger.at(riders[i].id()), want[i], kTol);
      EXPECT_GE(got.per_passenger.at(riders[i].id()),
                riders[i].theta() * riders[i].omega() - kTol);
      sum += got.per_passenger.at(riders[i].id());
    }
    EXPECT_NEAR(got.total, sum, kTol);

    double own = 0;
    for (auto const& r : riders) own += r.theta() * r.omega();
    if (n == 1) {
      EXPECT_NEAR(got.total, own, kTol);
    } else {
      EXPECT_GT(got.total, own);
    }
  }
}

TEST(impatience, adjacent_exchange_delta) {
  rng gen(11);
  for (int k = 0; k < 200; ++k) {
    auto const n = 2 + gen.below(7);
    auto const riders = oracle::random_riders(gen, n);
    std::vector<std::string> ids;
    for (auto const& r : riders) ids.push_back(r.id());
    auto const pos = gen.below(n - 1);
    auto const before = total_impatience(riders, seq(ids)).total;
    auto const delta = adjacent_swap_delta(riders, seq(ids), pos);
    auto const& a = riders[pos];
    auto const& b = riders[pos + 1];
    EXPECT_NEAR(delta, a.omega() * b.theta() - b.omega() * a.theta(), kTol);
    std::swap(ids[pos], ids[pos + 1]);
    auto const after = total_impatience(riders, seq(ids)).total;
    EXPECT_NEAR(after - before, delta, kTol);
  }
}

TEST(impatience, exchange_optimality_detects_bad_orders) {
  auto const riders = worked_pair();
  EXPECT_TRUE(is_exchange_optimal(riders, seq({"p1", "p2"})));
  EXPECT_FALSE(is_exchange_optimal(riders, seq({"p2", "p1"})));
}

TEST(impatience, optimum_grows_with_coalition) {
  rng gen(5);
  for (int k = 0; k < 5; ++k) {
    auto const riders = oracle::random_riders(gen, 6);
    auto const full = (1u << riders.size()) - 1;
    for (unsigned m = 1; m <= full; ++m) {
      for (unsigned sup = m; sup <= full; sup = (sup + 1) | m) {
        auto const small = oracle::subset(riders, m);
        auto const big = oracle::subset(riders, sup);
        EXPECT_LE(optimal_sequence_exhaustive(small).second,
                  optimal_sequence_exhaustive(big).second + kTol);
        if (sup == full) break;
      }
    }
  }
}
