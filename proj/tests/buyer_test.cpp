// Copyright 2026 The Authors.
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


#include "complements/buyer.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "complements/instances.hpp"
#include "complements/rng.hpp"
#include "oracles.hpp"

namespace complements {
namespace {

Instance random_instance(std::uint64_t seed, int m) {
  RandomParams p;
  p.m = m;
  p.layers = 1 + static_cast<int>(seed % 2);
  p.max_rank = 2;
  p.edge_density = 0.35;
  p.seed = seed;
  return gen_random(p);
}

// Prices on a coarse grid so that utility ties actually happen.
PriceVector random_prices(int m, Rng& rng) {
  PriceVector p;
  for (int i = 0; i < m; ++i) p.prices.push_back(static_cast<double>(uniform_index(rng, 6)) * 1.5);
  return p;
}

TEST(BestResponseItemsTest, NumericalExampleBuysEverything) {
  const Instance inst = gen_numerical_example();
  const Purchase buy = best_response_items(inst, {{0, 8, 0, 8}}, {{2, 4, 2, 4}});
  EXPECT_EQ(buy.items, ItemSet::full(4));
  EXPECT_DOUBLE_EQ(buy.payment, 16.0);
  EXPECT_DOUBLE_EQ(buy.utility, 8.0);
}

TEST(BestResponseItemsTest, ZeroPricesGiveGrandSet) {
  const Instance inst = gen_numerical_example();
  const Purchase buy = best_response_items(inst, {{0, 0, 0, 0}}, {{0, 0, 0, 0}});
  EXPECT_EQ(buy.items, ItemSet::full(4));
  EXPECT_DOUBLE_EQ(buy.payment, 0.0);
}

TEST(BestResponseItemsTest, IndifferenceBuys) {
  const Instance inst(BoostStructure(1, 1, {}), {DiscreteDistribution({{3.0, 1.0}})});
  const Purchase buy = best_response_items(inst, {{3.0}}, {{3.0}});
  EXPECT_EQ(buy.items, ItemSet::of({0}));
  EXPECT_DOUBLE_EQ(buy.payment, 3.0);
  const Purchase none = best_response_items(inst, {{3.5}}, {{3.0}});
  EXPECT_TRUE(none.items.empty());
}

TEST(BestResponseItemsTest, RejectsBadInput) {
  const Instance inst = gen_numerical_example();
  EXPECT_THROW(best_response_items(inst, {{0, 8, 0}}, {{2, 4, 2, 4}}), std::invalid_argument);
  EXPECT_THROW(best_response_items(inst, {{0, -1, 0, 8}}, {{2, 4, 2, 4}}), std::invalid_argument);
  EXPECT_THROW(best_response_items(inst, {{0, 8, 0, 8}}, {{2, 4, 2}}), std::invalid_argument);
}

TEST(BestResponseItemsTest, CapIsEnforced) {
  std::vector<DiscreteDistribution> marginals(25, DiscreteDistribution::point_mass(1.0));
  const Instance inst(BoostStructure(25, 1, {}), marginals);
  EXPECT_THROW(best_response_items(inst, {std::vector<double>(25, 1.0)}, {std::vector<double>(25, 1.0)}),
               CapExceeded);
}

TEST(BestResponseItemsTest, MatchesOracleOnRandomInstances) {
  Rng rng = make_stream(7, 1);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Instance inst = random_instance(seed, 2 + static_cast<int>(seed % 4));
    const int m = inst.num_items();
    for (int trial = 0; trial < 10; ++trial) {
      const PriceVector p = random_prices(m, rng);
      const TypeProfile t = sample_profile(inst, rng);
      const Purchase buy = best_response_items(inst, p, t);
      const oracle::Choice want = oracle::best_response(inst, p.prices, t.values);
      ASSERT_EQ(buy.items.bits(), want.set) << "seed " << seed;
      EXPECT_NEAR(buy.payment, want.payment, 1e-9);
      EXPECT_NEAR(buy.utility, want.utility, 1e-9);
    }
  }
}

TEST(BestResponseItemsTest, Properties) {
  Rng rng = make_stream(11, 2);
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    const Instance inst = random_instance(seed, 3);
    const int m = inst.num_items();
    for (int trial = 0; trial < 10; ++trial) {
      PriceVector p = random_prices(m, rng);
      const TypeProfile t = sample_profile(inst, rng);
      const Purchase buy = best_response_items(inst, p, t);
      // IR: at least the utility of the free items alone.
      ItemSet free_items;
      for (int i = 0; i < m; ++i) {
        if (p.prices[static_cast<std::size_t>(i)] == 0.0) free_items = free_items.with(i);
      }
      EXPECT_GE(buy.utility, valuation(inst, t, free_items) - 1e-9);
      EXPECT_GE(buy.utility, -1e-9);
      EXPECT_TRUE(free_items.subset_of(buy.items));
      // Determinism.
      EXPECT_EQ(best_response_items(inst, p, t).items, buy.items);
      // Raising a price never helps the buyer.
      const auto i = static_cast<std::size_t>(uniform_index(rng, static_cast<std::uint64_t>(m)));
      p.prices[i] += 1.0;
      EXPECT_LE(best_response_items(inst, p, t).utility, buy.utility + 1e-9);
    }
  }
}

TEST(BestResponseItemsTest, AdditiveBuysItemsWorthTheirPrice) {
  RandomParams rp;
  rp.m = 4;
  rp.edge_density = 0.0;
  Rng rng = make_stream(3, 3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    rp.seed = seed;
    const Instance inst = gen_random(rp);
    const PriceVector p = random_prices(4, rng);
    const TypeProfile t = sample_profile(inst, rng);
    ItemSet want;
    for (int i = 0; i < 4; ++i) {
      if (t[static_cast<std::size_t>(i)] >= p[static_cast<std::size_t>(i)]) want = want.with(i);
    }
    EXPECT_EQ(best_response_items(inst, p, t).items, want);
  }
}

TEST(BestResponseBundlesTest, FreeBundleIsTaken) {
  const Instance inst = gen_numerical_example();
  BundleMenu menu{{ItemSet::of({1, 3})}, {0.0}, ItemSet()};
  const Purchase buy = best_response_bundles(inst, menu, {{0, 0, 0, 0}});
  EXPECT_EQ(buy.items, ItemSet::of({0}));
}

TEST(BestResponseBundlesTest, NumericalExampleMenu) {
  const Instance inst = gen_numerical_example();
  BundleMenu menu{{ItemSet::of({1}), ItemSet::of({3})}, {8.0, 8.0}, ItemSet::of({0, 2})};
  const Purchase buy = best_response_bundles(inst, menu, {{0, 4, 0, 4}});
  EXPECT_EQ(buy.items, ItemSet::of({0, 1}));
  EXPECT_DOUBLE_EQ(buy.payment, 16.0);
  EXPECT_DOUBLE_EQ(buy.utility, 0.0);
}

TEST(BestResponseBundlesTest, SingletonMenuMatchesItemPrices) {
  Rng rng = make_stream(5, 4);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Instance inst = random_instance(seed, 4);
    const PriceVector p = random_prices(4, rng);
    BundleMenu menu;
    std::vector<int> index_of(4, -1);
    for (int i = 0; i < 4; ++i) {
      if (p.prices[static_cast<std::size_t>(i)] == 0.0) {
        menu.free_set = menu.free_set.with(i);
      } else {
        index_of[static_cast<std::size_t>(i)] = static_cast<int>(menu.bundles.size());
        menu.bundles.push_back(ItemSet::singleton(i));
        menu.prices.push_back(p.prices[static_cast<std::size_t>(i)]);
      }
    }
    const TypeProfile t = sample_profile(inst, rng);
    const Purchase items = best_response_items(inst, p, t);
    const Purchase bundles = best_response_bundles(inst, menu, t);
    ItemSet got = menu.free_set;
    for (int j : bundles.items.items()) got = got | menu.bundles[static_cast<std::size_t>(j)];
    EXPECT_EQ(got, items.items) << "seed " << seed;
    EXPECT_NEAR(bundles.payment, items.payment, 1e-9);
    EXPECT_NEAR(bundles.utility, items.utility, 1e-9);
  }
}

TEST(BundleMenuTest, Validation) {
  EXPECT_THROW((BundleMenu{{ItemSet::of({0, 1}), ItemSet::of({1})}, {1, 1}, ItemSet()}.validate(3)),
               std::invalid_argument);
  EXPECT_THROW((BundleMenu{{ItemSet::of({0})}, {1}, ItemSet::of({0})}.validate(3)), std::invalid_argument);
  EXPECT_THROW((BundleMenu{{ItemSet()}, {1}, ItemSet()}.validate(3)), std::invalid_argument);
  EXPECT_THROW((BundleMenu{{ItemSet::of({0})}, {-1}, ItemSet()}.validate(3)), std::invalid_argument);
  EXPECT_THROW((BundleMenu{{ItemSet::of({3})}, {1}, ItemSet()}.validate(3)), std::invalid_argument);
  EXPECT_THROW((BundleMenu{{ItemSet::of({0})}, {}, ItemSet()}.validate(3)), std::invalid_argument);
  EXPECT_NO_THROW((BundleMenu{{ItemSet::of({0}), ItemSet::of({2})}, {1, 0}, ItemSet::of({1})}.validate(3)));
}

}  // namespace
}  // namespace complements
