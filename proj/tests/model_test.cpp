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

#include "complements/model.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "complements/instances.hpp"
#include "oracles.hpp"

namespace complements {
namespace {

constexpr double kTol = 1e-9;

Instance random_instance(std::uint64_t seed, int m, int layers, int max_rank) {
  RandomParams p;
  p.m = m;
  p.layers = layers;
  p.max_rank = max_rank;
  p.edge_density = 0.4;
  p.seed = seed;
  return gen_random(p);
}

TEST(DistributionTest, RejectsBadAtoms) {
  EXPECT_THROW(DiscreteDistribution(std::vector<Atom>{}), std::invalid_argument);
  EXPECT_THROW(DiscreteDistribution({{1.0, 0.5}, {0.0, 0.5}}), std::invalid_argument);
  EXPECT_THROW(DiscreteDistribution({{1.0, 0.5}, {1.0, 0.5}}), std::invalid_argument);
  EXPECT_THROW(DiscreteDistribution({{-1.0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(DiscreteDistribution({{0.0, 0.0}, {1.0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(DiscreteDistribution({{0.0, 0.5}, {1.0, 0.499999}}), std::invalid_argument);
  EXPECT_NO_THROW(DiscreteDistribution({{0.0, 0.5}, {1.0, 0.5 + 5e-10}}));
}

TEST(DistributionTest, SurvivalAndMean) {
  const DiscreteDistribution d({{0.0, 0.25}, {2.0, 0.25}, {4.0, 0.5}});
  EXPECT_DOUBLE_EQ(d.survival(0.0), 1.0);
  EXPECT_DOUBLE_EQ(d.survival(2.0), 0.75);
  EXPECT_DOUBLE_EQ(d.survival(2.5), 0.5);
  EXPECT_DOUBLE_EQ(d.survival(5.0), 0.0);
  EXPECT_DOUBLE_EQ(d.mean(), 2.5);
  EXPECT_DOUBLE_EQ(d.scaled(2.0).mean(), 5.0);
  EXPECT_THROW(d.scaled(0.0), std::invalid_argument);
}

TEST(BoostStructureTest, RejectsInvalidEdges) {
  EXPECT_THROW(BoostStructure(3, 1, {{ItemSet::of({1}), 1, 0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(BoostStructure(3, 1, {{ItemSet(), 1, 0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(BoostStructure(3, 1, {{ItemSet::of({3}), 1, 0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(BoostStructure(3, 1, {{ItemSet::of({0}), 3, 0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(BoostStructure(3, 1, {{ItemSet::of({0}), 1, 1, 1.0}}), std::invalid_argument);
  EXPECT_THROW(BoostStructure(3, 1, {{ItemSet::of({0}), 1, 0, -1.0}}), std::invalid_argument);
  EXPECT_THROW(BoostStructure(3, 1, {{ItemSet::of({0}), 1, 0, 1.0}, {ItemSet::of({0}), 1, 0, 2.0}}),
               std::invalid_argument);
  EXPECT_NO_THROW(BoostStructure(3, 2, {{ItemSet::of({0}), 1, 0, 1.0}, {ItemSet::of({0}), 1, 1, 2.0}}));
  EXPECT_THROW(BoostStructure(0, 1, {}), std::invalid_argument);
  EXPECT_THROW(BoostStructure(2, 0, {}), std::invalid_argument);
}

TEST(BoostStructureTest, DiagnosticNamesTheEdge) {
  try {
    BoostStructure(3, 1, {{ItemSet::of({0}), 1, 0, 1.0}, {ItemSet::of({1}), 1, 0, 1.0}});
    FAIL() << "expected a throw";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("edge 2 ({2} -> 2)"), std::string::npos) << e.what();
  }
}

TEST(BoostFactorTest, EmptySetGivesOne) {
  const Instance inst = random_instance(3, 5, 2, 2);
  for (int i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(boost_factor(inst, i, ItemSet()), 1.0);
}

TEST(BoostFactorTest, WorkedExample) {
  const Instance inst = gen_numerical_example();
  EXPECT_NEAR(boost_factor(inst, 1, ItemSet::of({0, 2})), 2.0, kTol);
  EXPECT_NEAR(boost_factor(inst, 3, ItemSet::of({0, 2})), 2.0, kTol);
  EXPECT_NEAR(boost_factor(inst, 0, ItemSet::of({0, 2})), 1.0, kTol);
  EXPECT_THROW(boost_factor(inst, 4, ItemSet()), std::out_of_range);
  EXPECT_THROW(boost_factor(inst, 0, ItemSet::of({5})), std::out_of_range);
}

TEST(BoostFactorTest, IndependentOfOwnMembership) {
  const Instance inst = gen_numerical_example();
  EXPECT_DOUBLE_EQ(boost_factor(inst, 1, ItemSet::of({0})), boost_factor(inst, 1, ItemSet::of({0, 1})));
}

TEST(BoostFactorTest, HypergraphFamilyFullSet) {
  const Instance inst = gen_hypergraph_lb(6, 2);
  // c = 6 / (2 C(5,2)) = 0.3 over C(5,2) = 10 edges into item 1.
  EXPECT_NEAR(boost_factor(inst, 0, inst.all_items()), 1.0 + 10 * 0.3, kTol);
}

TEST(ActiveLayerTest, Rules) {
  const std::vector<DiscreteDistribution> marg(3, DiscreteDistribution::point_mass(1.0));
  const Instance one(BoostStructure(3, 1, {{ItemSet::of({0}), 1, 0, 1.0}}), marg);
  EXPECT_EQ(active_layer(one, 1, ItemSet::of({0, 1})), 0);
  const Instance two(BoostStructure(3, 2, {{ItemSet::of({0}), 1, 0, 1.0}, {ItemSet::of({2}), 1, 1, 3.0}}), marg);
  EXPECT_EQ(active_layer(two, 1, ItemSet::of({0, 2})), 1);
  EXPECT_EQ(active_layer(two, 1, ItemSet::of({0})), 0);
  const Instance tie(BoostStructure(3, 2, {{ItemSet::of({0}), 1, 0, 2.0}, {ItemSet::of({2}), 1, 1, 2.0}}), marg);
  EXPECT_EQ(active_layer(tie, 1, ItemSet::of({0, 2})), 0);
  EXPECT_EQ(active_layer(tie, 1, ItemSet()), 0);
}

TEST(ValuationTest, WorkedExample) {
  const Instance inst = gen_numerical_example();
  const TypeProfile t{{2, 4, 2, 4}};
  EXPECT_NEAR(valuation(inst, t, inst.all_items()), 24.0, kTol);
  EXPECT_NEAR(valuation(inst, t, ItemSet::of({1})), 4.0, kTol);
  EXPECT_DOUBLE_EQ(valuation(inst, t, ItemSet()), 0.0);
  EXPECT_THROW(valuation(inst, TypeProfile{{1, 2}}, ItemSet::of({0})), std::invalid_argument);
}

TEST(RankDegreeTest, MatchesRecount) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Instance inst = random_instance(seed, 2 + static_cast<int>(seed % 5), 1 + static_cast<int>(seed % 2), 3);
    int k = 0;
    std::vector<int> deg(static_cast<std::size_t>(inst.num_items()), 0);
    for (const auto& e : inst.boosts().edges()) {
      k = std::max(k, e.source.size());
      for (int j = 0; j < inst.num_items(); ++j) deg[static_cast<std::size_t>(j)] += e.source.contains(j) ? 1 : 0;
    }
    EXPECT_EQ(inst.boosts().directed_positive_rank(), k);
    EXPECT_EQ(inst.boosts().max_out_degree(), *std::max_element(deg.begin(), deg.end()));
  }
  const Instance additive(BoostStructure(2, 1, {}), {DiscreteDistribution::point_mass(1), DiscreteDistribution::point_mass(1)});
  EXPECT_EQ(additive.boosts().directed_positive_rank(), 0);
  EXPECT_EQ(additive.boosts().max_out_degree(), 0);
}

// Boosts and values against the edge-list oracle, plus monotonicity over all
// subset pairs.
TEST(ModelPropertyTest, BoostsMonotoneAndMatchOracle) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int m = 2 + static_cast<int>(seed % 5);
    const Instance inst = random_instance(seed, m, 1 + static_cast<int>(seed % 3), 2);
    const BoostTable table(inst);
    const std::uint64_t n = std::uint64_t{1} << m;
    std::vector<double> t(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) t[static_cast<std::size_t>(i)] = inst.marginal(i).atoms().back().value;
    for (std::uint64_t s = 0; s < n; ++s) {
      for (int i = 0; i < m; ++i) {
        const double e = boost_factor(inst, i, ItemSet(s));
        ASSERT_NEAR(e, oracle::eta(inst, i, s), kTol);
        ASSERT_NEAR(table.eta(i, ItemSet(s)), e, 0.0);
        ASSERT_LE(e, boost_factor(inst, i, inst.all_items()) + kTol);
      }
      ASSERT_NEAR(valuation(inst, t, ItemSet(s)), oracle::value(inst, t, s), kTol);
      for (std::uint64_t sup = s;; sup = (sup + 1) | s) {
        for (int i = 0; i < m; ++i) {
          ASSERT_LE(boost_factor(inst, i, ItemSet(s)), boost_factor(inst, i, ItemSet(sup)) + kTol);
        }
        ASSERT_LE(valuation(inst, t, ItemSet(s)), valuation(inst, t, ItemSet(sup)) + kTol);
        if (sup == n - 1) break;
      }
    }
  }
}

TEST(FullyBoostedTest, WorkedExample) {
  const Instance fb = fully_boosted(gen_numerical_example());
  EXPECT_TRUE(fb.is_additive());
  EXPECT_EQ(fb.boosts().num_layers(), 1);
  EXPECT_EQ(fb.marginal(0), DiscreteDistribution({{0.0, 0.5}, {4.0, 0.5}}));
  EXPECT_EQ(fb.marginal(1), DiscreteDistribution({{0.0, 0.5}, {8.0, 0.5}}));
  EXPECT_EQ(fb.marginal(2), DiscreteDistribution({{0.0, 0.5}, {4.0, 0.5}}));
  EXPECT_EQ(fb.marginal(3), DiscreteDistribution({{0.0, 0.5}, {8.0, 0.5}}));
}

TEST(FullyBoostedTest, AdditiveIsUnchangedAndIdempotent) {
  RandomParams p;
  p.m = 3;
  p.edge_density = 0.0;
  const Instance additive = gen_random(p);
  EXPECT_EQ(fully_boosted(additive), additive);
  const Instance inst = random_instance(9, 4, 2, 2);
  EXPECT_EQ(fully_boosted(fully_boosted(inst)), fully_boosted(inst));
}

TEST(FullyBoostedTest, LowerBoundFamily) {
  const int n = 6;
  const Instance fb = fully_boosted(gen_lb_standard(n));
  for (int i = 1; i < n; ++i) {
    EXPECT_NEAR(fb.marginal(i).atoms().back().value, (1.0 + n) * std::ldexp(1.0, i + 1), kTol);
  }
  EXPECT_NEAR(fb.marginal(0).atoms().back().value, 2.0, kTol);
}

TEST(ProfilesTest, Enumeration) {
  const auto ex = enumerate_profiles(gen_numerical_example());
  ASSERT_EQ(ex.size(), 16U);
  for (const auto& w : ex) EXPECT_DOUBLE_EQ(w.prob, 1.0 / 16);

  const Instance single(BoostStructure(1, 1, {}), {DiscreteDistribution::point_mass(3.0)});
  const auto one = enumerate_profiles(single);
  ASSERT_EQ(one.size(), 1U);
  EXPECT_DOUBLE_EQ(one[0].prob, 1.0);

  const Instance pair(BoostStructure(2, 1, {}), {DiscreteDistribution({{0, 0.5}, {1, 0.5}}),
                                                 DiscreteDistribution({{0, 0.2}, {1, 0.3}, {2, 0.5}})});
  const auto six = enumerate_profiles(pair);
  EXPECT_EQ(six.size(), 6U);
  double total = 0.0;
  for (const auto& w : six) total += w.prob;
  EXPECT_NEAR(total, 1.0, kTol);
  EXPECT_THROW(enumerate_profiles(pair, 5), CapExceeded);
}

TEST(ProfilesTest, MatchesOracleOrderFree) {
  const Instance inst = random_instance(4, 3, 1, 1);
  auto mine = enumerate_profiles(inst);
  auto ref = oracle::profiles(inst);
  ASSERT_EQ(mine.size(), ref.size());
  double a = 0.0, b = 0.0;
  for (const auto& w : mine) a += w.prob * (w.type[0] + 10 * w.type[1] + 100 * w.type[2]);
  for (const auto& r : ref) b += r.p * (r.t[0] + 10 * r.t[1] + 100 * r.t[2]);
  EXPECT_NEAR(a, b, kTol);
}

TEST(SampleProfileTest, FrequenciesMatchMarginals) {
  const Instance inst(BoostStructure(1, 1, {}), {DiscreteDistribution({{0, 0.2}, {1, 0.3}, {2, 0.5}})});
  Rng rng = make_stream(11);
  std::vector<double> t;
  std::vector<int> counts(3, 0);
  const int n = 200000;
  for (int s = 0; s < n; ++s) {
    sample_profile(inst, rng, t);
    ++counts[static_cast<std::size_t>(t[0])];
  }
  EXPECT_NEAR(counts[0] / double(n), 0.2, 0.005);
  EXPECT_NEAR(counts[1] / double(n), 0.3, 0.005);
  EXPECT_NEAR(counts[2] / double(n), 0.5, 0.005);
}

}  // namespace
}  // namespace complements
