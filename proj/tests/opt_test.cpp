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


#include "complements/opt.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "complements/instances.hpp"
#include "complements/mechanisms.hpp"

namespace complements {
namespace {

Instance single_item(std::vector<Atom> atoms) {
  return Instance(BoostStructure(1, 1, {}), {DiscreteDistribution(std::move(atoms))});
}

RandomParams reference_params(int m, std::uint64_t seed) {
  RandomParams p;
  p.m = m;
  p.layers = 2;
  p.min_support = 2;
  p.max_support = 3;
  p.edge_density = 0.5;
  p.max_rank = 2;
  p.seed = seed;
  return p;
}

TEST(MechanismLPTest, Counts) {
  const MechanismLP one(single_item({{0.0, 0.5}, {2.0, 0.5}}));
  EXPECT_EQ(one.num_profiles(), 2U);
  EXPECT_EQ(one.num_sets(), 2U);
  EXPECT_EQ(one.num_allocation_variables(), 4U);
  EXPECT_EQ(one.num_payment_variables(), 2U);
  EXPECT_EQ(one.num_ic_constraints(), 2U);
  EXPECT_EQ(one.num_ir_constraints(), 2U);
  const MechanismLP ex(gen_numerical_example());
  EXPECT_EQ(ex.num_allocation_variables(), 256U);
  EXPECT_EQ(ex.num_ic_constraints(), 240U);
  EXPECT_DOUBLE_EQ(ex.value(15, 15), valuation(gen_numerical_example(), ex.profiles()[15].type, ItemSet::full(4)));
}

TEST(MechanismLPTest, Caps) {
  EXPECT_THROW(MechanismLP(gen_lb_standard(17)), CapExceeded);
  EXPECT_THROW(MechanismLP(gen_lb_standard(16)), CapExceeded);
}

TEST(SolveOptTest, SingleItemIsTheMonopolyReserve) {
  const OptResult r = solve_opt(single_item({{0.0, 0.5}, {2.0, 0.5}}));
  EXPECT_NEAR(r.opt_revenue, 1.0, 1e-9);
  EXPECT_LE(r.max_residual, kLpFeasibilityTol);
  RandomParams p;
  p.m = 1;
  p.max_support = 5;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    p.seed = seed;
    const Instance inst = gen_random(p);
    // One item: no randomized mechanism beats the best posted price.
    EXPECT_NEAR(solve_opt(inst).opt_revenue, monopoly_reserve(inst.marginal(0)).revenue, 1e-9) << "seed " << seed;
  }
}

TEST(SolveOptTest, ZeroValues) {
  const OptResult r = solve_opt(single_item({{0.0, 1.0}}));
  EXPECT_NEAR(r.opt_revenue, 0.0, 1e-12);
}

TEST(SolveOptTest, ReferenceValues) {
  // Cross-checked against an independent LP solver (HiGHS) on the full LP.
  const std::vector<std::pair<RandomParams, double>> cases = {
      {reference_params(3, 100), 24.883998544446}, {reference_params(3, 101), 13.525635615390},
      {reference_params(3, 102), 19.796444114964}, {reference_params(2, 103), 8.404452690167},
      {reference_params(2, 104), 9.285714285714},  {reference_params(2, 105), 4.633333333333},
  };
  for (const auto& [params, want] : cases) {
    EXPECT_NEAR(solve_opt(gen_random(params)).opt_revenue, want, 1e-8) << "seed " << params.seed;
  }
  EXPECT_NEAR(solve_opt(gen_numerical_example()).opt_revenue, 9.770833333333, 1e-8);
}

TEST(SolveOptTest, DominatesSimpleMechanisms) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const Instance inst = gen_random(reference_params(2 + static_cast<int>(seed % 2), seed));
    const MechanismLP lp(inst);
    const OptResult r = solve_opt(lp);
    EXPECT_LE(r.max_residual, kLpFeasibilityTol);
    EXPECT_GE(r.min_payment, -1e-7);
    EXPECT_GE(r.opt_revenue, brev(inst).report.revenue - 1e-7);
    EXPECT_GE(r.opt_revenue, best_separate_free(inst).revenue - 1e-7);
    const Mechanism posted = encode_posted_prices(lp, inst, separate_free(inst, ItemSet::of({0})).prices);
    EXPECT_LE(feasibility_residual(lp, posted), 1e-12);
    EXPECT_GE(r.opt_revenue, expected_revenue(lp, posted) - 1e-7);
  }
}

TEST(SolveOptTest, AdditiveDominatesSrevAndBrev) {
  RandomParams p;
  p.m = 2;
  p.edge_density = 0.0;
  p.max_support = 3;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    p.seed = seed;
    const Instance inst = gen_random(p);
    const double opt = solve_opt(inst).opt_revenue;
    EXPECT_GE(opt, srev_additive(inst) - 1e-7);
    EXPECT_GE(opt, brev(inst).report.revenue - 1e-7);
  }
}

TEST(FeasibilityTest, DetectsViolations) {
  const MechanismLP lp(single_item({{0.0, 0.5}, {2.0, 0.5}}));
  // Charging 3 for a value-2 item breaks IR.
  const Mechanism bad = encode_mechanism(lp, [](std::span<const double> t) {
    return t[0] > 0 ? std::pair{ItemSet::of({0}), 3.0} : std::pair{ItemSet(), 0.0};
  });
  EXPECT_NEAR(feasibility_residual(lp, bad), 1.0, 1e-12);
  // Giving the item only to the low type breaks IC.
  const Mechanism swap = encode_mechanism(lp, [](std::span<const double> t) {
    return t[0] > 0 ? std::pair{ItemSet(), 0.0} : std::pair{ItemSet::of({0}), 0.0};
  });
  EXPECT_NEAR(feasibility_residual(lp, swap), 2.0, 1e-12);
  EXPECT_NEAR(expected_revenue(lp, bad), 1.5, 1e-12);
}

}  // namespace
}  // namespace complements
