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

// Verification suites: golden constants of the worked example, scaling of the
// lower-bound families, and the approximation inequalities checked against the
// LP oracle on seeded batches of small instances.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "complements/additive_bounds.hpp"
#include "complements/check.hpp"
#include "complements/dicut.hpp"
#include "complements/instances.hpp"
#include "complements/mechanisms.hpp"
#include "complements/model.hpp"
#include "complements/opt.hpp"
#include "complements/parallel.hpp"
#include "complements/rng.hpp"

namespace complements {

struct VerifyParams {
  std::optional<std::size_t> trials;  // batch size; suite default when unset
  std::uint64_t seed = 1;
  std::optional<double> a;            // additive-bounds: a single a instead of {1, cbrt 4}
  unsigned jobs = 1;
};

struct SuiteResult {
  std::string suite;
  std::size_t instances = 0;
  std::vector<Check> checks;
  double seconds = 0.0;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }
  std::size_t failures() const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.passed; }));
  }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"numerical-example", "lb-standard",      "hypergraph-lb",
                                                 "boost-dominance",   "pairwise-ratio",   "hypergraph-ratio",
                                                 "additive-bounds",   "cut-expectations"};
  return names;
}

// ---- Batch instance sources -------------------------------------------------

namespace detail {

inline std::uint64_t instance_seed(std::uint64_t seed, std::uint64_t salt, std::size_t idx) {
  Rng rng = make_stream(seed ^ mix64(salt), idx);
  return rng();
}

inline std::string tag(std::size_t idx) { return "[" + std::to_string(idx) + "] "; }

}  // namespace detail

// m in 2..6, up to 2 layers, source sets up to size 3.
inline Instance cut_batch_instance(std::uint64_t seed, std::size_t idx) {
  Rng rng = make_stream(detail::instance_seed(seed, 3, idx));
  RandomParams p;
  p.m = 2 + static_cast<int>(uniform_index(rng, 5));
  p.layers = 1 + static_cast<int>(uniform_index(rng, 2));
  p.min_support = 1;
  p.max_support = 3;
  p.edge_density = 0.35;
  p.max_rank = idx % 3 == 0 ? 1 : std::min(p.m - 1, 1 + static_cast<int>(uniform_index(rng, 3)));
  p.seed = rng();
  return gen_random(p);
}

// Two items, supports up to 3, up to 2 layers.
inline Instance pair_batch_instance(std::uint64_t seed, std::size_t idx) {
  RandomParams p;
  p.m = 2;
  p.layers = 1 + static_cast<int>(idx % 2);
  p.min_support = 1;
  p.max_support = 3;
  p.edge_density = 0.6;
  p.boost_scale = 2.0;
  p.seed = detail::instance_seed(seed, 42, idx);
  return gen_random(p);
}

// Three items with rank exactly 1 (even idx) or 2 (odd idx).
inline Instance hypergraph_batch_instance(std::uint64_t seed, std::size_t idx) {
  const int k = 1 + static_cast<int>(idx % 2);
  for (std::uint64_t attempt = 0;; ++attempt) {
    RandomParams p;
    p.m = 3;
    p.layers = 1 + static_cast<int>((idx / 2) % 2);
    p.min_support = 1;
    p.max_support = 3;
    p.edge_density = 0.4;
    p.boost_scale = 2.0;
    p.max_rank = k;
    p.seed = detail::instance_seed(seed, 51 + attempt * 1000, idx);
    Instance inst = gen_random(p);
    if (inst.boosts().directed_positive_rank() == k) return inst;
  }
}

// Additive, m in 1..3, supports up to 4.
inline Instance additive_batch_instance(std::uint64_t seed, std::size_t idx) {
  Rng rng = make_stream(detail::instance_seed(seed, 7, idx));
  RandomParams p;
  p.m = 1 + static_cast<int>(uniform_index(rng, 3));
  p.min_support = 1;
  p.max_support = 4;
  p.edge_density = 0.0;
  p.seed = rng();
  return gen_random(p);
}

// ---- Suites -----------------------------------------------------------------

inline SuiteResult verify_numerical_example() {
  SuiteResult out{"numerical-example", 1, {}, 0.0};
  auto& c = out.checks;
  const Instance inst = gen_numerical_example();
  const double expect_reserve[] = {2, 4, 2, 4};
  const double expect_revenue[] = {1, 2, 1, 2};
  for (int i = 0; i < 4; ++i) {
    const ReserveResult r = monopoly_reserve(inst.marginal(i));
    const std::string item = std::to_string(i + 1);
    c.push_back(Check::eq("reserve of item " + item, r.reserve, expect_reserve[i], 1e-9));
    c.push_back(Check::eq("reserve revenue of item " + item, r.revenue, expect_revenue[i], 1e-9));
  }
  c.push_back(Check::eq("sum of reserve revenues", srev_additive(inst), 6.0, 1e-9));
  const CutGraph g = build_graph(inst);
  const DicutResult cut = exact_max_dicut(g);
  c.push_back(Check::eq("max dicut free set is {1,3} (bitmask)", static_cast<double>(cut.free_set.bits()),
                        static_cast<double>(ItemSet::of({0, 2}).bits()), 0.0));
  c.push_back(Check::eq("max dicut weight", cut.weight, 8.0, 1e-9));
  const FreeSetPartition sf = separate_free(inst, ItemSet::of({0, 2}));
  c.push_back(Check::eq("SEPARATE/FREE({1,3}) price of item 2", sf.prices.prices[1], 8.0, 1e-9));
  c.push_back(Check::eq("SEPARATE/FREE({1,3}) price of item 4", sf.prices.prices[3], 8.0, 1e-9));
  c.push_back(Check::eq("SEPARATE/FREE({1,3}) exact revenue", evaluate_revenue(inst, sf.prices).revenue, 8.0, 1e-9));
  const GrandBundle b = brev(inst);
  c.push_back(Check::eq("grand bundle price", b.price, 12.0, 1e-9));
  c.push_back(Check::eq("grand bundle revenue", b.report.revenue, 7.5, 1e-9));
  c.push_back(Check::eq("pairwise expected cut weight", expected_cut_weight(g, FreeSetConstruction::pairwise()), 4.5,
                        1e-9));
  return out;
}

inline SuiteResult verify_lb_standard(const std::vector<int>& sizes = {6, 8, 10, 12}) {
  SuiteResult out{"lb-standard", sizes.size(), {}, 0.0};
  auto& c = out.checks;
  std::optional<double> prev_ratio;
  for (int n : sizes) {
    const Instance inst = gen_lb_standard(n);
    const std::string at = "n=" + std::to_string(n) + ": ";
    const double srev = srev_additive(inst);
    c.push_back(Check::eq(at + "sum of reserve revenues == n", srev, n, 1e-9));
    const double sf = evaluate_revenue(inst, separate_free(inst, ItemSet::singleton(0)).prices).revenue;
    c.push_back(Check::ge(at + "SEPARATE/FREE({1}) >= n^2 - 1", sf, n * n - 1.0, 1e-9));
    const double ratio = sf / std::max(srev, brev(inst).report.revenue);
    c.push_back(Check::ge(at + "SEPARATE/FREE({1}) / max(SREV, BREV) >= n/4", ratio, n / 4.0, 1e-9));
    if (prev_ratio) c.push_back(Check::lt(at + "ratio strictly above previous n", *prev_ratio, ratio));
    prev_ratio = ratio;
  }
  return out;
}

inline SuiteResult verify_hypergraph_lb(int m = 6, int k = 2) {
  SuiteResult out{"hypergraph-lb", 1, {}, 0.0};
  auto& c = out.checks;
  const Instance inst = gen_hypergraph_lb(m, k);
  const ItemSet all = inst.all_items();
  const double cval = m / (2.0 * binomial(m - 1, k));
  for (int i = 0; i < m; ++i) {
    c.push_back(Check::eq("eta_" + std::to_string(i + 1) + "([m]) == 1 + m/2", inst.boosts().boost_factor(i, all),
                          1.0 + m / 2.0, 1e-9));
  }
  c.push_back(Check::eq("directed positive rank == k", inst.boosts().directed_positive_rank(), k, 0.0));
  c.push_back(Check::eq("max out-degree == (m-1) C(m-2, k-1)", inst.boosts().max_out_degree(),
                        (m - 1) * binomial(m - 2, k - 1), 0.0));

  // Rank construction: every item free with probability 1 - 1/(2k); priced
  // items are singleton bundles.
  const double q = 1.0 - 1.0 / (2.0 * k);
  const std::uint64_t subsets = std::uint64_t{1} << m;
  double expected = 0.0;
  for (std::uint64_t s = 0; s < subsets; ++s) {
    const ItemSet f(s);
    const double prob = std::pow(q, f.size()) * std::pow(1.0 - q, m - f.size());
    std::vector<ItemSet> bundles;
    for (int i : (all - f).items()) bundles.push_back(ItemSet::singleton(i));
    expected += prob * proxy_revenue(inst, bundle_pricing(inst, f, bundles));
  }
  c.push_back(Check::ge("rank-sampler expected proxy revenue >= (1 + m/2) m / (4k)", expected,
                        (1.0 + m / 2.0) * m / (4.0 * k), 1e-9));

  // Every disjoint (bundle, free set) pair covers every bundle of every
  // partition.
  std::size_t violations = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  Check worst;
  for (std::uint64_t b = 1; b < subsets; ++b) {
    const ItemSet bundle(b);
    const std::uint64_t rest = (all - bundle).bits();
    for (std::uint64_t f = rest;; f = (f - 1) & rest) {
      const ItemSet free_set(f);
      const BundleMenu menu = bundle_pricing(inst, free_set, {bundle});
      const double rev = proxy_revenue(inst, menu);
      const double bound =
          4.0 * (1.0 + (binomial(bundle.size() - 1, k) + binomial(free_set.size(), k)) * cval);
      const Check one = Check::le("bundle " + to_string(bundle) + " free " + to_string(free_set) +
                                      ": proxy revenue <= 4 (1 + (C(|B|-1,k) + C(|F|,k)) c)",
                                  rev, bound, 1e-9);
      if (!one.passed) {
        ++violations;
        c.push_back(one);
      }
      if (one.margin < worst_margin) {
        worst_margin = one.margin;
        worst = one;
      }
      if (f == 0) break;
    }
  }
  if (violations == 0) {
    worst.label = "tightest bundle bound: " + worst.label;
    c.push_back(worst);
  }
  return out;
}

namespace detail {

template <typename Gen, typename Body>
SuiteResult run_batch(std::string name, std::size_t count, const VerifyParams& p, Gen&& gen, Body&& body) {
  SuiteResult out{std::move(name), count, {}, 0.0};
  std::vector<std::vector<Check>> slots(count);
  parallel_for(count, p.jobs, [&](std::size_t idx) { slots[idx] = body(idx, gen(p.seed, idx)); });
  for (auto& s : slots) {
    for (auto& ch : s) out.checks.push_back(std::move(ch));
  }
  return out;
}

inline int clamp1(int v) { return std::max(1, v); }

}  // namespace detail

inline SuiteResult verify_boost_dominance(const VerifyParams& p = {}) {
  return detail::run_batch("boost-dominance", p.trials.value_or(50), p, pair_batch_instance,
                           [](std::size_t idx, const Instance& inst) {
                             const double opt = solve_opt(inst).opt_revenue;
                             const double boosted = solve_opt(fully_boosted(inst)).opt_revenue;
                             return std::vector<Check>{
                                 Check::le(detail::tag(idx) + "OPT <= OPT(fully boosted)", opt, boosted, 1e-6)};
                           });
}

inline SuiteResult verify_pairwise_ratio(const VerifyParams& p = {}) {
  return detail::run_batch("pairwise-ratio", p.trials.value_or(50), p, pair_batch_instance,
                           [](std::size_t idx, const Instance& inst) {
                             std::vector<Check> out;
                             if (inst.boosts().directed_positive_rank() > 1) return out;
                             const double opt = solve_opt(inst).opt_revenue;
                             const double simple =
                                 std::max(brev(inst).report.revenue, best_separate_free(inst).revenue);
                             out.push_back(Check::le(detail::tag(idx) + "OPT <= 12 max(BREV, best SEPARATE/FREE)", opt,
                                                     12.0 * simple, 1e-6));
                             return out;
                           });
}

inline SuiteResult verify_hypergraph_ratio(const VerifyParams& p = {}) {
  return detail::run_batch(
      "hypergraph-ratio", p.trials.value_or(40), p, hypergraph_batch_instance, [](std::size_t idx, const Instance& inst) {
        const int k = detail::clamp1(inst.boosts().directed_positive_rank());
        const int d = detail::clamp1(inst.boosts().max_out_degree());
        const double coef = 8.0 * std::min(d, k) + 4.0;
        const double opt = solve_opt(inst).opt_revenue;
        const double simple = std::max(brev(inst).report.revenue, best_separate_free(inst).revenue);
        return std::vector<Check>{Check::le(detail::tag(idx) + "OPT <= (8 min(d,k) + 4) max(BREV, best SEPARATE/FREE)"
                                            " with k=" + std::to_string(k) + ", d=" + std::to_string(d),
                                            opt, coef * simple, 1e-6)};
      });
}

inline SuiteResult verify_additive_bounds(const VerifyParams& p = {}) {
  std::vector<double> as;
  if (p.a) {
    as.push_back(*p.a);
  } else {
    as = {1.0, std::cbrt(4.0)};
  }
  return detail::run_batch(
      "additive-bounds", p.trials.value_or(50), p, additive_batch_instance, [&as](std::size_t idx, const Instance& inst) {
        std::vector<Check> out;
        const std::string tag = detail::tag(idx);
        const Decomposition d = decompose(inst);
        const double b = brev(inst).report.revenue;
        const double srev = srev_additive(inst);
        const double opt = solve_opt(inst).opt_revenue;
        const auto add = [&](Check ch, const std::string& suffix = "") {
          ch.label = tag + ch.label + suffix;
          out.push_back(std::move(ch));
        };
        add(check_tail_brev(d, b));
        bool variance_done = false;
        for (double a : as) {
          char buf[32];
          std::snprintf(buf, sizeof buf, " (a=%.6g)", a);
          const CantelliDiagnostics cd = check_variance_and_cantelli(d, a);
          if (!variance_done) {
            add(cd.variance);
            variance_done = true;
          }
          add(cd.cantelli_unscaled, buf);
          add(cd.cantelli, buf);
          add(cd.coarse, buf);
          for (Check& ch : check_additive_opt_bound(opt, b, srev, a)) add(std::move(ch), buf);
        }
        return out;
      });
}

inline SuiteResult verify_cut_expectations(const VerifyParams& p = {}) {
  return detail::run_batch(
      "cut-expectations", p.trials.value_or(100), p, cut_batch_instance, [](std::size_t idx, const Instance& inst) {
        std::vector<Check> out;
        const std::string tag = detail::tag(idx);
        const CutGraph g = build_graph(inst);
        const ItemSet all = inst.all_items();
        double total = 0.0;
        for (int i = 0; i < inst.num_items(); ++i) {
          total += inst.boosts().boost_factor(i, all) * g.source_weights[static_cast<std::size_t>(i)];
        }
        const int k = detail::clamp1(inst.boosts().directed_positive_rank());
        const int d = detail::clamp1(inst.boosts().max_out_degree());
        const double best = exact_max_dicut(g).weight;
        const auto check_sampler = [&](const std::string& name, const FreeSetConstruction& c, double coef) {
          const double e = expected_cut_weight(g, c);
          out.push_back(Check::ge(tag + name + " expected cut >= sum eta R / " + std::to_string(static_cast<int>(coef)),
                                  e, total / coef, 1e-9));
          out.push_back(Check::ge(tag + "max dicut >= " + name + " expected cut", best, e, 1e-9));
        };
        if (inst.boosts().directed_positive_rank() <= 1) check_sampler("pairwise", FreeSetConstruction::pairwise(), 4.0);
        check_sampler("rank", FreeSetConstruction::rank(k), 4.0 * k);
        check_sampler("degree", FreeSetConstruction::degree(d), 4.0 * d);
        return out;
      });
}

inline SuiteResult run_suite(const std::string& name, const VerifyParams& p = {}) {
  const auto start = std::chrono::steady_clock::now();
  SuiteResult r;
  if (name == "numerical-example") {
    r = verify_numerical_example();
  } else if (name == "lb-standard") {
    r = verify_lb_standard();
  } else if (name == "hypergraph-lb") {
    r = verify_hypergraph_lb();
  } else if (name == "boost-dominance") {
    r = verify_boost_dominance(p);
  } else if (name == "pairwise-ratio") {
    r = verify_pairwise_ratio(p);
  } else if (name == "hypergraph-ratio") {
    r = verify_hypergraph_ratio(p);
  } else if (name == "additive-bounds") {
    r = verify_additive_bounds(p);
  } else if (name == "cut-expectations") {
    r = verify_cut_expectations(p);
  } else {
    throw std::invalid_argument("unknown suite '" + name + "'");
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace complements
