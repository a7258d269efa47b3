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

// Pricing mechanisms and their revenue:
//  - selling separately at monopoly reserves,
//  - grand bundling,
//  - SEPARATE/FREE: give a free set away, price the rest at reserve times
//    the boost the free set gives them,
//  - bundle pricing with proxy revenue.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "complements/buyer.hpp"
#include "complements/errors.hpp"
#include "complements/model.hpp"
#include "complements/parallel.hpp"
#include "complements/rng.hpp"

namespace complements {

struct ReserveResult {
  double reserve = 0.0;
  double revenue = 0.0;
  double sale_probability = 0.0;
};

namespace detail {

inline bool same_money(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

// Sorts atoms by value and merges values that agree up to rounding.
inline std::vector<Atom> merge_atoms(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.value < b.value; });
  std::vector<Atom> out;
  for (const Atom& a : atoms) {
    if (!out.empty() && same_money(out.back().value, a.value)) {
      out.back().prob += a.prob;
    } else {
      out.push_back(a);
    }
  }
  return out;
}

// Reserve over ascending, merged atoms; smallest price among ties.
inline ReserveResult reserve_of_sorted(std::span<const Atom> atoms) {
  if (atoms.empty()) throw std::invalid_argument("reserve of an empty distribution");
  std::vector<double> survival(atoms.size() + 1, 0.0);
  for (std::size_t k = atoms.size(); k-- > 0;) survival[k] = survival[k + 1] + atoms[k].prob;
  ReserveResult best{atoms[0].value, atoms[0].value * survival[0], survival[0]};
  for (std::size_t k = 1; k < atoms.size(); ++k) {
    const double rev = atoms[k].value * survival[k];
    if (rev > best.revenue && !same_money(rev, best.revenue)) best = {atoms[k].value, rev, survival[k]};
  }
  return best;
}

}  // namespace detail

// Revenue-maximizing posted price for one distribution, restricted to support
// values.
inline ReserveResult monopoly_reserve(const DiscreteDistribution& dist) {
  return detail::reserve_of_sorted(dist.atoms());
}

// Sum of per-marginal monopoly revenues; boosts are ignored.
inline double srev_additive(const Instance& inst) {
  double total = 0.0;
  for (const auto& d : inst.marginals()) total += monopoly_reserve(d).revenue;
  return total;
}

struct MonteCarlo {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

struct EvalMode {
  bool exact = true;
  MonteCarlo mc;
  std::uint64_t profile_cap = kDefaultProfileCap;

  static EvalMode Exact(std::uint64_t cap = kDefaultProfileCap) { return {true, {}, cap}; }
  static EvalMode Sampled(std::uint64_t samples, std::uint64_t seed, unsigned jobs = 1) {
    return {false, {samples, seed, jobs}, kDefaultProfileCap};
  }
};

struct RevenueReport {
  std::string mechanism;
  double revenue = 0.0;
  bool exact = true;
  std::uint64_t samples = 0;  // Monte Carlo only
  std::uint64_t seed = 0;     // Monte Carlo only
  std::optional<double> std_error;
};

namespace detail {

// Fixed chunking makes the estimate independent of the worker count.
inline constexpr std::size_t kMonteCarloChunks = 64;

// Mean and standard error of sample_fn(rng) over `mc.samples` draws.
template <typename SampleFn>
std::pair<double, double> monte_carlo_mean(const MonteCarlo& mc, SampleFn&& sample_fn) {
  if (mc.samples < 2) throw std::invalid_argument("Monte Carlo needs at least 2 samples");
  std::vector<double> sums(kMonteCarloChunks, 0.0), squares(kMonteCarloChunks, 0.0);
  parallel_for(kMonteCarloChunks, mc.jobs, [&](std::size_t chunk) {
    const std::uint64_t begin = mc.samples * chunk / kMonteCarloChunks;
    const std::uint64_t end = mc.samples * (chunk + 1) / kMonteCarloChunks;
    Rng rng = make_stream(mc.seed, chunk);
    double s = 0.0, q = 0.0;
    for (std::uint64_t n = begin; n < end; ++n) {
      const double x = sample_fn(rng);
      s += x;
      q += x * x;
    }
    sums[chunk] = s;
    squares[chunk] = q;
  });
  double s = 0.0, q = 0.0;
  for (std::size_t c = 0; c < kMonteCarloChunks; ++c) {
    s += sums[c];
    q += squares[c];
  }
  const auto n = static_cast<double>(mc.samples);
  const double mean = s / n;
  const double var = std::max(0.0, (q - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

}  // namespace detail

struct GrandBundle {
  RevenueReport report;
  double price = 0.0;
  double sale_probability = 0.0;
};

// Grand bundling at the monopoly reserve of v(t, [m]). Exact when the profile
// count fits the cap; otherwise the reserve is taken on an empirical sample.
inline GrandBundle brev(const Instance& inst, const EvalMode& mode = EvalMode::Exact()) {
  const BoostTable table(inst);
  const ItemSet all = inst.all_items();
  std::vector<double> eta(static_cast<std::size_t>(inst.num_items()));
  for (int i = 0; i < inst.num_items(); ++i) eta[static_cast<std::size_t>(i)] = table.eta(i, all);
  const auto bundle_value = [&](std::span<const double> t) {
    double v = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) v += eta[i] * t[i];
    return v;
  };

  GrandBundle out;
  out.report.mechanism = "bundle";
  if (mode.exact && inst.profile_count(mode.profile_cap) <= mode.profile_cap) {
    std::vector<Atom> values;
    for_each_profile(inst, mode.profile_cap, [&](std::span<const double> t, double p) {
      values.push_back({bundle_value(t), p});
    });
    const auto merged = detail::merge_atoms(std::move(values));
    const ReserveResult r = detail::reserve_of_sorted(merged);
    out.price = r.reserve;
    out.sale_probability = r.sale_probability;
    out.report.revenue = r.revenue;
    return out;
  }

  const MonteCarlo& mc = mode.mc;
  if (mc.samples < 2) throw std::invalid_argument("Monte Carlo needs at least 2 samples");
  std::vector<Atom> values;
  values.reserve(mc.samples);
  std::vector<std::vector<double>> chunk_values(detail::kMonteCarloChunks);
  parallel_for(detail::kMonteCarloChunks, mc.jobs, [&](std::size_t chunk) {
    const std::uint64_t begin = mc.samples * chunk / detail::kMonteCarloChunks;
    const std::uint64_t end = mc.samples * (chunk + 1) / detail::kMonteCarloChunks;
    Rng rng = make_stream(mc.seed, chunk);
    std::vector<double> t;
    for (std::uint64_t n = begin; n < end; ++n) {
      sample_profile(inst, rng, t);
      chunk_values[chunk].push_back(bundle_value(t));
    }
  });
  const double w = 1.0 / static_cast<double>(mc.samples);
  for (const auto& cv : chunk_values) {
    for (double v : cv) values.push_back({v, w});
  }
  const auto merged = detail::merge_atoms(std::move(values));
  const ReserveResult r = detail::reserve_of_sorted(merged);
  out.price = r.reserve;
  out.sale_probability = r.sale_probability;
  out.report.revenue = r.revenue;
  out.report.exact = false;
  out.report.samples = mc.samples;
  out.report.seed = mc.seed;
  const double q = r.sale_probability;
  out.report.std_error = r.reserve * std::sqrt(q * (1.0 - q) / static_cast<double>(mc.samples));
  return out;
}

struct FreeSetPartition {
  ItemSet free_set;
  PriceVector prices;
  // Sum over priced items of eta_i(free) * R_i.
  double lower_bound = 0.0;
};

inline FreeSetPartition separate_free(const Instance& inst, ItemSet free_set) {
  check_item_set(inst, free_set);
  FreeSetPartition out;
  out.free_set = free_set;
  out.prices.prices.assign(static_cast<std::size_t>(inst.num_items()), 0.0);
  for (int i = 0; i < inst.num_items(); ++i) {
    if (free_set.contains(i)) continue;
    const ReserveResult r = monopoly_reserve(inst.marginal(i));
    const double eta = inst.boosts().boost_factor(i, free_set);
    out.prices.prices[static_cast<std::size_t>(i)] = eta * r.reserve;
    out.lower_bound += eta * r.revenue;
  }
  return out;
}

// Expected payment of a utility-maximizing buyer facing item prices.
inline RevenueReport evaluate_revenue(const Instance& inst, const PriceVector& p, const EvalMode& mode = EvalMode::Exact(),
                                      std::string mechanism = "posted-prices") {
  p.validate(inst.num_items());
  const BoostTable table(inst);
  RevenueReport out;
  out.mechanism = std::move(mechanism);
  if (mode.exact) {
    double revenue = 0.0;
    for_each_profile(inst, mode.profile_cap, [&](std::span<const double> t, double prob) {
      revenue += prob * best_response_items(table, p, t).payment;
    });
    out.revenue = revenue;
    return out;
  }
  auto [mean, se] = detail::monte_carlo_mean(mode.mc, [&](Rng& rng) {
    thread_local std::vector<double> t;
    sample_profile(inst, rng, t);
    return best_response_items(table, p, t).payment;
  });
  out.revenue = mean;
  out.exact = false;
  out.samples = mode.mc.samples;
  out.seed = mode.mc.seed;
  out.std_error = se;
  return out;
}

// Distribution of sum_{i in B} eta_i(B + free) * t_i over the bundle's own
// marginals, sorted and merged.
inline std::vector<Atom> bundle_proxy_distribution(const Instance& inst, ItemSet bundle, ItemSet free_set,
                                                   std::uint64_t cap = kDefaultProfileCap) {
  const ItemSet held = bundle | free_set;
  std::vector<std::pair<int, double>> eta;
  for (int i : bundle.items()) eta.emplace_back(i, inst.boosts().boost_factor(i, held));
  std::vector<Atom> values;
  for_each_profile(inst, bundle, cap, [&](std::span<const double> t, double prob) {
    double v = 0.0;
    for (auto [i, e] : eta) v += e * t[static_cast<std::size_t>(i)];
    values.push_back({v, prob});
  });
  return detail::merge_atoms(std::move(values));
}

// Prices each bundle at the monopoly reserve of its proxy value.
inline BundleMenu bundle_pricing(const Instance& inst, ItemSet free_set, std::vector<ItemSet> bundles,
                                 std::uint64_t cap = kDefaultProfileCap) {
  BundleMenu menu;
  menu.free_set = free_set;
  menu.bundles = std::move(bundles);
  menu.prices.assign(menu.bundles.size(), 0.0);
  menu.validate(inst.num_items());
  for (std::size_t j = 0; j < menu.bundles.size(); ++j) {
    const auto dist = bundle_proxy_distribution(inst, menu.bundles[j], free_set, cap);
    menu.prices[j] = detail::reserve_of_sorted(dist).reserve;
  }
  return menu;
}

// q_j * Pr[proxy value of B_j >= q_j], one entry per bundle.
inline std::vector<double> proxy_revenue_by_bundle(const Instance& inst, const BundleMenu& menu,
                                                   std::uint64_t cap = kDefaultProfileCap) {
  menu.validate(inst.num_items());
  std::vector<double> out;
  out.reserve(menu.bundles.size());
  for (std::size_t j = 0; j < menu.bundles.size(); ++j) {
    const double q = menu.prices[j];
    double sold = 0.0;
    for (const Atom& a : bundle_proxy_distribution(inst, menu.bundles[j], menu.free_set, cap)) {
      if (a.value >= q || detail::same_money(a.value, q)) sold += a.prob;
    }
    out.push_back(q * sold);
  }
  return out;
}

// Revenue undercount that sells every bundle independently on its proxy value.
inline double proxy_revenue(const Instance& inst, const BundleMenu& menu, std::uint64_t cap = kDefaultProfileCap) {
  double total = 0.0;
  for (double r : proxy_revenue_by_bundle(inst, menu, cap)) total += r;
  return total;
}

// Expected payment when the buyer picks bundles on the full valuation.
inline RevenueReport evaluate_menu_revenue(const Instance& inst, const BundleMenu& menu,
                                           const EvalMode& mode = EvalMode::Exact()) {
  menu.validate(inst.num_items());
  const BoostTable table(inst);
  RevenueReport out;
  out.mechanism = "bundle-pricing";
  if (mode.exact) {
    double revenue = 0.0;
    for_each_profile(inst, mode.profile_cap, [&](std::span<const double> t, double prob) {
      revenue += prob * best_response_bundles(table, menu, t).payment;
    });
    out.revenue = revenue;
    return out;
  }
  auto [mean, se] = detail::monte_carlo_mean(mode.mc, [&](Rng& rng) {
    thread_local std::vector<double> t;
    sample_profile(inst, rng, t);
    return best_response_bundles(table, menu, t).payment;
  });
  out.revenue = mean;
  out.exact = false;
  out.samples = mode.mc.samples;
  out.seed = mode.mc.seed;
  out.std_error = se;
  return out;
}

struct BestFreeSet {
  ItemSet free_set;
  double revenue = 0.0;
};

// Exact SEPARATE/FREE revenue maximized over all 2^m free sets; ties go to the
// lexicographically smallest set.
inline BestFreeSet best_separate_free(const Instance& inst, const EvalMode& mode = EvalMode::Exact()) {
  if (inst.num_items() > kMaxExhaustiveItems) throw CapExceeded("free-set enumeration limited to 24 items");
  BestFreeSet best{ItemSet(), -1.0};
  const std::uint64_t subsets = std::uint64_t{1} << inst.num_items();
  for (std::uint64_t s = 0; s < subsets; ++s) {
    const ItemSet f(s);
    const double rev = evaluate_revenue(inst, separate_free(inst, f).prices, mode).revenue;
    if (rev > best.revenue + kMoneyTol || (std::abs(rev - best.revenue) <= kMoneyTol && lex_less(f, best.free_set))) {
      best = {f, rev};
    }
  }
  return best;
}

}  // namespace complements
