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

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "complements/errors.hpp"
#include "complements/model.hpp"

namespace complements {

// Posted item prices; 0 marks a free item.
struct PriceVector {
  std::vector<double> prices;

  double operator[](std::size_t i) const { return prices[i]; }
  std::size_t size() const { return prices.size(); }

  void validate(int m) const {
    if (static_cast<int>(prices.size()) != m) throw std::invalid_argument("price vector has wrong length");
    for (double p : prices) {
      if (!std::isfinite(p) || p < 0.0) throw std::invalid_argument("prices must be finite and nonnegative");
    }
  }
};

// Disjoint priced bundles plus a free set handed over unconditionally.
struct BundleMenu {
  std::vector<ItemSet> bundles;
  std::vector<double> prices;
  ItemSet free_set;

  void validate(int m) const {
    const ItemSet all = ItemSet::full(m);
    if (bundles.size() != prices.size()) throw std::invalid_argument("menu needs one price per bundle");
    if (!free_set.subset_of(all)) throw std::invalid_argument("free set references unknown items");
    ItemSet used = free_set;
    for (std::size_t j = 0; j < bundles.size(); ++j) {
      const std::string where = "bundle " + std::to_string(j + 1);
      if (bundles[j].empty()) throw std::invalid_argument(where + " is empty");
      if (!bundles[j].subset_of(all)) throw std::invalid_argument(where + " references unknown items");
      if (bundles[j].intersects(used)) throw std::invalid_argument(where + " overlaps another bundle or the free set");
      if (!std::isfinite(prices[j]) || prices[j] < 0.0) throw std::invalid_argument(where + " has a negative price");
      used = used | bundles[j];
    }
  }
};

inline constexpr int kMaxExhaustiveItems = 24;
inline constexpr int kMaxMenuBundles = 20;

struct Purchase {
  ItemSet items;  // for bundle menus: the chosen bundle indices
  double utility = 0.0;
  double payment = 0.0;
};

namespace detail {

inline bool close(double a, double b) { return std::abs(a - b) <= kMoneyTol * std::max({1.0, std::abs(a), std::abs(b)}); }

// Utility first, then larger payment, then the lexicographically smaller set.
inline bool prefer(const Purchase& a, const Purchase& b) {
  if (!close(a.utility, b.utility)) return a.utility > b.utility;
  if (!close(a.payment, b.payment)) return a.payment > b.payment;
  return lex_less(a.items, b.items);
}

}  // namespace detail

// Utility-maximizing item set at posted prices. Zero-priced items are always
// taken: values are monotone, so restricting the search to supersets of the
// free items loses nothing.
inline Purchase best_response_items(const BoostTable& table, const PriceVector& p, std::span<const double> t) {
  const int m = table.num_items();
  if (m > kMaxExhaustiveItems) {
    throw CapExceeded("exhaustive demand search supports at most " + std::to_string(kMaxExhaustiveItems) + " items");
  }
  std::uint64_t zero = 0;
  for (int i = 0; i < m; ++i) {
    if (p[static_cast<std::size_t>(i)] == 0.0) zero |= std::uint64_t{1} << i;
  }
  const std::uint64_t priced_bits = ItemSet::full(m).bits() & ~zero;
  Purchase best{ItemSet(zero), table.value(t, ItemSet(zero)), 0.0};
  // Enumerate subsets of the priced items.
  for (std::uint64_t sub = priced_bits; sub != 0; sub = (sub - 1) & priced_bits) {
    const ItemSet s(sub | zero);
    double pay = 0.0;
    for (std::uint64_t b = sub; b != 0; b &= b - 1) pay += p[static_cast<std::size_t>(std::countr_zero(b))];
    Purchase cand{s, table.value(t, s) - pay, pay};
    if (detail::prefer(cand, best)) best = cand;
  }
  return best;
}

inline Purchase best_response_items(const Instance& inst, const PriceVector& p, const TypeProfile& t) {
  p.validate(inst.num_items());
  if (static_cast<int>(t.size()) != inst.num_items()) throw std::invalid_argument("type profile has wrong length");
  const BoostTable table(inst);
  return best_response_items(table, p, t.values);
}

// Chooses which bundles to buy; the free set is always received. The result's
// `items` field holds bundle indices.
inline Purchase best_response_bundles(const BoostTable& table, const BundleMenu& menu, std::span<const double> t,
                                      ItemSet* received = nullptr) {
  const std::size_t y = menu.bundles.size();
  if (y > static_cast<std::size_t>(kMaxMenuBundles)) {
    throw CapExceeded("exhaustive bundle search supports at most " + std::to_string(kMaxMenuBundles) + " bundles");
  }
  std::uint64_t zero = 0;
  for (std::size_t j = 0; j < y; ++j) {
    if (menu.prices[j] == 0.0) zero |= std::uint64_t{1} << j;
  }
  const std::uint64_t all = y == 0 ? 0 : (std::uint64_t{1} << y) - 1;
  const std::uint64_t priced = all & ~zero;
  const auto evaluate = [&](std::uint64_t chosen) {
    ItemSet got = menu.free_set;
    double pay = 0.0;
    for (std::uint64_t b = chosen; b != 0; b &= b - 1) {
      const auto j = static_cast<std::size_t>(std::countr_zero(b));
      got = got | menu.bundles[j];
      pay += menu.prices[j];
    }
    return std::pair{Purchase{ItemSet(chosen), table.value(t, got) - pay, pay}, got};
  };
  auto [best, best_got] = evaluate(zero);
  for (std::uint64_t sub = priced; sub != 0; sub = (sub - 1) & priced) {
    auto [cand, got] = evaluate(sub | zero);
    if (detail::prefer(cand, best)) {
      best = cand;
      best_got = got;
    }
  }
  if (received != nullptr) *received = best_got;
  return best;
}

inline Purchase best_response_bundles(const Instance& inst, const BundleMenu& menu, const TypeProfile& t) {
  menu.validate(inst.num_items());
  if (static_cast<int>(t.size()) != inst.num_items()) throw std::invalid_argument("type profile has wrong length");
  const BoostTable table(inst);
  return best_response_bundles(table, menu, t.values);
}

}  // namespace complements
