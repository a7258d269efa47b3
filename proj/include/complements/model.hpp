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

// Valuation model: a single buyer whose value for bundle S is
//
//   v(t, S) = sum_{i in S} eta_i(S) * t_i,
//   eta_i(S) = 1 + max_layer sum_{edges (T, i) in layer, T subset of S} boost,
//
// with base values t drawn from a product of discrete marginals.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "complements/errors.hpp"
#include "complements/item_set.hpp"
#include "complements/rng.hpp"

namespace complements {

struct Atom {
  double value = 0.0;
  double prob = 0.0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

// Finite-support distribution of one item's base value.
class DiscreteDistribution {
 public:
  static constexpr double kProbSumTol = 1e-9;

  DiscreteDistribution() = default;

  explicit DiscreteDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw std::invalid_argument("distribution has no atoms");
    double total = 0.0;
    for (std::size_t a = 0; a < atoms_.size(); ++a) {
      const Atom& atom = atoms_[a];
      if (!std::isfinite(atom.value) || atom.value < 0.0) {
        throw std::invalid_argument("atom " + std::to_string(a) + ": value must be finite and nonnegative");
      }
      if (!(atom.prob > 0.0 && atom.prob <= 1.0)) {
        throw std::invalid_argument("atom " + std::to_string(a) + ": probability must lie in (0, 1]");
      }
      if (a > 0 && !(atoms_[a - 1].value < atom.value)) {
        throw std::invalid_argument("atom " + std::to_string(a) + ": values must be strictly ascending");
      }
      total += atom.prob;
    }
    if (std::abs(total - 1.0) > kProbSumTol) {
      throw std::invalid_argument("probabilities sum to " + std::to_string(total) + ", not 1");
    }
  }

  static DiscreteDistribution point_mass(double v) { return DiscreteDistribution({{v, 1.0}}); }

  std::span<const Atom> atoms() const { return atoms_; }
  std::size_t support_size() const { return atoms_.size(); }

  // Pr[X >= x].
  double survival(double x) const {
    double p = 0.0;
    for (const Atom& a : atoms_) {
      if (a.value >= x) p += a.prob;
    }
    return p;
  }

  double mean() const {
    double s = 0.0;
    for (const Atom& a : atoms_) s += a.prob * a.value;
    return s;
  }

  // Distribution of c * X; c must be positive.
  DiscreteDistribution scaled(double c) const {
    if (!(c > 0.0)) throw std::invalid_argument("scale factor must be positive");
    std::vector<Atom> out = atoms_;
    for (Atom& a : out) a.value *= c;
    return DiscreteDistribution(std::move(out));
  }

  friend bool operator==(const DiscreteDistribution&, const DiscreteDistribution&) = default;

 private:
  std::vector<Atom> atoms_;
};

// Boost `boost` onto `target` when the buyer holds all of `source`, in `layer`.
// Layers are 0-based internally.
struct Hyperedge {
  ItemSet source;
  int target = 0;
  int layer = 0;
  double boost = 0.0;

  friend bool operator==(const Hyperedge&, const Hyperedge&) = default;
};

class BoostStructure {
 public:
  BoostStructure() = default;

  BoostStructure(int num_items, int num_layers, std::vector<Hyperedge> edges)
      : num_items_(num_items), num_layers_(num_layers), edges_(std::move(edges)) {
    if (num_items_ < 1 || num_items_ > ItemSet::kMaxItems) {
      throw std::invalid_argument("item count must lie in [1, 64]");
    }
    if (num_layers_ < 1) throw std::invalid_argument("layer count must be at least 1");
    const ItemSet all = ItemSet::full(num_items_);
    std::set<std::tuple<std::uint64_t, int, int>> seen;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const Hyperedge& h = edges_[e];
      const std::string where = "edge " + std::to_string(e + 1) + " (" + to_string(h.source) + " -> " +
                                std::to_string(h.target + 1) + ")";
      if (h.source.empty()) throw std::invalid_argument(where + ": empty source set");
      if (!h.source.subset_of(all)) throw std::invalid_argument(where + ": source item out of range");
      if (h.target < 0 || h.target >= num_items_) throw std::invalid_argument(where + ": target out of range");
      if (h.source.contains(h.target)) throw std::invalid_argument(where + ": target appears in its source set");
      if (h.layer < 0 || h.layer >= num_layers_) throw std::invalid_argument(where + ": layer out of range");
      if (!std::isfinite(h.boost) || h.boost < 0.0) throw std::invalid_argument(where + ": boost must be nonnegative");
      if (!seen.emplace(h.source.bits(), h.target, h.layer).second) {
        throw std::invalid_argument(where + ": duplicate (source, target, layer)");
      }
    }
    incoming_.assign(static_cast<std::size_t>(num_items_ * num_layers_), {});
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const Hyperedge& h = edges_[e];
      incoming_[slot(h.target, h.layer)].push_back(e);
      rank_ = std::max(rank_, h.source.size());
    }
    out_degree_.assign(static_cast<std::size_t>(num_items_), 0);
    for (const Hyperedge& h : edges_) {
      for (int j : h.source.items()) ++out_degree_[static_cast<std::size_t>(j)];
    }
  }

  int num_items() const { return num_items_; }
  int num_layers() const { return num_layers_; }
  std::span<const Hyperedge> edges() const { return edges_; }

  // Directed-positive-rank k: largest source set, 0 without edges.
  int directed_positive_rank() const { return rank_; }

  // Maximum-out-degree d: most hyperedges whose source contains one item.
  int max_out_degree() const {
    return out_degree_.empty() ? 0 : *std::max_element(out_degree_.begin(), out_degree_.end());
  }

  // Boost total onto `item` from layer `layer` given holdings `held`.
  double layer_boost(int item, int layer, ItemSet held) const {
    double sum = 0.0;
    for (std::size_t e : incoming_[slot(item, layer)]) {
      const Hyperedge& h = edges_[e];
      if (h.source.subset_of(held)) sum += h.boost;
    }
    return sum;
  }

  // Smallest layer attaining the maximal layer total.
  int active_layer(int item, ItemSet held) const {
    check_item(item);
    int best = 0;
    double best_sum = layer_boost(item, 0, held);
    for (int l = 1; l < num_layers_; ++l) {
      const double s = layer_boost(item, l, held);
      if (s > best_sum) {
        best_sum = s;
        best = l;
      }
    }
    return best;
  }

  double boost_factor(int item, ItemSet held) const {
    check_item(item);
    double best = layer_boost(item, 0, held);
    for (int l = 1; l < num_layers_; ++l) best = std::max(best, layer_boost(item, l, held));
    return 1.0 + best;
  }

  friend bool operator==(const BoostStructure& a, const BoostStructure& b) {
    return a.num_items_ == b.num_items_ && a.num_layers_ == b.num_layers_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t slot(int item, int layer) const { return static_cast<std::size_t>(item * num_layers_ + layer); }

  void check_item(int item) const {
    if (item < 0 || item >= num_items_) {
      throw std::out_of_range("item id " + std::to_string(item) + " outside [0, " + std::to_string(num_items_) + ")");
    }
  }

  int num_items_ = 0;
  int num_layers_ = 1;
  std::vector<Hyperedge> edges_;
  std::vector<std::vector<std::size_t>> incoming_;
  std::vector<int> out_degree_;
  int rank_ = 0;
};

// Boost structure plus product type distribution. Immutable once built.
class Instance {
 public:
  Instance() = default;

  Instance(BoostStructure boosts, std::vector<DiscreteDistribution> marginals)
      : boosts_(std::move(boosts)), marginals_(std::move(marginals)) {
    if (static_cast<int>(marginals_.size()) != boosts_.num_items()) {
      throw std::invalid_argument("expected " + std::to_string(boosts_.num_items()) + " marginals, got " +
                                  std::to_string(marginals_.size()));
    }
  }

  int num_items() const { return boosts_.num_items(); }
  const BoostStructure& boosts() const { return boosts_; }
  std::span<const DiscreteDistribution> marginals() const { return marginals_; }
  const DiscreteDistribution& marginal(int i) const { return marginals_.at(static_cast<std::size_t>(i)); }
  ItemSet all_items() const { return ItemSet::full(num_items()); }
  bool is_additive() const { return boosts_.edges().empty(); }

  // Number of type profiles, saturating at `limit + 1`.
  std::uint64_t profile_count(std::uint64_t limit) const {
    std::uint64_t n = 1;
    for (const auto& d : marginals_) {
      n *= d.support_size();
      if (n > limit) return limit + 1;
    }
    return n;
  }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  BoostStructure boosts_;
  std::vector<DiscreteDistribution> marginals_;
};

// A vector of base values, one per item.
struct TypeProfile {
  std::vector<double> values;

  double operator[](std::size_t i) const { return values[i]; }
  std::size_t size() const { return values.size(); }
  friend bool operator==(const TypeProfile&, const TypeProfile&) = default;
};

inline void check_item_set(const Instance& inst, ItemSet s) {
  if (!s.subset_of(inst.all_items())) {
    throw std::out_of_range("item set " + to_string(s) + " references items beyond " + std::to_string(inst.num_items()));
  }
}

// eta_i(S). Boosts from sources inside S \ {i}; independent of whether i is in S.
inline double boost_factor(const Instance& inst, int i, ItemSet s) {
  check_item_set(inst, s);
  return inst.boosts().boost_factor(i, s);
}

inline int active_layer(const Instance& inst, int i, ItemSet s) {
  check_item_set(inst, s);
  return inst.boosts().active_layer(i, s);
}

inline double valuation(const Instance& inst, std::span<const double> t, ItemSet s) {
  check_item_set(inst, s);
  if (static_cast<int>(t.size()) != inst.num_items()) throw std::invalid_argument("type profile has wrong length");
  double v = 0.0;
  for (int i : s.items()) v += inst.boosts().boost_factor(i, s) * t[static_cast<std::size_t>(i)];
  return v;
}

inline double valuation(const Instance& inst, const TypeProfile& t, ItemSet s) {
  return valuation(inst, std::span<const double>(t.values), s);
}

// Additive instance whose marginal i is F_i scaled by eta_i([m]).
inline Instance fully_boosted(const Instance& inst) {
  const ItemSet all = inst.all_items();
  std::vector<DiscreteDistribution> marginals;
  marginals.reserve(static_cast<std::size_t>(inst.num_items()));
  for (int i = 0; i < inst.num_items(); ++i) {
    marginals.push_back(inst.marginal(i).scaled(inst.boosts().boost_factor(i, all)));
  }
  return Instance(BoostStructure(inst.num_items(), 1, {}), std::move(marginals));
}

inline constexpr std::uint64_t kDefaultProfileCap = 1'000'000;

// Visits every type profile of `items` (other coordinates stay 0) with its
// probability. Mixed-radix order, first item varying fastest.
template <typename Fn>
void for_each_profile(const Instance& inst, ItemSet items, std::uint64_t cap, Fn&& fn) {
  const std::vector<int> ids = items.items();
  std::uint64_t count = 1;
  for (int i : ids) {
    count *= inst.marginal(i).support_size();
    if (count > cap) {
      throw CapExceeded("profile count exceeds cap of " + std::to_string(cap) + "; use Monte Carlo");
    }
  }
  std::vector<double> t(static_cast<std::size_t>(inst.num_items()), 0.0);
  std::vector<std::size_t> digit(ids.size(), 0);
  for (std::size_t k = 0; k < ids.size(); ++k) {
    t[static_cast<std::size_t>(ids[k])] = inst.marginal(ids[k]).atoms()[0].value;
  }
  for (std::uint64_t n = 0; n < count; ++n) {
    double prob = 1.0;
    for (std::size_t k = 0; k < ids.size(); ++k) prob *= inst.marginal(ids[k]).atoms()[digit[k]].prob;
    fn(std::span<const double>(t), prob);
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const auto atoms = inst.marginal(ids[k]).atoms();
      if (++digit[k] < atoms.size()) {
        t[static_cast<std::size_t>(ids[k])] = atoms[digit[k]].value;
        break;
      }
      digit[k] = 0;
      t[static_cast<std::size_t>(ids[k])] = atoms[0].value;
    }
  }
}

template <typename Fn>
void for_each_profile(const Instance& inst, std::uint64_t cap, Fn&& fn) {
  for_each_profile(inst, inst.all_items(), cap, std::forward<Fn>(fn));
}

struct WeightedProfile {
  TypeProfile type;
  double prob = 0.0;
};

inline std::vector<WeightedProfile> enumerate_profiles(const Instance& inst, std::uint64_t cap = kDefaultProfileCap) {
  std::vector<WeightedProfile> out;
  for_each_profile(inst, cap, [&](std::span<const double> t, double p) {
    out.push_back({TypeProfile{std::vector<double>(t.begin(), t.end())}, p});
  });
  return out;
}

// Caches eta_i(S) for every S when 2^m * m is small; otherwise evaluates on demand.
class BoostTable {
 public:
  static constexpr int kMaxTabulatedItems = 16;

  explicit BoostTable(const Instance& inst) : inst_(&inst), m_(inst.num_items()) {
    if (m_ <= kMaxTabulatedItems) {
      const std::size_t subsets = std::size_t{1} << m_;
      table_.resize(subsets * static_cast<std::size_t>(m_));
      for (std::size_t s = 0; s < subsets; ++s) {
        for (int i = 0; i < m_; ++i) {
          table_[s * static_cast<std::size_t>(m_) + static_cast<std::size_t>(i)] =
              inst.boosts().boost_factor(i, ItemSet(s));
        }
      }
    }
  }

  const Instance& instance() const { return *inst_; }
  int num_items() const { return m_; }

  double eta(int i, ItemSet s) const {
    if (!table_.empty()) return table_[s.bits() * static_cast<std::size_t>(m_) + static_cast<std::size_t>(i)];
    return inst_->boosts().boost_factor(i, s);
  }

  double value(std::span<const double> t, ItemSet s) const {
    double v = 0.0;
    for (std::uint64_t b = s.bits(); b != 0; b &= b - 1) {
      const int i = std::countr_zero(b);
      v += eta(i, s) * t[static_cast<std::size_t>(i)];
    }
    return v;
  }

 private:
  const Instance* inst_;
  int m_;
  std::vector<double> table_;
};

// Draws one profile from the product distribution.
template <typename URBG>
void sample_profile(const Instance& inst, URBG& rng, std::vector<double>& t) {
  t.resize(static_cast<std::size_t>(inst.num_items()));
  for (int i = 0; i < inst.num_items(); ++i) {
    const auto atoms = inst.marginal(i).atoms();
    double u = uniform01(rng);
    std::size_t a = 0;
    while (a + 1 < atoms.size() && u >= atoms[a].prob) {
      u -= atoms[a].prob;
      ++a;
    }
    t[static_cast<std::size_t>(i)] = atoms[a].value;
  }
}

template <typename URBG>
TypeProfile sample_profile(const Instance& inst, URBG& rng) {
  TypeProfile t;
  sample_profile(inst, rng, t.values);
  return t;
}

}  // namespace complements
