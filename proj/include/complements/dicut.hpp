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

// Free-set selection as a directed cut problem.
//
// Vertices are a source s plus one node per item. Edge (s, i) weighs R_i and
// hyperedge (T, i) weighs eta_iT * R_i, using only the layer that is active
// for i on the grand bundle. A free set F cuts (s, i) when i is priced and
// (T, i) when T is inside F and i is priced; the cut weight is then a lower
// bound on SEPARATE/FREE(F) revenue (equal to it for single-layer boosts).

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "complements/buyer.hpp"
#include "complements/errors.hpp"
#include "complements/mechanisms.hpp"
#include "complements/model.hpp"
#include "complements/rng.hpp"

namespace complements {

struct CutEdge {
  ItemSet source;
  int target = 0;
  double weight = 0.0;
};

struct CutGraph {
  int num_items = 0;
  std::vector<double> source_weights;  // w_{s,i} = R_i
  std::vector<CutEdge> edges;          // declaration order of the instance

  double total_weight() const {
    double w = 0.0;
    for (double x : source_weights) w += x;
    for (const CutEdge& e : edges) w += e.weight;
    return w;
  }
};

inline CutGraph build_graph(const Instance& inst) {
  CutGraph g;
  g.num_items = inst.num_items();
  const ItemSet all = inst.all_items();
  std::vector<int> active(static_cast<std::size_t>(g.num_items));
  for (int i = 0; i < g.num_items; ++i) {
    g.source_weights.push_back(monopoly_reserve(inst.marginal(i)).revenue);
    active[static_cast<std::size_t>(i)] = inst.boosts().active_layer(i, all);
  }
  for (const Hyperedge& h : inst.boosts().edges()) {
    if (h.boost == 0.0 || h.layer != active[static_cast<std::size_t>(h.target)]) continue;
    g.edges.push_back({h.source, h.target, h.boost * g.source_weights[static_cast<std::size_t>(h.target)]});
  }
  return g;
}

inline double cut_weight(const CutGraph& g, ItemSet free_set) {
  double w = 0.0;
  for (int i = 0; i < g.num_items; ++i) {
    if (!free_set.contains(i)) w += g.source_weights[static_cast<std::size_t>(i)];
  }
  for (const CutEdge& e : g.edges) {
    if (!free_set.contains(e.target) && e.source.subset_of(free_set)) w += e.weight;
  }
  return w;
}

struct DicutResult {
  ItemSet free_set;
  double weight = 0.0;
};

// Maximum cut over all 2^m free sets; ties go to the lexicographically
// smallest free set.
inline DicutResult exact_max_dicut(const CutGraph& g) {
  if (g.num_items > kMaxExhaustiveItems) {
    throw CapExceeded("exact max-dicut limited to " + std::to_string(kMaxExhaustiveItems) + " items");
  }
  DicutResult best{ItemSet(), cut_weight(g, ItemSet())};
  const std::uint64_t subsets = std::uint64_t{1} << g.num_items;
  for (std::uint64_t s = 1; s < subsets; ++s) {
    const ItemSet f(s);
    const double w = cut_weight(g, f);
    if (w > best.weight + kMoneyTol || (std::abs(w - best.weight) <= kMoneyTol && lex_less(f, best.free_set))) {
      best = {f, w};
    }
  }
  return best;
}

// Every item free independently with probability 1/2.
template <typename URBG>
ItemSet sample_free_set_pairwise(int m, URBG& rng) {
  ItemSet f;
  for (int i = 0; i < m; ++i) {
    if (bernoulli(rng, 0.5)) f = f.with(i);
  }
  return f;
}

// Every item free independently with probability 1 - 1/(2k).
template <typename URBG>
ItemSet sample_free_set_rank(int m, int k, URBG& rng) {
  if (k < 1) throw std::invalid_argument("rank sampler needs k >= 1");
  const double free_prob = 1.0 - 1.0 / (2.0 * k);
  ItemSet f;
  for (int i = 0; i < m; ++i) {
    if (bernoulli(rng, free_prob)) f = f.with(i);
  }
  return f;
}

// Each hyperedge, in declaration order, fires with probability 1/(2d) and
// moves its whole source set into the free set.
template <typename URBG>
ItemSet sample_free_set_degree(const CutGraph& g, int d, URBG& rng) {
  if (d < 1) throw std::invalid_argument("degree sampler needs d >= 1");
  const double fire = 1.0 / (2.0 * d);
  ItemSet f;
  for (const CutEdge& e : g.edges) {
    if (bernoulli(rng, fire)) f = f | e.source;
  }
  return f;
}

struct FreeSetConstruction {
  enum class Kind { kPairwise, kRank, kDegree };
  Kind kind = Kind::kPairwise;
  int param = 1;  // k for kRank, d for kDegree

  static FreeSetConstruction pairwise() { return {Kind::kPairwise, 1}; }
  static FreeSetConstruction rank(int k) { return {Kind::kRank, k}; }
  static FreeSetConstruction degree(int d) { return {Kind::kDegree, d}; }

  // Item-wise free probability for the independent constructions.
  double free_probability() const { return kind == Kind::kPairwise ? 0.5 : 1.0 - 1.0 / (2.0 * param); }
};

template <typename URBG>
ItemSet sample_free_set(const CutGraph& g, const FreeSetConstruction& c, URBG& rng) {
  switch (c.kind) {
    case FreeSetConstruction::Kind::kPairwise:
      return sample_free_set_pairwise(g.num_items, rng);
    case FreeSetConstruction::Kind::kRank:
      return sample_free_set_rank(g.num_items, c.param, rng);
    case FreeSetConstruction::Kind::kDegree:
      return sample_free_set_degree(g, c.param, rng);
  }
  throw std::logic_error("unknown construction");
}

inline constexpr int kMaxDegreeDpItems = 20;

// Exact distribution over free sets produced by the degree construction,
// indexed by bitmask. Built by folding in one hyperedge at a time.
inline std::vector<double> degree_free_set_distribution(const CutGraph& g, int d) {
  if (d < 1) throw std::invalid_argument("degree construction needs d >= 1");
  if (g.num_items > kMaxDegreeDpItems) {
    throw CapExceeded("degree-construction distribution limited to " + std::to_string(kMaxDegreeDpItems) + " items");
  }
  const double fire = 1.0 / (2.0 * d);
  const std::size_t subsets = std::size_t{1} << g.num_items;
  std::vector<double> dist(subsets, 0.0);
  dist[0] = 1.0;
  for (const CutEdge& e : g.edges) {
    const std::uint64_t src = e.source.bits();
    // Descending order: mask | src >= mask is already final for this edge.
    for (std::size_t mask = subsets; mask-- > 0;) {
      if (dist[mask] == 0.0 || (mask | src) == mask) continue;
      dist[mask | src] += fire * dist[mask];
      dist[mask] *= 1.0 - fire;
    }
  }
  return dist;
}

// Probability that each graph hyperedge crosses the cut.
inline std::vector<double> edge_crossing_probabilities(const CutGraph& g, const FreeSetConstruction& c) {
  std::vector<double> out;
  out.reserve(g.edges.size());
  if (c.kind == FreeSetConstruction::Kind::kDegree) {
    const auto dist = degree_free_set_distribution(g, c.param);
    for (const CutEdge& e : g.edges) {
      double p = 0.0;
      for (std::size_t mask = 0; mask < dist.size(); ++mask) {
        const ItemSet f(mask);
        if (e.source.subset_of(f) && !f.contains(e.target)) p += dist[mask];
      }
      out.push_back(p);
    }
    return out;
  }
  const double q = c.free_probability();
  for (const CutEdge& e : g.edges) out.push_back(std::pow(q, e.source.size()) * (1.0 - q));
  return out;
}

// Expected cut weight of a random free set. Independent constructions use
// per-edge products; the degree construction sums over its exact free-set
// distribution.
inline double expected_cut_weight(const CutGraph& g, const FreeSetConstruction& c) {
  if (c.kind == FreeSetConstruction::Kind::kDegree) {
    const auto dist = degree_free_set_distribution(g, c.param);
    double w = 0.0;
    for (std::size_t mask = 0; mask < dist.size(); ++mask) {
      if (dist[mask] != 0.0) w += dist[mask] * cut_weight(g, ItemSet(mask));
    }
    return w;
  }
  const double q = c.free_probability();
  double w = 0.0;
  for (double ws : g.source_weights) w += (1.0 - q) * ws;
  for (const CutEdge& e : g.edges) w += e.weight * std::pow(q, e.source.size()) * (1.0 - q);
  return w;
}

struct LocalSearchResult {
  ItemSet free_set;
  double weight = 0.0;
  int moves = 0;
};

// Best-improvement single-item flips until no flip gains more than the money
// tolerance. Ties between flips go to the smallest item id.
inline LocalSearchResult hill_climb(const CutGraph& g, ItemSet start) {
  LocalSearchResult cur{start, cut_weight(g, start), 0};
  for (;;) {
    int best_item = -1;
    double best_w = cur.weight;
    for (int i = 0; i < g.num_items; ++i) {
      const double w = cut_weight(g, cur.free_set.flipped(i));
      if (w > best_w + kMoneyTol) {
        best_w = w;
        best_item = i;
      }
    }
    if (best_item < 0) return cur;
    cur.free_set = cur.free_set.flipped(best_item);
    cur.weight = best_w;
    ++cur.moves;
  }
}

// Hill climbing from `restarts` uniformly random starts plus the empty set.
template <typename URBG>
LocalSearchResult local_search_dicut(const CutGraph& g, int restarts, URBG& rng) {
  LocalSearchResult best = hill_climb(g, ItemSet());
  for (int r = 0; r < restarts; ++r) {
    const LocalSearchResult cand = hill_climb(g, sample_free_set_pairwise(g.num_items, rng));
    if (cand.weight > best.weight + kMoneyTol ||
        (std::abs(cand.weight - best.weight) <= kMoneyTol && lex_less(cand.free_set, best.free_set))) {
      best = cand;
    }
  }
  return best;
}

}  // namespace complements
