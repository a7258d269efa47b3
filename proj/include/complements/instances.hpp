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

// Canonical instances, a seeded random generator, and the JSON file format.
//
// Files use 1-based item and layer ids:
//
//   {"schema": 1, "m": 4, "K": 1,
//    "marginals": [[[0, 0.5], [2, 0.5]], ...],
//    "edges": [{"source": [1], "target": 2, "layer": 1, "boost": 1}, ...],
//    "meta": {...}}

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "complements/errors.hpp"
#include "complements/item_set.hpp"
#include "complements/model.hpp"
#include "complements/rng.hpp"

namespace complements {

// Items 1..4 with values {0,2} on odd items and {0,4} on even items, and a
// unit 4-cycle of boosts 1 -> 2 -> 3 -> 4 -> 1.
inline Instance gen_numerical_example() {
  std::vector<DiscreteDistribution> marginals;
  for (int i = 0; i < 4; ++i) {
    const double hi = i % 2 == 0 ? 2.0 : 4.0;
    marginals.emplace_back(std::vector<Atom>{{0.0, 0.5}, {hi, 0.5}});
  }
  std::vector<Hyperedge> edges;
  for (int j = 0; j < 4; ++j) edges.push_back({ItemSet::singleton(j), (j + 1) % 4, 0, 1.0});
  return Instance(BoostStructure(4, 1, std::move(edges)), std::move(marginals));
}

namespace detail {

// Item i (1-based) is 2^i with probability 2^-i and 0 otherwise.
inline std::vector<DiscreteDistribution> doubling_marginals(int n) {
  std::vector<DiscreteDistribution> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    const double p = std::ldexp(1.0, -i);
    out.emplace_back(std::vector<Atom>{{0.0, 1.0 - p}, {std::ldexp(1.0, i), p}});
  }
  return out;
}

}  // namespace detail

// Item 1 boosts every other item by n.
inline Instance gen_lb_standard(int n) {
  if (n < 2 || n > ItemSet::kMaxItems) throw std::invalid_argument("lb-standard needs 2 <= n <= 64");
  std::vector<Hyperedge> edges;
  for (int i = 1; i < n; ++i) edges.push_back({ItemSet::singleton(0), i, 0, static_cast<double>(n)});
  return Instance(BoostStructure(n, 1, std::move(edges)), detail::doubling_marginals(n));
}

inline double binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return std::round(r);
}

inline constexpr std::uint64_t kMaxGeneratedEdges = 2'000'000;

// Every k-subset T of the other items boosts i by c = m / (2 C(m-1, k)), so
// that eta_i([m]) = 1 + m/2.
inline Instance gen_hypergraph_lb(int m, int k) {
  if (m < 2 || m > ItemSet::kMaxItems) throw std::invalid_argument("hypergraph-lb needs 2 <= m <= 64");
  if (k < 1 || k > m - 1) throw std::invalid_argument("hypergraph-lb needs 1 <= k <= m-1");
  const double per_target = binomial(m - 1, k);
  if (per_target * m > static_cast<double>(kMaxGeneratedEdges)) {
    throw CapExceeded("hypergraph-lb would create more than " + std::to_string(kMaxGeneratedEdges) + " edges");
  }
  const double c = m / (2.0 * per_target);
  std::vector<Hyperedge> edges;
  edges.reserve(static_cast<std::size_t>(per_target * m));
  for (int i = 0; i < m; ++i) {
    std::vector<int> others;
    for (int j = 0; j < m; ++j) {
      if (j != i) others.push_back(j);
    }
    // k-combinations of `others` in lexicographic order.
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) idx[static_cast<std::size_t>(j)] = j;
    const int n = m - 1;
    for (;;) {
      ItemSet t;
      for (int j : idx) t = t.with(others[static_cast<std::size_t>(j)]);
      edges.push_back({t, i, 0, c});
      int pos = k - 1;
      while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
      if (pos < 0) break;
      ++idx[static_cast<std::size_t>(pos)];
      for (int j = pos + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return Instance(BoostStructure(m, 1, std::move(edges)), detail::doubling_marginals(m));
}

struct RandomParams {
  int m = 3;
  int layers = 1;
  int min_support = 1;
  int max_support = 3;
  double edge_density = 0.3;
  double boost_scale = 1.0;
  int max_rank = 1;
  int value_grid = 8;  // values drawn from {0, 1, ..., value_grid}
  std::uint64_t seed = 0;
};

// Values are distinct grid points with random integer weights; boosts are
// boost_scale * u / 8 for u in 1..8. Each (layer, target, source) triple with
// 1 <= |source| <= max_rank appears with probability edge_density.
inline Instance gen_random(const RandomParams& p) {
  if (p.m < 1 || p.m > 16) throw std::invalid_argument("random instances need 1 <= m <= 16");
  if (p.layers < 1) throw std::invalid_argument("random instances need at least one layer");
  if (p.min_support < 1 || p.max_support < p.min_support) throw std::invalid_argument("bad support range");
  if (p.value_grid + 1 < p.max_support) throw std::invalid_argument("value grid too small for the support size");
  if (!(p.edge_density >= 0.0 && p.edge_density <= 1.0)) throw std::invalid_argument("edge density must lie in [0, 1]");
  if (!(p.boost_scale > 0.0)) throw std::invalid_argument("boost scale must be positive");
  if (p.max_rank < 1) throw std::invalid_argument("max rank must be at least 1");
  Rng rng = make_stream(p.seed, 0);
  std::vector<DiscreteDistribution> marginals;
  for (int i = 0; i < p.m; ++i) {
    const auto size = static_cast<std::size_t>(p.min_support) +
                      uniform_index(rng, static_cast<std::uint64_t>(p.max_support - p.min_support + 1));
    std::vector<int> grid(static_cast<std::size_t>(p.value_grid + 1));
    for (int v = 0; v <= p.value_grid; ++v) grid[static_cast<std::size_t>(v)] = v;
    // Partial Fisher-Yates picks `size` distinct grid points.
    for (std::size_t a = 0; a < size; ++a) {
      const std::size_t j = a + uniform_index(rng, grid.size() - a);
      std::swap(grid[a], grid[j]);
    }
    std::vector<int> picked(grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(size));
    std::sort(picked.begin(), picked.end());
    std::vector<double> weights(size);
    double total = 0.0;
    for (double& w : weights) {
      w = 1.0 + static_cast<double>(uniform_index(rng, 8));
      total += w;
    }
    std::vector<Atom> atoms;
    for (std::size_t a = 0; a < size; ++a) atoms.push_back({static_cast<double>(picked[a]), weights[a] / total});
    marginals.emplace_back(std::move(atoms));
  }
  std::vector<Hyperedge> edges;
  const std::uint64_t subsets = std::uint64_t{1} << p.m;
  for (int layer = 0; layer < p.layers; ++layer) {
    for (int i = 0; i < p.m; ++i) {
      for (std::uint64_t s = 1; s < subsets; ++s) {
        const ItemSet src(s);
        if (src.contains(i) || src.size() > p.max_rank) continue;
        if (!bernoulli(rng, p.edge_density)) continue;
        const double u = 1.0 + static_cast<double>(uniform_index(rng, 8));
        edges.push_back({src, i, layer, p.boost_scale * u / 8.0});
      }
    }
  }
  return Instance(BoostStructure(p.m, p.layers, std::move(edges)), std::move(marginals));
}

// ---- File format ------------------------------------------------------------

inline constexpr int kSchemaVersion = 1;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InstanceFile {
  Instance instance;
  nlohmann::json meta = nlohmann::json::object();

  friend bool operator==(const InstanceFile&, const InstanceFile&) = default;
};

// Instance fields only, in a fixed key order.
inline nlohmann::ordered_json instance_to_json(const Instance& inst) {
  nlohmann::ordered_json j;
  j["schema"] = kSchemaVersion;
  j["m"] = inst.num_items();
  j["K"] = inst.boosts().num_layers();
  auto marginals = nlohmann::ordered_json::array();
  for (const auto& d : inst.marginals()) {
    auto atoms = nlohmann::ordered_json::array();
    for (const Atom& a : d.atoms()) atoms.push_back({a.value, a.prob});
    marginals.push_back(std::move(atoms));
  }
  j["marginals"] = std::move(marginals);
  auto edges = nlohmann::ordered_json::array();
  for (const Hyperedge& h : inst.boosts().edges()) {
    nlohmann::ordered_json e;
    auto src = nlohmann::ordered_json::array();
    for (int i : h.source.items()) src.push_back(i + 1);
    e["source"] = std::move(src);
    e["target"] = h.target + 1;
    e["layer"] = h.layer + 1;
    e["boost"] = h.boost;
    edges.push_back(std::move(e));
  }
  j["edges"] = std::move(edges);
  return j;
}

inline std::string dump(const InstanceFile& f) {
  nlohmann::ordered_json j = instance_to_json(f.instance);
  j["meta"] = nlohmann::ordered_json::parse(f.meta.dump());
  return j.dump(2) + "\n";
}

// FNV-1a 64 of the compact canonical instance encoding (metadata excluded).
inline std::string fingerprint(const Instance& inst) {
  const std::string canon = instance_to_json(inst).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canon) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

inline int get_int(const nlohmann::json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw FormatError(where + ": missing field '" + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw FormatError(where + ": field '" + key + "' must be an integer");
  return v.get<int>();
}

inline double get_number(const nlohmann::json& v, const std::string& where) {
  if (!v.is_number()) throw FormatError(where + ": expected a number");
  return v.get<double>();
}

}  // namespace detail

inline InstanceFile parse_instance(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw FormatError("instance file must hold a JSON object");
  const int schema = detail::get_int(j, "schema", "file");
  if (schema != kSchemaVersion) {
    throw FormatError("unsupported schema version " + std::to_string(schema) + " (expected " +
                      std::to_string(kSchemaVersion) + ")");
  }
  const int m = detail::get_int(j, "m", "file");
  const int layers = detail::get_int(j, "K", "file");
  if (m < 1 || m > ItemSet::kMaxItems) throw FormatError("m must lie in [1, 64]");
  if (layers < 1) throw FormatError("K must be at least 1");

  if (!j.contains("marginals") || !j["marginals"].is_array()) throw FormatError("missing array 'marginals'");
  const auto& jm = j["marginals"];
  if (static_cast<int>(jm.size()) != m) {
    throw FormatError("expected " + std::to_string(m) + " marginals, got " + std::to_string(jm.size()));
  }
  std::vector<DiscreteDistribution> marginals;
  for (std::size_t i = 0; i < jm.size(); ++i) {
    const std::string where = "item " + std::to_string(i + 1);
    if (!jm[i].is_array()) throw FormatError(where + ": marginal must be a list of [value, prob] pairs");
    std::vector<Atom> atoms;
    for (const auto& a : jm[i]) {
      if (!a.is_array() || a.size() != 2) throw FormatError(where + ": atoms must be [value, prob] pairs");
      atoms.push_back({detail::get_number(a[0], where), detail::get_number(a[1], where)});
    }
    try {
      marginals.emplace_back(std::move(atoms));
    } catch (const std::invalid_argument& e) {
      throw FormatError(where + ": " + e.what());
    }
  }

  std::vector<Hyperedge> edges;
  if (j.contains("edges")) {
    if (!j["edges"].is_array()) throw FormatError("'edges' must be an array");
    std::size_t n = 0;
    for (const auto& e : j["edges"]) {
      const std::string where = "edge " + std::to_string(++n);
      if (!e.is_object()) throw FormatError(where + ": must be an object");
      if (!e.contains("source") || !e["source"].is_array()) throw FormatError(where + ": missing array 'source'");
      Hyperedge h;
      for (const auto& s : e["source"]) {
        if (!s.is_number_integer()) throw FormatError(where + ": source ids must be integers");
        const int id = s.get<int>();
        if (id < 1 || id > m) throw FormatError(where + ": source item " + std::to_string(id) + " out of range");
        if (h.source.contains(id - 1)) throw FormatError(where + ": source item " + std::to_string(id) + " repeated");
        h.source = h.source.with(id - 1);
      }
      h.target = detail::get_int(e, "target", where) - 1;
      h.layer = detail::get_int(e, "layer", where) - 1;
      if (!e.contains("boost")) throw FormatError(where + ": missing field 'boost'");
      h.boost = detail::get_number(e["boost"], where);
      edges.push_back(h);
    }
  }
  InstanceFile out;
  try {
    out.instance = Instance(BoostStructure(m, layers, std::move(edges)), std::move(marginals));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  if (j.contains("meta")) {
    if (!j["meta"].is_object()) throw FormatError("'meta' must be an object");
    out.meta = j["meta"];
  }
  return out;
}

inline void save(const InstanceFile& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << dump(f);
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

inline InstanceFile load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_instance(text);
}

}  // namespace complements
