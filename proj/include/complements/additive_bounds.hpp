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

// Core/tail decomposition of additive revenue around the cutoff R = SREV and
// the inequalities built on it. Everything here is exact enumeration.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "complements/check.hpp"
#include "complements/mechanisms.hpp"
#include "complements/model.hpp"
#include "complements/opt.hpp"

namespace complements {

struct Decomposition {
  double R = 0.0;
  double tail = 0.0;
  double core = 0.0;       // E[V]
  double var_core = 0.0;   // Var[V]
  std::vector<Atom> core_distribution;  // law of V, sorted
};

namespace detail {

inline bool at_most_cutoff(double t, double r) { return t <= r + 1e-12 * std::max(1.0, std::abs(r)); }

inline void require_additive(const Instance& inst) {
  if (!inst.is_additive()) throw std::invalid_argument("additive bounds need an instance without boosts");
}

}  // namespace detail

// V = sum_j t_j 1[t_j <= R]; values exactly at R count toward the core.
inline Decomposition decompose(const Instance& inst, std::uint64_t cap = kDefaultProfileCap) {
  detail::require_additive(inst);
  Decomposition d;
  d.R = srev_additive(inst);
  const int m = inst.num_items();
  for (int j = 0; j < m; ++j) {
    for (const Atom& a : inst.marginal(j).atoms()) {
      if (detail::at_most_cutoff(a.value, d.R)) {
        d.core += a.prob * a.value;
        continue;
      }
      // Pr[some other item is at least t_j]
      double none = 1.0;
      for (int l = 0; l < m; ++l) {
        if (l != j) none *= 1.0 - inst.marginal(l).survival(a.value);
      }
      d.tail += a.prob * a.value * (1.0 - none);
    }
  }
  std::vector<Atom> law;
  for_each_profile(inst, cap, [&](std::span<const double> t, double prob) {
    double v = 0.0;
    for (double x : t) {
      if (detail::at_most_cutoff(x, d.R)) v += x;
    }
    law.push_back({v, prob});
  });
  d.core_distribution = detail::merge_atoms(std::move(law));
  double var = 0.0;
  for (const Atom& a : d.core_distribution) var += a.prob * (a.value - d.core) * (a.value - d.core);
  d.var_core = var;
  return d;
}

inline Check check_tail_brev(const Decomposition& d, double brev_revenue) {
  return Check::le("TAIL <= BREV", d.tail, brev_revenue, 1e-9);
}

inline Check check_tail_brev(const Instance& inst) {
  return check_tail_brev(decompose(inst), brev(inst).report.revenue);
}

struct CantelliDiagnostics {
  double tail_probability = 0.0;  // Pr[V >= E[V] - aR]
  Check variance;                 // Var[V] <= 2R^2
  Check cantelli;                 // tau = aR: tail >= a^2 R^2 / (a^2 R^2 + Var)
  Check cantelli_unscaled;        // tail >= a^2 / (a^2 + Var)
  Check coarse;                   // tail >= a^2 / (2 + a^2)

  bool all_passed() const { return variance.passed && cantelli.passed && cantelli_unscaled.passed && coarse.passed; }
};

inline CantelliDiagnostics check_variance_and_cantelli(const Decomposition& d, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("Cantelli parameter must be positive");
  CantelliDiagnostics out;
  const double tau = a * d.R;
  const double threshold = d.core - tau;
  const double slack = 1e-12 * std::max(1.0, std::abs(d.core));
  for (const Atom& at : d.core_distribution) {
    if (at.value >= threshold - slack) out.tail_probability += at.prob;
  }
  const double var = d.var_core;
  out.variance = Check::le("Var[V] <= 2R^2", var, 2.0 * d.R * d.R, 1e-9);
  const double scaled = var == 0.0 ? 1.0 : tau * tau / (tau * tau + var);
  out.cantelli = Check::ge("Pr[V >= E[V] - aR] >= (aR)^2 / ((aR)^2 + Var[V])", out.tail_probability, scaled, 1e-9);
  out.cantelli_unscaled =
      Check::ge("Pr[V >= E[V] - aR] >= a^2 / (a^2 + Var[V])", out.tail_probability, a * a / (a * a + var), 1e-9);
  out.coarse = Check::ge("Pr[V >= E[V] - aR] >= a^2 / (2 + a^2)", out.tail_probability, a * a / (2.0 + a * a), 1e-9);
  return out;
}

inline CantelliDiagnostics check_variance_and_cantelli(const Instance& inst, double a) {
  return check_variance_and_cantelli(decompose(inst), a);
}

// OPT <= (2 + 2/a^2) BREV + (a + 1) SREV, plus the 5.382 max form when a is
// the cube root of 4.
inline std::vector<Check> check_additive_opt_bound(double opt, double brev_revenue, double srev, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("parameter a must be positive");
  std::vector<Check> out;
  out.push_back(Check::le("OPT <= (2 + 2/a^2) BREV + (a + 1) SREV", opt,
                          (2.0 + 2.0 / (a * a)) * brev_revenue + (a + 1.0) * srev, 1e-6));
  if (std::abs(a - std::cbrt(4.0)) <= 1e-4) {
    out.push_back(Check::le("OPT <= 5.382 max(SREV, BREV)", opt, 5.382 * std::max(srev, brev_revenue), 1e-6));
  }
  return out;
}

inline std::vector<Check> check_additive_opt_bound(const Instance& inst, double a) {
  detail::require_additive(inst);
  return check_additive_opt_bound(solve_opt(inst).opt_revenue, brev(inst).report.revenue, srev_additive(inst), a);
}

}  // namespace complements
