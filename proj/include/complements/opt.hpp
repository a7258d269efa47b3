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

// Optimal revenue over all (randomized) direct-revelation mechanisms for tiny
// discrete instances, as a linear program over lotteries x_S(t) and payments
// p(t):
//
//   max  sum_t f(t) p(t)
//   s.t. sum_S x_S(t) = 1                                   for all t
//        sum_S x_S(t) v(t,S) - p(t) >= 0                    (IR)
//        sum_S x_S(t) v(t,S) - p(t) >=
//            sum_S x_S(t') v(t,S) - p(t')                   (IC) for t != t'
//
// The solver works in utilities u(t) = sum_S x_S(t) v(t,S) - p(t) >= 0 and
// drops x_emptyset(t) (it has zero value everywhere), which leaves every
// constraint in "<= nonnegative constant" form.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "complements/buyer.hpp"
#include "complements/errors.hpp"
#include "complements/model.hpp"
#include "complements/simplex.hpp"

namespace complements {

inline constexpr std::uint64_t kMaxLpAllocationVariables = 100'000;
inline constexpr double kLpFeasibilityTol = 1e-7;

class MechanismLP {
 public:
  explicit MechanismLP(const Instance& inst) : m_(inst.num_items()) {
    if (m_ > 16) throw CapExceeded("LP oracle limited to 16 items");
    num_sets_ = std::size_t{1} << m_;
    const std::uint64_t n = inst.profile_count(kMaxLpAllocationVariables);
    if (n * num_sets_ > kMaxLpAllocationVariables) {
      throw CapExceeded("LP would need more than " + std::to_string(kMaxLpAllocationVariables) +
                        " allocation variables");
    }
    profiles_ = enumerate_profiles(inst, kMaxLpAllocationVariables);
    const BoostTable table(inst);
    values_.resize(profiles_.size() * num_sets_);
    for (std::size_t a = 0; a < profiles_.size(); ++a) {
      for (std::size_t s = 0; s < num_sets_; ++s) {
        values_[a * num_sets_ + s] = table.value(profiles_[a].type.values, ItemSet(s));
      }
    }
  }

  int num_items() const { return m_; }
  std::size_t num_profiles() const { return profiles_.size(); }
  std::size_t num_sets() const { return num_sets_; }
  std::span<const WeightedProfile> profiles() const { return profiles_; }

  // v(t_a, S).
  double value(std::size_t a, std::size_t s) const { return values_[a * num_sets_ + s]; }

  std::size_t num_allocation_variables() const { return num_profiles() * num_sets_; }
  std::size_t num_payment_variables() const { return num_profiles(); }
  std::size_t num_ic_constraints() const { return num_profiles() * (num_profiles() - 1); }
  std::size_t num_ir_constraints() const { return num_profiles(); }

 private:
  int m_ = 0;
  std::size_t num_sets_ = 0;
  std::vector<WeightedProfile> profiles_;
  std::vector<double> values_;
};

inline MechanismLP build_lp(const Instance& inst) { return MechanismLP(inst); }

// A direct mechanism: lottery over sets and a payment, per profile.
struct Mechanism {
  std::vector<double> allocation;  // num_profiles x num_sets, row-major
  std::vector<double> payments;

  double x(const MechanismLP& lp, std::size_t a, std::size_t s) const { return allocation[a * lp.num_sets() + s]; }
};

inline double expected_revenue(const MechanismLP& lp, const Mechanism& mech) {
  double r = 0.0;
  for (std::size_t a = 0; a < lp.num_profiles(); ++a) r += lp.profiles()[a].prob * mech.payments[a];
  return r;
}

// Largest violation of any LP constraint, including bounds on x.
inline double feasibility_residual(const MechanismLP& lp, const Mechanism& mech) {
  const std::size_t n = lp.num_profiles();
  const std::size_t k = lp.num_sets();
  double worst = 0.0;
  // expected[a * n + b] = sum_S x_S(t_b) v(t_a, S)
  std::vector<double> expected(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    double total = 0.0;
    for (std::size_t s = 0; s < k; ++s) {
      const double x = mech.x(lp, a, s);
      worst = std::max({worst, -x, x - 1.0});
      total += x;
    }
    worst = std::max(worst, std::abs(total - 1.0));
    for (std::size_t b = 0; b < n; ++b) {
      double e = 0.0;
      for (std::size_t s = 1; s < k; ++s) e += mech.x(lp, b, s) * lp.value(a, s);
      expected[a * n + b] = e;
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    const double truthful = expected[a * n + a] - mech.payments[a];
    worst = std::max(worst, -truthful);
    for (std::size_t b = 0; b < n; ++b) {
      if (b == a) continue;
      worst = std::max(worst, expected[a * n + b] - mech.payments[b] - truthful);
    }
  }
  return worst;
}

// Deterministic mechanism from a per-profile outcome (set, payment).
inline Mechanism encode_mechanism(const MechanismLP& lp,
                                  const std::function<std::pair<ItemSet, double>(std::span<const double>)>& outcome) {
  Mechanism mech;
  mech.allocation.assign(lp.num_profiles() * lp.num_sets(), 0.0);
  mech.payments.assign(lp.num_profiles(), 0.0);
  for (std::size_t a = 0; a < lp.num_profiles(); ++a) {
    const auto [set, pay] = outcome(lp.profiles()[a].type.values);
    mech.allocation[a * lp.num_sets() + set.bits()] = 1.0;
    mech.payments[a] = pay;
  }
  return mech;
}

// Posted item prices viewed as a direct mechanism.
inline Mechanism encode_posted_prices(const MechanismLP& lp, const Instance& inst, const PriceVector& p) {
  const BoostTable table(inst);
  return encode_mechanism(lp, [&](std::span<const double> t) {
    const Purchase buy = best_response_items(table, p, t);
    return std::pair{buy.items, buy.payment};
  });
}

struct OptResult {
  double opt_revenue = 0.0;
  Mechanism mechanism;
  double max_residual = 0.0;
  double min_payment = 0.0;
  std::size_t iterations = 0;
};

struct OptOptions {
  SimplexOptions simplex;
  // IC rows added per misreporting type and round of constraint generation.
  std::size_t rows_per_type = 8;
  std::size_t max_rounds = 200;
};

// Solves the LP by constraint generation: start from the simplex rows only,
// add the most violated IC rows, re-solve until no IC row is violated.
inline OptResult solve_opt(const MechanismLP& lp, const OptOptions& options = {}) {
  const std::size_t n = lp.num_profiles();
  const std::size_t k = lp.num_sets();
  const std::size_t per = k - 1;  // nonempty sets
  const std::size_t cols = n * per + n;
  const auto xcol = [per](std::size_t a, std::size_t s) { return a * per + (s - 1); };
  const auto ucol = [n, per](std::size_t a) { return n * per + a; };

  std::vector<double> c(cols, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    const double f = lp.profiles()[a].prob;
    for (std::size_t s = 1; s < k; ++s) c[xcol(a, s)] = f * lp.value(a, s);
    c[ucol(a)] = -f;
  }
  Simplex simplex(cols, std::move(c), options.simplex);
  std::vector<double> row(cols);
  for (std::size_t a = 0; a < n; ++a) {
    std::fill(row.begin(), row.end(), 0.0);
    for (std::size_t s = 1; s < k; ++s) row[xcol(a, s)] = 1.0;
    simplex.add_row(row, 1.0);
  }

  // in_lp[a * n + b]: the row "type a does not gain by reporting b" is present.
  std::vector<char> in_lp(n * n, 0);
  std::vector<std::pair<double, std::size_t>> worst;
  OptResult out;
  LPSolution sol;
  for (std::size_t round = 0;; ++round) {
    if (round >= options.max_rounds) throw NumericalFailure("constraint generation did not converge");
    sol = simplex.solve();
    bool added = false;
    for (std::size_t a = 0; a < n; ++a) {
      worst.clear();
      for (std::size_t b = 0; b < n; ++b) {
        if (b == a || in_lp[a * n + b]) continue;
        double gain = sol.x[ucol(b)] - sol.x[ucol(a)];
        for (std::size_t s = 1; s < k; ++s) gain += sol.x[xcol(b, s)] * (lp.value(a, s) - lp.value(b, s));
        if (gain > 1e-10) worst.emplace_back(gain, b);
      }
      const std::size_t take = std::min(worst.size(), options.rows_per_type);
      std::partial_sort(worst.begin(), worst.begin() + static_cast<std::ptrdiff_t>(take), worst.end(),
                        [](const auto& x, const auto& y) { return x.first > y.first || (x.first == y.first && x.second < y.second); });
      for (std::size_t w = 0; w < take; ++w) {
        const std::size_t b = worst[w].second;
        //   sum_S x_S(b) (v(a,S) - v(b,S)) + u(b) - u(a) <= 0
        std::fill(row.begin(), row.end(), 0.0);
        for (std::size_t s = 1; s < k; ++s) row[xcol(b, s)] = lp.value(a, s) - lp.value(b, s);
        row[ucol(b)] = 1.0;
        row[ucol(a)] = -1.0;
        simplex.add_row(row, 0.0);
        in_lp[a * n + b] = 1;
        added = true;
      }
    }
    if (!added) break;
  }
  out.iterations = simplex.iterations();

  out.mechanism.allocation.assign(n * k, 0.0);
  out.mechanism.payments.assign(n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    double taken = 0.0, value = 0.0;
    for (std::size_t s = 1; s < k; ++s) {
      const double x = sol.x[xcol(a, s)];
      out.mechanism.allocation[a * k + s] = x;
      taken += x;
      value += x * lp.value(a, s);
    }
    out.mechanism.allocation[a * k] = 1.0 - taken;
    out.mechanism.payments[a] = value - sol.x[ucol(a)];
  }
  out.opt_revenue = expected_revenue(lp, out.mechanism);
  out.max_residual = feasibility_residual(lp, out.mechanism);
  out.min_payment = *std::min_element(out.mechanism.payments.begin(), out.mechanism.payments.end());
  if (out.max_residual > kLpFeasibilityTol) {
    throw NumericalFailure("LP solution violates constraints by " + std::to_string(out.max_residual));
  }
  if (std::abs(out.opt_revenue - sol.objective) > kLpFeasibilityTol * std::max(1.0, std::abs(sol.objective))) {
    throw NumericalFailure("LP objective disagrees with recomputed revenue");
  }
  return out;
}

inline OptResult solve_opt(const Instance& inst) { return solve_opt(build_lp(inst)); }

}  // namespace complements
