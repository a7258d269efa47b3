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

// Dense tableau simplex for
//
//   maximize c'x  subject to  A x <= b,  x >= 0,
//
// starting from b >= 0 so the all-slack basis is feasible. Rows may be added
// after a solve (cutting planes); the next solve then runs dual simplex pivots
// back to feasibility before finishing with primal pivots. The condensed
// (Tucker) tableau keeps only the nonbasic columns. The final basic solution is
// recomputed from the original rows with a sparse LU factorization.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "complements/errors.hpp"

namespace complements {

struct DenseLP {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;  // row-major, rows x cols
  std::vector<double> b;
  std::vector<double> c;

  DenseLP(std::size_t r, std::size_t n) : rows(r), cols(n), a(r * n, 0.0), b(r, 0.0), c(n, 0.0) {}

  double& at(std::size_t r, std::size_t j) { return a[r * cols + j]; }
  double at(std::size_t r, std::size_t j) const { return a[r * cols + j]; }
};

struct LPSolution {
  std::vector<double> x;
  double objective = 0.0;
  std::size_t iterations = 0;
};

struct SimplexOptions {
  double pivot_tol = 1e-9;
  double cost_tol = 1e-10;
  double feasibility_tol = 1e-9;
  std::size_t max_iterations = 1'000'000;
  // Consecutive degenerate pivots before switching to Bland's rule.
  std::size_t stall_limit = 50;
};

class Simplex {
 public:
  Simplex(std::size_t cols, std::vector<double> c, SimplexOptions opt = {})
      : n_(cols), width_(cols + 1), c_(std::move(c)), opt_(opt), obj_(cols + 1, 0.0), nonbasic_(cols) {
    if (c_.size() != n_) throw std::invalid_argument("objective has wrong length");
    for (std::size_t j = 0; j < n_; ++j) {
      obj_[j] = -c_[j];
      nonbasic_[j] = j;
    }
  }

  std::size_t rows() const { return basic_.size(); }
  std::size_t cols() const { return n_; }
  std::size_t iterations() const { return iterations_; }

  // Appends a_row . x <= b, expressed in the current nonbasic variables.
  void add_row(std::span<const double> a_row, double b) {
    if (a_row.size() != n_) throw std::invalid_argument("row has wrong length");
    const std::size_t label = n_ + basic_.size();
    std::vector<double> row(width_, 0.0);
    std::vector<std::pair<std::size_t, double>> sparse;
    // Position of each structural label among the nonbasic columns.
    for (std::size_t j = 0; j < n_; ++j) {
      if (nonbasic_[j] < n_) row[j] = a_row[nonbasic_[j]];
    }
    row[n_] = b;
    for (std::size_t r = 0; r < basic_.size(); ++r) {
      const std::size_t v = basic_[r];
      if (v >= n_ || a_row[v] == 0.0) continue;
      const double f = a_row[v];
      const double* src = &t_[r * width_];
      for (std::size_t j = 0; j <= n_; ++j) row[j] -= f * src[j];
    }
    for (std::size_t j = 0; j < n_; ++j) {
      if (a_row[j] != 0.0) sparse.emplace_back(j, a_row[j]);
    }
    t_.insert(t_.end(), row.begin(), row.end());
    basic_.push_back(label);
    rows_.push_back(std::move(sparse));
    b_.push_back(b);
  }

  void add_row(const DenseLP& lp, std::size_t r) {
    add_row(std::span<const double>(&lp.a[r * lp.cols], lp.cols), lp.b[r]);
  }

  LPSolution solve() {
    dual_phase();
    primal_phase();
    return polished();
  }

 private:
  double& at(std::size_t r, std::size_t j) { return t_[r * width_ + j]; }
  double rhs(std::size_t r) const { return t_[r * width_ + n_]; }

  void count_iteration() {
    if (++iterations_ > opt_.max_iterations) throw NumericalFailure("simplex iteration limit reached");
  }

  void pivot(std::size_t leave, std::size_t enter) {
    const std::size_t m = basic_.size();
    const double p = at(leave, enter);
    double* prow = &t_[leave * width_];
    pivot_row_.resize(width_);
    for (std::size_t j = 0; j < width_; ++j) pivot_row_[j] = prow[j] / p;
    pivot_row_[enter] = 1.0 / p;
    nz_.clear();
    for (std::size_t j = 0; j < width_; ++j) {
      if (j != enter && pivot_row_[j] != 0.0) nz_.push_back(j);
    }
    const auto eliminate = [&](double* row) {
      const double f = row[enter];
      if (f == 0.0) return;
      for (std::size_t j : nz_) row[j] -= f * pivot_row_[j];
      row[enter] = -f / p;
    };
    for (std::size_t r = 0; r < m; ++r) {
      if (r != leave) eliminate(&t_[r * width_]);
    }
    eliminate(obj_.data());
    for (std::size_t j = 0; j < width_; ++j) prow[j] = pivot_row_[j];
    std::swap(basic_[leave], nonbasic_[enter]);
    for (std::size_t r = 0; r < m; ++r) {
      double& v = t_[r * width_ + n_];
      if (v < 0.0 && v > -opt_.feasibility_tol) v = 0.0;
    }
  }

  // Restores primal feasibility while keeping reduced costs nonnegative.
  void dual_phase() {
    const std::size_t m = basic_.size();
    for (;;) {
      std::size_t leave = m;
      double worst = -opt_.feasibility_tol;
      for (std::size_t r = 0; r < m; ++r) {
        if (rhs(r) < worst) {
          worst = rhs(r);
          leave = r;
        }
      }
      if (leave == m) return;
      count_iteration();
      // Harris pass over the ratios obj_j / -a_lj.
      double bound = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < n_; ++j) {
        const double a = at(leave, j);
        if (a < -opt_.pivot_tol) bound = std::min(bound, (std::max(obj_[j], 0.0) + opt_.cost_tol) / -a);
      }
      std::size_t enter = n_;
      double best = 0.0;
      for (std::size_t j = 0; j < n_; ++j) {
        const double a = at(leave, j);
        if (a < -opt_.pivot_tol && std::max(obj_[j], 0.0) / -a <= bound && -a > best) {
          best = -a;
          enter = j;
        }
      }
      if (enter == n_) throw NumericalFailure("LP is infeasible");
      pivot(leave, enter);
    }
  }

  void primal_phase() {
    const std::size_t m = basic_.size();
    std::size_t stall = 0;
    for (;;) {
      const bool bland = stall >= opt_.stall_limit;
      std::size_t enter = n_;
      double best = -opt_.cost_tol;
      for (std::size_t j = 0; j < n_; ++j) {
        if (obj_[j] < -opt_.cost_tol) {
          if (bland) {
            if (enter == n_ || nonbasic_[j] < nonbasic_[enter]) enter = j;
          } else if (obj_[j] < best) {
            best = obj_[j];
            enter = j;
          }
        }
      }
      if (enter == n_) return;
      count_iteration();

      // Two-pass (Harris) ratio test: bound the step with a small feasibility
      // allowance, then take the largest pivot among rows inside that bound.
      // Bland mode keeps the exact minimum ratio and the smallest label.
      std::size_t leave = m;
      double ratio = std::numeric_limits<double>::infinity();
      if (bland) {
        for (std::size_t r = 0; r < m; ++r) {
          const double a = at(r, enter);
          if (a > opt_.pivot_tol) {
            const double q = rhs(r) / a;
            if (q < ratio - 1e-12 || (q <= ratio + 1e-12 && leave < m && basic_[r] < basic_[leave])) {
              ratio = q;
              leave = r;
            }
          }
        }
      } else {
        double bound = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < m; ++r) {
          const double a = at(r, enter);
          if (a > opt_.pivot_tol) bound = std::min(bound, (rhs(r) + opt_.feasibility_tol) / a);
        }
        double best_pivot = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
          const double a = at(r, enter);
          if (a > opt_.pivot_tol && rhs(r) / a <= bound && a > best_pivot) {
            best_pivot = a;
            leave = r;
          }
        }
        if (leave < m) ratio = std::max(0.0, rhs(leave) / at(leave, enter));
      }
      if (leave == m) throw NumericalFailure("LP is unbounded");
      stall = ratio * -obj_[enter] <= 1e-12 * std::max(1.0, std::abs(obj_[n_])) ? stall + 1 : 0;
      pivot(leave, enter);
    }
  }

  // Basic solution of the final basis, solved from the original rows.
  LPSolution polished() const {
    const std::size_t m = basic_.size();
    LPSolution sol;
    sol.iterations = iterations_;
    sol.x.assign(n_, 0.0);
    if (m > 0) {
      std::vector<Eigen::Triplet<double>> trip;
      std::vector<std::ptrdiff_t> column_of(n_, -1);
      for (std::size_t r = 0; r < m; ++r) {
        if (basic_[r] < n_) column_of[basic_[r]] = static_cast<std::ptrdiff_t>(r);
      }
      for (std::size_t r = 0; r < m; ++r) {
        const auto row = static_cast<Eigen::Index>(r);
        for (auto [j, v] : rows_[r]) {
          if (column_of[j] >= 0) trip.emplace_back(row, static_cast<Eigen::Index>(column_of[j]), v);
        }
      }
      // A basic slack of row r sits in the column of the row that holds it.
      for (std::size_t r = 0; r < m; ++r) {
        if (basic_[r] >= n_) trip.emplace_back(static_cast<Eigen::Index>(basic_[r] - n_), static_cast<Eigen::Index>(r), 1.0);
      }
      Eigen::SparseMatrix<double> basis(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
      basis.setFromTriplets(trip.begin(), trip.end());
      basis.makeCompressed();
      Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
      lu.compute(basis);
      if (lu.info() != Eigen::Success) throw NumericalFailure("basis factorization failed");
      Eigen::VectorXd rhs_vec(static_cast<Eigen::Index>(m));
      for (std::size_t r = 0; r < m; ++r) rhs_vec[static_cast<Eigen::Index>(r)] = b_[r];
      const Eigen::VectorXd xb = lu.solve(rhs_vec);
      if (lu.info() != Eigen::Success) throw NumericalFailure("basis solve failed");
      for (std::size_t r = 0; r < m; ++r) {
        if (basic_[r] < n_) sol.x[basic_[r]] = std::max(0.0, xb[static_cast<Eigen::Index>(r)]);
      }
    }
    for (std::size_t j = 0; j < n_; ++j) sol.objective += c_[j] * sol.x[j];
    return sol;
  }

  std::size_t n_;
  std::size_t width_;
  std::vector<double> c_;
  SimplexOptions opt_;
  std::vector<double> t_;    // rows x width, row-major; column n_ is the rhs
  std::vector<double> obj_;  // reduced-cost row; obj_[n_] is the objective value
  std::vector<std::size_t> basic_, nonbasic_;
  std::vector<std::vector<std::pair<std::size_t, double>>> rows_;
  std::vector<double> b_;
  std::vector<double> pivot_row_;
  std::vector<std::size_t> nz_;
  std::size_t iterations_ = 0;
};

// One-shot solve; requires b >= 0.
inline LPSolution solve_simplex(const DenseLP& lp, const SimplexOptions& opt = {}) {
  for (double bi : lp.b) {
    if (!(bi >= 0.0)) throw std::invalid_argument("simplex requires b >= 0");
  }
  Simplex s(lp.cols, lp.c, opt);
  for (std::size_t r = 0; r < lp.rows; ++r) s.add_row(lp, r);
  return s.solve();
}

}  // namespace complements
