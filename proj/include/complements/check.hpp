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

#include <cmath>
#include <string>
#include <utility>

namespace complements {

// One numeric assertion. `margin` is positive when the assertion holds with
// room to spare and negative by the size of the violation otherwise.
struct Check {
  enum class Relation { kLessEq, kGreaterEq, kEqual, kLess, kGreater };

  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;
  Relation relation = Relation::kLessEq;
  double tol = 0.0;
  bool passed = false;
  double margin = 0.0;

  static Check make(std::string label, double lhs, Relation rel, double rhs, double tol) {
    Check c{std::move(label), lhs, rhs, rel, tol, false, 0.0};
    switch (rel) {
      case Relation::kLessEq:
        c.margin = rhs - lhs;
        c.passed = c.margin >= -tol;
        break;
      case Relation::kGreaterEq:
        c.margin = lhs - rhs;
        c.passed = c.margin >= -tol;
        break;
      case Relation::kEqual:
        c.margin = -std::abs(lhs - rhs);
        c.passed = c.margin >= -tol;
        break;
      case Relation::kLess:
        c.margin = rhs - lhs;
        c.passed = c.margin > tol;
        break;
      case Relation::kGreater:
        c.margin = lhs - rhs;
        c.passed = c.margin > tol;
        break;
    }
    if (std::isnan(lhs) || std::isnan(rhs)) c.passed = false;
    return c;
  }

  static Check le(std::string label, double lhs, double rhs, double tol) {
    return make(std::move(label), lhs, Relation::kLessEq, rhs, tol);
  }
  static Check ge(std::string label, double lhs, double rhs, double tol) {
    return make(std::move(label), lhs, Relation::kGreaterEq, rhs, tol);
  }
  static Check eq(std::string label, double lhs, double rhs, double tol) {
    return make(std::move(label), lhs, Relation::kEqual, rhs, tol);
  }
  static Check lt(std::string label, double lhs, double rhs) {
    return make(std::move(label), lhs, Relation::kLess, rhs, 0.0);
  }
};

inline const char* relation_symbol(Check::Relation r) {
  switch (r) {
    case Check::Relation::kLessEq:
      return "<=";
    case Check::Relation::kGreaterEq:
      return ">=";
    case Check::Relation::kEqual:
      return "==";
    case Check::Relation::kLess:
      return "<";
    case Check::Relation::kGreater:
      return ">";
  }
  return "?";
}

}  // namespace complements
