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


// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when any
// criterion fails.

#include <cstdio>
#include <limits>
#include <string>

#include "complements/verify.hpp"

namespace {

using complements::Check;
using complements::SuiteResult;

struct Criterion {
  int id;
  const char* suite;
  const char* what;
  double time_limit;  // seconds
};

constexpr Criterion kCriteria[] = {
    {1, "numerical-example", "worked example: reserves, dicut, SEPARATE/FREE, grand bundle", 1.0},
    {2, "lb-standard", "standard lower-bound family scaling, n in {6,8,10,12}", 10.0},
    {3, "cut-expectations", "sampler expected cuts vs sum eta R, 100 instances", 30.0},
    {4, "boost-dominance", "OPT <= OPT(fully boosted), 50 instances", 60.0},
    {5, "pairwise-ratio", "OPT <= 12 max(BREV, best SEPARATE/FREE), k = 1", 60.0},
    {6, "hypergraph-ratio", "OPT <= (8 min(d,k) + 4) max(BREV, best SEPARATE/FREE)", 60.0},
    {7, "additive-bounds", "TAIL, variance, Cantelli and OPT bounds, 50 additive instances", 120.0},
    {8, "hypergraph-lb", "hypergraph family: rank-sampler proxy revenue and bundle bounds", 60.0},
};

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  int failed = 0;
  for (const Criterion& c : kCriteria) {
    std::string detail;
    bool ok = false;
    double seconds = 0.0;
    try {
      const SuiteResult r = complements::run_suite(c.suite);
      seconds = r.seconds;
      double worst = std::numeric_limits<double>::infinity();
      const Check* first_bad = nullptr;
      for (const Check& ch : r.checks) {
        worst = std::min(worst, ch.margin);
        if (!ch.passed && first_bad == nullptr) first_bad = &ch;
      }
      ok = r.passed() && seconds < c.time_limit;
      char buf[160];
      std::snprintf(buf, sizeof buf, "%zu checks, %zu failed, min margin %.6g, %.2fs (limit %.0fs)", r.checks.size(),
                    r.failures(), worst, seconds, c.time_limit);
      detail = buf;
      if (first_bad != nullptr) detail += "; first failure: " + first_bad->label;
    } catch (const std::exception& e) {
      detail = std::string("error: ") + e.what();
    }
    std::printf("criterion %d: %s  %s [%s]: %s\n", c.id, ok ? "PASS" : "FAIL", c.what, c.suite, detail.c_str());
    failed += ok ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(kCriteria)) - failed, std::size(kCriteria));
  return failed == 0 ? 0 : 1;
}
