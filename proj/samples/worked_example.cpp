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

// Walks the four-item cycle instance through the library: reserves, the cut
// graph, SEPARATE/FREE on the best cut, grand bundling, and the LP optimum.
// Pass an instance file to run the same steps on it instead.

#include <cstdio>
#include <string>

#include "complements/complements.hpp"

int main(int argc, char** argv) {
  using namespace complements;
  const Instance inst = argc > 1 ? load(argv[1]).instance : gen_numerical_example();

  std::printf("items %d, layers %d, edges %zu, k = %d, d = %d\n", inst.num_items(), inst.boosts().num_layers(),
              inst.boosts().edges().size(), inst.boosts().directed_positive_rank(), inst.boosts().max_out_degree());
  for (int i = 0; i < inst.num_items(); ++i) {
    const ReserveResult r = monopoly_reserve(inst.marginal(i));
    std::printf("item %d: reserve %g, revenue %g\n", i + 1, r.reserve, r.revenue);
  }

  const CutGraph g = build_graph(inst);
  const DicutResult cut = exact_max_dicut(g);
  std::printf("max dicut: free set %s, weight %g\n", to_string(cut.free_set).c_str(), cut.weight);

  const FreeSetPartition sf = separate_free(inst, cut.free_set);
  std::printf("SEPARATE/FREE prices:");
  for (double p : sf.prices.prices) std::printf(" %g", p);
  std::printf("\nSEPARATE/FREE revenue %g\n", evaluate_revenue(inst, sf.prices).revenue);

  const GrandBundle b = brev(inst);
  std::printf("grand bundle: price %g, revenue %g\n", b.price, b.report.revenue);

  if (inst.profile_count(kMaxLpAllocationVariables) << inst.num_items() <= kMaxLpAllocationVariables) {
    const OptResult opt = solve_opt(inst);
    std::printf("optimal revenue %.10g (%zu pivots)\n", opt.opt_revenue, opt.iterations);
  }
  return 0;
}
