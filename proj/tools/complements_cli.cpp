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

// complements: generate, evaluate, optimize and verify pricing instances.
//
//   complements gen numerical-example -o ex.json
//   complements eval ex.json separate-free --free-mode exact-dicut
//   complements opt ex.json --json
//   complements verify cut-expectations --trials 100 --seed 1
//
// Exit codes: 0 success, 1 failed assertion or numerical failure, 2 bad usage
// or input.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "complements/complements.hpp"

namespace {

using complements::Check;
using complements::Instance;
using complements::ItemSet;
using complements::RevenueReport;
using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// "1,3" -> {0, 2}. Empty string is the empty set.
ItemSet parse_items(const std::string& text, int m) {
  ItemSet s;
  std::stringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    int id = 0;
    try {
      id = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw UsageError("bad item id '" + tok + "'");
    }
    if (used != tok.size() || id < 1 || id > m) {
      throw UsageError("item id '" + tok + "' outside 1.." + std::to_string(m));
    }
    if (s.contains(id - 1)) throw UsageError("item " + tok + " listed twice");
    s = s.with(id - 1);
  }
  return s;
}

Json items_json(ItemSet s) {
  Json a = Json::array();
  for (int i : s.items()) a.push_back(i + 1);
  return a;
}

Json check_json(const Check& c) {
  return Json{{"label", c.label},   {"lhs", c.lhs},       {"relation", complements::relation_symbol(c.relation)},
              {"rhs", c.rhs},       {"tolerance", c.tol}, {"margin", c.margin},
              {"passed", c.passed}};
}

Json report_json(const RevenueReport& r) {
  Json j{{"mechanism", r.mechanism}, {"revenue", r.revenue}, {"exact", r.exact}};
  if (!r.exact) {
    j["samples"] = r.samples;
    j["seed"] = r.seed;
    if (r.std_error) j["std_error"] = *r.std_error;
  }
  return j;
}

void print_check(const Check& c) {
  std::printf("  %-4s %s: %.12g %s %.12g (margin %.3g)\n", c.passed ? "ok" : "FAIL", c.label.c_str(), c.lhs,
              complements::relation_symbol(c.relation), c.rhs, c.margin);
}

void print_report(const RevenueReport& r) {
  std::printf("  %-16s revenue %.12g", r.mechanism.c_str(), r.revenue);
  if (r.exact) {
    std::printf("  (exact)\n");
  } else {
    std::printf("  (Monte Carlo, %llu samples, seed %llu, std error %.3g)\n",
                static_cast<unsigned long long>(r.samples), static_cast<unsigned long long>(r.seed),
                r.std_error.value_or(0.0));
  }
}

void emit_json(const Json& j) { std::cout << j.dump(2) << "\n"; }

// ---- gen ----

struct GenArgs {
  std::string kind;
  std::string out;
  int n = 10;
  int m = 3;
  int k = 2;
  complements::RandomParams random;
};

int run_gen(const GenArgs& a) {
  complements::InstanceFile f;
  f.meta["generator"] = a.kind;
  if (a.kind == "numerical-example") {
    f.instance = complements::gen_numerical_example();
  } else if (a.kind == "lb-standard") {
    f.instance = complements::gen_lb_standard(a.n);
    f.meta["n"] = a.n;
  } else if (a.kind == "hypergraph-lb") {
    f.instance = complements::gen_hypergraph_lb(a.m, a.k);
    f.meta["m"] = a.m;
    f.meta["k"] = a.k;
  } else if (a.kind == "random") {
    complements::RandomParams p = a.random;
    p.m = a.m;
    f.instance = complements::gen_random(p);
    f.meta["m"] = p.m;
    f.meta["layers"] = p.layers;
    f.meta["min_support"] = p.min_support;
    f.meta["max_support"] = p.max_support;
    f.meta["edge_density"] = p.edge_density;
    f.meta["boost_scale"] = p.boost_scale;
    f.meta["max_rank"] = p.max_rank;
    f.meta["value_grid"] = p.value_grid;
    f.meta["seed"] = p.seed;
  } else {
    throw UsageError("unknown generator '" + a.kind + "'");
  }
  if (a.out.empty() || a.out == "-") {
    std::cout << complements::dump(f);
  } else {
    complements::save(f, a.out);
  }
  return kExitOk;
}

// ---- eval ----

struct EvalArgs {
  std::string path;
  std::string mechanism;
  std::optional<std::string> free;
  std::string free_mode;
  std::vector<std::string> bundles;
  bool exact = false;
  std::uint64_t mc = 0;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  int restarts = 8;
  bool json = false;
};

int run_eval(const EvalArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const complements::InstanceFile file = complements::load(a.path);
  const Instance& inst = file.instance;
  const int m = inst.num_items();
  if (a.exact && a.mc > 0) throw UsageError("--exact and --mc are exclusive");
  const complements::EvalMode mode =
      a.mc > 0 ? complements::EvalMode::Sampled(a.mc, a.seed, a.jobs) : complements::EvalMode::Exact();

  Json j{{"command", "eval"},
         {"instance", {{"path", a.path}, {"fingerprint", complements::fingerprint(inst)}}},
         {"seed", a.seed}};
  Json details = Json::object();
  RevenueReport report;

  if (a.mechanism == "separate") {
    complements::PriceVector p;
    for (int i = 0; i < m; ++i) p.prices.push_back(complements::monopoly_reserve(inst.marginal(i)).reserve);
    report = complements::evaluate_revenue(inst, p, mode, "separate");
    details["prices"] = p.prices;
    details["srev_additive"] = complements::srev_additive(inst);
  } else if (a.mechanism == "bundle") {
    const complements::GrandBundle b = complements::brev(inst, mode);
    report = b.report;
    details["price"] = b.price;
    details["sale_probability"] = b.sale_probability;
  } else if (a.mechanism == "separate-free") {
    ItemSet f;
    if (a.free && !a.free_mode.empty()) throw UsageError("--free and --free-mode are exclusive");
    if (a.free) {
      f = parse_items(*a.free, m);
    } else {
      const complements::CutGraph g = complements::build_graph(inst);
      complements::Rng rng = complements::make_stream(a.seed, 1);
      const int k = std::max(1, inst.boosts().directed_positive_rank());
      const int d = std::max(1, inst.boosts().max_out_degree());
      if (a.free_mode == "exact-dicut") {
        const auto cut = complements::exact_max_dicut(g);
        f = cut.free_set;
        details["cut_weight"] = cut.weight;
      } else if (a.free_mode == "pairwise") {
        f = complements::sample_free_set_pairwise(m, rng);
      } else if (a.free_mode == "rank") {
        f = complements::sample_free_set_rank(m, k, rng);
      } else if (a.free_mode == "degree") {
        f = complements::sample_free_set_degree(g, d, rng);
      } else if (a.free_mode == "local-search") {
        const auto ls = complements::local_search_dicut(g, a.restarts, rng);
        f = ls.free_set;
        details["cut_weight"] = ls.weight;
        details["moves"] = ls.moves;
      } else {
        throw UsageError("separate-free needs --free or --free-mode exact-dicut|pairwise|rank|degree|local-search");
      }
      details["free_mode"] = a.free_mode;
      if (!details.contains("cut_weight")) details["cut_weight"] = complements::cut_weight(g, f);
    }
    const complements::FreeSetPartition sf = complements::separate_free(inst, f);
    report = complements::evaluate_revenue(inst, sf.prices, mode, "separate-free");
    details["free_set"] = items_json(f);
    details["prices"] = sf.prices.prices;
    details["lower_bound"] = sf.lower_bound;
  } else if (a.mechanism == "bundle-pricing") {
    const ItemSet f = a.free ? parse_items(*a.free, m) : ItemSet();
    if (a.bundles.empty()) throw UsageError("bundle-pricing needs at least one --bundles list");
    std::vector<ItemSet> bundles;
    for (const auto& b : a.bundles) bundles.push_back(parse_items(b, m));
    const complements::BundleMenu menu = complements::bundle_pricing(inst, f, bundles);
    report = complements::evaluate_menu_revenue(inst, menu, mode);
    details["free_set"] = items_json(f);
    Json bj = Json::array();
    const auto proxy = complements::proxy_revenue_by_bundle(inst, menu);
    for (std::size_t i = 0; i < menu.bundles.size(); ++i) {
      bj.push_back({{"items", items_json(menu.bundles[i])}, {"price", menu.prices[i]}, {"proxy_revenue", proxy[i]}});
    }
    details["bundles"] = bj;
    details["proxy_revenue"] = complements::proxy_revenue(inst, menu);
  } else {
    throw UsageError("unknown mechanism '" + a.mechanism + "'");
  }

  Json rj = report_json(report);
  rj["details"] = details;
  j["mechanisms"] = Json::array({rj});
  j["seconds"] = seconds_since(t0);
  if (a.json) {
    emit_json(j);
    return kExitOk;
  }
  std::printf("instance %s (fingerprint %s)\n", a.path.c_str(), complements::fingerprint(inst).c_str());
  print_report(report);
  for (const auto& [key, value] : details.items()) std::printf("    %s: %s\n", key.c_str(), value.dump().c_str());
  std::printf("  time %.3fs\n", j["seconds"].get<double>());
  return kExitOk;
}

// ---- opt ----

int run_opt(const std::string& path, bool json) {
  const auto t0 = std::chrono::steady_clock::now();
  const complements::InstanceFile file = complements::load(path);
  const Instance& inst = file.instance;
  const complements::OptResult opt = complements::solve_opt(inst);
  const double opt_seconds = seconds_since(t0);
  const complements::GrandBundle b = complements::brev(inst);
  const complements::BestFreeSet sf = complements::best_separate_free(inst);
  const double best = std::max(b.report.revenue, sf.revenue);
  const bool bundle_wins = b.report.revenue > sf.revenue;
  const double ratio = best > 0.0 ? opt.opt_revenue / best : (opt.opt_revenue > 0.0 ? INFINITY : 1.0);

  RevenueReport opt_report{"opt", opt.opt_revenue, true, 0, 0, std::nullopt};
  RevenueReport sf_report{"separate-free", sf.revenue, true, 0, 0, std::nullopt};
  Json j{{"command", "opt"},
         {"instance", {{"path", path}, {"fingerprint", complements::fingerprint(inst)}}},
         {"mechanisms", Json::array({report_json(opt_report), report_json(b.report), report_json(sf_report)})},
         {"opt", {{"revenue", opt.opt_revenue},
                  {"max_residual", opt.max_residual},
                  {"min_payment", opt.min_payment},
                  {"iterations", opt.iterations},
                  {"seconds", opt_seconds}}},
         {"bundle", {{"price", b.price}, {"revenue", b.report.revenue}}},
         {"best_separate_free", {{"free_set", items_json(sf.free_set)}, {"revenue", sf.revenue}}},
         {"winner", bundle_wins ? "bundle" : "separate-free"},
         {"ratio", ratio},
         {"seconds", seconds_since(t0)}};
  if (json) {
    emit_json(j);
    return kExitOk;
  }
  std::printf("instance %s (fingerprint %s)\n", path.c_str(), complements::fingerprint(inst).c_str());
  print_report(opt_report);
  print_report(b.report);
  print_report(sf_report);
  std::printf("  bundle price %.12g; best free set %s\n", b.price, complements::to_string(sf.free_set).c_str());
  std::printf("  winner %s; OPT / max(BREV, best SEPARATE/FREE) = %.12g\n", bundle_wins ? "bundle" : "separate-free",
              ratio);
  std::printf("  LP: %zu pivots, residual %.3g, min payment %.12g, %.3fs\n", opt.iterations, opt.max_residual,
              opt.min_payment, opt_seconds);
  return kExitOk;
}

// ---- verify ----

int run_verify(const std::string& suite, const complements::VerifyParams& p, bool json) {
  const complements::SuiteResult r = complements::run_suite(suite, p);
  if (json) {
    Json checks = Json::array();
    for (const Check& c : r.checks) checks.push_back(check_json(c));
    Json j{{"command", "verify"},
           {"suite", r.suite},
           {"seed", p.seed},
           {"instances", r.instances},
           {"passed", r.passed()},
           {"failures", r.failures()},
           {"checks", checks},
           {"seconds", r.seconds}};
    emit_json(j);
  } else {
    std::printf("suite %s: %zu instance(s), %zu check(s), %zu failure(s), %.2fs\n", r.suite.c_str(), r.instances,
                r.checks.size(), r.failures(), r.seconds);
    for (const Check& c : r.checks) print_check(c);
    std::printf("%s\n", r.passed() ? "PASS" : "FAIL");
  }
  return r.passed() ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pricing laboratory for items with proportional complementarities"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate an instance file");
  gen_cmd->add_option("kind", gen.kind, "numerical-example | lb-standard | hypergraph-lb | random")->required();
  gen_cmd->add_option("-o,--out", gen.out, "Output path (stdout when omitted)");
  gen_cmd->add_option("--n", gen.n, "Items for lb-standard");
  gen_cmd->add_option("--m", gen.m, "Items for hypergraph-lb and random");
  gen_cmd->add_option("--k", gen.k, "Source-set size for hypergraph-lb");
  gen_cmd->add_option("--layers", gen.random.layers, "Boost layers (random)");
  gen_cmd->add_option("--min-support", gen.random.min_support, "Smallest support size (random)");
  gen_cmd->add_option("--max-support", gen.random.max_support, "Largest support size (random)");
  gen_cmd->add_option("--density", gen.random.edge_density, "Edge probability (random)");
  gen_cmd->add_option("--boost-scale", gen.random.boost_scale, "Largest boost (random)");
  gen_cmd->add_option("--max-rank", gen.random.max_rank, "Largest source set (random)");
  gen_cmd->add_option("--grid", gen.random.value_grid, "Values are drawn from 0..grid (random)");
  gen_cmd->add_option("--seed", gen.random.seed, "Seed (random)");

  EvalArgs ev;
  std::string free_text;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a simple mechanism on an instance");
  eval_cmd->add_option("instance", ev.path, "Instance file")->required();
  eval_cmd->add_option("mechanism", ev.mechanism, "separate | bundle | separate-free | bundle-pricing")->required();
  auto* free_opt = eval_cmd->add_option("--free", free_text, "Free items, 1-based, comma separated");
  eval_cmd->add_option("--free-mode", ev.free_mode, "exact-dicut | pairwise | rank | degree | local-search");
  eval_cmd->add_option("--bundles", ev.bundles, "One priced bundle per occurrence, e.g. --bundles 1,2 --bundles 3");
  auto* exact_flag = eval_cmd->add_flag("--exact", ev.exact, "Exact enumeration (default)");
  auto* mc_opt = eval_cmd->add_option("--mc", ev.mc, "Monte Carlo sample count");
  eval_cmd->add_option("--seed", ev.seed, "Seed for sampling and random free sets");
  eval_cmd->add_option("--jobs", ev.jobs, "Worker threads for Monte Carlo");
  eval_cmd->add_option("--restarts", ev.restarts, "Random restarts for local search");
  eval_cmd->add_flag("--json", ev.json, "JSON output");
  exact_flag->excludes(mc_opt);

  std::string opt_path;
  bool opt_json = false;
  auto* opt_cmd = app.add_subcommand("opt", "Optimal revenue over all mechanisms (small instances)");
  opt_cmd->add_option("instance", opt_path, "Instance file")->required();
  opt_cmd->add_flag("--json", opt_json, "JSON output");

  std::string suite;
  complements::VerifyParams vp;
  std::size_t trials = 0;
  double a_value = 0.0;
  bool verify_json = false;
  auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
  verify_cmd->add_option("suite", suite, "Suite name")->required()->check(CLI::IsMember(complements::suite_names()));
  auto* trials_opt = verify_cmd->add_option("--trials", trials, "Batch size");
  verify_cmd->add_option("--seed", vp.seed, "Batch seed");
  auto* a_opt = verify_cmd->add_option("--a", a_value, "Cantelli parameter a > 0 (additive-bounds)");
  verify_cmd->add_option("--jobs", vp.jobs, "Worker threads");
  verify_cmd->add_flag("--json", verify_json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) return run_gen(gen);
    if (eval_cmd->parsed()) {
      if (free_opt->count() > 0) ev.free = free_text;
      return run_eval(ev);
    }
    if (opt_cmd->parsed()) return run_opt(opt_path, opt_json);
    if (verify_cmd->parsed()) {
      if (trials_opt->count() > 0) vp.trials = trials;
      if (a_opt->count() > 0) {
        if (!(a_value > 0.0)) throw UsageError("--a must be positive");
        vp.a = a_value;
      }
      return run_verify(suite, vp, verify_json);
    }
  } catch (const complements::NumericalFailure& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitFailed;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
