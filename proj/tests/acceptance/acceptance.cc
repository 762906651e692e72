// Copyright 2026 The sparsefuse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance checks. Prints one PASS/FAIL/SKIP line per criterion, followed
// by indented detail lines, and exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "cli/bench.h"
#include "cli/cli.h"
#include "sparsefuse/executor.h"
#include "sparsefuse/lowering.h"
#include "sparsefuse/oracle.h"
#include "sparsefuse/solver.h"
#include "sparsefuse/verify.h"
#include "support/fixtures.h"

namespace sf = sparsefuse;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  enum Status { kPass, kFail, kSkip };
  Status status = kPass;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    if (!ok) status = kFail;
    details.push_back((ok ? "ok: " : "not met: ") + what);
  }
  void note(const std::string& what) { details.push_back(what); }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int precision = 3) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

std::string strip_spaces(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  return s;
}

sf::ExecResult run(const sf::ContractionTree& t, const sf::ScheduleSolution& s,
                   const sf::TensorMap& in) {
  return sf::execute(*sf::lower(t, s), sf::bind_inputs(t, s, in));
}

sf::ScheduleSolution at_bound(const sf::ContractionTree& t, int l) {
  return *sf::solve(sf::build_model(t, l));
}

const char* const kGoldenIr =
    "forall(r, forall(j, where(forall(k, forall(i, R(j,k,i) = Y(k,i) * D(r,j,k))), "
    "where(forall(q, forall(k, forall(i, Y(k,i) = X(q,i) * C(r,q,k)))), "
    "forall(p, forall(q, forall(i, X(q,i) = A(p,q,i) * B(r,j,p))))))))";

Verdict golden_ir() {
  Verdict v;
  const auto start = Clock::now();
  const sf::ContractionTree t = sf::testing::running_example(4);
  const sf::MinOrderResult r = sf::search_min_order(t, sf::default_max_order(t));
  const std::string ir_min = r.solution ? sf::print_ir(*sf::lower(t, *r.solution)) : "";
  const std::string ir_two = sf::print_ir(*sf::lower(t, at_bound(t, 2)));
  const double elapsed = seconds_since(start);
  v.require(r.bound == 2, "minimum bound is 2 (found " + std::to_string(r.bound) + ")");
  v.require(strip_spaces(ir_min) == strip_spaces(kGoldenIr),
            "IR at the minimum bound equals the golden block");
  v.note("IR at l=" + std::to_string(r.bound) + ": " + ir_min);
  v.note(std::string("IR at l=2 ") +
         (strip_spaces(ir_two) == strip_spaces(kGoldenIr) ? "equals" : "differs from") +
         " the golden block: " + ir_two);
  v.note(std::string("exhaustive search at l=1: ") +
         (sf::brute_force_sat(t, 1) ? "sat" : "unsat"));
  v.require(elapsed < 1.0, "runtime " + fmt(elapsed) + " s < 1 s");
  return v;
}

Verdict witness_values() {
  Verdict v;
  const sf::ContractionTree t = sf::testing::running_example(4);
  const sf::ScheduleSolution w = sf::testing::running_example_witness();
  const auto ok = sf::verify_solution(t, 2, w);
  v.require(ok.empty(), "witness passes at l=2 (" + std::to_string(ok.size()) + " violations)");
  sf::ScheduleSolution swapped = w;
  std::swap(swapped.lp[0]["r"], swapped.lp[0]["j"]);
  const auto bad = sf::verify_solution(t, 2, swapped);
  v.require(!bad.empty(), "swapping lp[0,r] and lp[0,j] is rejected (" +
                              std::to_string(bad.size()) + " violations)");
  if (!bad.empty()) v.note("first violation: " + bad.front());
  return v;
}

Verdict sat_agreement() {
  Verdict v;
  std::vector<std::pair<std::string, sf::ContractionTree>> trees;
  trees.emplace_back("running_example", sf::testing::running_example(4));
  for (const char* kind : {"mttkrp1", "mttkrp2", "mttkrp3", "ttmc1", "ttmc2", "ttmc3"}) {
    sf::cli::BenchParams p;
    p.extents = {3, 3, 3};
    p.rank = 2;
    trees.emplace_back(kind, sf::cli::bench_generate(kind, p).tree);
  }
  trees.emplace_back("chain", sf::parse_network("extent i 3\nextent j 3\nextent k 3\n"
                                                "X[i,j] = A[i,k] * B[k,j]\n"
                                                "R[i] = X[i,j] * V[j]\n"));
  int agree = 0;
  int total = 0;
  bool re_l1 = false;
  bool re_l2 = false;
  for (const auto& [name, t] : trees) {
    std::string row = name + ":";
    for (int l = 1; l <= 3; ++l) {
      const bool solver = sf::solve(sf::build_model(t, l)).has_value();
      const bool exhaustive = sf::brute_force_sat(t, l);
      ++total;
      agree += solver == exhaustive;
      row += " l=" + std::to_string(l) + " " + (solver ? "sat" : "unsat") + "/" +
             (exhaustive ? "sat" : "unsat");
      if (name == "running_example" && l == 1) re_l1 = solver;
      if (name == "running_example" && l == 2) re_l2 = solver;
    }
    v.note(row + " (solver/exhaustive)");
  }
  v.require(agree == total, "solver and exhaustive search agree on " + std::to_string(agree) +
                                "/" + std::to_string(total) + " cases");
  v.require(!re_l1, std::string("running example unsat at l=1 (solver: ") +
                        (re_l1 ? "sat" : "unsat") + ")");
  v.require(re_l2, "running example sat at l=2");
  return v;
}

Verdict numeric_equivalence() {
  Verdict v;
  struct Case {
    std::string label;
    std::string kind;
    sf::cli::BenchParams params;
  };
  std::vector<Case> cases;
  for (double density : {0.2, 1.0}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      sf::cli::BenchParams p;
      p.extents = {6};
      p.density = density;
      p.seed = seed;
      cases.push_back({"running_example density " + fmt(density) + " seed " +
                           std::to_string(seed),
                       "running_example", p});
    }
  }
  for (const char* kind : {"mttkrp1", "mttkrp2", "mttkrp3"}) {
    sf::cli::BenchParams p;
    p.extents = {30, 40, 50};
    p.rank = 8;
    p.density = 0.01;
    cases.push_back({std::string(kind) + " 30x40x50 1% rank 8", kind, p});
  }
  for (const char* kind : {"ttmc1", "ttmc2", "ttmc3"}) {
    sf::cli::BenchParams p;
    p.extents = {20, 20, 20};
    p.rank = 16;
    cases.push_back({std::string(kind) + " 20^3 rank 16", kind, p});
  }
  cases.push_back({"masked_3term", "masked_3term", {}});
  int passed = 0;
  for (const Case& c : cases) {
    const auto start = Clock::now();
    const sf::cli::BenchInstance inst = sf::cli::bench_generate(c.kind, c.params);
    const sf::MinOrderResult plan =
        sf::search_min_order(inst.tree, sf::default_max_order(inst.tree));
    const sf::ExecResult got = run(inst.tree, *plan.solution, inst.inputs);
    const sf::OracleResult expected = sf::oracle_nary(inst.tree, inst.inputs);
    const sf::CompareReport rep = sf::compare(got.result, expected.result, 1e-10, 1e-12);
    const double elapsed = seconds_since(start);
    const bool ok = rep.pass && elapsed < 10.0;
    passed += ok;
    v.note(std::string(ok ? "ok: " : "not met: ") + c.label + ", l=" +
           std::to_string(plan.bound) + ", nnz " + std::to_string(got.result.nnz()) +
           ", max abs error " + fmt(rep.max_abs_error) + ", " + fmt(elapsed) + " s");
    if (!ok) v.status = Verdict::kFail;
  }
  v.require(passed == static_cast<int>(cases.size()),
            std::to_string(passed) + "/" + std::to_string(cases.size()) +
                " cases within rel_tol 1e-10 and 10 s");
  return v;
}

sf::TensorMap dense_running_example(const sf::ContractionTree& t, std::uint64_t seed) {
  return sf::testing::random_inputs(t, 1.0, seed);
}

Verdict complexity() {
  Verdict v;
  for (std::uint64_t n : {4u, 8u}) {
    const sf::ContractionTree t = sf::testing::running_example(static_cast<sf::Coord>(n));
    const sf::TensorMap in = dense_running_example(t, n);
    const std::uint64_t n4 = n * n * n * n;
    const std::uint64_t n5 = n4 * n;
    const std::uint64_t n6 = n5 * n;
    const sf::ExecResult fused = run(t, sf::testing::running_example_witness(), in);
    const sf::MinOrderResult plan = sf::search_min_order(t, sf::default_max_order(t));
    const sf::ExecResult planned = run(t, *plan.solution, in);
    const sf::OracleResult nary = sf::oracle_nary(t, in);
    const std::string ns = "N=" + std::to_string(n);
    v.require(fused.stats.multiply_adds == 3 * n5,
              ns + ": fused multiply-adds " + std::to_string(fused.stats.multiply_adds) +
                  " == 3N^5 = " + std::to_string(3 * n5));
    v.note(ns + ": loop-nest expression N_iN_jN_pN_qN_r + N_iN_jN_kN_qN_r + N_iN_jN_kN_r = " +
           std::to_string(2 * n5 + n4) + (fused.stats.multiply_adds == 2 * n5 + n4
                                               ? " (matches the count)"
                                               : " (differs from the count)"));
    v.require(fused.stats.multiply_adds < n6 && nary.multiply_adds == n6,
              ns + ": fused count below the n-ary oracle's N^6 = " +
                  std::to_string(nary.multiply_adds));
    v.note(ns + ": schedule at the minimum bound l=" + std::to_string(plan.bound) + " counts " +
           std::to_string(planned.stats.multiply_adds));
    v.require(sf::compare(fused.result, nary.result, 1e-10, 1e-12).pass,
              ns + ": fused result equals the n-ary oracle");
  }
  return v;
}

Verdict memory() {
  Verdict v;
  const sf::Coord n = 8;
  const sf::ContractionTree t = sf::testing::running_example(n);
  const sf::TensorMap in = sf::testing::random_inputs(t, 0.2, 8);
  const sf::ExecResult fused = run(t, sf::testing::running_example_witness(), in);
  const sf::MinOrderResult plan = sf::search_min_order(t, sf::default_max_order(t));
  const sf::ExecResult planned = run(t, *plan.solution, in);
  const sf::OracleResult unfused = sf::oracle_unfused(t, in);
  v.require(fused.stats.max_workspace_cells <= 64,
            "l=2 schedule workspace " + std::to_string(fused.stats.max_workspace_cells) +
                " cells <= N^2 = 64");
  v.require(planned.stats.max_workspace_cells <= 64,
            "minimum-bound schedule (l=" + std::to_string(plan.bound) + ") workspace " +
                std::to_string(planned.stats.max_workspace_cells) + " cells <= 64");
  v.require(unfused.max_intermediate_cells == 4096,
            "unfused intermediate " + std::to_string(unfused.max_intermediate_cells) +
                " cells = N^4 = 4096");
  return v;
}

Verdict properties() {
  Verdict v;
  std::mt19937_64 rng(2026);
  int csf_ok = 0;
  for (int n = 0; n < 1000; ++n) {
    const std::size_t order = std::uniform_int_distribution<std::size_t>(0, 4)(rng);
    std::vector<sf::Coord> extents;
    for (std::size_t k = 0; k < order; ++k) {
      extents.push_back(std::uniform_int_distribution<sf::Coord>(1, 6)(rng));
    }
    const double density = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const sf::SparseTensor t = sf::testing::random_tensor(sf::Shape(extents), density, rng());
    std::vector<int> perm(order);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const sf::CsfTensor c = sf::csf_build(t, sf::ModeOrder(perm));
    csf_ok += sf::csf_flatten(c) == sf::permute(t, sf::ModeOrder(perm)) && c.nnz() == t.nnz();
  }
  v.require(csf_ok == 1000, "CSF round trip " + std::to_string(csf_ok) + "/1000");

  auto is_perm = [](std::vector<int> values, std::size_t n) {
    std::sort(values.begin(), values.end());
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (values[k] != static_cast<int>(k)) return false;
    }
    return values.size() == n;
  };
  int solutions = 0;
  int perm_ok = 0;
  int monotone_ok = 0;
  for (int n = 0; n < 200; ++n) {
    const sf::ContractionTree t = sf::testing::random_tree(rng, 3, 4);
    bool previous = false;
    bool monotone = true;
    for (int l = 1; l <= 5; ++l) {
      const auto sol = sf::solve(sf::build_model(t, l));
      if (previous && !sol) monotone = false;
      previous = sol.has_value();
      if (!sol) continue;
      ++solutions;
      bool ok = is_perm(sol->ap, t.size()) && sf::verify_solution(t, l, *sol).empty();
      for (const auto& [tensor, dp] : sol->dp) ok = ok && is_perm(dp, t.tensor_order(tensor));
      for (std::size_t c = 0; c < t.size(); ++c) {
        std::vector<int> lp;
        for (const auto& [idx, val] : sol->lp[c]) lp.push_back(val);
        ok = ok && is_perm(lp, t.contraction(static_cast<int>(c)).index_set().size());
      }
      perm_ok += ok;
    }
    monotone_ok += monotone && previous;
  }
  v.require(perm_ok == solutions, "permutation invariants on " + std::to_string(perm_ok) + "/" +
                                      std::to_string(solutions) + " solver outputs");
  v.require(monotone_ok == 200,
            "satisfiability monotone in l on " + std::to_string(monotone_ok) + "/200 trees");

  auto cli_output = [](const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = sf::cli::run_cli(args, out, err);
    return std::to_string(code) + "\n" + out.str();
  };
  const std::string net = sf::testing::data_path("running_example.txt");
  const std::vector<std::string> plan = {"plan", "--network", net, "--seed", "7", "--json"};
  const std::vector<std::string> bench = {"bench", "--kind", "running_example", "--seed", "7",
                                          "--check"};
  v.require(cli_output(plan) == cli_output(plan) && cli_output(bench) == cli_output(bench),
            "plan and bench reports byte-identical across two runs");
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<Verdict()> check;
  };
  const std::vector<Criterion> criteria = {
      {1, "golden IR for the running example", golden_ir},
      {2, "worked constraint values", witness_values},
      {3, "solver and exhaustive search agree", sat_agreement},
      {4, "numerical equivalence with the n-ary oracle", numeric_equivalence},
      {5, "multiply-add count on dense inputs", complexity},
      {6, "workspace size under fusion", memory},
      {7, "property suites", properties},
      {8, "wall-clock speedups over external systems", [] {
         Verdict v;
         v.status = Verdict::kSkip;
         v.note("not reproducible here: needs external systems and full-scale datasets;");
         v.note("criteria 3-6 are the substitute basis");
         return v;
       }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v.status = Verdict::kFail;
      v.note(std::string("exception: ") + e.what());
    }
    const char* tag = v.status == Verdict::kPass ? "PASS" : v.status == Verdict::kFail ? "FAIL" : "SKIP";
    std::printf("%s criterion %d: %s\n", tag, c.id, c.title);
    for (const auto& d : v.details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
    failed += v.status == Verdict::kFail;
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
