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

#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "cli/bench.h"
#include "sparsefuse/constraints.h"
#include "sparsefuse/error.h"
#include "sparsefuse/report.h"
#include "sparsefuse/solver.h"
#include "sparsefuse/verify.h"
#include "support/fixtures.h"

namespace sparsefuse {
namespace {

std::vector<const Clause*> clauses_of(const ConstraintModel& m, Family f) {
  std::vector<const Clause*> out;
  for (const auto& c : m.clauses()) {
    if (c.family == f) out.push_back(&c);
  }
  return out;
}

TEST(BuildModel, VariableDomains) {
  const ContractionTree t = testing::running_example(4);
  const ConstraintModel m = build_model(t, 2);
  EXPECT_EQ(m.num_contractions(), 3u);
  EXPECT_EQ(m.variables()[m.ap(1)].domain, 3);
  EXPECT_EQ(m.variables()[m.lp(0, "p")].domain, 5);
  EXPECT_EQ(m.variables()[m.lp(2, "i")].domain, 4);
  EXPECT_EQ(m.variables()[m.dp("A", 0)].domain, 3);
  EXPECT_EQ(m.dp_vars().count("X"), 0u);  // intermediates have no layout
  EXPECT_EQ(m.dp_vars().count("R"), 1u);
  EXPECT_EQ(m.variables()[m.lp(0, "p")].name(), "lp[0,p]");
  EXPECT_EQ(m.variables()[m.dp("A", 2)].name(), "dp[A,2]");
}

TEST(BuildModel, ProducerDisjunctionAtOutermostLoop) {
  const ConstraintModel m = build_model(testing::running_example(4), 2);
  // X and Y have order 4, so at l=2 each needs two fused outer loops.
  const auto producers = clauses_of(m, Family::kProducer);
  ASSERT_EQ(producers.size(), 4u);
  std::set<int> vars;
  for (const Atom& a : producers[0]->atoms) {
    EXPECT_EQ(a.op, Atom::kEq);
    EXPECT_EQ(a.value, 0);
    vars.insert(a.var);
  }
  EXPECT_EQ(vars, (std::set<int>{m.lp(0, "i"), m.lp(0, "j"), m.lp(0, "q"), m.lp(0, "r")}));
  EXPECT_EQ(producers[1]->atoms[0].value, 1);
}

TEST(BuildModel, LowOrderIntermediatesAddNoFusionConstraints) {
  const ConstraintModel m = build_model(testing::running_example(4), 4);
  EXPECT_TRUE(clauses_of(m, Family::kProducer).empty());
  EXPECT_TRUE(clauses_of(m, Family::kConsumer).empty());
  EXPECT_TRUE(clauses_of(m, Family::kBetween).empty());
  EXPECT_FALSE(clauses_of(m, Family::kConsistency).empty());
}

TEST(BuildModel, ConsumerImplications) {
  const ConstraintModel m = build_model(testing::running_example(4), 3);
  // One fused loop per intermediate; one implication per index of X and Y.
  EXPECT_EQ(clauses_of(m, Family::kProducer).size(), 2u);
  EXPECT_EQ(clauses_of(m, Family::kConsumer).size(), 8u);
}

TEST(Solve, ChainForcesAssignmentOrder) {
  const ConstraintModel m = build_model(testing::running_example(4), 4);
  for (std::uint64_t seed : {0u, 1u, 2u, 3u}) {
    const auto sol = solve(m, {seed});
    ASSERT_TRUE(sol);
    EXPECT_EQ(sol->ap, (std::vector<int>{0, 1, 2}));
  }
}

TEST(Solve, RunningExampleAtBoundTwo) {
  const ContractionTree t = testing::running_example(4);
  const auto sol = solve(build_model(t, 2));
  ASSERT_TRUE(sol);
  EXPECT_TRUE(verify_solution(t, 2, *sol).empty());
  // The first solution under the default ordering is the fused structure
  // r, j outermost with A stored as A[p,q,i].
  EXPECT_EQ(*sol, testing::running_example_witness());
}

TEST(Solve, AgreesWithExhaustiveSearchOnRunningExample) {
  const ContractionTree t = testing::running_example(4);
  for (int l = 1; l <= 4; ++l) {
    EXPECT_EQ(solve(build_model(t, l)).has_value(), brute_force_sat(t, l)) << "l=" << l;
  }
}

TEST(Solve, SingleContractionAlwaysSat) {
  const ContractionTree t = testing::matmul(2, 3, 4);
  for (int l = 1; l <= 3; ++l) {
    const auto sol = solve(build_model(t, l));
    ASSERT_TRUE(sol);
    EXPECT_TRUE(verify_solution(t, l, *sol).empty());
  }
}

TEST(Solve, FixedLayoutIsHonoured) {
  const ContractionTree t = testing::running_example(4);
  ModelOptions opts;
  opts.fixed_layouts["R"] = ModeOrder({0, 1, 2});
  const auto sol = solve(build_model(t, 4, opts));
  ASSERT_TRUE(sol);
  EXPECT_EQ(sol->layout("R"), ModeOrder({0, 1, 2}));
  EXPECT_TRUE(verify_solution(t, 4, *sol).empty());
}

TEST(Solve, ZeroBudgetTimesOutWithModelEcho) {
  const ConstraintModel m = build_model(testing::running_example(4), 2);
  SolveOptions opts;
  opts.budget = std::chrono::milliseconds(0);
  try {
    solve(m, opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTimeout);
    EXPECT_NE(std::string(e.what()).find("lp[0,p]"), std::string::npos);
  }
}

TEST(Solve, DeterministicPerSeed) {
  const ContractionTree t = testing::running_example(4);
  const ConstraintModel m = build_model(t, 3);
  for (std::uint64_t seed : {0u, 7u, 99u}) {
    const auto a = solve(m, {seed});
    const auto b = solve(m, {seed});
    ASSERT_TRUE(a && b);
    EXPECT_EQ(solution_report_json(t, *a), solution_report_json(t, *b));
    EXPECT_TRUE(verify_solution(t, 3, *a).empty());
  }
}

TEST(Solve, SolutionsSatisfyTheModel) {
  std::mt19937_64 rng(21);
  for (int n = 0; n < 60; ++n) {
    const ContractionTree t = testing::random_tree(rng, 3, 3);
    for (int l = 1; l <= 2; ++l) {
      const ConstraintModel m = build_model(t, l);
      const auto sol = solve(m);
      if (!sol) continue;
      EXPECT_TRUE(verify_solution(t, l, *sol).empty()) << to_network_text(t);
    }
  }
}

TEST(SearchMinOrder, SingleContraction) {
  EXPECT_EQ(search_min_order(testing::matmul(2, 2, 2), 3).bound, 1);
}

TEST(SearchMinOrder, MatrixChainFusesToAVector) {
  const ContractionTree t = parse_network(
      "extent i 3\nextent j 3\nextent k 3\n"
      "X[i,j] = A[i,k] * B[k,j]\nR[i] = X[i,j] * V[j]\n");
  const MinOrderResult r = search_min_order(t, default_max_order(t));
  EXPECT_EQ(r.bound, 1);
  ASSERT_TRUE(r.solution);
  // Either i or j may be fused; both leave X as a vector.
  EXPECT_EQ(r.solution->loop_order(0).front(), r.solution->loop_order(1).front());
}

TEST(SearchMinOrder, MatchesExhaustiveMinimum) {
  const ContractionTree t = testing::running_example(4);
  const MinOrderResult r = search_min_order(t, default_max_order(t));
  int expected = 0;
  for (int l = 1; l <= 4 && expected == 0; ++l) {
    if (brute_force_sat(t, l)) expected = l;
  }
  EXPECT_EQ(r.bound, expected);
  EXPECT_EQ(default_max_order(t), 4);
}

TEST(VerifySolution, WitnessPasses) {
  const ContractionTree t = testing::running_example(4);
  EXPECT_TRUE(verify_solution(t, 2, testing::running_example_witness()).empty());
}

TEST(VerifySolution, SwappedOuterLoopsFailConsumerMatch) {
  const ContractionTree t = testing::running_example(4);
  ScheduleSolution s = testing::running_example_witness();
  std::swap(s.lp[0]["r"], s.lp[0]["j"]);
  const auto violations = verify_solution(t, 2, s);
  ASSERT_FALSE(violations.empty());
  const bool consumer = std::any_of(violations.begin(), violations.end(), [](const auto& v) {
    return v.find("consumer") != std::string::npos;
  });
  EXPECT_TRUE(consumer);
}

TEST(VerifySolution, DetectsBrokenLayoutAndPermutation) {
  const ContractionTree t = testing::running_example(4);
  ScheduleSolution s = testing::running_example_witness();
  s.dp["A"] = {0, 1, 2};
  EXPECT_FALSE(verify_solution(t, 2, s).empty());
  s = testing::running_example_witness();
  s.ap = {0, 0, 2};
  EXPECT_FALSE(verify_solution(t, 2, s).empty());
  s = testing::running_example_witness();
  s.ap = {1, 0, 2};
  EXPECT_FALSE(verify_solution(t, 2, s).empty());
}

TEST(VerifySolution, MissingVariable) {
  const ContractionTree t = testing::running_example(4);
  ScheduleSolution s = testing::running_example_witness();
  s.lp[1].erase("k");
  try {
    verify_solution(t, 2, s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingVariable);
  }
  s = testing::running_example_witness();
  s.dp.erase("D");
  EXPECT_THROW(verify_solution(t, 2, s), Error);
}

TEST(BruteForce, SingleContractionSat) {
  EXPECT_TRUE(brute_force_sat(testing::matmul(2, 2, 2), 1));
}

TEST(BruteForce, WitnessesVerify) {
  const ContractionTree t = testing::running_example(4);
  for (int l = 1; l <= 3; ++l) {
    const auto w = brute_force_witness(t, l);
    if (w) {
      EXPECT_TRUE(verify_solution(t, l, *w).empty());
    }
  }
}

TEST(BruteForce, TooLarge) {
  const ContractionTree t = parse_network(
      "extent a 2\nextent b 2\nextent c 2\nextent d 2\nextent e 2\nextent f 2\n"
      "R[a,b,c] = A[a,b,d,e] * B[c,d,e,f]\n");
  EXPECT_THROW(brute_force_sat(t, 1), Error);
}

TEST(BenchTrees, SolverAgreesWithExhaustiveSearch) {
  for (const std::string kind : {"mttkrp1", "mttkrp2", "mttkrp3", "ttmc1", "ttmc2", "ttmc3"}) {
    cli::BenchParams p;
    p.extents = {3, 3, 3};
    p.rank = 2;
    const ContractionTree t = cli::bench_generate(kind, p).tree;
    for (int l = 1; l <= 3; ++l) {
      EXPECT_EQ(solve(build_model(t, l)).has_value(), brute_force_sat(t, l))
          << kind << " l=" << l;
    }
  }
}

TEST(Report, JsonRoundTripAndText) {
  const ContractionTree t = testing::running_example(4);
  const ScheduleSolution s = testing::running_example_witness();
  EXPECT_EQ(parse_solution_json(t, solution_report_json(t, s)), s);
  EXPECT_EQ(layout_reference(t, s, "A"), "A[p,q,i]");
  EXPECT_EQ(layout_reference(t, s, "R"), "R[j,k,i]");
  const std::string text = solution_report_text(t, s);
  EXPECT_NE(text.find("r,j,p,q,i"), std::string::npos) << text;
  EXPECT_THROW(parse_solution_json(t, "{not json"), Error);
}

}  // namespace
}  // namespace sparsefuse
