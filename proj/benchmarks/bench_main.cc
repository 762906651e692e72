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

#include <benchmark/benchmark.h>

#include "cli/bench.h"
#include "sparsefuse/executor.h"
#include "sparsefuse/lowering.h"
#include "sparsefuse/oracle.h"
#include "sparsefuse/solver.h"

namespace sf = sparsefuse;

namespace {

sf::cli::BenchInstance instance(const std::string& kind, sf::Coord scale) {
  sf::cli::BenchParams p;
  if (kind == "running_example") {
    p.extents = {scale};
  } else if (kind == "masked_3term") {
    p.extents = {scale, scale, scale, scale};
  } else {
    p.extents = {scale, scale, scale};
  }
  return sf::cli::bench_generate(kind, p);
}

void BM_Solve(benchmark::State& state) {
  const auto inst = instance("running_example", 6);
  const sf::ConstraintModel model = sf::build_model(inst.tree, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sf::solve(model));
  }
}
BENCHMARK(BM_Solve)->DenseRange(1, 4);

void BM_SearchMinOrder(benchmark::State& state) {
  const char* kinds[] = {"running_example", "mttkrp1", "ttmc1", "masked_3term"};
  const auto inst = instance(kinds[state.range(0)], 8);
  state.SetLabel(kinds[state.range(0)]);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sf::search_min_order(inst.tree, sf::default_max_order(inst.tree)));
  }
}
BENCHMARK(BM_SearchMinOrder)->DenseRange(0, 3);

void BM_CsfBuild(benchmark::State& state) {
  const sf::Coord n = state.range(0);
  const sf::SparseTensor t = sf::cli::synthetic_tensor(sf::Shape({n, n, n}), 0.01, 1);
  const sf::ModeOrder order({2, 0, 1});
  for (auto _ : state) {
    benchmark::DoNotOptimize(sf::csf_build(t, order));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(t.nnz()));
}
BENCHMARK(BM_CsfBuild)->Arg(32)->Arg(64)->Arg(128);

// Fused execution of one kernel; the second argument selects the unfused
// oracle instead, for comparison.
void BM_Kernel(benchmark::State& state) {
  const char* kinds[] = {"mttkrp1", "mttkrp2", "mttkrp3", "ttmc1", "ttmc2", "ttmc3"};
  const std::string kind = kinds[state.range(0)];
  const auto inst = instance(kind, 40);
  const sf::ScheduleSolution sol =
      *sf::search_min_order(inst.tree, sf::default_max_order(inst.tree)).solution;
  const sf::IrPtr ir = sf::lower(inst.tree, sol);
  const sf::Binding binding = sf::bind_inputs(inst.tree, sol, inst.inputs);
  const bool unfused = state.range(1) != 0;
  state.SetLabel(kind + (unfused ? " unfused" : " fused"));
  for (auto _ : state) {
    if (unfused) {
      benchmark::DoNotOptimize(sf::oracle_unfused(inst.tree, inst.inputs));
    } else {
      benchmark::DoNotOptimize(sf::execute(*ir, binding));
    }
  }
}
BENCHMARK(BM_Kernel)->ArgsProduct({{0, 1, 2, 3, 4, 5}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_RunningExampleDense(benchmark::State& state) {
  sf::cli::BenchParams p;
  p.extents = {state.range(0)};
  p.density = 1.0;
  const auto inst = sf::cli::bench_generate("running_example", p);
  const sf::ScheduleSolution sol = *sf::solve(sf::build_model(inst.tree, 2));
  const sf::IrPtr ir = sf::lower(inst.tree, sol);
  const sf::Binding binding = sf::bind_inputs(inst.tree, sol, inst.inputs);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sf::execute(*ir, binding));
  }
}
BENCHMARK(BM_RunningExampleDense)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
