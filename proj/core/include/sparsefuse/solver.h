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

// Finite-domain search over a ConstraintModel.

#ifndef SPARSEFUSE_SOLVER_H_
#define SPARSEFUSE_SOLVER_H_

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "sparsefuse/constraints.h"
#include "sparsefuse/network.h"

namespace sparsefuse {

struct SolveOptions {
  /// 0 keeps the default variable ordering; other values permute ties.
  std::uint64_t seed = 0;
  std::chrono::milliseconds budget{10000};
};

struct SolveStats {
  std::uint64_t nodes = 0;
  std::uint64_t failures = 0;
};

/// A pluggable search backend. Implementations must be deterministic for a
/// given model and seed, and return nullopt only when the model is
/// unsatisfiable. Exceeding the budget throws Error(kTimeout).
class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual std::string name() const = 0;
  virtual std::optional<ScheduleSolution> solve(const ConstraintModel& model,
                                                const SolveOptions& options,
                                                SolveStats* stats) = 0;
};

/// Depth-first search with propagation over bitset domains. Variables are
/// branched in the order: ap by contraction id; then lp, contraction by
/// contraction in ap order, summed indices before result indices, each group
/// by descending name; then dp. Values are tried in ascending order.
std::unique_ptr<SolverBackend> make_backtracking_solver();

std::optional<ScheduleSolution> solve(const ConstraintModel& model,
                                      const SolveOptions& options = {},
                                      SolveStats* stats = nullptr);

/// max(1, largest intermediate order): the smallest bound at which the
/// unfused schedule is always admissible.
int default_max_order(const ContractionTree& tree);

struct MinOrderResult {
  int bound = 0;  // 0 when no bound in 1..l_max is satisfiable
  std::optional<ScheduleSolution> solution;
};

/// Solves at l = 1, 2, ..., l_max and stops at the first satisfiable bound.
MinOrderResult search_min_order(const ContractionTree& tree, int l_max,
                                const SolveOptions& options = {},
                                const ModelOptions& model_options = {});

}  // namespace sparsefuse

#endif  // SPARSEFUSE_SOLVER_H_
