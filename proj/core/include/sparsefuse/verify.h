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

// Checks that do not go through ConstraintModel: a direct evaluator of the
// scheduling conditions against a solution, and an exhaustive search for
// small trees.

#ifndef SPARSEFUSE_VERIFY_H_
#define SPARSEFUSE_VERIFY_H_

#include <optional>
#include <string>
#include <vector>

#include "sparsefuse/constraints.h"
#include "sparsefuse/network.h"

namespace sparsefuse {

/// Empty when `sol` satisfies every condition at bound `l`; otherwise one
/// line per violated condition. Throws MissingVariable when `sol` does not
/// assign some variable.
std::vector<std::string> verify_solution(const ContractionTree& tree, int l,
                                         const ScheduleSolution& sol);

/// Enumerates topological orders, loop permutations and mode permutations.
/// Limited to at most 3 contractions of at most 5 indices each (TooLarge).
std::optional<ScheduleSolution> brute_force_witness(const ContractionTree& tree, int l);
bool brute_force_sat(const ContractionTree& tree, int l);

}  // namespace sparsefuse

#endif  // SPARSEFUSE_VERIFY_H_
