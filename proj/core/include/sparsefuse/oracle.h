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

// Reference evaluators used to check the executor, and tensor comparison.

#ifndef SPARSEFUSE_ORACLE_H_
#define SPARSEFUSE_ORACLE_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sparsefuse/network.h"
#include "sparsefuse/tensor.h"

namespace sparsefuse {

using TensorMap = std::map<std::string, SparseTensor>;

struct OracleResult {
  SparseTensor result;
  std::uint64_t multiply_adds = 0;
  std::uint64_t max_intermediate_cells = 0;  // unfused evaluation only
};

/// Single loop nest over every index of the tree; each point multiplies all
/// input references. Throws TooLarge above 1e8 points.
OracleResult oracle_nary(const ContractionTree& tree, const TensorMap& inputs);

/// One loop nest per contraction in `sequence` (a topological order; empty
/// means contraction-id order), with every intermediate held densely at full
/// order. Throws TooLarge when a loop nest or an intermediate exceeds 1e8.
OracleResult oracle_unfused(const ContractionTree& tree, const TensorMap& inputs,
                            std::vector<int> sequence = {});

struct CompareReport {
  bool pass = true;
  std::size_t points = 0;      // size of the coordinate union
  std::size_t mismatches = 0;
  double max_abs_error = 0.0;
  std::vector<Coord> worst;    // coordinates of the largest excess over tolerance
  double worst_a = 0.0;
  double worst_b = 0.0;

  std::string to_string() const;
};

/// Pointwise |a-b| <= abs_tol + rel_tol*max(|a|,|b|) over the union of
/// stored coordinates. Throws ShapeMismatch.
CompareReport compare(const SparseTensor& a, const SparseTensor& b, double rel_tol,
                      double abs_tol);

}  // namespace sparsefuse

#endif  // SPARSEFUSE_ORACLE_H_
