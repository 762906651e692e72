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

#ifndef SPARSEFUSE_TESTS_SUPPORT_FIXTURES_H_
#define SPARSEFUSE_TESTS_SUPPORT_FIXTURES_H_

#include <cstdint>
#include <random>
#include <string>

#include "sparsefuse/constraints.h"
#include "sparsefuse/network.h"
#include "sparsefuse/oracle.h"
#include "sparsefuse/tensor.h"

namespace sparsefuse::testing {

std::string data_path(const std::string& name);

/// The three-contraction chain X -> Y -> R over indices i,j,k,p,q,r.
ContractionTree running_example(Coord extent);
std::string running_example_text(Coord extent);

/// R[i,j] = T[i,k] * S[k,j].
ContractionTree matmul(Coord ni, Coord nk, Coord nj);

/// The schedule of the fused loop structure for the running example at l=2:
/// loops r,j,p,q,i / r,j,q,k,i / r,j,k,i and layouts A[p,q,i], B[r,j,p],
/// C[r,q,k], D[r,j,k], R[j,k,i].
ScheduleSolution running_example_witness();

/// A random valid tree of 1..max_contractions contractions, each with at most
/// `max_indices` indices and extents in 2..max_extent.
ContractionTree random_tree(std::mt19937_64& rng, int max_contractions, Coord max_extent,
                            int max_indices = 5);

/// Uniform random inputs for every leaf of `tree`.
TensorMap random_inputs(const ContractionTree& tree, double density, std::uint64_t seed);

SparseTensor random_tensor(const Shape& shape, double density, std::uint64_t seed);

}  // namespace sparsefuse::testing

#endif  // SPARSEFUSE_TESTS_SUPPORT_FIXTURES_H_
