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

// Synthetic data and the benchmark network generators.

#ifndef SPARSEFUSE_TOOLS_CLI_BENCH_H_
#define SPARSEFUSE_TOOLS_CLI_BENCH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "sparsefuse/network.h"
#include "sparsefuse/oracle.h"
#include "sparsefuse/tensor.h"

namespace sparsefuse::cli {

/// `round(density * volume)` distinct coordinates drawn uniformly, values
/// uniform in [-1, 1). Same shape, density and seed give the same tensor.
SparseTensor synthetic_tensor(const Shape& shape, double density, std::uint64_t seed);

/// Like synthetic_tensor with every stored value equal to 1.
SparseTensor synthetic_mask(const Shape& shape, double density, std::uint64_t seed);

struct BenchParams {
  std::vector<Coord> extents;  // empty: the kind's default
  Coord rank = 0;              // 0: the kind's default
  double density = -1.0;       // negative: the kind's default
  std::uint64_t seed = 1;
};

struct BenchInstance {
  std::string kind;
  std::string network_text;
  ContractionTree tree;
  TensorMap inputs;
};

std::vector<std::string> bench_kinds();

/// Kinds: mttkrp1-3, ttmc1-3 (extents I,J,K; rank), running_example (one
/// extent for all six indices), masked_3term (extents K,AO,MO,PAO). Throws
/// UnknownKind.
BenchInstance bench_generate(const std::string& kind, const BenchParams& params);

}  // namespace sparsefuse::cli

#endif  // SPARSEFUSE_TOOLS_CLI_BENCH_H_
