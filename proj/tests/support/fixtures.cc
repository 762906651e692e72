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

#include "support/fixtures.h"

#include <algorithm>

#include "cli/bench.h"
#include "sparsefuse/error.h"

namespace sparsefuse::testing {

std::string data_path(const std::string& name) {
  return std::string(SPARSEFUSE_TEST_DATA_DIR) + "/" + name;
}

std::string running_example_text(Coord extent) {
  std::string text;
  for (const char* idx : {"i", "j", "k", "p", "q", "r"}) {
    text += "extent " + std::string(idx) + " " + std::to_string(extent) + "\n";
  }
  text +=
      "X[i,j,q,r] = A[i,p,q] * B[j,p,r]\n"
      "Y[i,j,k,r] = X[i,j,q,r] * C[k,q,r]\n"
      "R[i,j,k] = Y[i,j,k,r] * D[j,k,r]\n";
  return text;
}

ContractionTree running_example(Coord extent) {
  return parse_network_text(running_example_text(extent));
}

ContractionTree matmul(Coord ni, Coord nk, Coord nj) {
  return parse_network_text("extent i " + std::to_string(ni) + "\nextent k " +
                            std::to_string(nk) + "\nextent j " + std::to_string(nj) +
                            "\nR[i,j] = T[i,k] * S[k,j]\n");
}

ScheduleSolution running_example_witness() {
  ScheduleSolution s;
  s.bound = 2;
  s.ap = {0, 1, 2};
  s.lp = {
      {{"r", 0}, {"j", 1}, {"p", 2}, {"q", 3}, {"i", 4}},
      {{"r", 0}, {"j", 1}, {"q", 2}, {"k", 3}, {"i", 4}},
      {{"r", 0}, {"j", 1}, {"k", 2}, {"i", 3}},
  };
  // Position of each mode in the layout, e.g. A[i,p,q] stored as A[p,q,i].
  s.dp = {
      {"A", {2, 0, 1}}, {"B", {1, 2, 0}}, {"C", {2, 1, 0}},
      {"D", {1, 2, 0}}, {"R", {2, 0, 1}},
  };
  return s;
}

namespace {

std::vector<std::string> pick(std::mt19937_64& rng, std::vector<std::string> pool,
                              std::size_t lo, std::size_t hi) {
  std::shuffle(pool.begin(), pool.end(), rng);
  hi = std::min(hi, pool.size());
  std::uniform_int_distribution<std::size_t> size(lo, hi);
  pool.resize(size(rng));
  return pool;
}

std::vector<std::string> union_of(const std::vector<std::string>& a,
                                  const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  for (const auto& x : b) {
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  }
  return out;
}

}  // namespace

ContractionTree random_tree(std::mt19937_64& rng, int max_contractions, Coord max_extent,
                            int max_indices) {
  const std::vector<std::string> pool = {"a", "b", "c", "d", "e", "f", "g"};
  std::uniform_int_distribution<int> count(1, max_contractions);
  std::uniform_int_distribution<Coord> extent(2, max_extent);
  while (true) {
    const int m = count(rng);
    // Children of each contraction: -1 marks a leaf operand.
    std::vector<std::pair<int, int>> operands;
    if (m == 1) {
      operands = {{-1, -1}};
    } else if (m == 2) {
      operands = {{-1, -1}, {0, -1}};
    } else if (std::bernoulli_distribution(0.5)(rng)) {
      operands = {{-1, -1}, {0, -1}, {1, -1}};
    } else {
      operands = {{-1, -1}, {-1, -1}, {0, 1}};
    }
    std::vector<Contraction> cs;
    int leaf = 0;
    bool ok = true;
    for (int c = 0; c < m && ok; ++c) {
      auto operand = [&](int child) {
        if (child >= 0) return cs[child].result;
        return TensorRef{"T" + std::to_string(leaf++), pick(rng, pool, 1, 3)};
      };
      Contraction con;
      con.id = c;
      con.lhs = operand(operands[c].first);
      con.rhs = operand(operands[c].second);
      if (std::bernoulli_distribution(0.5)(rng)) std::swap(con.lhs, con.rhs);
      const auto all = union_of(con.lhs.indices, con.rhs.indices);
      if (static_cast<int>(all.size()) > max_indices) ok = false;
      con.result = {c == m - 1 ? "R" : "X" + std::to_string(c), pick(rng, all, 1, 3)};
      cs.push_back(std::move(con));
    }
    if (!ok) continue;
    std::map<std::string, Coord> extents;
    for (const auto& idx : pool) extents[idx] = extent(rng);
    try {
      return ContractionTree::build(std::move(cs), std::move(extents));
    } catch (const Error&) {
    }
  }
}

SparseTensor random_tensor(const Shape& shape, double density, std::uint64_t seed) {
  return cli::synthetic_tensor(shape, density, seed);
}

TensorMap random_inputs(const ContractionTree& tree, double density, std::uint64_t seed) {
  TensorMap inputs;
  std::uint64_t k = 0;
  for (const auto& id : tree.inputs()) {
    inputs[id] = random_tensor(tree.tensor_shape(id), density, seed * 1000003 + ++k);
  }
  return inputs;
}

}  // namespace sparsefuse::testing
