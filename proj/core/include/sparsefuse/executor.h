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

// Interpreter for the forall/where IR over CSF and dense operands.

#ifndef SPARSEFUSE_EXECUTOR_H_
#define SPARSEFUSE_EXECUTOR_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sparsefuse/constraints.h"
#include "sparsefuse/lowering.h"
#include "sparsefuse/network.h"
#include "sparsefuse/tensor.h"

namespace sparsefuse {

enum class BindMode {
  kAuto,    // dense when every cell is stored, sparse otherwise
  kSparse,
  kDense,
};

/// Input tensors of one execution plus the extent of every index.
class Binding {
 public:
  Binding() = default;
  explicit Binding(std::map<std::string, Coord> extents) : extents_(std::move(extents)) {}

  void bind_csf(const std::string& tensor, CsfTensor csf);
  /// Stores `t` densely in its original mode order.
  void bind_dense(const std::string& tensor, const SparseTensor& t);

  const std::map<std::string, Coord>& extents() const { return extents_; }
  Coord extent(const std::string& index) const;
  /// nullptr when `tensor` is not bound that way.
  const CsfTensor* csf(const std::string& tensor) const;
  const DenseWorkspace* dense(const std::string& tensor) const;
  bool bound(const std::string& tensor) const;
  std::size_t nnz(const std::string& tensor) const;

 private:
  struct DenseInput {
    DenseWorkspace cells;
    std::size_t nnz = 0;
  };
  std::map<std::string, Coord> extents_;
  std::map<std::string, CsfTensor> csf_;
  std::map<std::string, DenseInput> dense_;
};

/// Binds every input of `tree`, building CSF trees in the solution's layouts.
/// Throws UnboundTensor for a missing input and ShapeMismatch for a tensor
/// whose shape disagrees with the network's extents.
Binding bind_inputs(const ContractionTree& tree, const ScheduleSolution& sol,
                    const std::map<std::string, SparseTensor>& inputs,
                    BindMode mode = BindMode::kAuto);

struct AssignmentStats {
  int contraction = 0;
  std::uint64_t multiply_adds = 0;
};

struct ExecStats {
  std::uint64_t multiply_adds = 0;
  std::uint64_t max_workspace_cells = 0;
  std::vector<AssignmentStats> per_assignment;  // in execution order

  std::string to_json() const;  // {multiply_adds, max_workspace_cells, per_assignment}
};

struct ExecResult {
  SparseTensor result;  // original mode order of the result tensor
  ExecStats stats;
};

ExecResult execute(const IrNode& ir, const Binding& binding);

}  // namespace sparsefuse

#endif  // SPARSEFUSE_EXECUTOR_H_
