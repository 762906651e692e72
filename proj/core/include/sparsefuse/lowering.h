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

// Lowering of a schedule to a forall/where loop IR.

#ifndef SPARSEFUSE_LOWERING_H_
#define SPARSEFUSE_LOWERING_H_

#include <memory>
#include <string>
#include <vector>

#include "sparsefuse/constraints.h"
#include "sparsefuse/network.h"

namespace sparsefuse {

/// A tensor reference with concrete index order. For inputs and the result
/// the order is the CSF level order; for intermediates it lists the modes
/// that survive fusion.
struct LoweredRef {
  std::string tensor;
  std::vector<std::string> indices;
  std::vector<int> modes;  // original mode of each entry of `indices`
  TensorRole role = TensorRole::kInput;

  std::string to_string() const;  // "A[p,q,i]"
  bool operator==(const LoweredRef&) const = default;
};

struct Assignment {
  int contraction = 0;
  int position = 0;  // ap value
  LoweredRef result;
  LoweredRef lhs;
  LoweredRef rhs;

  std::string to_string() const;  // "X[r,j,q,i] = A[p,q,i] * B[r,j,p]"
  bool operator==(const Assignment&) const = default;
};

struct SchedulePair {
  Assignment assign;
  std::vector<std::string> loops;  // outermost first

  std::string to_string() const;  // "<X[q,i] = A[p,q,i] * B[r,j,p], [p,q,i]>"
  bool operator==(const SchedulePair&) const = default;
};

std::vector<SchedulePair> schedule_from_solution(const ContractionTree& tree,
                                                 const ScheduleSolution& sol);

/// Strips `index` from the front of every loop list and from every
/// intermediate whose producer and consumer are both in `pairs`.
std::vector<SchedulePair> remove_index(const std::string& index,
                                       std::vector<SchedulePair> pairs);

struct IrNode;
using IrPtr = std::shared_ptr<const IrNode>;

struct IrNode {
  enum Kind { kForall, kWhere, kAssign };

  Kind kind;
  std::string index;  // forall
  IrPtr body;         // forall
  IrPtr consumer;     // where
  IrPtr producer;     // where
  Assignment assign;  // assign

  static IrPtr forall(std::string index, IrPtr body);
  static IrPtr where(IrPtr consumer, IrPtr producer);
  static IrPtr make_assign(Assignment a);
};

IrPtr generate(const std::vector<SchedulePair>& pairs);

/// Convenience: schedule_from_solution followed by generate.
IrPtr lower(const ContractionTree& tree, const ScheduleSolution& sol);

/// "forall(r, where(..., ...))" with assignments as "R(j,k,i) = Y(k,i) * D(r,j,k)".
/// With `labels`, assignments print as "A<position>" instead.
std::string print_ir(const IrNode& node, bool labels = false);
std::string ir_to_json(const IrNode& node);

}  // namespace sparsefuse

#endif  // SPARSEFUSE_LOWERING_H_
