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

// Tensor networks given as trees of binary contractions.
//
// Text form (one statement per line, '#' comments):
//
//   extent i 30
//   shape T 30 40 50          (optional; fixes extents of T's indices)
//   X[i,k,r] = T[i,j,k] * B[j,r]
//   Out[i,r] = X[i,k,r] * C[k,r]
//
// JSON form:
//
//   {"extents": {"i": 30, ...},
//    "shapes": {"T": [30, 40, 50]},
//    "contractions": [{"out": "X[i,k,r]", "lhs": "T[i,j,k]", "rhs": "B[j,r]"},
//                     ...]}

#ifndef SPARSEFUSE_NETWORK_H_
#define SPARSEFUSE_NETWORK_H_

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sparsefuse/tensor.h"

namespace sparsefuse {

struct TensorRef {
  std::string tensor;
  std::vector<std::string> indices;  // position k names mode k

  std::string to_string() const;  // "A[i,p,q]"
  bool operator==(const TensorRef&) const = default;
};

struct IndexClasses {
  std::set<std::string> external;
  std::set<std::string> contraction;

  bool operator==(const IndexClasses&) const = default;
};

struct Contraction {
  int id = 0;
  TensorRef result;
  TensorRef lhs;
  TensorRef rhs;

  /// Indices of all three references, in order of first appearance
  /// (result, then lhs, then rhs).
  std::vector<std::string> index_set() const;
  std::string to_string() const;  // "X[i,j] = A[i,k] * B[k,j]"

  bool operator==(const Contraction&) const = default;
};

/// Splits a contraction's indices into external (kept in the result) and
/// contraction (summed) indices.
IndexClasses classify_indices(const Contraction& c);

enum class TensorRole { kInput, kIntermediate, kResult };

/// A reference to a tensor inside a particular contraction.
struct RefSite {
  int contraction;
  const TensorRef* ref;
};

/// Validated tree of binary contractions. Contraction ids are their positions
/// in the input. Immutable after construction.
class ContractionTree {
 public:
  /// Validates and builds the tree. `shapes` optionally pins tensor shapes.
  static ContractionTree build(std::vector<Contraction> contractions,
                               std::map<std::string, Coord> extents,
                               std::map<std::string, Shape> shapes = {});

  std::size_t size() const { return contractions_.size(); }
  const std::vector<Contraction>& contractions() const { return contractions_; }
  const Contraction& contraction(int id) const { return contractions_.at(id); }

  int root() const { return root_; }
  int parent(int id) const { return parent_.at(id); }
  const std::vector<int>& children(int id) const { return children_.at(id); }
  /// True when `ancestor` is `node` or lies on the path from `node` to root.
  bool in_subtree(int node, int ancestor) const;

  const std::map<std::string, Coord>& extents() const { return extents_; }
  Coord extent(const std::string& index) const;

  /// Distinct leaf tensor ids, in order of first appearance.
  const std::vector<std::string>& inputs() const { return inputs_; }
  /// Intermediate tensor ids, ordered by producing contraction id.
  const std::vector<std::string>& intermediates() const { return intermediates_; }
  const std::string& result_tensor() const { return contractions_[root_].result.tensor; }

  bool has_tensor(const std::string& tensor) const;
  TensorRole role(const std::string& tensor) const;
  /// Contraction producing `tensor`, or -1 for inputs.
  int producer(const std::string& tensor) const;
  /// Contraction consuming `tensor`, or -1 for the root result.
  int consumer(const std::string& tensor) const;
  std::size_t tensor_order(const std::string& tensor) const;
  Shape tensor_shape(const std::string& tensor) const;
  std::vector<RefSite> references(const std::string& tensor) const;

  /// Inputs and the root result: tensors whose CSF layout must agree with
  /// the loop order around every reference to them.
  std::vector<std::string> layout_constrained() const;

  std::size_t max_intermediate_order() const;

  bool operator==(const ContractionTree& other) const {
    return contractions_ == other.contractions_ && extents_ == other.extents_;
  }

 private:
  std::vector<Contraction> contractions_;
  std::map<std::string, Coord> extents_;
  std::vector<int> parent_;
  std::vector<std::vector<int>> children_;
  int root_ = -1;
  std::vector<std::string> inputs_;
  std::vector<std::string> intermediates_;
  std::map<std::string, int> producer_;
  std::map<std::string, int> consumer_;
};

TensorRef parse_tensor_ref(std::string_view text);

/// Parses either form; JSON is detected by a leading '{'.
ContractionTree parse_network(std::string_view text);
ContractionTree parse_network_text(std::string_view text);
ContractionTree parse_network_json(std::string_view text);
ContractionTree load_network_file(const std::string& path);

std::string to_network_text(const ContractionTree& tree);
std::string to_network_json(const ContractionTree& tree);

/// Every execution order in which each contraction precedes its parent.
/// Intended for cross-checking; throws TooLarge above 8 contractions.
std::vector<std::vector<int>> topological_orders(const ContractionTree& tree);

}  // namespace sparsefuse

#endif  // SPARSEFUSE_NETWORK_H_
