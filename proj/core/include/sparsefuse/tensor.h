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

// Sparse tensor storage: canonical coordinate lists, compressed sparse fiber
// (CSF) trees, and dense workspaces.

#ifndef SPARSEFUSE_TENSOR_H_
#define SPARSEFUSE_TENSOR_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sparsefuse {

using Coord = std::int64_t;

class CsfTensor;

/// Per-mode extents of a tensor. Order 0 denotes a scalar.
class Shape {
 public:
  Shape() = default;
  explicit Shape(std::vector<Coord> extents);

  std::size_t order() const { return extents_.size(); }
  Coord extent(std::size_t mode) const { return extents_.at(mode); }
  const std::vector<Coord>& extents() const { return extents_; }

  /// Number of cells in the dense box; throws TooLarge on int64 overflow.
  Coord volume() const;

  std::string to_string() const;

  bool operator==(const Shape&) const = default;

 private:
  std::vector<Coord> extents_;
};

/// Outer-to-inner permutation of modes. `perm()[level]` is the mode stored at
/// that CSF level.
class ModeOrder {
 public:
  ModeOrder() = default;
  explicit ModeOrder(std::vector<int> perm);

  static ModeOrder identity(std::size_t order);

  std::size_t size() const { return perm_.size(); }
  const std::vector<int>& perm() const { return perm_; }
  int operator[](std::size_t level) const { return perm_[level]; }

  /// Level at which `mode` is stored.
  int level_of(int mode) const;

  std::string to_string() const;

  bool operator==(const ModeOrder&) const = default;

 private:
  std::vector<int> perm_;
};

struct Entry {
  std::vector<Coord> coords;
  double value = 0.0;

  bool operator==(const Entry&) const = default;
};

/// Coordinate-list tensor in canonical form: unique coordinates stored in
/// lexicographic order.
class SparseTensor {
 public:
  SparseTensor() = default;
  explicit SparseTensor(Shape shape) : shape_(std::move(shape)) {}

  const Shape& shape() const { return shape_; }
  std::size_t order() const { return shape_.order(); }
  std::size_t nnz() const { return values_.size(); }

  std::span<const Coord> coords(std::size_t n) const {
    return {coords_.data() + n * order(), order()};
  }
  double value(std::size_t n) const { return values_[n]; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<Coord>& flat_coords() const { return coords_; }

  std::vector<Entry> entries() const;

  bool operator==(const SparseTensor&) const = default;

 private:
  friend SparseTensor coo_from_entries(std::vector<Entry> raw,
                                       const Shape& shape);
  friend SparseTensor csf_flatten(const CsfTensor& csf);

  Shape shape_;
  std::vector<Coord> coords_;
  std::vector<double> values_;
};

/// Canonicalizes raw entries: sorts lexicographically, sums duplicates and
/// drops entries whose merged value is exactly zero.
SparseTensor coo_from_entries(std::vector<Entry> raw, const Shape& shape);

/// Tensor whose mode `level` is mode `order[level]` of `t`.
SparseTensor permute(const SparseTensor& t, const ModeOrder& order);

/// One CSF level. `pos` brackets, for each node of the parent level (or the
/// synthetic root for level 0), its children in `crd`.
struct CsfLevel {
  std::vector<Coord> pos;
  std::vector<Coord> crd;

  bool operator==(const CsfLevel&) const = default;
};

class CsfTensor {
 public:
  CsfTensor() = default;

  const Shape& shape() const { return shape_; }
  const ModeOrder& mode_order() const { return mode_order_; }
  std::size_t order() const { return shape_.order(); }
  std::size_t nnz() const { return values_.size(); }

  const std::vector<CsfLevel>& levels() const { return levels_; }
  const CsfLevel& level(std::size_t l) const { return levels_[l]; }
  const std::vector<double>& values() const { return values_; }

  /// Extent of the mode stored at `level`.
  Coord level_extent(std::size_t level) const {
    return shape_.extent(static_cast<std::size_t>(mode_order_[level]));
  }

 private:
  friend CsfTensor csf_build(const SparseTensor& t, const ModeOrder& order);

  Shape shape_;
  ModeOrder mode_order_;
  std::vector<CsfLevel> levels_;
  std::vector<double> values_;
};

CsfTensor csf_build(const SparseTensor& t, const ModeOrder& order);

/// Reconstructs the coordinate list in the CSF's permuted coordinate system.
SparseTensor csf_flatten(const CsfTensor& csf);

/// Dense, row-major scratch array used to hold a reduced-order slice of an
/// intermediate tensor.
class DenseWorkspace {
 public:
  DenseWorkspace() = default;
  explicit DenseWorkspace(std::vector<Coord> dims);

  const std::vector<Coord>& dims() const { return dims_; }
  std::size_t size() const { return cells_.size(); }

  void zero();

  std::size_t offset(std::span<const Coord> index) const;
  double& at(std::span<const Coord> index) { return cells_[offset(index)]; }
  double at(std::span<const Coord> index) const {
    return cells_[offset(index)];
  }
  double& operator[](std::size_t flat) { return cells_[flat]; }
  double operator[](std::size_t flat) const { return cells_[flat]; }

  const std::vector<Coord>& strides() const { return strides_; }

 private:
  std::vector<Coord> dims_;
  std::vector<Coord> strides_;
  std::vector<double> cells_;
};

}  // namespace sparsefuse

#endif  // SPARSEFUSE_TENSOR_H_
