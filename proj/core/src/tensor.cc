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

#include "sparsefuse/tensor.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include "sparsefuse/error.h"

namespace sparsefuse {

namespace {

std::string join(std::span<const Coord> values) {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) os << ',';
    os << values[k];
  }
  os << ')';
  return os.str();
}

}  // namespace

Shape::Shape(std::vector<Coord> extents) : extents_(std::move(extents)) {
  for (std::size_t k = 0; k < extents_.size(); ++k) {
    if (extents_[k] < 1) {
      fail(ErrorCode::kInvalidArgument,
           "extent of mode " + std::to_string(k) + " must be positive, got " +
               std::to_string(extents_[k]));
    }
  }
}

Coord Shape::volume() const {
  Coord v = 1;
  for (Coord e : extents_) {
    if (v > std::numeric_limits<Coord>::max() / e) {
      fail(ErrorCode::kTooLarge, "shape " + to_string() + " overflows int64");
    }
    v *= e;
  }
  return v;
}

std::string Shape::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t k = 0; k < extents_.size(); ++k) {
    if (k) os << ',';
    os << extents_[k];
  }
  os << ']';
  return os.str();
}

ModeOrder::ModeOrder(std::vector<int> perm) : perm_(std::move(perm)) {
  std::vector<char> seen(perm_.size(), 0);
  for (int m : perm_) {
    if (m < 0 || static_cast<std::size_t>(m) >= perm_.size() || seen[m]) {
      fail(ErrorCode::kInvalidArgument,
           "mode order " + to_string() + " is not a permutation");
    }
    seen[m] = 1;
  }
}

ModeOrder ModeOrder::identity(std::size_t order) {
  std::vector<int> perm(order);
  std::iota(perm.begin(), perm.end(), 0);
  return ModeOrder(std::move(perm));
}

int ModeOrder::level_of(int mode) const {
  for (std::size_t l = 0; l < perm_.size(); ++l) {
    if (perm_[l] == mode) return static_cast<int>(l);
  }
  return -1;
}

std::string ModeOrder::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t k = 0; k < perm_.size(); ++k) {
    if (k) os << ',';
    os << perm_[k];
  }
  os << ']';
  return os.str();
}

std::vector<Entry> SparseTensor::entries() const {
  std::vector<Entry> out;
  out.reserve(nnz());
  for (std::size_t n = 0; n < nnz(); ++n) {
    auto c = coords(n);
    out.push_back({{c.begin(), c.end()}, values_[n]});
  }
  return out;
}

SparseTensor coo_from_entries(std::vector<Entry> raw, const Shape& shape) {
  const std::size_t order = shape.order();
  for (const Entry& e : raw) {
    if (e.coords.size() != order) {
      fail(ErrorCode::kRankMismatch,
           "coordinates " + join(e.coords) + " have length " +
               std::to_string(e.coords.size()) + ", tensor order is " +
               std::to_string(order));
    }
    for (std::size_t k = 0; k < order; ++k) {
      if (e.coords[k] < 0 || e.coords[k] >= shape.extent(k)) {
        fail(ErrorCode::kOutOfBounds,
             "coordinates " + join(e.coords) + " outside shape " +
                 shape.to_string());
      }
    }
  }
  // Stable so that duplicates are summed in input order.
  std::stable_sort(raw.begin(), raw.end(), [](const Entry& a, const Entry& b) {
    return a.coords < b.coords;
  });

  SparseTensor t(shape);
  t.coords_.reserve(raw.size() * order);
  t.values_.reserve(raw.size());
  for (std::size_t n = 0; n < raw.size();) {
    double sum = raw[n].value;
    std::size_t next = n + 1;
    while (next < raw.size() && raw[next].coords == raw[n].coords) {
      sum += raw[next].value;
      ++next;
    }
    if (sum != 0.0) {
      t.coords_.insert(t.coords_.end(), raw[n].coords.begin(),
                       raw[n].coords.end());
      t.values_.push_back(sum);
    }
    n = next;
  }
  return t;
}

SparseTensor permute(const SparseTensor& t, const ModeOrder& order) {
  if (order.size() != t.order()) {
    fail(ErrorCode::kRankMismatch, "mode order " + order.to_string() +
                                       " does not match tensor order " +
                                       std::to_string(t.order()));
  }
  std::vector<Coord> extents(t.order());
  for (std::size_t l = 0; l < t.order(); ++l) {
    extents[l] = t.shape().extent(static_cast<std::size_t>(order[l]));
  }
  std::vector<Entry> raw;
  raw.reserve(t.nnz());
  for (std::size_t n = 0; n < t.nnz(); ++n) {
    auto c = t.coords(n);
    Entry e;
    e.coords.resize(t.order());
    for (std::size_t l = 0; l < t.order(); ++l) e.coords[l] = c[order[l]];
    e.value = t.value(n);
    raw.push_back(std::move(e));
  }
  return coo_from_entries(std::move(raw), Shape(std::move(extents)));
}

CsfTensor csf_build(const SparseTensor& t, const ModeOrder& order) {
  if (order.size() != t.order()) {
    fail(ErrorCode::kRankMismatch, "mode order " + order.to_string() +
                                       " does not match tensor order " +
                                       std::to_string(t.order()));
  }
  const std::size_t n_levels = t.order();
  const SparseTensor p = permute(t, order);

  CsfTensor csf;
  csf.shape_ = t.shape();
  csf.mode_order_ = order;
  csf.levels_.resize(n_levels);
  csf.values_ = p.values();
  for (auto& level : csf.levels_) level.pos.push_back(0);

  for (std::size_t n = 0; n < p.nnz(); ++n) {
    auto c = p.coords(n);
    // First level at which this entry leaves the previous entry's path.
    std::size_t diverge = 0;
    if (n > 0) {
      auto prev = p.coords(n - 1);
      while (diverge < n_levels && prev[diverge] == c[diverge]) ++diverge;
    }
    for (std::size_t l = diverge; l < n_levels; ++l) {
      // Opening a node at level l closes the child segments of every node
      // below it that was open.
      if (l + 1 < n_levels && n > 0) {
        csf.levels_[l + 1].pos.push_back(
            static_cast<Coord>(csf.levels_[l + 1].crd.size()));
      }
      csf.levels_[l].crd.push_back(c[l]);
    }
  }
  // Close the final segments: level 0 has one root segment; deeper levels
  // have one segment per parent node.
  if (n_levels > 0) {
    csf.levels_[0].pos.push_back(static_cast<Coord>(csf.levels_[0].crd.size()));
    for (std::size_t l = 1; l < n_levels; ++l) {
      if (!csf.levels_[l - 1].crd.empty()) {
        csf.levels_[l].pos.push_back(
            static_cast<Coord>(csf.levels_[l].crd.size()));
      }
    }
  }
  return csf;
}

SparseTensor csf_flatten(const CsfTensor& csf) {
  const std::size_t n_levels = csf.order();
  std::vector<Coord> extents(n_levels);
  for (std::size_t l = 0; l < n_levels; ++l) extents[l] = csf.level_extent(l);

  SparseTensor out{Shape(std::move(extents))};
  out.values_ = csf.values();
  if (n_levels == 0) return out;

  out.coords_.resize(csf.nnz() * n_levels);
  // Walk each level, writing every node's coordinate into the rows of the
  // leaves beneath it. `ranges[node]` is the leaf range of a node at the current level.
  std::vector<std::pair<Coord, Coord>> ranges(csf.level(n_levels - 1).crd.size());
  for (std::size_t q = 0; q < ranges.size(); ++q) {
    ranges[q] = {static_cast<Coord>(q), static_cast<Coord>(q + 1)};
  }
  for (std::size_t l = n_levels; l-- > 0;) {
    const CsfLevel& level = csf.level(l);
    for (std::size_t q = 0; q < level.crd.size(); ++q) {
      for (Coord leaf = ranges[q].first; leaf < ranges[q].second; ++leaf) {
        out.coords_[static_cast<std::size_t>(leaf) * n_levels + l] = level.crd[q];
      }
    }
    if (l == 0) break;
    // Leaf ranges of the parent nodes.
    const std::size_t parents = csf.level(l - 1).crd.size();
    std::vector<std::pair<Coord, Coord>> up(parents);
    for (std::size_t q = 0; q < parents; ++q) {
      const Coord b = level.pos[q];
      const Coord e = level.pos[q + 1];
      up[q] = b < e ? std::make_pair(ranges[b].first, ranges[e - 1].second)
                    : std::make_pair(Coord{0}, Coord{0});
    }
    ranges = std::move(up);
  }
  return out;
}

DenseWorkspace::DenseWorkspace(std::vector<Coord> dims)
    : dims_(std::move(dims)), strides_(dims_.size()) {
  const Coord cells = Shape(dims_).volume();
  Coord stride = 1;
  for (std::size_t k = dims_.size(); k-- > 0;) {
    strides_[k] = stride;
    stride *= dims_[k];
  }
  cells_.assign(static_cast<std::size_t>(cells), 0.0);
}

void DenseWorkspace::zero() { std::fill(cells_.begin(), cells_.end(), 0.0); }

std::size_t DenseWorkspace::offset(std::span<const Coord> index) const {
  Coord off = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) off += index[k] * strides_[k];
  return static_cast<std::size_t>(off);
}

}  // namespace sparsefuse
