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

#include "sparsefuse/oracle.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "sparsefuse/error.h"

namespace sparsefuse {

namespace {

constexpr Coord kMaxPoints = 100'000'000;

DenseWorkspace densify(const SparseTensor& t) {
  DenseWorkspace d(t.shape().extents());
  for (std::size_t n = 0; n < t.nnz(); ++n) d.at(t.coords(n)) = t.value(n);
  return d;
}

SparseTensor sparsify(const DenseWorkspace& d) {
  std::vector<Entry> entries;
  std::vector<Coord> index(d.dims().size(), 0);
  for (std::size_t flat = 0; flat < d.size(); ++flat) {
    if (d[flat] != 0.0) entries.push_back({index, d[flat]});
    for (std::size_t k = index.size(); k-- > 0;) {
      if (++index[k] < d.dims()[k]) break;
      index[k] = 0;
    }
  }
  return coo_from_entries(std::move(entries), Shape(d.dims()));
}

Coord checked_volume(const std::vector<Coord>& extents, const std::string& what) {
  Coord total = 1;
  for (Coord e : extents) {
    if (total > kMaxPoints / e) {
      fail(ErrorCode::kTooLarge, what + " exceeds " + std::to_string(kMaxPoints) + " points");
    }
    total *= e;
  }
  return total;
}

// A dense operand addressed by positions in a shared coordinate vector.
struct Factor {
  const DenseWorkspace* cells;
  std::vector<int> slots;

  std::size_t offset(const std::vector<Coord>& point) const {
    Coord off = 0;
    for (std::size_t k = 0; k < slots.size(); ++k) off += point[slots[k]] * cells->strides()[k];
    return static_cast<std::size_t>(off);
  }
};

void for_each_point(const std::vector<Coord>& extents,
                    const std::function<void(const std::vector<Coord>&)>& fn) {
  std::vector<Coord> point(extents.size(), 0);
  while (true) {
    fn(point);
    std::size_t k = extents.size();
    while (k > 0) {
      --k;
      if (++point[k] < extents[k]) break;
      point[k] = 0;
      if (k == 0) return;
    }
    if (extents.empty()) return;
  }
}

const SparseTensor& input_of(const ContractionTree& tree, const TensorMap& inputs,
                             const std::string& id) {
  auto it = inputs.find(id);
  if (it == inputs.end()) fail(ErrorCode::kUnboundTensor, "no data for input " + id);
  if (!(it->second.shape() == tree.tensor_shape(id))) {
    fail(ErrorCode::kShapeMismatch, "input " + id + " has shape " +
                                        it->second.shape().to_string());
  }
  return it->second;
}

std::vector<int> post_order(const ContractionTree& tree) {
  std::vector<int> out;
  std::function<void(int)> visit = [&](int c) {
    for (int child : tree.children(c)) visit(child);
    out.push_back(c);
  };
  visit(tree.root());
  return out;
}

}  // namespace

OracleResult oracle_nary(const ContractionTree& tree, const TensorMap& inputs) {
  std::vector<std::string> names;
  std::vector<Coord> extents;
  for (const auto& [name, extent] : tree.extents()) {
    names.push_back(name);
    extents.push_back(extent);
  }
  const Coord points = checked_volume(extents, "n-ary iteration space");
  auto slot_of = [&](const std::string& idx) {
    return static_cast<int>(std::find(names.begin(), names.end(), idx) - names.begin());
  };

  std::map<std::string, DenseWorkspace> dense;
  for (const auto& id : tree.inputs()) dense.emplace(id, densify(input_of(tree, inputs, id)));
  std::vector<Factor> factors;
  for (const auto& c : tree.contractions()) {
    for (const TensorRef* ref : {&c.lhs, &c.rhs}) {
      if (tree.role(ref->tensor) != TensorRole::kInput) continue;
      Factor f{&dense.at(ref->tensor), {}};
      for (const auto& idx : ref->indices) f.slots.push_back(slot_of(idx));
      factors.push_back(std::move(f));
    }
  }
  const TensorRef& result_ref = tree.contraction(tree.root()).result;
  DenseWorkspace result(tree.tensor_shape(result_ref.tensor).extents());
  Factor out{&result, {}};
  for (const auto& idx : result_ref.indices) out.slots.push_back(slot_of(idx));

  OracleResult r;
  for_each_point(extents, [&](const std::vector<Coord>& point) {
    double prod = 1.0;
    for (const auto& f : factors) {
      prod *= (*f.cells)[f.offset(point)];
      if (prod == 0.0) return;
    }
    result[out.offset(point)] += prod;
  });
  r.multiply_adds = static_cast<std::uint64_t>(points);
  r.result = sparsify(result);
  return r;
}

OracleResult oracle_unfused(const ContractionTree& tree, const TensorMap& inputs,
                            std::vector<int> sequence) {
  if (sequence.empty()) sequence = post_order(tree);
  std::vector<int> placed(tree.size(), 0);
  if (sequence.size() != tree.size()) {
    fail(ErrorCode::kInvalidArgument, "sequence must list every contraction once");
  }
  for (int c : sequence) {
    if (c < 0 || c >= static_cast<int>(tree.size()) || placed[c]) {
      fail(ErrorCode::kInvalidArgument, "sequence must list every contraction once");
    }
    for (int child : tree.children(c)) {
      if (!placed[child]) {
        fail(ErrorCode::kInvalidArgument, "contraction " + std::to_string(c) +
                                              " is sequenced before its producer");
      }
    }
    placed[c] = 1;
  }

  std::map<std::string, DenseWorkspace> dense;
  for (const auto& id : tree.inputs()) dense.emplace(id, densify(input_of(tree, inputs, id)));
  OracleResult r;
  for (int id : sequence) {
    const Contraction& c = tree.contraction(id);
    const auto indices = c.index_set();
    std::vector<Coord> extents;
    for (const auto& idx : indices) extents.push_back(tree.extent(idx));
    const Coord points = checked_volume(extents, "loop nest of " + c.to_string());
    const Shape result_shape = tree.tensor_shape(c.result.tensor);
    checked_volume(result_shape.extents(), "tensor " + c.result.tensor);
    auto [it, inserted] = dense.insert_or_assign(c.result.tensor,
                                                 DenseWorkspace(result_shape.extents()));
    if (id != tree.root()) {
      r.max_intermediate_cells = std::max<std::uint64_t>(r.max_intermediate_cells,
                                                         it->second.size());
    }
    auto factor = [&](const TensorRef& ref) {
      Factor f{&dense.at(ref.tensor), {}};
      for (const auto& idx : ref.indices) {
        f.slots.push_back(static_cast<int>(std::find(indices.begin(), indices.end(), idx) -
                                           indices.begin()));
      }
      return f;
    };
    const Factor lhs = factor(c.lhs);
    const Factor rhs = factor(c.rhs);
    const Factor out = factor(c.result);
    DenseWorkspace& target = it->second;
    for_each_point(extents, [&](const std::vector<Coord>& point) {
      target[out.offset(point)] += (*lhs.cells)[lhs.offset(point)] * (*rhs.cells)[rhs.offset(point)];
    });
    r.multiply_adds += static_cast<std::uint64_t>(points);
  }
  r.result = sparsify(dense.at(tree.result_tensor()));
  return r;
}

std::string CompareReport::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << (pass ? "pass" : "FAIL") << ": " << points << " points, " << mismatches
     << " mismatches, max abs error " << max_abs_error;
  if (!worst.empty() || mismatches) {
    os << ", worst at (";
    for (std::size_t k = 0; k < worst.size(); ++k) os << (k ? "," : "") << worst[k];
    os << ") " << worst_a << " vs " << worst_b;
  }
  return os.str();
}

CompareReport compare(const SparseTensor& a, const SparseTensor& b, double rel_tol,
                      double abs_tol) {
  if (!(a.shape() == b.shape())) {
    fail(ErrorCode::kShapeMismatch,
         "cannot compare shapes " + a.shape().to_string() + " and " + b.shape().to_string());
  }
  CompareReport rep;
  double worst_excess = -std::numeric_limits<double>::infinity();
  auto visit = [&](std::span<const Coord> coords, double x, double y) {
    ++rep.points;
    const double err = std::fabs(x - y);
    const double allowed = abs_tol + rel_tol * std::max(std::fabs(x), std::fabs(y));
    rep.max_abs_error = std::max(rep.max_abs_error, err);
    const bool ok = err <= allowed;
    if (!ok) {
      ++rep.mismatches;
      rep.pass = false;
    }
    if (err - allowed > worst_excess) {
      worst_excess = err - allowed;
      rep.worst.assign(coords.begin(), coords.end());
      rep.worst_a = x;
      rep.worst_b = y;
    }
  };
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.nnz() || j < b.nnz()) {
    if (j == b.nnz() ||
        (i < a.nnz() && std::lexicographical_compare(a.coords(i).begin(), a.coords(i).end(),
                                                     b.coords(j).begin(), b.coords(j).end()))) {
      visit(a.coords(i), a.value(i), 0.0);
      ++i;
    } else if (i == a.nnz() ||
               std::lexicographical_compare(b.coords(j).begin(), b.coords(j).end(),
                                            a.coords(i).begin(), a.coords(i).end())) {
      visit(b.coords(j), 0.0, b.value(j));
      ++j;
    } else {
      visit(a.coords(i), a.value(i), b.value(j));
      ++i;
      ++j;
    }
  }
  return rep;
}

}  // namespace sparsefuse
