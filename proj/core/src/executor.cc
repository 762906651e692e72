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

#include "sparsefuse/executor.h"

#include <algorithm>
#include <unordered_map>

#include "json.hpp"
#include "sparsefuse/error.h"

namespace sparsefuse {

void Binding::bind_csf(const std::string& tensor, CsfTensor csf) {
  dense_.erase(tensor);
  csf_.insert_or_assign(tensor, std::move(csf));
}

void Binding::bind_dense(const std::string& tensor, const SparseTensor& t) {
  DenseInput in{DenseWorkspace(t.shape().extents()), t.nnz()};
  for (std::size_t n = 0; n < t.nnz(); ++n) in.cells.at(t.coords(n)) = t.value(n);
  csf_.erase(tensor);
  dense_.insert_or_assign(tensor, std::move(in));
}

Coord Binding::extent(const std::string& index) const {
  auto it = extents_.find(index);
  if (it == extents_.end()) fail(ErrorCode::kMissingExtent, "no extent bound for index " + index);
  return it->second;
}

const CsfTensor* Binding::csf(const std::string& tensor) const {
  auto it = csf_.find(tensor);
  return it == csf_.end() ? nullptr : &it->second;
}

const DenseWorkspace* Binding::dense(const std::string& tensor) const {
  auto it = dense_.find(tensor);
  return it == dense_.end() ? nullptr : &it->second.cells;
}

bool Binding::bound(const std::string& tensor) const {
  return csf_.count(tensor) || dense_.count(tensor);
}

std::size_t Binding::nnz(const std::string& tensor) const {
  if (auto it = csf_.find(tensor); it != csf_.end()) return it->second.nnz();
  if (auto it = dense_.find(tensor); it != dense_.end()) return it->second.nnz;
  fail(ErrorCode::kUnboundTensor, "tensor " + tensor + " is not bound");
}

Binding bind_inputs(const ContractionTree& tree, const ScheduleSolution& sol,
                    const std::map<std::string, SparseTensor>& inputs, BindMode mode) {
  Binding b(tree.extents());
  for (const auto& id : tree.inputs()) {
    auto it = inputs.find(id);
    if (it == inputs.end()) fail(ErrorCode::kUnboundTensor, "no data for input " + id);
    const SparseTensor& t = it->second;
    const Shape expected = tree.tensor_shape(id);
    if (!(t.shape() == expected)) {
      fail(ErrorCode::kShapeMismatch, "input " + id + " has shape " + t.shape().to_string() +
                                          " but the network expects " + expected.to_string());
    }
    bool dense = mode == BindMode::kDense || t.order() == 0;
    if (mode == BindMode::kAuto && !dense) {
      try {
        dense = static_cast<Coord>(t.nnz()) == t.shape().volume();
      } catch (const Error&) {
        dense = false;
      }
    }
    if (dense) {
      b.bind_dense(id, t);
    } else {
      b.bind_csf(id, csf_build(t, sol.layout(id)));
    }
  }
  return b;
}

std::string ExecStats::to_json() const {
  nlohmann::ordered_json doc;
  doc["multiply_adds"] = multiply_adds;
  doc["max_workspace_cells"] = max_workspace_cells;
  doc["per_assignment"] = nlohmann::ordered_json::array();
  for (const auto& a : per_assignment) {
    doc["per_assignment"].push_back(
        {{"contraction", a.contraction}, {"multiply_adds", a.multiply_adds}});
  }
  return doc.dump(2) + "\n";
}

namespace {

using Mask = std::uint64_t;

constexpr Mask bit(int s) { return Mask{1} << s; }

struct Cursor {
  int stmt;
  int slot;  // position register of this level
  const CsfTensor* csf;
  int level;
};

struct Operand {
  enum Kind { kSparse, kDense, kWorkspace, kResult };
  Kind kind = kDense;
  int slot = -1;
  const CsfTensor* csf = nullptr;
  const DenseWorkspace* dense = nullptr;
  int workspace = -1;
  std::vector<int> index_ids;
  std::vector<Coord> strides;
};

struct Stmt {
  int contraction = 0;
  Operand out;
  Operand lhs;
  Operand rhs;
};

struct Node {
  IrNode::Kind kind = IrNode::kAssign;
  int index = -1;
  Coord extent = 0;
  int body = -1;
  int consumer = -1;
  int producer = -1;
  int stmt = -1;
  int end = 0;  // one past the last node id of the subtree
  Mask stmts = 0;
  Mask full_range = 0;
  std::vector<int> cursors;
  std::vector<int> zero;
};

struct Workspace {
  std::string tensor;
  std::vector<std::string> indices;
  int producer = -1;
  int consumer = -1;
  int lca = -1;
  DenseWorkspace cells;
  bool touched = false;
};

class Program {
 public:
  Program(const IrNode& ir, const Binding& b) : binding_(b) {
    std::vector<std::pair<std::string, int>> loops;
    root_ = compile(ir, loops);
    if (stmts_.size() > 64) fail(ErrorCode::kTooLarge, "at most 64 assignments are supported");
    resolve_workspaces();
    for (auto& n : nodes_) {
      if (n.kind == IrNode::kForall) n.full_range = needs_full_range(n);
    }
  }

  ExecResult run() {
    ExecResult out;
    for (const auto& s : stmts_) out.stats.per_assignment.push_back({s.contraction, 0});
    for (const auto& ws : workspaces_) {
      out.stats.max_workspace_cells =
          std::max<std::uint64_t>(out.stats.max_workspace_cells, ws.cells.size());
    }
    stats_ = &out.stats;
    const bool annihilated = std::any_of(inputs_.begin(), inputs_.end(), [&](const auto& id) {
      return binding_.nnz(id) == 0;
    });
    if (!annihilated) {
      Mask all = stmts_.size() == 64 ? ~Mask{0} : bit(static_cast<int>(stmts_.size())) - 1;
      exec(root_, all);
    }
    std::vector<Entry> entries;
    entries.reserve(acc_.size());
    for (const auto& [key, value] : acc_) {
      Entry e;
      e.coords.resize(result_extents_.size());
      Coord rest = key;
      for (std::size_t k = result_extents_.size(); k-- > 0;) {
        e.coords[k] = rest % result_extents_[k];
        rest /= result_extents_[k];
      }
      e.value = value;
      entries.push_back(std::move(e));
    }
    out.result = coo_from_entries(std::move(entries), Shape(result_extents_));
    return out;
  }

 private:
  int intern(const std::string& index) {
    auto [it, inserted] = index_ids_.emplace(index, static_cast<int>(index_names_.size()));
    if (inserted) {
      index_names_.push_back(index);
      coord_.push_back(0);
    }
    return it->second;
  }

  int compile(const IrNode& ir, std::vector<std::pair<std::string, int>>& loops) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    nodes_[id].kind = ir.kind;
    switch (ir.kind) {
      case IrNode::kForall: {
        const int index = intern(ir.index);
        for (const auto& [name, node] : loops) {
          if (name == ir.index) {
            fail(ErrorCode::kMalformedSchedule, "loop over " + ir.index + " is nested in itself");
          }
        }
        nodes_[id].index = index;
        nodes_[id].extent = binding_.extent(ir.index);
        loops.emplace_back(ir.index, id);
        const int body = compile(*ir.body, loops);
        loops.pop_back();
        nodes_[id].body = body;
        nodes_[id].stmts = nodes_[body].stmts;
        break;
      }
      case IrNode::kWhere: {
        const int producer = compile(*ir.producer, loops);
        const int consumer = compile(*ir.consumer, loops);
        nodes_[id].producer = producer;
        nodes_[id].consumer = consumer;
        nodes_[id].stmts = nodes_[producer].stmts | nodes_[consumer].stmts;
        break;
      }
      case IrNode::kAssign: {
        const int s = static_cast<int>(stmts_.size());
        stmts_.emplace_back();
        nodes_[id].stmt = s;
        nodes_[id].stmts = s < 64 ? bit(s) : 0;
        compile_assign(ir.assign, s, loops);
        break;
      }
    }
    nodes_[id].end = static_cast<int>(nodes_.size());
    return id;
  }

  // Loop nest position of `index` around the current statement.
  static int depth_of(const std::vector<std::pair<std::string, int>>& loops,
                      const LoweredRef& ref, const std::string& index) {
    for (std::size_t d = 0; d < loops.size(); ++d) {
      if (loops[d].first == index) return static_cast<int>(d);
    }
    fail(ErrorCode::kMalformedSchedule,
         "index " + index + " of " + ref.to_string() + " is not bound by an enclosing loop");
  }

  Operand compile_operand(const LoweredRef& ref, int s, bool is_output,
                          const std::vector<std::pair<std::string, int>>& loops) {
    Operand op;
    for (const auto& idx : ref.indices) depth_of(loops, ref, idx);
    if (ref.role == TensorRole::kResult) {
      if (!is_output) fail(ErrorCode::kMalformedSchedule, "result " + ref.tensor + " is read");
      if (!result_extents_.empty() || result_stmt_ >= 0) {
        fail(ErrorCode::kMalformedSchedule, "more than one assignment writes a result");
      }
      result_stmt_ = s;
      op.kind = Operand::kResult;
      result_extents_.assign(ref.indices.size(), 0);
      op.index_ids.assign(ref.indices.size(), -1);
      for (std::size_t k = 0; k < ref.indices.size(); ++k) {
        result_extents_[ref.modes[k]] = binding_.extent(ref.indices[k]);
        op.index_ids[ref.modes[k]] = intern(ref.indices[k]);
      }
      op.strides.assign(ref.indices.size(), 1);
      for (std::size_t k = result_extents_.size(); k-- > 1;) {
        op.strides[k - 1] = op.strides[k] * result_extents_[k];
      }
      return op;
    }
    if (ref.role == TensorRole::kIntermediate) {
      op.kind = Operand::kWorkspace;
      auto it = std::find_if(workspaces_.begin(), workspaces_.end(),
                             [&](const Workspace& w) { return w.tensor == ref.tensor; });
      if (it == workspaces_.end()) {
        Workspace& ws = workspaces_.emplace_back();
        ws.tensor = ref.tensor;
        ws.indices = ref.indices;
        it = workspaces_.end() - 1;
      } else if (it->indices != ref.indices) {
        fail(ErrorCode::kMalformedSchedule,
             "workspace " + ref.tensor + " is written and read with different indices");
      }
      (is_output ? it->producer : it->consumer) = s;
      op.workspace = static_cast<int>(it - workspaces_.begin());
      for (const auto& idx : ref.indices) op.index_ids.push_back(intern(idx));
      return op;
    }
    if (is_output) fail(ErrorCode::kMalformedSchedule, "input " + ref.tensor + " is written");
    if (std::find(inputs_.begin(), inputs_.end(), ref.tensor) == inputs_.end()) {
      inputs_.push_back(ref.tensor);
    }
    if (const DenseWorkspace* dense = binding_.dense(ref.tensor)) {
      op.kind = Operand::kDense;
      op.dense = dense;
      for (std::size_t k = 0; k < ref.indices.size(); ++k) {
        op.index_ids.push_back(intern(ref.indices[k]));
        op.strides.push_back(dense->strides().at(ref.modes[k]));
      }
      return op;
    }
    const CsfTensor* csf = binding_.csf(ref.tensor);
    if (!csf) fail(ErrorCode::kUnboundTensor, "tensor " + ref.tensor + " is not bound");
    if (csf->mode_order().perm() != ref.modes) {
      fail(ErrorCode::kModeOrderMismatch,
           ref.tensor + " is stored in layout " + csf->mode_order().to_string() +
               " but referenced as " + ref.to_string());
    }
    op.kind = Operand::kSparse;
    op.csf = csf;
    // One position register per level; the last one addresses the value.
    const int first_slot = static_cast<int>(slots_.size());
    slots_.resize(slots_.size() + ref.indices.size(), 0);
    op.slot = first_slot + static_cast<int>(ref.indices.size()) - 1;
    int previous = -1;
    for (std::size_t level = 0; level < ref.indices.size(); ++level) {
      const int d = depth_of(loops, ref, ref.indices[level]);
      if (d <= previous) {
        fail(ErrorCode::kModeOrderMismatch,
             "loops visit the levels of " + ref.to_string() + " out of order");
      }
      previous = d;
      nodes_[loops[d].second].cursors.push_back(static_cast<int>(cursors_.size()));
      cursors_.push_back({s, first_slot + static_cast<int>(level), csf, static_cast<int>(level)});
    }
    return op;
  }

  void compile_assign(const Assignment& a, int s,
                      const std::vector<std::pair<std::string, int>>& loops) {
    Stmt& st = stmts_[s];
    st.contraction = a.contraction;
    Operand out = compile_operand(a.result, s, true, loops);
    Operand lhs = compile_operand(a.lhs, s, false, loops);
    Operand rhs = compile_operand(a.rhs, s, false, loops);
    stmts_[s].out = std::move(out);
    stmts_[s].lhs = std::move(lhs);
    stmts_[s].rhs = std::move(rhs);
  }

  void resolve_workspaces() {
    if (result_stmt_ < 0) fail(ErrorCode::kMalformedSchedule, "no assignment writes a result");
    for (std::size_t w = 0; w < workspaces_.size(); ++w) {
      Workspace& ws = workspaces_[w];
      if (ws.producer < 0 || ws.consumer < 0) {
        fail(ErrorCode::kMalformedSchedule, "workspace " + ws.tensor + " lacks a producer or consumer");
      }
      for (std::size_t id = 0; id < nodes_.size(); ++id) {
        const Node& n = nodes_[id];
        if (n.kind == IrNode::kWhere && (nodes_[n.producer].stmts & bit(ws.producer)) &&
            (nodes_[n.consumer].stmts & bit(ws.consumer))) {
          ws.lca = static_cast<int>(id);
        }
      }
      if (ws.lca < 0) {
        fail(ErrorCode::kMalformedSchedule,
             "consumer of " + ws.tensor + " does not run after its producer");
      }
      nodes_[ws.lca].zero.push_back(static_cast<int>(w));
      std::vector<Coord> dims;
      for (const auto& idx : ws.indices) dims.push_back(binding_.extent(idx));
      ws.cells = DenseWorkspace(dims);
      for (Stmt& st : stmts_) {
        for (Operand* op : {&st.out, &st.lhs, &st.rhs}) {
          if (op->workspace == static_cast<int>(w)) op->strides = ws.cells.strides();
        }
      }
    }
  }

  // Statements under `n` that must see every value of the loop index: those
  // with no sparse operand advanced here and no workspace operand refilled
  // inside the loop.
  Mask needs_full_range(const Node& n) const {
    const int id = static_cast<int>(&n - nodes_.data());
    Mask out = 0;
    for (int s = 0; s < static_cast<int>(stmts_.size()); ++s) {
      if (!(n.stmts & bit(s))) continue;
      const bool driven = std::any_of(n.cursors.begin(), n.cursors.end(),
                                      [&](int c) { return cursors_[c].stmt == s; });
      bool refilled = false;
      for (const Operand* op : {&stmts_[s].lhs, &stmts_[s].rhs}) {
        if (op->kind != Operand::kWorkspace) continue;
        const int lca = workspaces_[op->workspace].lca;
        refilled = refilled || (lca > id && lca < n.end);
      }
      if (!driven && !refilled) out |= bit(s);
    }
    return out;
  }

  void exec(int id, Mask live) {
    const Node& n = nodes_[id];
    live &= n.stmts;
    if (!live) return;
    switch (n.kind) {
      case IrNode::kWhere:
        for (int w : n.zero) {
          workspaces_[w].cells.zero();
          workspaces_[w].touched = false;
        }
        exec(n.producer, live);
        exec(n.consumer, live);
        break;
      case IrNode::kAssign:
        assign(n.stmt);
        break;
      case IrNode::kForall:
        loop(n, live);
        break;
    }
  }

  struct Active {
    int stmt;
    int slot;
    const std::vector<Coord>* crd;
    Coord head;
    Coord end;
  };

  void loop(const Node& n, Mask live) {
    std::vector<Active> active;
    active.reserve(n.cursors.size());
    for (int c : n.cursors) {
      const Cursor& cur = cursors_[c];
      if (!(live & bit(cur.stmt))) continue;
      const CsfLevel& level = cur.csf->level(cur.level);
      const Coord parent = cur.level == 0 ? 0 : slots_[cur.slot - 1];
      const Coord head = level.pos[parent];
      const Coord end = level.pos[parent + 1];
      if (head == end) {
        live &= ~bit(cur.stmt);
      } else {
        active.push_back({cur.stmt, cur.slot, &level.crd, head, end});
      }
    }
    if (!live) return;
    Coord& coord = coord_[n.index];
    if (live & n.full_range) {
      for (Coord v = 0; v < n.extent; ++v) {
        Mask dead = 0;
        for (auto& a : active) {
          while (a.head < a.end && (*a.crd)[a.head] < v) ++a.head;
          if (a.head < a.end && (*a.crd)[a.head] == v) {
            slots_[a.slot] = a.head;
          } else {
            dead |= bit(a.stmt);
          }
        }
        coord = v;
        exec(n.body, live & ~dead);
      }
      return;
    }
    while (true) {
      Coord v = n.extent;
      for (const auto& a : active) {
        if (a.head < a.end) v = std::min(v, (*a.crd)[a.head]);
      }
      if (v == n.extent) break;
      Mask dead = 0;
      for (auto& a : active) {
        if (a.head < a.end && (*a.crd)[a.head] == v) {
          slots_[a.slot] = a.head++;
        } else {
          dead |= bit(a.stmt);
        }
      }
      coord = v;
      exec(n.body, live & ~dead);
    }
  }

  std::size_t offset(const Operand& op) const {
    Coord off = 0;
    for (std::size_t k = 0; k < op.index_ids.size(); ++k) off += coord_[op.index_ids[k]] * op.strides[k];
    return static_cast<std::size_t>(off);
  }

  bool read(const Operand& op, double& v) const {
    switch (op.kind) {
      case Operand::kSparse:
        v = op.csf->values()[static_cast<std::size_t>(slots_[op.slot])];
        return true;
      case Operand::kDense:
        v = (*op.dense)[offset(op)];
        return true;
      case Operand::kWorkspace: {
        const Workspace& ws = workspaces_[op.workspace];
        if (!ws.touched) return false;
        v = ws.cells[offset(op)];
        return true;
      }
      case Operand::kResult:
        break;
    }
    return false;
  }

  void assign(int s) {
    const Stmt& st = stmts_[s];
    double a = 0.0;
    double b = 0.0;
    if (!read(st.lhs, a) || !read(st.rhs, b)) return;
    const double v = a * b;
    ++stats_->multiply_adds;
    ++stats_->per_assignment[s].multiply_adds;
    if (st.out.kind == Operand::kWorkspace) {
      Workspace& ws = workspaces_[st.out.workspace];
      ws.cells[offset(st.out)] += v;
      ws.touched = true;
    } else {
      acc_[static_cast<Coord>(offset(st.out))] += v;
    }
  }

  const Binding& binding_;
  std::vector<Node> nodes_;
  int root_ = -1;
  std::vector<Stmt> stmts_;
  std::vector<Cursor> cursors_;
  std::vector<Coord> slots_;
  std::vector<Workspace> workspaces_;
  std::vector<std::string> inputs_;
  std::map<std::string, int> index_ids_;
  std::vector<std::string> index_names_;
  std::vector<Coord> coord_;
  int result_stmt_ = -1;
  std::vector<Coord> result_extents_;
  std::unordered_map<Coord, double> acc_;
  ExecStats* stats_ = nullptr;
};

}  // namespace

ExecResult execute(const IrNode& ir, const Binding& binding) {
  Program program(ir, binding);
  return program.run();
}

}  // namespace sparsefuse
