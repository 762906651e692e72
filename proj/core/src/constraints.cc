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

#include "sparsefuse/constraints.h"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "sparsefuse/error.h"

namespace sparsefuse {

namespace {

Atom eq(int var, int value) { return {Atom::kEq, var, -1, value}; }
Atom ne(int var, int value) { return {Atom::kNe, var, -1, value}; }
Atom lt(int var, int other) { return {Atom::kLt, var, other, 0}; }
Atom ge(int var, int other) { return {Atom::kGe, var, other, 0}; }

bool holds(const Atom& a, const std::vector<int>& values) {
  switch (a.op) {
    case Atom::kEq: return values[a.var] == a.value;
    case Atom::kNe: return values[a.var] != a.value;
    case Atom::kLt: return values[a.var] < values[a.other];
    case Atom::kGe: return values[a.var] >= values[a.other];
  }
  return false;
}

}  // namespace

std::string Variable::name() const {
  switch (kind) {
    case VarKind::kAssignPos: return "ap[" + std::to_string(contraction) + "]";
    case VarKind::kModePos: return "dp[" + tensor + "," + std::to_string(mode) + "]";
    case VarKind::kLoopPos:
      return "lp[" + std::to_string(contraction) + "," + index + "]";
  }
  return "?";
}

std::string Atom::to_string(const std::vector<Variable>& vars) const {
  const std::string lhs = vars[var].name();
  switch (op) {
    case kEq: return lhs + " = " + std::to_string(value);
    case kNe: return lhs + " != " + std::to_string(value);
    case kLt: return lhs + " < " + vars[other].name();
    case kGe: return lhs + " >= " + vars[other].name();
  }
  return "?";
}

std::string_view to_string(Family f) {
  switch (f) {
    case Family::kAssignOrder: return "assignment-order";
    case Family::kModeOrder: return "mode-order";
    case Family::kLoopOrder: return "loop-order";
    case Family::kConsistency: return "mode-loop-consistency";
    case Family::kProducer: return "producer";
    case Family::kConsumer: return "consumer";
    case Family::kBetween: return "in-between";
    case Family::kFixedLayout: return "fixed-layout";
  }
  return "?";
}

int ConstraintModel::add_var(Variable v) {
  vars_.push_back(std::move(v));
  return static_cast<int>(vars_.size()) - 1;
}

int ConstraintModel::lp(int contraction, const std::string& index) const {
  const auto& row = lp_.at(contraction);
  auto it = row.find(index);
  if (it == row.end()) {
    fail(ErrorCode::kMissingVariable,
         "no variable lp[" + std::to_string(contraction) + "," + index + "]");
  }
  return it->second;
}

bool ConstraintModel::has_lp(int contraction, const std::string& index) const {
  return lp_.at(contraction).count(index) > 0;
}

int ConstraintModel::dp(const std::string& tensor, int mode) const {
  auto it = dp_.find(tensor);
  if (it == dp_.end() || mode < 0 || mode >= static_cast<int>(it->second.size())) {
    fail(ErrorCode::kMissingVariable,
         "no variable dp[" + tensor + "," + std::to_string(mode) + "]");
  }
  return it->second[mode];
}

std::string ConstraintModel::to_string() const {
  std::ostringstream os;
  os << "bound " << bound_ << "\nvariables:\n";
  for (const auto& v : vars_) os << "  " << v.name() << " in [0," << v.domain << ")\n";
  os << "constraints:\n";
  for (const auto& ad : all_diff_) {
    os << "  [" << sparsefuse::to_string(ad.family) << "] all-different(";
    for (std::size_t k = 0; k < ad.vars.size(); ++k) {
      os << (k ? ", " : "") << vars_[ad.vars[k]].name();
    }
    os << ")\n";
  }
  for (const auto& c : clauses_) {
    os << "  [" << sparsefuse::to_string(c.family) << "] ";
    for (std::size_t k = 0; k < c.atoms.size(); ++k) {
      os << (k ? " or " : "") << c.atoms[k].to_string(vars_);
    }
    os << '\n';
  }
  return os.str();
}

ConstraintModel build_model(const ContractionTree& tree, int bound,
                            const ModelOptions& options) {
  if (bound < 1) fail(ErrorCode::kInvalidArgument, "fusion bound must be at least 1");
  ConstraintModel model;
  model.bound_ = bound;
  const int m = static_cast<int>(tree.size());

  // Variables.
  for (int c = 0; c < m; ++c) {
    model.ap_.push_back(model.add_var({VarKind::kAssignPos, c, "", -1, "", m}));
  }
  for (const auto& tensor : tree.layout_constrained()) {
    const int order = static_cast<int>(tree.tensor_order(tensor));
    auto& row = model.dp_[tensor];
    for (int j = 0; j < order; ++j) {
      row.push_back(model.add_var({VarKind::kModePos, -1, tensor, j, "", order}));
    }
  }
  model.lp_.resize(m);
  for (const auto& c : tree.contractions()) {
    const auto indices = c.index_set();
    const auto classes = classify_indices(c);
    for (const auto& idx : indices) {
      model.lp_[c.id][idx] =
          model.add_var({VarKind::kLoopPos, c.id, "", -1, idx,
                         static_cast<int>(indices.size()), classes.contraction.count(idx) > 0});
    }
  }

  // Assignment ordering.
  model.all_diff_.push_back({Family::kAssignOrder, model.ap_});
  for (int c = 0; c < m; ++c) {
    if (tree.parent(c) >= 0) {
      model.clauses_.push_back(
          {Family::kAssignOrder, {lt(model.ap_[c], model.ap_[tree.parent(c)])}});
    }
  }

  // Mode ordering.
  for (const auto& [tensor, vars] : model.dp_) {
    if (vars.size() > 1) model.all_diff_.push_back({Family::kModeOrder, vars});
  }

  // Loop ordering.
  for (int c = 0; c < m; ++c) {
    std::vector<int> vars;
    for (const auto& idx : tree.contraction(c).index_set()) vars.push_back(model.lp(c, idx));
    model.all_diff_.push_back({Family::kLoopOrder, vars});
  }

  // Mode/loop consistency for layout-constrained references.
  for (const auto& c : tree.contractions()) {
    for (const TensorRef* ref : {&c.result, &c.lhs, &c.rhs}) {
      if (tree.role(ref->tensor) == TensorRole::kIntermediate) continue;
      const int order = static_cast<int>(ref->indices.size());
      for (int j = 0; j < order; ++j) {
        for (int jj = 0; jj < order; ++jj) {
          if (j == jj) continue;
          model.clauses_.push_back(
              {Family::kConsistency,
               {ge(model.dp(ref->tensor, j), model.dp(ref->tensor, jj)),
                lt(model.lp(c.id, ref->indices[j]), model.lp(c.id, ref->indices[jj]))}});
        }
      }
    }
  }

  // Producer/consumer edges.
  for (int i = 0; i < m; ++i) {
    const int j = tree.parent(i);
    if (j < 0) continue;
    const TensorRef& produced = tree.contraction(i).result;
    const int n = static_cast<int>(produced.indices.size());
    for (int s = 0; s < n - bound; ++s) {
      Clause producer{Family::kProducer, {}};
      for (const auto& k : produced.indices) producer.atoms.push_back(eq(model.lp(i, k), s));
      model.clauses_.push_back(std::move(producer));
      for (const auto& k : produced.indices) {
        model.clauses_.push_back(
            {Family::kConsumer, {ne(model.lp(i, k), s), eq(model.lp(j, k), s)}});
      }
      for (int r = 0; r < m; ++r) {
        if (r == i || r == j) continue;
        for (const auto& k : produced.indices) {
          Clause between{Family::kBetween,
                         {ge(model.ap_[i], model.ap_[r]), ge(model.ap_[r], model.ap_[j]),
                          ne(model.lp(i, k), s)}};
          if (model.has_lp(r, k)) between.atoms.push_back(eq(model.lp(r, k), s));
          model.clauses_.push_back(std::move(between));
        }
      }
    }
  }

  // Pinned layouts.
  for (const auto& [tensor, order] : options.fixed_layouts) {
    if (!tree.has_tensor(tensor)) fail(ErrorCode::kUnknownTensor, "unknown tensor " + tensor);
    if (tree.role(tensor) == TensorRole::kIntermediate) {
      fail(ErrorCode::kInvalidArgument,
           "intermediate " + tensor + " has no layout to pin");
    }
    if (order.size() != tree.tensor_order(tensor)) {
      fail(ErrorCode::kRankMismatch, "layout " + order.to_string() + " for " + tensor +
                                         " has the wrong length");
    }
    for (std::size_t level = 0; level < order.size(); ++level) {
      model.clauses_.push_back(
          {Family::kFixedLayout,
           {eq(model.dp(tensor, order.perm()[level]), static_cast<int>(level))}});
    }
  }
  return model;
}

std::vector<int> ScheduleSolution::sequence() const {
  std::vector<int> ids(ap.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::sort(ids.begin(), ids.end(), [&](int a, int b) { return ap[a] < ap[b]; });
  return ids;
}

std::vector<std::string> ScheduleSolution::loop_order(int c) const {
  std::vector<std::pair<int, std::string>> ranked;
  for (const auto& [idx, pos] : lp.at(c)) ranked.emplace_back(pos, idx);
  std::sort(ranked.begin(), ranked.end());
  std::vector<std::string> out;
  for (auto& [pos, idx] : ranked) out.push_back(std::move(idx));
  return out;
}

ModeOrder ScheduleSolution::layout(const std::string& tensor) const {
  auto it = dp.find(tensor);
  if (it == dp.end()) fail(ErrorCode::kMissingVariable, "no layout for " + tensor);
  const auto& pos = it->second;
  std::vector<int> perm(pos.size(), -1);
  for (std::size_t mode = 0; mode < pos.size(); ++mode) {
    if (pos[mode] < 0 || pos[mode] >= static_cast<int>(pos.size())) {
      fail(ErrorCode::kInvalidArgument, "mode position out of range for " + tensor);
    }
    perm[pos[mode]] = static_cast<int>(mode);
  }
  return ModeOrder(std::move(perm));
}

ScheduleSolution solution_from_values(const ConstraintModel& model,
                                      const std::vector<int>& values) {
  if (values.size() != model.variables().size()) {
    fail(ErrorCode::kMissingVariable, "assignment does not cover the model");
  }
  ScheduleSolution sol;
  sol.bound = model.bound();
  for (std::size_t c = 0; c < model.num_contractions(); ++c) {
    sol.ap.push_back(values[model.ap(static_cast<int>(c))]);
  }
  for (const auto& [tensor, vars] : model.dp_vars()) {
    auto& row = sol.dp[tensor];
    for (int v : vars) row.push_back(values[v]);
  }
  for (const auto& row : model.lp_vars()) {
    auto& out = sol.lp.emplace_back();
    for (const auto& [idx, v] : row) out[idx] = values[v];
  }
  return sol;
}

bool satisfies(const ConstraintModel& model, const std::vector<int>& values) {
  const auto& vars = model.variables();
  if (values.size() != vars.size()) return false;
  for (std::size_t v = 0; v < vars.size(); ++v) {
    if (values[v] < 0 || values[v] >= vars[v].domain) return false;
  }
  for (const auto& ad : model.all_different()) {
    std::vector<int> seen;
    for (int v : ad.vars) seen.push_back(values[v]);
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return false;
  }
  for (const auto& clause : model.clauses()) {
    if (std::none_of(clause.atoms.begin(), clause.atoms.end(),
                     [&](const Atom& a) { return holds(a, values); })) {
      return false;
    }
  }
  return true;
}

}  // namespace sparsefuse
