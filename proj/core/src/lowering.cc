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

#include "sparsefuse/lowering.h"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "sparsefuse/error.h"

namespace sparsefuse {

namespace {

using Json = nlohmann::ordered_json;

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) out += (k ? "," : "") + items[k];
  return out;
}

std::string ir_ref(const LoweredRef& r) { return r.tensor + "(" + join(r.indices) + ")"; }

std::string ir_assign(const Assignment& a) {
  return ir_ref(a.result) + " = " + ir_ref(a.lhs) + " * " + ir_ref(a.rhs);
}

LoweredRef lower_ref(const ContractionTree& tree, const ScheduleSolution& sol,
                     const TensorRef& ref) {
  LoweredRef out{ref.tensor, {}, {}, tree.role(ref.tensor)};
  std::vector<int> modes(ref.indices.size());
  for (std::size_t k = 0; k < modes.size(); ++k) modes[k] = static_cast<int>(k);
  if (out.role == TensorRole::kIntermediate) {
    const auto& loops = sol.lp.at(tree.producer(ref.tensor));
    std::sort(modes.begin(), modes.end(), [&](int a, int b) {
      return loops.at(ref.indices[a]) < loops.at(ref.indices[b]);
    });
  } else {
    modes = sol.layout(ref.tensor).perm();
  }
  for (int mode : modes) out.indices.push_back(ref.indices[mode]);
  out.modes = std::move(modes);
  return out;
}

void drop_index(LoweredRef& ref, const std::string& index) {
  auto it = std::find(ref.indices.begin(), ref.indices.end(), index);
  if (it == ref.indices.end()) return;
  ref.modes.erase(ref.modes.begin() + (it - ref.indices.begin()));
  ref.indices.erase(it);
}

Json ref_json(const LoweredRef& r) {
  return {{"tensor", r.tensor}, {"indices", r.indices}, {"modes", r.modes}};
}

Json node_json(const IrNode& n) {
  switch (n.kind) {
    case IrNode::kForall:
      return {{"kind", "forall"}, {"index", n.index}, {"body", node_json(*n.body)}};
    case IrNode::kWhere:
      return {{"kind", "where"},
              {"consumer", node_json(*n.consumer)},
              {"producer", node_json(*n.producer)}};
    case IrNode::kAssign:
      return {{"kind", "assign"},
              {"contraction", n.assign.contraction},
              {"position", n.assign.position},
              {"text", ir_assign(n.assign)},
              {"result", ref_json(n.assign.result)},
              {"lhs", ref_json(n.assign.lhs)},
              {"rhs", ref_json(n.assign.rhs)}};
  }
  return {};
}

void print_node(const IrNode& n, bool labels, std::string& out) {
  switch (n.kind) {
    case IrNode::kForall:
      out += "forall(" + n.index + ", ";
      print_node(*n.body, labels, out);
      out += ")";
      break;
    case IrNode::kWhere:
      out += "where(";
      print_node(*n.consumer, labels, out);
      out += ", ";
      print_node(*n.producer, labels, out);
      out += ")";
      break;
    case IrNode::kAssign:
      out += labels ? "A" + std::to_string(n.assign.position) : ir_assign(n.assign);
      break;
  }
}

}  // namespace

std::string LoweredRef::to_string() const { return tensor + "[" + join(indices) + "]"; }

std::string Assignment::to_string() const {
  return result.to_string() + " = " + lhs.to_string() + " * " + rhs.to_string();
}

std::string SchedulePair::to_string() const {
  return "<" + assign.to_string() + ", [" + join(loops) + "]>";
}

std::vector<SchedulePair> schedule_from_solution(const ContractionTree& tree,
                                                 const ScheduleSolution& sol) {
  std::vector<SchedulePair> out;
  for (int c : sol.sequence()) {
    const Contraction& con = tree.contraction(c);
    SchedulePair pair;
    pair.assign.contraction = c;
    pair.assign.position = sol.ap.at(c);
    pair.assign.result = lower_ref(tree, sol, con.result);
    pair.assign.lhs = lower_ref(tree, sol, con.lhs);
    pair.assign.rhs = lower_ref(tree, sol, con.rhs);
    pair.loops = sol.loop_order(c);
    out.push_back(std::move(pair));
  }
  return out;
}

std::vector<SchedulePair> remove_index(const std::string& index,
                                       std::vector<SchedulePair> pairs) {
  std::set<std::string> produced, consumed;
  for (auto& p : pairs) {
    if (p.loops.empty() || p.loops.front() != index) {
      fail(ErrorCode::kPrefixMismatch, "loops of " + p.assign.to_string() +
                                           " do not start with " + index);
    }
    p.loops.erase(p.loops.begin());
    if (p.assign.result.role == TensorRole::kIntermediate) produced.insert(p.assign.result.tensor);
    for (const LoweredRef* r : {&p.assign.lhs, &p.assign.rhs}) {
      if (r->role == TensorRole::kIntermediate) consumed.insert(r->tensor);
    }
  }
  for (auto& p : pairs) {
    for (LoweredRef* r : {&p.assign.result, &p.assign.lhs, &p.assign.rhs}) {
      if (r->role == TensorRole::kIntermediate && produced.count(r->tensor) &&
          consumed.count(r->tensor)) {
        drop_index(*r, index);
      }
    }
  }
  return pairs;
}

IrPtr IrNode::forall(std::string index, IrPtr body) {
  auto n = std::make_shared<IrNode>();
  n->kind = kForall;
  n->index = std::move(index);
  n->body = std::move(body);
  return n;
}

IrPtr IrNode::where(IrPtr consumer, IrPtr producer) {
  auto n = std::make_shared<IrNode>();
  n->kind = kWhere;
  n->consumer = std::move(consumer);
  n->producer = std::move(producer);
  return n;
}

IrPtr IrNode::make_assign(Assignment a) {
  auto n = std::make_shared<IrNode>();
  n->kind = kAssign;
  n->assign = std::move(a);
  return n;
}

IrPtr generate(const std::vector<SchedulePair>& pairs) {
  if (pairs.empty()) fail(ErrorCode::kMalformedSchedule, "empty schedule");
  // Elements of L: a run of pairs sharing an outermost loop, or one pair with
  // no loops left.
  struct Element {
    std::string index;  // empty for an assignment
    std::vector<SchedulePair> pairs;
  };
  std::vector<Element> elements;
  for (const auto& p : pairs) {
    std::set<std::string> distinct(p.loops.begin(), p.loops.end());
    if (distinct.size() != p.loops.size()) {
      fail(ErrorCode::kMalformedSchedule, "repeated loop in " + p.to_string());
    }
    if (p.loops.empty()) {
      elements.push_back({"", {p}});
      continue;
    }
    const std::string& i = p.loops.front();
    if (elements.empty() || elements.back().index != i) elements.push_back({i, {}});
    elements.back().pairs.push_back(p);
  }
  if (elements.size() == 1) {
    const Element& e = elements.front();
    if (e.index.empty()) return IrNode::make_assign(e.pairs.front().assign);
    return IrNode::forall(e.index, generate(remove_index(e.index, e.pairs)));
  }
  const Element& last = elements.back();
  const std::vector<SchedulePair> prefix(pairs.begin(),
                                         pairs.end() - static_cast<long>(last.pairs.size()));
  return IrNode::where(generate(last.pairs), generate(prefix));
}

IrPtr lower(const ContractionTree& tree, const ScheduleSolution& sol) {
  return generate(schedule_from_solution(tree, sol));
}

std::string print_ir(const IrNode& node, bool labels) {
  std::string out;
  print_node(node, labels, out);
  return out;
}

std::string ir_to_json(const IrNode& node) { return node_json(node).dump(2) + "\n"; }

}  // namespace sparsefuse
