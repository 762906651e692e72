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

#include "sparsefuse/solver.h"

#include <algorithm>
#include <bit>
#include <random>
#include <stdexcept>

#include "sparsefuse/error.h"

namespace sparsefuse {

namespace {

using Domain = std::uint64_t;
using Clock = std::chrono::steady_clock;

constexpr Domain bit(int v) { return Domain{1} << v; }
int lo(Domain d) { return std::countr_zero(d); }
int hi(Domain d) { return 63 - std::countl_zero(d); }
bool fixed(Domain d) { return std::has_single_bit(d); }
// Values strictly below v / strictly above v.
Domain below(int v) { return v <= 0 ? 0 : (v >= 64 ? ~Domain{0} : bit(v) - 1); }
Domain above(int v) { return v >= 63 ? 0 : (v < 0 ? ~Domain{0} : ~(bit(v + 1) - 1)); }

enum class Status { kTrue, kFalse, kOpen };

class Search {
 public:
  Search(const ConstraintModel& model, const SolveOptions& options, SolveStats* stats)
      : model_(model), options_(options), stats_(stats), rng_(options.seed) {
    const auto& vars = model.variables();
    watch_.resize(vars.size());
    for (std::size_t c = 0; c < model.clauses().size(); ++c) {
      for (const auto& a : model.clauses()[c].atoms) {
        watch_[a.var].push_back(static_cast<int>(c));
        if (a.other >= 0) watch_[a.other].push_back(static_cast<int>(c));
      }
    }
    const int nclauses = static_cast<int>(model.clauses().size());
    for (std::size_t k = 0; k < model.all_different().size(); ++k) {
      for (int v : model.all_different()[k].vars) {
        watch_[v].push_back(nclauses + static_cast<int>(k));
      }
    }
    for (auto& w : watch_) {
      std::sort(w.begin(), w.end());
      w.erase(std::unique(w.begin(), w.end()), w.end());
    }
    deadline_ = Clock::now() + options.budget;
  }

  std::optional<std::vector<int>> run() {
    std::vector<Domain> dom;
    for (const auto& v : model_.variables()) {
      if (v.domain < 1 || v.domain > 64) {
        fail(ErrorCode::kTooLarge, "domain of " + v.name() + " exceeds 64 values");
      }
      dom.push_back(v.domain == 64 ? ~Domain{0} : bit(v.domain) - 1);
    }
    std::vector<int> all(model_.clauses().size() + model_.all_different().size());
    for (std::size_t k = 0; k < all.size(); ++k) all[k] = static_cast<int>(k);
    if (!propagate(dom, all)) return std::nullopt;

    std::vector<int> order;
    for (std::size_t c = 0; c < model_.num_contractions(); ++c) {
      order.push_back(model_.ap(static_cast<int>(c)));
    }
    shuffle(order);
    if (!dfs(dom, order, 0, false)) return std::nullopt;
    std::vector<int> values;
    for (Domain d : result_) values.push_back(lo(d));
    return values;
  }

 private:
  template <typename T>
  void shuffle(std::vector<T>& items) {
    if (options_.seed != 0) std::shuffle(items.begin(), items.end(), rng_);
  }

  // Variables branched on once every ap is fixed.
  std::vector<int> tail_order(const std::vector<Domain>& dom) {
    const auto& vars = model_.variables();
    const int m = static_cast<int>(model_.num_contractions());
    std::vector<int> by_pos(m);
    for (int c = 0; c < m; ++c) by_pos[lo(dom[model_.ap(c)])] = c;
    std::vector<int> out;
    for (int c : by_pos) {
      std::vector<int> summed, external;
      for (const auto& [idx, v] : model_.lp_vars()[c]) {
        (vars[v].summed ? summed : external).push_back(v);
      }
      for (auto* group : {&summed, &external}) {
        std::reverse(group->begin(), group->end());
        shuffle(*group);
        out.insert(out.end(), group->begin(), group->end());
      }
    }
    std::vector<std::vector<int>> tensors;
    for (const auto& [tensor, v] : model_.dp_vars()) tensors.push_back(v);
    shuffle(tensors);
    for (const auto& t : tensors) out.insert(out.end(), t.begin(), t.end());
    return out;
  }

  // Branches on `order` from `depth`; `tail` is false while placing ap.
  bool dfs(const std::vector<Domain>& dom, const std::vector<int>& order,
           std::size_t depth, bool tail) {
    if (stats_) ++stats_->nodes;
    if ((++nodes_ & 0xff) == 1 && Clock::now() >= deadline_) {
      fail(ErrorCode::kTimeout,
           "no answer within " + std::to_string(options_.budget.count()) +
               " ms at bound " + std::to_string(model_.bound()) + "\n" + model_.to_string());
    }
    while (depth < order.size() && fixed(dom[order[depth]])) ++depth;
    if (depth == order.size()) {
      if (!tail) return dfs(dom, tail_order(dom), 0, true);
      result_ = dom;
      return true;
    }
    const int var = order[depth];
    for (Domain rest = dom[var]; rest; rest &= rest - 1) {
      std::vector<Domain> next = dom;
      next[var] = bit(lo(rest));
      if (propagate(next, watch_[var]) && dfs(next, order, depth + 1, tail)) return true;
      if (stats_) ++stats_->failures;
    }
    return false;
  }

  Status status(const Atom& a, const std::vector<Domain>& dom) const {
    const Domain x = dom[a.var];
    switch (a.op) {
      case Atom::kEq:
        if (!(x & bit(a.value))) return Status::kFalse;
        return x == bit(a.value) ? Status::kTrue : Status::kOpen;
      case Atom::kNe:
        if (!(x & bit(a.value))) return Status::kTrue;
        return x == bit(a.value) ? Status::kFalse : Status::kOpen;
      case Atom::kLt: {
        const Domain y = dom[a.other];
        if (hi(x) < lo(y)) return Status::kTrue;
        if (lo(x) >= hi(y)) return Status::kFalse;
        return Status::kOpen;
      }
      case Atom::kGe: {
        const Domain y = dom[a.other];
        if (lo(x) >= hi(y)) return Status::kTrue;
        if (hi(x) < lo(y)) return Status::kFalse;
        return Status::kOpen;
      }
    }
    return Status::kOpen;
  }

  // Narrows domains so that `a` holds. Returns the variables that changed.
  void enforce(const Atom& a, std::vector<Domain>& dom, std::vector<int>& changed) const {
    auto narrow = [&](int var, Domain keep) {
      const Domain d = dom[var] & keep;
      if (d != dom[var]) {
        dom[var] = d;
        changed.push_back(var);
      }
    };
    switch (a.op) {
      case Atom::kEq: narrow(a.var, bit(a.value)); break;
      case Atom::kNe: narrow(a.var, ~bit(a.value)); break;
      case Atom::kLt:
        narrow(a.var, below(hi(dom[a.other])));
        if (dom[a.var]) narrow(a.other, above(lo(dom[a.var])));
        break;
      case Atom::kGe:
        narrow(a.var, ~below(lo(dom[a.other])));
        if (dom[a.var]) narrow(a.other, ~above(hi(dom[a.var])));
        break;
    }
  }

  bool propagate_clause(const Clause& clause, std::vector<Domain>& dom,
                        std::vector<int>& changed) const {
    const Atom* open = nullptr;
    int num_open = 0;
    for (const auto& a : clause.atoms) {
      switch (status(a, dom)) {
        case Status::kTrue: return true;
        case Status::kFalse: break;
        case Status::kOpen:
          open = &a;
          ++num_open;
          break;
      }
    }
    if (num_open == 0) return false;
    if (num_open == 1) enforce(*open, dom, changed);
    return true;
  }

  bool propagate_all_different(const AllDifferent& ad, std::vector<Domain>& dom,
                               std::vector<int>& changed) const {
    Domain taken = 0;
    Domain all = 0;
    for (int v : ad.vars) {
      all |= dom[v];
      if (!fixed(dom[v])) continue;
      if (taken & dom[v]) return false;
      taken |= dom[v];
    }
    if (std::popcount(all) < static_cast<int>(ad.vars.size())) return false;
    for (int v : ad.vars) {
      if (fixed(dom[v]) || !(dom[v] & taken)) continue;
      dom[v] &= ~taken;
      changed.push_back(v);
    }
    return true;
  }

  bool propagate(std::vector<Domain>& dom, const std::vector<int>& seeds) const {
    const int nclauses = static_cast<int>(model_.clauses().size());
    std::vector<char> queued(nclauses + model_.all_different().size(), 0);
    std::vector<int> queue;
    for (int k : seeds) {
      if (!queued[k]) {
        queued[k] = 1;
        queue.push_back(k);
      }
    }
    std::vector<int> changed;
    while (!queue.empty()) {
      const int k = queue.back();
      queue.pop_back();
      queued[k] = 0;
      changed.clear();
      const bool ok = k < nclauses
                          ? propagate_clause(model_.clauses()[k], dom, changed)
                          : propagate_all_different(model_.all_different()[k - nclauses],
                                                    dom, changed);
      if (!ok) return false;
      for (int v : changed) {
        if (dom[v] == 0) return false;
        for (int w : watch_[v]) {
          if (!queued[w]) {
            queued[w] = 1;
            queue.push_back(w);
          }
        }
      }
    }
    return true;
  }

  const ConstraintModel& model_;
  SolveOptions options_;
  SolveStats* stats_;
  std::mt19937_64 rng_;
  std::vector<std::vector<int>> watch_;  // variable -> constraints mentioning it
  Clock::time_point deadline_;
  std::uint64_t nodes_ = 0;
  std::vector<Domain> result_;
};

class BacktrackingSolver : public SolverBackend {
 public:
  std::string name() const override { return "backtracking"; }

  std::optional<ScheduleSolution> solve(const ConstraintModel& model,
                                        const SolveOptions& options,
                                        SolveStats* stats) override {
    Search search(model, options, stats);
    const auto values = search.run();
    if (!values) return std::nullopt;
    if (!satisfies(model, *values)) {
      throw std::logic_error("solver produced an assignment violating its model");
    }
    return solution_from_values(model, *values);
  }
};

}  // namespace

std::unique_ptr<SolverBackend> make_backtracking_solver() {
  return std::make_unique<BacktrackingSolver>();
}

std::optional<ScheduleSolution> solve(const ConstraintModel& model,
                                      const SolveOptions& options, SolveStats* stats) {
  return make_backtracking_solver()->solve(model, options, stats);
}

int default_max_order(const ContractionTree& tree) {
  return std::max(1, static_cast<int>(tree.max_intermediate_order()));
}

MinOrderResult search_min_order(const ContractionTree& tree, int l_max,
                                const SolveOptions& options,
                                const ModelOptions& model_options) {
  if (l_max < 1) fail(ErrorCode::kInvalidArgument, "maximum order must be at least 1");
  for (int l = 1; l <= l_max; ++l) {
    auto sol = solve(build_model(tree, l, model_options), options);
    if (sol) return {l, std::move(sol)};
  }
  return {};
}

}  // namespace sparsefuse
