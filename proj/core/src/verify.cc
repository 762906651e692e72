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

#include "sparsefuse/verify.h"

#include <algorithm>
#include <numeric>

#include "sparsefuse/error.h"

namespace sparsefuse {

namespace {

bool is_permutation_of_range(std::vector<int> values) {
  std::sort(values.begin(), values.end());
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] != static_cast<int>(k)) return false;
  }
  return true;
}

std::string lp_name(int c, const std::string& k) {
  return "lp[" + std::to_string(c) + "," + k + "]";
}

// Index placed at loop position `s`, or "" when none.
std::string loop_at(const std::map<std::string, int>& lp, int s) {
  for (const auto& [idx, pos] : lp) {
    if (pos == s) return idx;
  }
  return "";
}

}  // namespace

std::vector<std::string> verify_solution(const ContractionTree& tree, int l,
                                         const ScheduleSolution& sol) {
  const int m = static_cast<int>(tree.size());
  if (static_cast<int>(sol.ap.size()) != m) {
    fail(ErrorCode::kMissingVariable, "expected " + std::to_string(m) + " ap values");
  }
  if (static_cast<int>(sol.lp.size()) != m) {
    fail(ErrorCode::kMissingVariable, "expected lp values for " + std::to_string(m) +
                                          " contractions");
  }
  for (const auto& c : tree.contractions()) {
    for (const auto& idx : c.index_set()) {
      if (!sol.lp[c.id].count(idx)) fail(ErrorCode::kMissingVariable, lp_name(c.id, idx));
    }
  }
  for (const auto& t : tree.layout_constrained()) {
    auto it = sol.dp.find(t);
    if (it == sol.dp.end() || it->second.size() != tree.tensor_order(t)) {
      fail(ErrorCode::kMissingVariable, "dp values for " + t);
    }
  }

  std::vector<std::string> out;
  auto lp = [&](int c, const std::string& k) { return sol.lp[c].at(k); };

  if (!is_permutation_of_range(sol.ap)) out.push_back("assignment positions are not a permutation");
  for (const auto& c : tree.contractions()) {
    const auto indices = c.index_set();
    std::vector<int> pos;
    for (const auto& idx : indices) pos.push_back(lp(c.id, idx));
    if (!is_permutation_of_range(pos) || sol.lp[c.id].size() != indices.size()) {
      out.push_back("loop positions of contraction " + std::to_string(c.id) +
                    " are not a permutation");
    }
    if (tree.parent(c.id) >= 0 && !(sol.ap[c.id] < sol.ap[tree.parent(c.id)])) {
      out.push_back("ap[" + std::to_string(c.id) + "] must precede its consumer ap[" +
                    std::to_string(tree.parent(c.id)) + "]");
    }
  }
  for (const auto& t : tree.layout_constrained()) {
    if (!is_permutation_of_range(sol.dp.at(t))) {
      out.push_back("mode positions of " + t + " are not a permutation");
    }
  }

  for (const auto& c : tree.contractions()) {
    for (const TensorRef* ref : {&c.result, &c.lhs, &c.rhs}) {
      if (tree.role(ref->tensor) == TensorRole::kIntermediate) continue;
      const auto& dp = sol.dp.at(ref->tensor);
      for (std::size_t j = 0; j < dp.size(); ++j) {
        for (std::size_t jj = 0; jj < dp.size(); ++jj) {
          if (j == jj || !(dp[j] < dp[jj])) continue;
          const auto& k = ref->indices[j];
          const auto& kk = ref->indices[jj];
          if (!(lp(c.id, k) < lp(c.id, kk))) {
            out.push_back("layout of " + ref->tensor + " puts " + k + " before " + kk +
                          " but contraction " + std::to_string(c.id) + " loops " + kk +
                          " first");
          }
        }
      }
    }
  }

  for (int i = 0; i < m; ++i) {
    const int j = tree.parent(i);
    if (j < 0) continue;
    const TensorRef& t = tree.contraction(i).result;
    const int n = static_cast<int>(t.indices.size());
    for (int s = 0; s < n - l; ++s) {
      const bool producer_ok = std::any_of(t.indices.begin(), t.indices.end(),
                                           [&](const std::string& k) { return lp(i, k) == s; });
      if (!producer_ok) {
        out.push_back("producer: loop " + std::to_string(s) + " of contraction " +
                      std::to_string(i) + " (" + loop_at(sol.lp[i], s) +
                      ") does not index " + t.tensor);
      }
      for (const auto& k : t.indices) {
        if (lp(i, k) != s) continue;
        if (lp(j, k) != s) {
          out.push_back("consumer: " + lp_name(i, k) + " = " + std::to_string(s) +
                        " requires " + lp_name(j, k) + " = " + std::to_string(s));
        }
        for (int r = 0; r < m; ++r) {
          if (r == i || r == j) continue;
          if (!(sol.ap[i] < sol.ap[r] && sol.ap[r] < sol.ap[j])) continue;
          if (!sol.lp[r].count(k) || lp(r, k) != s) {
            out.push_back("in-between: contraction " + std::to_string(r) +
                          " sits between producer and consumer of " + t.tensor +
                          " and needs " + lp_name(r, k) + " = " + std::to_string(s));
          }
        }
      }
    }
  }
  return out;
}

namespace {

struct BruteForce {
  const ContractionTree& tree;
  int l;
  std::vector<int> ap;
  std::vector<std::vector<std::string>> loops;  // by contraction, outer first
  std::vector<int> sequence;

  int pos(int c, const std::string& k) const {
    const auto& order = loops[c];
    auto it = std::find(order.begin(), order.end(), k);
    return it == order.end() ? -1 : static_cast<int>(it - order.begin());
  }

  // Conditions that become decidable once the contraction at `step` of the
  // sequence has its loop order.
  bool admissible(std::size_t step) const {
    const int c = sequence[step];
    if (tree.parent(c) >= 0) {
      const auto& t = tree.contraction(c).result.indices;
      for (int s = 0; s < static_cast<int>(t.size()) - l; ++s) {
        if (std::find(t.begin(), t.end(), loops[c][s]) == t.end()) return false;
      }
    }
    for (int child : tree.children(c)) {
      const auto& t = tree.contraction(child).result.indices;
      const int n = static_cast<int>(t.size());
      for (int s = 0; s < n - l; ++s) {
        const std::string& k = loops[child][s];
        if (pos(c, k) != s) return false;
        for (int r = 0; r < static_cast<int>(tree.size()); ++r) {
          if (ap[child] < ap[r] && ap[r] < ap[c] && pos(r, k) != s) return false;
        }
      }
    }
    return true;
  }

  // Mode permutations of every layout-constrained tensor agreeing with all
  // loop orders; empty optional when some tensor has none.
  std::optional<std::map<std::string, std::vector<int>>> layouts() const {
    std::map<std::string, std::vector<int>> out;
    for (const auto& t : tree.layout_constrained()) {
      const int n = static_cast<int>(tree.tensor_order(t));
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      bool found = false;
      do {
        bool ok = true;
        for (const auto& site : tree.references(t)) {
          for (int a = 0; a + 1 < n && ok; ++a) {
            ok = pos(site.contraction, site.ref->indices[perm[a]]) <
                 pos(site.contraction, site.ref->indices[perm[a + 1]]);
          }
        }
        if (ok) {
          std::vector<int> dp(n);
          for (int level = 0; level < n; ++level) dp[perm[level]] = level;
          out[t] = dp;
          found = true;
        }
      } while (!found && std::next_permutation(perm.begin(), perm.end()));
      if (!found) return std::nullopt;
    }
    return out;
  }

  std::optional<ScheduleSolution> extend(std::size_t step) {
    if (step == sequence.size()) {
      auto dp = layouts();
      if (!dp) return std::nullopt;
      ScheduleSolution sol;
      sol.bound = l;
      sol.ap = ap;
      sol.dp = std::move(*dp);
      for (std::size_t c = 0; c < loops.size(); ++c) {
        auto& row = sol.lp.emplace_back();
        for (std::size_t s = 0; s < loops[c].size(); ++s) row[loops[c][s]] = static_cast<int>(s);
      }
      return sol;
    }
    const int c = sequence[step];
    auto perm = tree.contraction(c).index_set();
    std::sort(perm.begin(), perm.end());
    do {
      loops[c] = perm;
      if (admissible(step)) {
        if (auto sol = extend(step + 1)) return sol;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    loops[c].clear();
    return std::nullopt;
  }
};

}  // namespace

std::optional<ScheduleSolution> brute_force_witness(const ContractionTree& tree, int l) {
  if (tree.size() > 3) {
    fail(ErrorCode::kTooLarge, "exhaustive search is limited to 3 contractions");
  }
  for (const auto& c : tree.contractions()) {
    if (c.index_set().size() > 5) {
      fail(ErrorCode::kTooLarge, "exhaustive search is limited to 5 indices per contraction");
    }
  }
  for (const auto& order : topological_orders(tree)) {
    BruteForce bf{tree, l, std::vector<int>(tree.size()), {}, order};
    bf.loops.resize(tree.size());
    for (std::size_t p = 0; p < order.size(); ++p) bf.ap[order[p]] = static_cast<int>(p);
    if (auto sol = bf.extend(0)) return sol;
  }
  return std::nullopt;
}

bool brute_force_sat(const ContractionTree& tree, int l) {
  return brute_force_witness(tree, l).has_value();
}

}  // namespace sparsefuse
