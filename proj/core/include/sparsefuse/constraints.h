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

// Integer constraint model over assignment positions (ap), mode positions
// (dp) and loop positions (lp) for a contraction tree and fusion bound l.
//
// Every constraint other than all-different is stored as a clause: a
// disjunction of atoms over variables. Implications are stored in their
// clausal form, e.g. (dp_a < dp_b) => (lp_c < lp_d) becomes
// dp_a >= dp_b OR lp_c < lp_d.

#ifndef SPARSEFUSE_CONSTRAINTS_H_
#define SPARSEFUSE_CONSTRAINTS_H_

#include <map>
#include <string>
#include <vector>

#include "sparsefuse/network.h"
#include "sparsefuse/tensor.h"

namespace sparsefuse {

enum class VarKind { kAssignPos, kModePos, kLoopPos };

struct Variable {
  VarKind kind;
  int contraction = -1;  // ap, lp
  std::string tensor;    // dp
  int mode = -1;         // dp
  std::string index;     // lp
  int domain = 0;        // values 0..domain-1
  bool summed = false;   // lp of a contraction index

  std::string name() const;  // "ap[0]", "dp[A,2]", "lp[0,i]"
};

struct Atom {
  enum Op {
    kEq,  // var == value
    kNe,  // var != value
    kLt,  // var < other
    kGe,  // var >= other
  };
  Op op;
  int var;
  int other = -1;
  int value = 0;

  std::string to_string(const std::vector<Variable>& vars) const;
};

enum class Family {
  kAssignOrder,
  kModeOrder,
  kLoopOrder,
  kConsistency,
  kProducer,
  kConsumer,
  kBetween,
  kFixedLayout,
};

std::string_view to_string(Family f);

struct Clause {
  Family family;
  std::vector<Atom> atoms;
};

struct AllDifferent {
  Family family;
  std::vector<int> vars;
};

struct ModelOptions {
  /// Pinned CSF layouts for layout-constrained tensors (e.g. the result).
  std::map<std::string, ModeOrder> fixed_layouts;
};

class ConstraintModel {
 public:
  int bound() const { return bound_; }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<AllDifferent>& all_different() const { return all_diff_; }
  const std::vector<Clause>& clauses() const { return clauses_; }
  std::size_t num_contractions() const { return ap_.size(); }

  int ap(int contraction) const { return ap_.at(contraction); }
  int lp(int contraction, const std::string& index) const;
  int dp(const std::string& tensor, int mode) const;
  bool has_lp(int contraction, const std::string& index) const;
  const std::map<std::string, std::vector<int>>& dp_vars() const { return dp_; }
  const std::vector<std::map<std::string, int>>& lp_vars() const { return lp_; }

  /// Human-readable listing of variables and constraints.
  std::string to_string() const;

 private:
  friend ConstraintModel build_model(const ContractionTree&, int, const ModelOptions&);

  int add_var(Variable v);

  int bound_ = 0;
  std::vector<Variable> vars_;
  std::vector<AllDifferent> all_diff_;
  std::vector<Clause> clauses_;
  std::vector<int> ap_;
  std::map<std::string, std::vector<int>> dp_;
  std::vector<std::map<std::string, int>> lp_;
};

ConstraintModel build_model(const ContractionTree& tree, int bound,
                            const ModelOptions& options = {});

/// Values for every ap, dp and lp variable.
struct ScheduleSolution {
  int bound = 0;
  std::vector<int> ap;                          // by contraction id
  std::map<std::string, std::vector<int>> dp;   // tensor -> per mode
  std::vector<std::map<std::string, int>> lp;   // by contraction id

  /// Contraction ids ordered by assignment position.
  std::vector<int> sequence() const;
  /// Indices of contraction `c`, outermost loop first.
  std::vector<std::string> loop_order(int c) const;
  /// CSF layout of a layout-constrained tensor.
  ModeOrder layout(const std::string& tensor) const;

  bool operator==(const ScheduleSolution&) const = default;
};

/// Reads a solution out of a full variable assignment of `model`.
ScheduleSolution solution_from_values(const ConstraintModel& model,
                                      const std::vector<int>& values);

/// True when `values` satisfy every constraint of `model`.
bool satisfies(const ConstraintModel& model, const std::vector<int>& values);

}  // namespace sparsefuse

#endif  // SPARSEFUSE_CONSTRAINTS_H_
