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

#include "sparsefuse/report.h"

#include <sstream>

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

}  // namespace

std::string layout_reference(const ContractionTree& tree, const ScheduleSolution& sol,
                             const std::string& tensor) {
  const auto& ref = *tree.references(tensor).front().ref;
  TensorRef out{tensor, {}};
  const ModeOrder layout = sol.layout(tensor);
  for (int mode : layout.perm()) out.indices.push_back(ref.indices[mode]);
  return out.to_string();
}

std::string solution_report_text(const ContractionTree& tree, const ScheduleSolution& sol) {
  std::ostringstream os;
  os << "bound " << sol.bound << '\n';
  for (int c : sol.sequence()) {
    os << "contraction " << c << " position " << sol.ap[c] << " loops "
       << join(sol.loop_order(c)) << " : " << tree.contraction(c).to_string() << '\n';
  }
  for (const auto& t : tree.layout_constrained()) {
    os << "layout " << t << ' ' << sol.layout(t).to_string() << ' '
       << layout_reference(tree, sol, t) << '\n';
  }
  return os.str();
}

std::string solution_report_json(const ContractionTree& tree, const ScheduleSolution& sol) {
  Json doc;
  doc["bound"] = sol.bound;
  doc["contractions"] = Json::array();
  for (int c : sol.sequence()) {
    doc["contractions"].push_back({{"id", c},
                                   {"statement", tree.contraction(c).to_string()},
                                   {"position", sol.ap[c]},
                                   {"loop_order", sol.loop_order(c)}});
  }
  doc["layouts"] = Json::array();
  for (const auto& t : tree.layout_constrained()) {
    doc["layouts"].push_back({{"tensor", t},
                              {"mode_order", sol.layout(t).perm()},
                              {"reference", layout_reference(tree, sol, t)}});
  }
  return doc.dump(2) + "\n";
}

ScheduleSolution parse_solution_json(const ContractionTree& tree, std::string_view text) {
  ScheduleSolution sol;
  try {
    const Json doc = Json::parse(text);
    sol.bound = doc.at("bound").get<int>();
    sol.ap.assign(tree.size(), -1);
    sol.lp.resize(tree.size());
    for (const auto& item : doc.at("contractions")) {
      const int id = item.at("id").get<int>();
      if (id < 0 || id >= static_cast<int>(tree.size())) {
        fail(ErrorCode::kParseError, "contraction id " + std::to_string(id) + " out of range");
      }
      sol.ap[id] = item.at("position").get<int>();
      const auto loops = item.at("loop_order").get<std::vector<std::string>>();
      for (std::size_t s = 0; s < loops.size(); ++s) sol.lp[id][loops[s]] = static_cast<int>(s);
    }
    for (const auto& item : doc.at("layouts")) {
      const auto perm = item.at("mode_order").get<std::vector<int>>();
      std::vector<int> dp(perm.size(), -1);
      for (std::size_t level = 0; level < perm.size(); ++level) {
        if (perm[level] < 0 || perm[level] >= static_cast<int>(perm.size())) {
          fail(ErrorCode::kParseError, "mode_order entry out of range");
        }
        dp[perm[level]] = static_cast<int>(level);
      }
      sol.dp[item.at("tensor").get<std::string>()] = std::move(dp);
    }
  } catch (const Json::exception& e) {
    fail(ErrorCode::kParseError, std::string("solution JSON: ") + e.what());
  }
  return sol;
}

}  // namespace sparsefuse
