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

#include "sparsefuse/network.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "sparsefuse/error.h"

namespace sparsefuse {

namespace {

using Json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (k) out += sep;
    out += items[k];
  }
  return out;
}

Contraction parse_statement(std::string_view line) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) {
    fail(ErrorCode::kParseError, "expected '=' in '" + std::string(line) + "'");
  }
  const std::string_view rhs = line.substr(eq + 1);
  const auto star = rhs.find('*');
  if (star == std::string_view::npos) {
    fail(ErrorCode::kParseError, "expected '*' in '" + std::string(line) + "'");
  }
  Contraction c;
  c.result = parse_tensor_ref(line.substr(0, eq));
  c.lhs = parse_tensor_ref(rhs.substr(0, star));
  c.rhs = parse_tensor_ref(rhs.substr(star + 1));
  return c;
}

void set_extent(std::map<std::string, Coord>& extents, const std::string& index,
                Coord extent) {
  if (extent < 1) {
    fail(ErrorCode::kInvalidArgument,
         "extent of index " + index + " must be positive");
  }
  auto [it, inserted] = extents.emplace(index, extent);
  if (!inserted && it->second != extent) {
    fail(ErrorCode::kExtentMismatch,
         "index " + index + " has extent " + std::to_string(it->second) +
             " and " + std::to_string(extent));
  }
}

}  // namespace

std::string TensorRef::to_string() const {
  return tensor + "[" + join(indices, ",") + "]";
}

std::vector<std::string> Contraction::index_set() const {
  std::vector<std::string> out;
  for (const TensorRef* ref : {&result, &lhs, &rhs}) {
    for (const auto& idx : ref->indices) {
      if (std::find(out.begin(), out.end(), idx) == out.end()) out.push_back(idx);
    }
  }
  return out;
}

std::string Contraction::to_string() const {
  return result.to_string() + " = " + lhs.to_string() + " * " + rhs.to_string();
}

IndexClasses classify_indices(const Contraction& c) {
  IndexClasses out;
  for (const auto& idx : c.index_set()) {
    const bool in_result = std::find(c.result.indices.begin(),
                                     c.result.indices.end(),
                                     idx) != c.result.indices.end();
    (in_result ? out.external : out.contraction).insert(idx);
  }
  return out;
}

TensorRef parse_tensor_ref(std::string_view text) {
  text = trim(text);
  const auto open = text.find('[');
  if (open == std::string_view::npos || text.back() != ']') {
    fail(ErrorCode::kParseError, "malformed tensor reference '" + std::string(text) + "'");
  }
  TensorRef ref;
  ref.tensor = std::string(trim(text.substr(0, open)));
  if (!is_identifier(ref.tensor)) {
    fail(ErrorCode::kParseError, "malformed tensor name in '" + std::string(text) + "'");
  }
  std::string_view body = trim(text.substr(open + 1, text.size() - open - 2));
  if (body.empty()) return ref;
  while (true) {
    const auto comma = body.find(',');
    const std::string_view item = trim(body.substr(0, comma));
    if (!is_identifier(item)) {
      fail(ErrorCode::kParseError, "malformed index in '" + std::string(text) + "'");
    }
    ref.indices.emplace_back(item);
    if (comma == std::string_view::npos) break;
    body = body.substr(comma + 1);
  }
  return ref;
}

ContractionTree ContractionTree::build(std::vector<Contraction> contractions,
                                       std::map<std::string, Coord> extents,
                                       std::map<std::string, Shape> shapes) {
  if (contractions.empty()) {
    fail(ErrorCode::kInvalidArgument, "network has no contractions");
  }
  ContractionTree tree;
  const int m = static_cast<int>(contractions.size());
  for (int id = 0; id < m; ++id) contractions[id].id = id;

  for (const auto& c : contractions) {
    for (const TensorRef* ref : {&c.result, &c.lhs, &c.rhs}) {
      std::set<std::string> seen;
      for (const auto& idx : ref->indices) {
        if (!seen.insert(idx).second) {
          fail(ErrorCode::kDuplicateIndexInRef,
               "index " + idx + " repeated in " + ref->to_string());
        }
      }
    }
  }

  // Extents declared through tensor shapes.
  for (const auto& c : contractions) {
    for (const TensorRef* ref : {&c.result, &c.lhs, &c.rhs}) {
      auto it = shapes.find(ref->tensor);
      if (it == shapes.end()) continue;
      if (it->second.order() != ref->indices.size()) {
        fail(ErrorCode::kRankMismatch, ref->to_string() + " does not match shape " +
                                           it->second.to_string());
      }
      for (std::size_t k = 0; k < ref->indices.size(); ++k) {
        set_extent(extents, ref->indices[k], it->second.extent(k));
      }
    }
  }
  for (const auto& c : contractions) {
    for (const auto& idx : c.index_set()) {
      if (!extents.count(idx)) {
        fail(ErrorCode::kMissingExtent, "no extent declared for index " + idx);
      }
    }
  }
  // Only indices that the network uses are kept.
  std::map<std::string, Coord> used;
  for (const auto& c : contractions) {
    for (const auto& idx : c.index_set()) used[idx] = extents.at(idx);
  }

  for (const auto& c : contractions) {
    for (const auto& idx : c.result.indices) {
      const auto& l = c.lhs.indices;
      const auto& r = c.rhs.indices;
      if (std::find(l.begin(), l.end(), idx) == l.end() &&
          std::find(r.begin(), r.end(), idx) == r.end()) {
        fail(ErrorCode::kFreeOutputIndex, "result index " + idx + " of " +
                                              c.to_string() +
                                              " appears in neither operand");
      }
    }
  }

  // Producer/consumer structure.
  for (const auto& c : contractions) {
    if (!tree.producer_.emplace(c.result.tensor, c.id).second) {
      fail(ErrorCode::kNotATree, "tensor " + c.result.tensor + " is produced twice");
    }
  }
  tree.parent_.assign(m, -1);
  tree.children_.assign(m, {});
  for (const auto& c : contractions) {
    for (const TensorRef* ref : {&c.lhs, &c.rhs}) {
      auto it = tree.producer_.find(ref->tensor);
      if (it == tree.producer_.end()) {
        if (std::find(tree.inputs_.begin(), tree.inputs_.end(), ref->tensor) ==
            tree.inputs_.end()) {
          tree.inputs_.push_back(ref->tensor);
        }
        continue;
      }
      const int child = it->second;
      if (child == c.id) {
        fail(ErrorCode::kNotATree, c.to_string() + " consumes its own result");
      }
      if (!tree.consumer_.emplace(ref->tensor, c.id).second) {
        fail(ErrorCode::kNotATree, "intermediate " + ref->tensor +
                                       " is consumed more than once");
      }
      tree.parent_[child] = c.id;
      tree.children_[c.id].push_back(child);
      const TensorRef& produced = contractions[child].result;
      if (produced.indices != ref->indices) {
        fail(ErrorCode::kRefMismatch, "intermediate referenced as " +
                                          ref->to_string() + " but produced as " +
                                          produced.to_string());
      }
    }
  }
  for (int id = 0; id < m; ++id) {
    if (tree.parent_[id] == -1) {
      if (tree.root_ != -1) {
        fail(ErrorCode::kNotATree, "results " + contractions[tree.root_].result.tensor +
                                       " and " + contractions[id].result.tensor +
                                       " are both unconsumed");
      }
      tree.root_ = id;
    }
  }
  if (tree.root_ == -1) fail(ErrorCode::kNotATree, "no root contraction (cycle)");
  for (int id = 0; id < m; ++id) {
    int node = id;
    for (int steps = 0; node != tree.root_; ++steps) {
      if (steps > m) fail(ErrorCode::kNotATree, "cycle through " + contractions[id].to_string());
      node = tree.parent_[node];
    }
  }
  for (int id = 0; id < m; ++id) {
    if (id != tree.root_) {
      tree.intermediates_.push_back(contractions[id].result.tensor);
      if (contractions[id].result.indices.empty()) {
        fail(ErrorCode::kScalarIntermediate,
             "intermediate " + contractions[id].result.tensor + " has order 0");
      }
    }
  }

  tree.contractions_ = std::move(contractions);
  tree.extents_ = std::move(used);

  // Repeated references to one input must agree on order and mode extents.
  for (const auto& input : tree.inputs_) {
    const auto sites = tree.references(input);
    const TensorRef& first = *sites.front().ref;
    for (const auto& site : sites) {
      if (site.ref->indices.size() != first.indices.size()) {
        fail(ErrorCode::kRankMismatch, site.ref->to_string() + " and " +
                                           first.to_string() + " disagree on order");
      }
      for (std::size_t k = 0; k < first.indices.size(); ++k) {
        if (tree.extent(site.ref->indices[k]) != tree.extent(first.indices[k])) {
          fail(ErrorCode::kExtentMismatch,
               "index " + site.ref->indices[k] + " of " + site.ref->to_string() +
                   " disagrees with " + first.to_string() + " on mode " +
                   std::to_string(k));
        }
      }
    }
  }

  // A summed index belongs to the subtree that sums it.
  for (const auto& c : tree.contractions_) {
    for (const auto& idx : classify_indices(c).contraction) {
      for (const auto& other : tree.contractions_) {
        if (tree.in_subtree(other.id, c.id)) continue;
        const auto all = other.index_set();
        if (std::find(all.begin(), all.end(), idx) != all.end()) {
          fail(ErrorCode::kIndexScope,
               "index " + idx + " is summed by " + c.to_string() +
                   " but reused in " + other.to_string());
        }
      }
    }
  }
  return tree;
}

bool ContractionTree::in_subtree(int node, int ancestor) const {
  for (int n = node; n != -1; n = parent_[n]) {
    if (n == ancestor) return true;
  }
  return false;
}

Coord ContractionTree::extent(const std::string& index) const {
  auto it = extents_.find(index);
  if (it == extents_.end()) fail(ErrorCode::kMissingExtent, "unknown index " + index);
  return it->second;
}

bool ContractionTree::has_tensor(const std::string& tensor) const {
  return producer_.count(tensor) ||
         std::find(inputs_.begin(), inputs_.end(), tensor) != inputs_.end();
}

TensorRole ContractionTree::role(const std::string& tensor) const {
  if (!has_tensor(tensor)) fail(ErrorCode::kUnknownTensor, "unknown tensor " + tensor);
  if (!producer_.count(tensor)) return TensorRole::kInput;
  return consumer_.count(tensor) ? TensorRole::kIntermediate : TensorRole::kResult;
}

int ContractionTree::producer(const std::string& tensor) const {
  auto it = producer_.find(tensor);
  return it == producer_.end() ? -1 : it->second;
}

int ContractionTree::consumer(const std::string& tensor) const {
  auto it = consumer_.find(tensor);
  return it == consumer_.end() ? -1 : it->second;
}

std::vector<RefSite> ContractionTree::references(const std::string& tensor) const {
  std::vector<RefSite> out;
  for (const auto& c : contractions_) {
    for (const TensorRef* ref : {&c.result, &c.lhs, &c.rhs}) {
      if (ref->tensor == tensor) out.push_back({c.id, ref});
    }
  }
  return out;
}

std::size_t ContractionTree::tensor_order(const std::string& tensor) const {
  const auto sites = references(tensor);
  if (sites.empty()) fail(ErrorCode::kUnknownTensor, "unknown tensor " + tensor);
  return sites.front().ref->indices.size();
}

Shape ContractionTree::tensor_shape(const std::string& tensor) const {
  const auto sites = references(tensor);
  if (sites.empty()) fail(ErrorCode::kUnknownTensor, "unknown tensor " + tensor);
  std::vector<Coord> extents;
  for (const auto& idx : sites.front().ref->indices) extents.push_back(extent(idx));
  return Shape(std::move(extents));
}

std::vector<std::string> ContractionTree::layout_constrained() const {
  std::vector<std::string> out = inputs_;
  out.push_back(result_tensor());
  return out;
}

std::size_t ContractionTree::max_intermediate_order() const {
  std::size_t n = 0;
  for (const auto& t : intermediates_) n = std::max(n, tensor_order(t));
  return n;
}

ContractionTree parse_network_text(std::string_view text) {
  std::vector<Contraction> contractions;
  std::map<std::string, Coord> extents;
  std::map<std::string, Shape> shapes;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    auto located = [&](const Error& e) {
      return Error(e.code(), "line " + std::to_string(line_no) + ": " + e.message());
    };
    try {
      std::istringstream words{std::string(line)};
      std::string head;
      words >> head;
      if (head == "extent" || head == "shape") {
        std::string name;
        words >> name;
        if (!is_identifier(name)) fail(ErrorCode::kParseError, "expected a name after " + head);
        std::vector<Coord> values;
        std::string word;
        while (words >> word) {
          Coord v = 0;
          auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
          if (ec != std::errc() || ptr != word.data() + word.size()) {
            fail(ErrorCode::kParseError, "malformed number '" + word + "'");
          }
          values.push_back(v);
        }
        if (head == "extent") {
          if (values.size() != 1) fail(ErrorCode::kParseError, "extent takes one value");
          set_extent(extents, name, values[0]);
        } else {
          Shape shape(std::move(values));
          auto [it, inserted] = shapes.emplace(name, shape);
          if (!inserted && !(it->second == shape)) {
            fail(ErrorCode::kRankMismatch, "conflicting shapes for " + name);
          }
        }
      } else {
        contractions.push_back(parse_statement(line));
      }
    } catch (const Error& e) {
      throw located(e);
    }
  }
  return ContractionTree::build(std::move(contractions), std::move(extents),
                                std::move(shapes));
}

ContractionTree parse_network_json(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    fail(ErrorCode::kParseError, std::string("invalid JSON: ") + e.what());
  }
  std::vector<Contraction> contractions;
  std::map<std::string, Coord> extents;
  std::map<std::string, Shape> shapes;
  try {
    if (doc.contains("extents")) {
      for (const auto& [name, value] : doc.at("extents").items()) {
        set_extent(extents, name, value.get<Coord>());
      }
    }
    if (doc.contains("shapes")) {
      for (const auto& [name, value] : doc.at("shapes").items()) {
        shapes.emplace(name, Shape(value.get<std::vector<Coord>>()));
      }
    }
    for (const auto& item : doc.at("contractions")) {
      Contraction c;
      c.result = parse_tensor_ref(item.at("out").get<std::string>());
      c.lhs = parse_tensor_ref(item.at("lhs").get<std::string>());
      c.rhs = parse_tensor_ref(item.at("rhs").get<std::string>());
      contractions.push_back(std::move(c));
    }
  } catch (const Json::exception& e) {
    fail(ErrorCode::kParseError, std::string("network JSON: ") + e.what());
  }
  return ContractionTree::build(std::move(contractions), std::move(extents),
                                std::move(shapes));
}

ContractionTree parse_network(std::string_view text) {
  const std::string_view body = trim(text);
  if (!body.empty() && body.front() == '{') return parse_network_json(body);
  return parse_network_text(text);
}

ContractionTree load_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kInvalidArgument, "cannot open network file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_network(buf.str());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.message());
  }
}

std::string to_network_text(const ContractionTree& tree) {
  std::ostringstream os;
  for (const auto& [name, extent] : tree.extents()) {
    os << "extent " << name << ' ' << extent << '\n';
  }
  for (const auto& c : tree.contractions()) os << c.to_string() << '\n';
  return os.str();
}

std::string to_network_json(const ContractionTree& tree) {
  Json doc;
  doc["extents"] = Json::object();
  for (const auto& [name, extent] : tree.extents()) doc["extents"][name] = extent;
  doc["contractions"] = Json::array();
  for (const auto& c : tree.contractions()) {
    doc["contractions"].push_back({{"out", c.result.to_string()},
                                   {"lhs", c.lhs.to_string()},
                                   {"rhs", c.rhs.to_string()}});
  }
  return doc.dump(2) + "\n";
}

std::vector<std::vector<int>> topological_orders(const ContractionTree& tree) {
  const int m = static_cast<int>(tree.size());
  if (m > 8) {
    fail(ErrorCode::kTooLarge, "topological enumeration is limited to 8 contractions, got " +
                                   std::to_string(m));
  }
  std::vector<std::vector<int>> out;
  std::vector<int> order;
  std::vector<char> placed(m, 0);
  std::function<void()> extend = [&] {
    if (static_cast<int>(order.size()) == m) {
      out.push_back(order);
      return;
    }
    for (int id = 0; id < m; ++id) {
      if (placed[id]) continue;
      const auto& kids = tree.children(id);
      if (!std::all_of(kids.begin(), kids.end(), [&](int k) { return placed[k]; })) continue;
      placed[id] = 1;
      order.push_back(id);
      extend();
      order.pop_back();
      placed[id] = 0;
    }
  };
  extend();
  return out;
}

}  // namespace sparsefuse
