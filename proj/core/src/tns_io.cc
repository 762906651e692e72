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

#include "sparsefuse/tns_io.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

#include "sparsefuse/error.h"

namespace sparsefuse {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t k = 0;
  while (k < line.size()) {
    while (k < line.size() && (line[k] == ' ' || line[k] == '\t' ||
                               line[k] == '\r')) {
      ++k;
    }
    const std::size_t start = k;
    while (k < line.size() && line[k] != ' ' && line[k] != '\t' &&
           line[k] != '\r') {
      ++k;
    }
    if (k > start) fields.push_back(line.substr(start, k - start));
  }
  return fields;
}

template <typename T>
bool parse_number(std::string_view field, T& out) {
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if constexpr (std::is_floating_point_v<T>) {
    if (first != last && *first == '+') ++first;
  }
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

[[noreturn]] void parse_error(std::size_t line_no, const std::string& why) {
  fail(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": " + why);
}

}  // namespace

SparseTensor read_tns(std::istream& in, const std::optional<Shape>& shape_override) {
  std::vector<Entry> raw;
  std::optional<std::size_t> order;
  std::optional<Shape> header_shape;
  std::vector<Coord> max_coord;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    const auto fields = split_fields(view);
    if (fields.empty()) continue;
    if (fields[0].front() == '#') {
      if (fields[0] == "#" && fields.size() >= 2 && fields[1] == "shape" &&
          !header_shape) {
        std::vector<Coord> extents;
        for (std::size_t k = 2; k < fields.size(); ++k) {
          Coord e = 0;
          if (!parse_number(fields[k], e) || e < 1) {
            parse_error(line_no, "malformed shape header");
          }
          extents.push_back(e);
        }
        header_shape = Shape(std::move(extents));
      }
      continue;
    }
    const std::size_t arity = fields.size() - 1;
    if (!order) {
      order = arity;
      max_coord.assign(arity, 0);
    } else if (*order != arity) {
      fail(ErrorCode::kRankMismatch,
           "line " + std::to_string(line_no) + ": expected " +
               std::to_string(*order) + " coordinates, found " +
               std::to_string(arity));
    }
    Entry e;
    e.coords.resize(arity);
    for (std::size_t k = 0; k < arity; ++k) {
      Coord c = 0;
      if (!parse_number(fields[k], c)) {
        parse_error(line_no, "malformed coordinate '" + std::string(fields[k]) + "'");
      }
      if (c < 1) parse_error(line_no, "coordinates are 1-based");
      e.coords[k] = c - 1;
      max_coord[k] = std::max(max_coord[k], c);
    }
    if (!parse_number(fields[arity], e.value)) {
      parse_error(line_no, "malformed value '" + std::string(fields[arity]) + "'");
    }
    raw.push_back(std::move(e));
  }

  Shape shape;
  if (shape_override) {
    shape = *shape_override;
  } else if (header_shape) {
    shape = *header_shape;
  } else {
    shape = Shape(order ? max_coord : std::vector<Coord>{});
  }
  if (order && *order != shape.order()) {
    fail(ErrorCode::kRankMismatch, "data has order " + std::to_string(*order) +
                                       " but shape is " + shape.to_string());
  }
  return coo_from_entries(std::move(raw), shape);
}

SparseTensor read_tns_file(const std::string& path,
                           const std::optional<Shape>& shape_override) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kInvalidArgument, "cannot open tensor file '" + path + "'");
  try {
    return read_tns(in, shape_override);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.message());
  }
}

void write_tns(std::ostream& out, const SparseTensor& t) {
  out << "# shape";
  for (Coord e : t.shape().extents()) out << ' ' << e;
  out << '\n';
  char buf[64];
  for (std::size_t n = 0; n < t.nnz(); ++n) {
    for (Coord c : t.coords(n)) out << (c + 1) << ' ';
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), t.value(n));
    out << std::string_view(buf, static_cast<std::size_t>(ptr - buf)) << '\n';
  }
}

void write_tns_file(const std::string& path, const SparseTensor& t) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kInvalidArgument, "cannot write tensor file '" + path + "'");
  write_tns(out, t);
}

}  // namespace sparsefuse
