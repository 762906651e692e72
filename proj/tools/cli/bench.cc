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

#include "cli/bench.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <unordered_set>

#include "sparsefuse/error.h"

namespace sparsefuse::cli {

namespace {

// Uniform in [-1, 1) from the top 53 bits, independent of the standard
// library's distribution implementations.
double unit_value(std::mt19937_64& rng) {
  return -1.0 + 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<Coord> draw_offsets(Coord volume, Coord count, std::mt19937_64& rng) {
  std::vector<Coord> out;
  if (count * 2 > volume) {
    std::vector<Coord> all(static_cast<std::size_t>(volume));
    for (Coord v = 0; v < volume; ++v) all[v] = v;
    for (Coord k = 0; k < count; ++k) {
      const Coord pick = k + static_cast<Coord>(rng() % static_cast<std::uint64_t>(volume - k));
      std::swap(all[k], all[pick]);
    }
    out.assign(all.begin(), all.begin() + count);
  } else {
    std::unordered_set<Coord> seen;
    while (static_cast<Coord>(out.size()) < count) {
      const Coord v = static_cast<Coord>(rng() % static_cast<std::uint64_t>(volume));
      if (seen.insert(v).second) out.push_back(v);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

SparseTensor generate(const Shape& shape, double density, std::uint64_t seed, bool mask) {
  if (!(density >= 0.0 && density <= 1.0)) {
    fail(ErrorCode::kInvalidArgument, "density must lie in [0, 1]");
  }
  const Coord volume = shape.volume();
  const Coord count = std::min<Coord>(volume, std::llround(density * static_cast<double>(volume)));
  std::mt19937_64 rng(seed);
  std::vector<Entry> entries;
  for (Coord off : draw_offsets(volume, count, rng)) {
    Entry e;
    e.coords.resize(shape.order());
    for (std::size_t k = shape.order(); k-- > 0;) {
      e.coords[k] = off % shape.extent(k);
      off /= shape.extent(k);
    }
    if (mask) {
      e.value = 1.0;
    } else {
      do {
        e.value = unit_value(rng);
      } while (e.value == 0.0);
    }
    entries.push_back(std::move(e));
  }
  return coo_from_entries(std::move(entries), shape);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k) {
  return seed + (k + 1) * 0x9E3779B97F4A7C15ull;
}

struct Kind {
  std::string name;
  std::vector<Coord> extents;
  Coord rank;
  double density;
  // Network text for the given extents and rank.
  std::string (*network)(const std::vector<Coord>&, Coord);
  // Sparse operands take the requested density, the others are dense.
  std::vector<std::string> sparse;
};

std::string extent_lines(const std::vector<std::pair<std::string, Coord>>& items) {
  std::ostringstream os;
  for (const auto& [name, n] : items) os << "extent " << name << ' ' << n << '\n';
  return os.str();
}

std::string ijk(const std::vector<Coord>& e) {
  return extent_lines({{"i", e.at(0)}, {"j", e.at(1)}, {"k", e.at(2)}});
}

const std::vector<Kind>& kinds() {
  static const std::vector<Kind> table = {
      {"mttkrp1", {30, 40, 50}, 8, 0.01,
       [](const std::vector<Coord>& e, Coord r) {
         return ijk(e) + extent_lines({{"r", r}}) +
                "X[i,k,r] = T[i,j,k] * B[j,r]\nAp[i,r] = X[i,k,r] * C[k,r]\n";
       },
       {"T"}},
      {"mttkrp2", {30, 40, 50}, 8, 0.01,
       [](const std::vector<Coord>& e, Coord r) {
         return ijk(e) + extent_lines({{"r", r}}) +
                "X[j,k,r] = T[i,j,k] * A[i,r]\nBp[j,r] = X[j,k,r] * C[k,r]\n";
       },
       {"T"}},
      {"mttkrp3", {30, 40, 50}, 8, 0.01,
       [](const std::vector<Coord>& e, Coord r) {
         return ijk(e) + extent_lines({{"r", r}}) +
                "X[j,k,r] = T[i,j,k] * A[i,r]\nCp[k,r] = X[j,k,r] * B[j,r]\n";
       },
       {"T"}},
      {"ttmc1", {20, 20, 20}, 16, 0.05,
       [](const std::vector<Coord>& e, Coord r) {
         return ijk(e) + extent_lines({{"y", r}, {"z", r}}) +
                "X[i,k,y] = T[i,j,k] * B[j,y]\nAp[i,y,z] = X[i,k,y] * C[k,z]\n";
       },
       {"T"}},
      {"ttmc2", {20, 20, 20}, 16, 0.05,
       [](const std::vector<Coord>& e, Coord r) {
         return ijk(e) + extent_lines({{"x", r}, {"z", r}}) +
                "X[j,k,x] = T[i,j,k] * A[i,x]\nBp[j,x,z] = X[j,k,x] * C[k,z]\n";
       },
       {"T"}},
      {"ttmc3", {20, 20, 20}, 16, 0.05,
       [](const std::vector<Coord>& e, Coord r) {
         return ijk(e) + extent_lines({{"x", r}, {"y", r}}) +
                "X[j,k,x] = T[i,j,k] * A[i,x]\nCp[k,x,y] = X[j,k,x] * B[j,y]\n";
       },
       {"T"}},
      {"running_example", {6}, 0, 0.2,
       [](const std::vector<Coord>& e, Coord) {
         const Coord n = e.at(0);
         return extent_lines(
                    {{"i", n}, {"j", n}, {"k", n}, {"p", n}, {"q", n}, {"r", n}}) +
                "X[i,j,q,r] = A[i,p,q] * B[j,p,r]\n"
                "Y[i,j,k,r] = X[i,j,q,r] * C[k,q,r]\n"
                "R[i,j,k] = Y[i,j,k,r] * D[j,k,r]\n";
       },
       {"A", "B", "C", "D"}},
      {"masked_3term", {8, 10, 6, 12}, 0, 0.3,
       [](const std::vector<Coord>& e, Coord) {
         return extent_lines({{"K", e.at(0)},
                              {"mu", e.at(1)},
                              {"nu", e.at(1)},
                              {"i", e.at(2)},
                              {"mt", e.at(3)}}) +
                "X[K,nu,i] = I[K,mu,nu] * C[mu,i]\n"
                "Xm[K,nu,i] = X[K,nu,i] * L[K,i]\n"
                "E[K,i,mt] = Xm[K,nu,i] * P[nu,mt]\n";
       },
       {"I"}},
  };
  return table;
}

// Operands of masked_3term other than the integral tensor.
constexpr double kMaskedSideDensity = 0.5;

}  // namespace

SparseTensor synthetic_tensor(const Shape& shape, double density, std::uint64_t seed) {
  return generate(shape, density, seed, false);
}

SparseTensor synthetic_mask(const Shape& shape, double density, std::uint64_t seed) {
  return generate(shape, density, seed, true);
}

std::vector<std::string> bench_kinds() {
  std::vector<std::string> out;
  for (const auto& k : kinds()) out.push_back(k.name);
  return out;
}

BenchInstance bench_generate(const std::string& kind, const BenchParams& params) {
  auto it = std::find_if(kinds().begin(), kinds().end(),
                         [&](const Kind& k) { return k.name == kind; });
  if (it == kinds().end()) fail(ErrorCode::kUnknownKind, "unknown benchmark kind '" + kind + "'");
  const Kind& spec = *it;
  const auto extents = params.extents.empty() ? spec.extents : params.extents;
  if (extents.size() != spec.extents.size()) {
    fail(ErrorCode::kInvalidArgument, kind + " takes " + std::to_string(spec.extents.size()) +
                                          " extents");
  }
  const Coord rank = params.rank > 0 ? params.rank : spec.rank;
  const double density = params.density >= 0.0 ? params.density : spec.density;

  BenchInstance out{kind, spec.network(extents, rank),
                    parse_network_text(spec.network(extents, rank)), {}};
  std::uint64_t k = 0;
  for (const auto& id : out.tree.inputs()) {
    const Shape shape = out.tree.tensor_shape(id);
    const std::uint64_t seed = derive_seed(params.seed, k++);
    const bool sparse =
        std::find(spec.sparse.begin(), spec.sparse.end(), id) != spec.sparse.end();
    if (kind == "masked_3term" && id == "L") {
      out.inputs.emplace(id, synthetic_mask(shape, kMaskedSideDensity, seed));
    } else if (sparse) {
      out.inputs.emplace(id, synthetic_tensor(shape, density, seed));
    } else if (kind == "masked_3term") {
      out.inputs.emplace(id, synthetic_tensor(shape, kMaskedSideDensity, seed));
    } else {
      out.inputs.emplace(id, synthetic_tensor(shape, 1.0, seed));
    }
  }
  return out;
}

}  // namespace sparsefuse::cli
