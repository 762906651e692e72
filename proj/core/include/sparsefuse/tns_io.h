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

// FROSTT `.tns` text format: one nonzero per line, 1-based coordinates
// followed by the value, '#' starting a comment line.
//
// The writer emits a leading "# shape N0 N1 ..." comment. Other FROSTT readers
// ignore it; `read_tns` uses it as the shape when no override is given, so
// tensors with trailing empty slices survive a round trip.

#ifndef SPARSEFUSE_TNS_IO_H_
#define SPARSEFUSE_TNS_IO_H_

#include <iosfwd>
#include <optional>
#include <string>

#include "sparsefuse/tensor.h"

namespace sparsefuse {

SparseTensor read_tns(std::istream& in,
                      const std::optional<Shape>& shape_override = std::nullopt);
SparseTensor read_tns_file(const std::string& path,
                           const std::optional<Shape>& shape_override = std::nullopt);

void write_tns(std::ostream& out, const SparseTensor& t);
void write_tns_file(const std::string& path, const SparseTensor& t);

}  // namespace sparsefuse

#endif  // SPARSEFUSE_TNS_IO_H_
