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

// Text and JSON renderings of a ScheduleSolution.

#ifndef SPARSEFUSE_REPORT_H_
#define SPARSEFUSE_REPORT_H_

#include <string>
#include <string_view>

#include "sparsefuse/constraints.h"
#include "sparsefuse/network.h"

namespace sparsefuse {

/// Reference to `tensor` with its indices in CSF level order, e.g. "A[p,q,i]".
std::string layout_reference(const ContractionTree& tree, const ScheduleSolution& sol,
                             const std::string& tensor);

std::string solution_report_text(const ContractionTree& tree, const ScheduleSolution& sol);
std::string solution_report_json(const ContractionTree& tree, const ScheduleSolution& sol);

/// Inverse of solution_report_json. Throws ParseError on malformed input.
ScheduleSolution parse_solution_json(const ContractionTree& tree, std::string_view text);

}  // namespace sparsefuse

#endif  // SPARSEFUSE_REPORT_H_
