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

// Command-line front end. Kept in a library so tests can drive it without a
// subprocess.

#ifndef SPARSEFUSE_TOOLS_CLI_CLI_H_
#define SPARSEFUSE_TOOLS_CLI_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace sparsefuse::cli {

enum ExitCode {
  kExitOk = 0,
  kExitUsage = 1,        // usage, parse or validation error
  kExitUnsat = 2,        // no schedule up to the maximum order
  kExitCheckFailed = 3,  // oracle comparison or solution check failed
};

/// `args` excludes the program name, e.g. {"plan", "--network", "net.txt"}.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sparsefuse::cli

#endif  // SPARSEFUSE_TOOLS_CLI_CLI_H_
