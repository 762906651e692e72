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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cli/cli.h"
#include "sparsefuse/network.h"
#include "sparsefuse/tns_io.h"
#include "support/fixtures.h"

namespace sparsefuse::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sparsefuse_cli_" + std::string(::testing::UnitTest::GetInstance()
                                                ->current_test_info()
                                                ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::vector<std::string> synthetic_running_example() {
    return {"--synthetic", "A=6x6x6:0.2:7", "--synthetic", "B=6x6x6:0.2:8",
            "--synthetic", "C=6x6x6:0.2:9", "--synthetic", "D=6x6x6:0.2:10"};
  }

  fs::path dir_;
};

TEST_F(CliTest, PlanRunningExample) {
  const std::string net = testing::data_path("running_example.txt");
  const Outcome o = cli({"plan", "--network", net});
  EXPECT_EQ(o.code, kExitOk) << o.err;
  EXPECT_NE(o.out.find("bound "), std::string::npos);
  EXPECT_NE(o.out.find("forall("), std::string::npos);

  const Outcome two = cli({"plan", "--network", net, "--order", "2"});
  EXPECT_EQ(two.code, kExitOk) << two.err;
  EXPECT_NE(two.out.find("forall(r, forall(j, where(forall(k, forall(i, "
                         "R(j,k,i) = Y(k,i) * D(r,j,k)))"),
            std::string::npos)
      << two.out;
}

TEST_F(CliTest, PlanIsDeterministic) {
  const std::string net = testing::data_path("running_example.txt");
  for (const char* seed : {"0", "17"}) {
    const Outcome a = cli({"plan", "--network", net, "--seed", seed, "--json"});
    const Outcome b = cli({"plan", "--network", net, "--seed", seed, "--json"});
    EXPECT_EQ(a.code, kExitOk);
    EXPECT_EQ(a.out, b.out);
  }
}

TEST_F(CliTest, PlanSingleContractionIsAPureLoopNest) {
  const std::string net = write("mm.txt", "extent i 3\nextent j 3\nextent k 3\n"
                                          "R[i,j] = T[i,k] * S[k,j]\n");
  const Outcome o = cli({"plan", "--network", net});
  EXPECT_EQ(o.code, kExitOk);
  EXPECT_NE(o.out.find("bound 1"), std::string::npos);
  EXPECT_EQ(o.out.find("where("), std::string::npos);
}

TEST_F(CliTest, PlanWritesSolutionAndIrFiles) {
  const std::string net = testing::data_path("running_example.txt");
  const Outcome o = cli({"plan", "--network", net, "--output", path("sol.json"), "--emit-ir",
                         path("ir.txt")});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_TRUE(fs::exists(path("sol.json")));
  std::ifstream ir(path("ir.txt"));
  std::string line;
  std::getline(ir, line);
  EXPECT_EQ(line.rfind("forall(", 0), 0u);
  const Outcome v = cli({"verify", "--network", net, "--solution", path("sol.json")});
  EXPECT_EQ(v.code, kExitOk) << v.out << v.err;
}

TEST_F(CliTest, ExtentMismatchExitsWithDiagnostic) {
  const std::string net =
      write("bad.txt", "extent i 3\nextent j 3\nshape T 3 4\nshape S 5 3\n"
                       "R[i,j] = T[i,k] * S[k,j]\n");
  const Outcome o = cli({"plan", "--network", net});
  EXPECT_EQ(o.code, kExitUsage);
  EXPECT_NE(o.err.find("index k"), std::string::npos) << o.err;
}

TEST_F(CliTest, UnsatisfiableLayoutsExitTwo) {
  const std::string net = write("mm.txt", "extent i 3\nextent j 3\nextent k 3\n"
                                          "R[i,j] = T[i,k] * S[k,j]\n");
  // T wants i before k, S wants k before j, R wants j before i.
  const Outcome o = cli({"plan", "--network", net, "--layout", "T=0,1", "--layout", "S=0,1",
                         "--layout", "R=1,0"});
  EXPECT_EQ(o.code, kExitUnsat) << o.out << o.err;
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"plan"}).code, kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(cli({"plan", "--network", path("absent.txt")}).code, kExitUsage);
  EXPECT_EQ(cli({"bench", "--kind", "nonsense"}).code, kExitUsage);
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
}

TEST_F(CliTest, RunWithCheckPasses) {
  std::vector<std::string> args = {"run", "--network", testing::data_path("running_example.txt"),
                                   "--check", "--stats", path("stats.json"), "--output",
                                   path("r.tns")};
  const auto syn = synthetic_running_example();
  args.insert(args.end(), syn.begin(), syn.end());
  // Extents in the file are 4; the synthetic tensors must match them.
  for (auto& a : args) {
    if (a.find("6x6x6") != std::string::npos) a.replace(a.find("6x6x6"), 5, "4x4x4");
  }
  const Outcome o = cli(args);
  EXPECT_EQ(o.code, kExitOk) << o.out << o.err;
  EXPECT_NE(o.out.find("check (n-ary oracle) pass"), std::string::npos) << o.out;
  EXPECT_TRUE(fs::exists(path("stats.json")));
  EXPECT_EQ(read_tns_file(path("r.tns")).order(), 3u);
}

TEST_F(CliTest, RunReadsTensorFiles) {
  const std::string net = write("mm.txt", "extent i 2\nextent j 2\nextent k 2\n"
                                          "R[i,j] = T[i,k] * S[k,j]\n");
  const std::string t = write("T.tns", "1 1 2.0\n2 2 3.0\n");
  const std::string s = write("S.tns", "1 2 5.0\n2 1 7.0\n");
  const Outcome o = cli({"run", "--network", net, "--tensor", "T=" + t, "--tensor", "S=" + s,
                         "--check", "--output", path("R.tns")});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_EQ(read_tns_file(path("R.tns")).entries(),
            (std::vector<Entry>{{{0, 1}, 10.0}, {{1, 0}, 21.0}}));
}

TEST_F(CliTest, RunMissingTensorFile) {
  const std::string net = write("mm.txt", "extent i 2\nextent j 2\nextent k 2\n"
                                          "R[i,j] = T[i,k] * S[k,j]\n");
  const Outcome o = cli({"run", "--network", net, "--tensor", "T=" + path("nope.tns"),
                         "--synthetic", "S=2x2:1:1"});
  EXPECT_EQ(o.code, kExitUsage);
  EXPECT_FALSE(o.err.empty());
}

TEST_F(CliTest, RunRejectsDuplicateAndMissingSources) {
  const std::string net = write("mm.txt", "extent i 2\nextent j 2\nextent k 2\n"
                                          "R[i,j] = T[i,k] * S[k,j]\n");
  const std::string t = write("T.tns", "1 1 2.0\n");
  EXPECT_EQ(cli({"run", "--network", net, "--tensor", "T=" + t, "--synthetic", "T=2x2:1:1",
                 "--synthetic", "S=2x2:1:1"})
                .code,
            kExitUsage);
  EXPECT_EQ(cli({"run", "--network", net, "--tensor", "T=" + t}).code, kExitUsage);
  EXPECT_EQ(cli({"run", "--network", net, "--tensor", "T=" + t, "--synthetic", "S=2x2:1"}).code,
            kExitUsage);
}

TEST_F(CliTest, FailedCheckExitsThree) {
  const Outcome o = cli({"bench", "--kind", "mttkrp1", "--extents", "6x7x8", "--rank", "2",
                         "--check", "--rel-tol=0", "--abs-tol=-1"});
  EXPECT_EQ(o.code, kExitCheckFailed) << o.out << o.err;
  EXPECT_EQ(o.out.find(" pass:"), std::string::npos) << o.out;
}

TEST_F(CliTest, BenchKindsPassCheck) {
  const std::vector<std::vector<std::string>> cases = {
      {"mttkrp1", "6x7x8"}, {"mttkrp2", "6x7x8"}, {"mttkrp3", "6x7x8"},
      {"ttmc1", "5x6x7"},   {"ttmc2", "5x6x7"},   {"ttmc3", "5x6x7"},
      {"running_example", "4"}, {"masked_3term", "3x4x5x6"},
  };
  for (const auto& c : cases) {
    const Outcome o = cli({"bench", "--kind", c[0], "--extents", c[1], "--rank", "3", "--check"});
    EXPECT_EQ(o.code, kExitOk) << c[0] << o.out << o.err;
  }
}

TEST_F(CliTest, BenchWritesInstance) {
  const Outcome o = cli({"bench", "--kind", "mttkrp2", "--extents", "5x6x7", "--rank", "2",
                         "--out-dir", path("inst")});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const ContractionTree t = load_network_file(path("inst/network.txt"));
  EXPECT_EQ(t.size(), 2u);
  EXPECT_EQ(read_tns_file(path("inst/T.tns")).shape(), Shape({5, 6, 7}));
}

TEST_F(CliTest, VerifyRejectsBrokenSolution) {
  const std::string net = testing::data_path("running_example.txt");
  ASSERT_EQ(cli({"plan", "--network", net, "--order", "2", "--output", path("s.json")}).code,
            kExitOk);
  std::ifstream in(path("s.json"));
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  // Reverse contraction 0's loop order.
  const auto at = text.find("\"loop_order\"");
  ASSERT_NE(at, std::string::npos);
  const auto open = text.find('[', at);
  const auto close = text.find(']', open);
  std::string loops = text.substr(open + 1, close - open - 1);
  std::vector<std::string> names;
  std::stringstream ss(loops);
  for (std::string item; std::getline(ss, item, ',');) names.push_back(item);
  std::string reversed;
  for (auto it = names.rbegin(); it != names.rend(); ++it) {
    reversed += (reversed.empty() ? "" : ",") + *it;
  }
  text.replace(open + 1, close - open - 1, reversed);
  const std::string broken = write("broken.json", text);
  const Outcome v = cli({"verify", "--network", net, "--solution", broken});
  EXPECT_EQ(v.code, kExitCheckFailed) << v.out << v.err;
}

TEST_F(CliTest, VerifyCrossChecksBounds) {
  const Outcome v = cli({"verify", "--network", testing::data_path("running_example.txt")});
  EXPECT_EQ(v.code, kExitOk) << v.out << v.err;
  EXPECT_NE(v.out.find("bound 2: solver sat, checker pass, exhaustive sat"), std::string::npos)
      << v.out;
}

}  // namespace
}  // namespace sparsefuse::cli
