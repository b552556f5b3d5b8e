// Copyright 2026 The mscc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Runs the mscc binary end to end.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void WriteFile(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("mscc_cli_") + info->name() + "_" +
            std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result Run(const std::string& args, const std::string& env = "") {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = env + " '" + std::string(MSCC_CLI_PATH) + "' " +
                            args + " >'" + out.string() + "' 2>'" +
                            err.string() + "'";
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = ReadFile(out);
    r.err = ReadFile(err);
    return r;
  }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, SimulateEvenTBaseline) {
  const Result r =
      Run("simulate --K 8 --lambda 1/2 --scheme lap --demand worst");
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["R"], "2/5");
  EXPECT_DOUBLE_EQ(j["R_float"].get<double>(), 0.4);
  EXPECT_EQ(j["verified"], true);
  EXPECT_EQ(j["t"], 4);
}

TEST_F(CliTest, DecimalLambdaIsExact) {
  const Result decimal = Run("simulate --K 8 --lambda 0.5 --scheme lap");
  const Result fraction = Run("simulate --K 8 --lambda 1/2 --scheme lap");
  ASSERT_EQ(decimal.code, 0) << decimal.err;
  EXPECT_EQ(decimal.out, fraction.out);
  EXPECT_EQ(Run("simulate --K 8 --lambda 0.33").code, 2);
}

TEST_F(CliTest, SimulateSingleServer) {
  const Result r = Run("simulate --K 6 --lambda 1/2 --scheme mn");
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["R"], "3/4");
  EXPECT_DOUBLE_EQ(j["R_float"].get<double>(), 0.75);
}

TEST_F(CliTest, SimulateImprovedWithMAndN) {
  const Result r = Run("simulate --K 14 --M 7 --N 14 --scheme improved --jobs 2");
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["regime"], 2);
  EXPECT_EQ(j["unpaired"], 595);
  EXPECT_EQ(j["delta_measured"], j["delta_formula"]);
  EXPECT_EQ(j["verified"], true);
}

TEST_F(CliTest, InvalidSpecsExitTwo) {
  Result r = Run("simulate --K 8 --lambda 1/3");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("not an integer"), std::string::npos) << r.err;
  EXPECT_EQ(Run("simulate --K 8 --lambda 1/2 --demand random").code, 2);
  EXPECT_EQ(Run("simulate --K 8 --lambda 1/2 --seed 3").code, 2);
  EXPECT_EQ(Run("simulate --K 8 --lambda 1/2 --M 4 --N 8").code, 2);
  EXPECT_EQ(Run("simulate --K 8 --lambda 1/2 --scheme fancy").code, 2);
  EXPECT_EQ(Run("simulate --K 7 --lambda 3/7").code, 2);
  EXPECT_EQ(Run("simulate --lambda 1/2").code, 2);
  EXPECT_EQ(Run("simulate --K 8 --lambda 5e-1").code, 2);
  EXPECT_EQ(Run("bogus").code, 2);
}

TEST_F(CliTest, SeededRunsAreByteIdentical) {
  const std::string args =
      "simulate --K 10 --M 6 --N 20 --scheme auto --demand random --seed 11";
  ASSERT_EQ(Run(args + " --out '" + Path("a.json") + "' --plan-out '" +
                Path("a.plan") + "' --jobs 1")
                .code,
            0);
  ASSERT_EQ(Run(args + " --out '" + Path("b.json") + "' --plan-out '" +
                Path("b.plan") + "' --jobs 4")
                .code,
            0);
  EXPECT_EQ(ReadFile(Path("a.json")), ReadFile(Path("b.json")));
  EXPECT_EQ(ReadFile(Path("a.plan")), ReadFile(Path("b.plan")));
  EXPECT_FALSE(ReadFile(Path("a.plan")).empty());
}

TEST_F(CliTest, DemandFile) {
  WriteFile(Path("d.json"), R"({"demand":[["A",2],["A",2],["A",1],["B",3],["B",1],["B",1]]})");
  const Result r = Run("simulate --K 6 --M 3 --N 6 --scheme lap --demand file "
                       "--demand-file '" + Path("d.json") + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["verified"], true);
  WriteFile(Path("bad.json"), R"([["A",9]])");
  EXPECT_EQ(Run("simulate --K 6 --M 3 --N 6 --demand file --demand-file '" +
                Path("bad.json") + "'")
                .code,
            2);
}

TEST_F(CliTest, OutputDirectoryFromEnvironment) {
  const Result r = Run("simulate --K 8 --lambda 1/2 --scheme lap",
                       "MSCC_OUTPUT_DIR='" + dir_.string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const json j = json::parse(ReadFile(dir_ / "simulate_K8_t4_lap.json"));
  EXPECT_EQ(j["R"], "2/5");
}

TEST_F(CliTest, VerifyExportedPlan) {
  ASSERT_EQ(Run("simulate --K 8 --lambda 3/8 --scheme improved --plan-out '" +
                Path("p.plan") + "'")
                .code,
            0);
  const Result r = Run("verify --plan '" + Path("p.plan") + "'");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "PASS coverage, origin-consistency, decodability\n");
}

std::vector<std::string> SplitLines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

TEST_F(CliTest, VerifyNamesCoverageFailure) {
  ASSERT_EQ(Run("simulate --K 6 --lambda 1/2 --scheme lap --plan-out '" +
                Path("p.plan") + "'")
                .code,
            0);
  std::vector<std::string> lines = SplitLines(ReadFile(Path("p.plan")));
  const json pair = json::parse(lines[1]);
  ASSERT_EQ(pair["kind"], "pair");
  std::string kept;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (json::parse(lines[i]).value("group", -1) == pair["group"].get<int>() &&
        json::parse(lines[i])["kind"] == "pair") {
      continue;
    }
    kept += lines[i] + "\n";
  }
  WriteFile(Path("t.plan"), kept);
  const Result r = Run("verify --plan '" + Path("t.plan") + "'");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out.rfind("FAIL coverage\n", 0), 0u) << r.out;
  for (const json& s : pair["index_sets"]) {
    std::string set = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
      set += (i ? "," : "") + std::to_string(s[i].get<int>());
    }
    set += "}";
    EXPECT_NE(r.out.find("orphaned " + set), std::string::npos) << r.out;
  }
}

TEST_F(CliTest, VerifyNamesOriginFailure) {
  ASSERT_EQ(Run("simulate --K 8 --lambda 3/8 --scheme lap --plan-out '" +
                Path("p.plan") + "'")
                .code,
            0);
  std::string text;
  bool changed = false;
  for (const std::string& line : SplitLines(ReadFile(Path("p.plan")))) {
    json j = json::parse(line);
    if (!changed && j.value("origin", "") == "P" && !j["payload"].empty()) {
      j["payload"].erase(j["payload"].begin());
      changed = true;
    }
    text += j.dump() + "\n";
  }
  ASSERT_TRUE(changed);
  WriteFile(Path("t.plan"), text);
  const Result r = Run("verify --plan '" + Path("t.plan") + "'");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out.rfind("FAIL origin-consistency\n", 0), 0u) << r.out;
}

TEST_F(CliTest, VerifyRejectsGarbage) {
  WriteFile(Path("g.plan"), "{\"type\":\"broadcast\"}\n");
  EXPECT_EQ(Run("verify --plan '" + Path("g.plan") + "'").code, 2);
  EXPECT_EQ(Run("verify --plan '" + Path("missing.plan") + "'").code, 2);
}

TEST_F(CliTest, CurvesCsv) {
  const Result r = Run("curves --K 14,30 --lambda 1/2,2/3");
  ASSERT_EQ(r.code, 0) << r.err;
  const std::vector<std::string> lines = SplitLines(r.out);
  ASSERT_EQ(lines.size(), 3u);  // both lambda = 2/3 points are skipped
  EXPECT_EQ(lines[0].rfind("lambda,lambda_num,lambda_den,K,t,regime,", 0), 0u);
  EXPECT_NE(r.err.find("skipped K=14 lambda=2/3"), std::string::npos);
  // ni_over_n at K = 30, lambda = 1/2 is 37/75.
  EXPECT_NE(lines[2].find(",0.493333333333,37,75,"), std::string::npos) << lines[2];
}

TEST_F(CliTest, CurvesNearestAndEmptyGrid) {
  const Result r = Run("curves --K 62 --lambda 1/3,2/3 --nearest --jobs 2");
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_EQ(SplitLines(r.out).size(), 3u);
  EXPECT_NE(r.out.find(",62,21,1,"), std::string::npos);
  EXPECT_NE(r.out.find(",62,41,3,"), std::string::npos);
  const Result empty = Run("curves --K 14 --lambda 1/3");
  EXPECT_EQ(empty.code, 2);
  EXPECT_TRUE(empty.out.empty());
}

}  // namespace
