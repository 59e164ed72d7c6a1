// Drives the disom executable as a subprocess.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" DISOM_CLI_PATH "' " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("disom_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string out(const std::string& sub = "") const { return (dir_ / sub).string(); }

  fs::path dir_;
};

const std::string kRun =
    "run --algo plus --n 10 --lambda 1 --p 0 --kstar 0 --dist exp:rate=1 --seed 3 --cutoff 100000";

TEST_F(CliTest, RunWritesTraceAndResult) {
  const auto r = cli(kRun + " --out " + out());
  ASSERT_EQ(r.code, 0);
  const auto trace = slurp(dir_ / "trace.csv");
  EXPECT_EQ(trace.rfind("generation,evaluations,om,distortion,total,accepted\n", 0), 0U);
  const auto doc = nlohmann::json::parse(slurp(dir_ / "result.json"));
  EXPECT_TRUE(doc["result"]["success"].get<bool>());
  EXPECT_EQ(doc["result"]["final"]["om"].get<int>(), 10);
  EXPECT_EQ(doc["config"]["algorithm"], "plus");
}

TEST_F(CliTest, RunIsReproducible) {
  ASSERT_EQ(cli(kRun + " --out " + out("a")).code, 0);
  ASSERT_EQ(cli(kRun + " --out " + out("b")).code, 0);
  EXPECT_EQ(slurp(dir_ / "a" / "trace.csv"), slurp(dir_ / "b" / "trace.csv"));
  EXPECT_EQ(slurp(dir_ / "a" / "result.json"), slurp(dir_ / "b" / "result.json"));
}

TEST_F(CliTest, RunConfigRoundTrip) {
  ASSERT_EQ(cli(kRun + " --out " + out("a")).code, 0);
  ASSERT_EQ(cli("run --config " + out("a/result.json") + " --out " + out("b")).code, 0);
  EXPECT_EQ(slurp(dir_ / "a" / "result.json"), slurp(dir_ / "b" / "result.json"));
  ASSERT_EQ(cli("run --config " + out("a/result.json") + " --seed 4 --out " + out("c")).code, 0);
  const auto doc = nlohmann::json::parse(slurp(dir_ / "c" / "result.json"));
  EXPECT_EQ(doc["config"]["seed"].get<int>(), 4);
}

TEST_F(CliTest, OutputDirectoryFromEnvironment) {
  ASSERT_EQ(cli(kRun, "DISOM_OUT_DIR='" + out("env") + "'").code, 0);
  EXPECT_TRUE(fs::exists(dir_ / "env" / "trace.csv"));
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(cli("run --algo plus --lambda 1 --p 0 --kstar 0 --dist exp:rate=1 --seed 3 --cutoff 10").code, 2);
  EXPECT_EQ(cli("run --algo plus --n 10 --lambda 1 --p 0 --kstar 0 --dist exp:rat=1 --seed 3 --cutoff 10").code, 2);
  EXPECT_EQ(cli("run --bogus").code, 2);
  EXPECT_EQ(cli("dist").code, 2);
  EXPECT_EQ(cli("").code, 2);
  EXPECT_EQ(cli("experiment --preset fig1 --out " + out()).code, 2);
  EXPECT_FALSE(fs::exists(dir_ / "median.csv"));
}

TEST_F(CliTest, UnwritableOutputExitsThree) {
  EXPECT_EQ(cli(kRun + " --out /dev/null/x").code, 3);
  EXPECT_EQ(cli("run --config " + out("missing.json")).code, 3);
}

TEST_F(CliTest, CheckGainAndLayer) {
  const auto r = cli("check --gain n=4,k=2,l=2,t=0 --layer n=100,l=50 --out " + out());
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("0.83333333333333337"), std::string::npos);
  EXPECT_NE(r.out.find("100891344545564193334812497256"), std::string::npos);
}

TEST_F(CliTest, CheckFlagsFigureOneConfiguration) {
  const auto r =
      cli("check --n 150 --lambda 8 --p 0.0245 --kstar 2.12 --dist exp:rate=0.4 --out " + out());
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("FAIL lambda_lower"), std::string::npos);
  const auto doc = nlohmann::json::parse(slurp(dir_ / "check.json"));
  EXPECT_FALSE(doc["all_pass"].get<bool>());

  ASSERT_EQ(cli("check --config " + out("check.json") + " --out " + out("again")).code, 0);
  EXPECT_EQ(slurp(dir_ / "check.json"), slurp(dir_ / "again" / "check.json"));
}

TEST_F(CliTest, CheckZeroProbabilityFailsDensity) {
  const auto r = cli("check --n 100 --lambda 11 --p 0 --kstar 1 --dist exp:rate=1 --out " + out());
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("FAIL p_above_1_over_nlogn"), std::string::npos);
}

TEST_F(CliTest, DistTable) {
  auto r = cli("dist --dist exp:rate=0.4 --out " + out());
  ASSERT_EQ(r.code, 0);
  const auto csv = slurp(dir_ / "dist.csv");
  EXPECT_EQ(csv, r.out);
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  EXPECT_EQ(lines, 12U);

  r = cli("dist --dist uniform:a=0,b=4 --out " + out());
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\n4,0,violation\n"), std::string::npos);
}

TEST_F(CliTest, ExperimentPresetScaled) {
  const auto r = cli("experiment --preset fig2 --scale 0.5 --runs 1 --cutoff 2000 --jobs 1 --out " + out());
  ASSERT_EQ(r.code, 0);
  const auto cfg = nlohmann::json::parse(slurp(dir_ / "config.json"));
  EXPECT_EQ(cfg["cutoff_generations"].get<int>(), 2000);
  EXPECT_TRUE(fs::exists(dir_ / "median.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "summary.json"));
  EXPECT_FALSE(fs::exists(dir_ / "normalized.csv"));

  const auto plain = cli("experiment --preset fig2 --scale 0.5 --runs 1 --cutoff 2000 --jobs 3 --out " + out("b"));
  ASSERT_EQ(plain.code, 0);
  EXPECT_EQ(slurp(dir_ / "median.csv"), slurp(dir_ / "b" / "median.csv"));
  EXPECT_EQ(slurp(dir_ / "summary.json"), slurp(dir_ / "b" / "summary.json"));

  ASSERT_EQ(cli("experiment --config " + out("config.json") + " --out " + out("c")).code, 0);
  EXPECT_EQ(slurp(dir_ / "summary.json"), slurp(dir_ / "c" / "summary.json"));
}

TEST_F(CliTest, ExperimentNormalizedAndTraces) {
  const auto r =
      cli("experiment --preset fig3 --scale 0.1 --runs 1 --cutoff 5000 --keep-traces --out " + out());
  ASSERT_EQ(r.code, 0);
  const auto csv = slurp(dir_ / "normalized.csv");
  EXPECT_FALSE(csv.empty());
  EXPECT_TRUE(fs::exists(dir_ / "trace_c0_plus.csv"));
}

TEST_F(CliTest, FigureOneWithReducedCutoff) {
  const auto r = cli("experiment --preset fig1 --runs 1 --cutoff 50000 --keep-traces --out " + out());
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(fs::exists(dir_ / "trace_plus.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "trace_comma.csv"));
}

}  // namespace
