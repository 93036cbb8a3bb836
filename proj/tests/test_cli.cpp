#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "jbessel/cli.hpp"

using namespace jbessel;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "jbessel");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(JBESSEL_FIXTURE_DIR) + "/" + name; }

}  // namespace

TEST(Cli, CoeffsJson) {
  const auto r = run({"coeffs", "--beta", "1", "--a", "-2", "--n", "5"});
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["command"], "coeffs");
  ASSERT_EQ(j["coefficients"].size(), 6u);
  EXPECT_EQ(j["coefficients"][1]["c_n"].get<double>(), -2.0);
  EXPECT_EQ(j["coefficients"][0]["sign"], 1);
}

TEST(Cli, CoeffsCsv) {
  const auto r = run({"coeffs", "--n", "3", "--format", "csv"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n') + 1), "n,c_n,log_abs_c_n,sign,abs_ratio\r\n");
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 5);
}

TEST(Cli, Deterministic) {
  const std::vector<std::string> args{"zeros", "--nu", "0.3", "--beta", "0.5", "--zeros", "8"};
  EXPECT_EQ(run(args).out, run(args).out);
}

TEST(Cli, Eval) {
  const auto r = run({"eval", "--z", "0,1.5"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["values"][0]["F"].get<double>(), 1.0);
  EXPECT_NEAR(j["values"][1]["F"].get<double>(), std::cyl_bessel_j(0.0, 2.0 * std::sqrt(1.5)), 1e-12);
}

TEST(Cli, EvalNeedsZ) { EXPECT_EQ(run({"eval"}).code, kExitError); }

TEST(Cli, ZerosWithSummability) {
  const auto r = run({"zeros", "--class", "A", "--zeros", "6"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["zeros"][0]["lambda"].get<double>(), M_PI / 2, 1e-12);
  EXPECT_TRUE(j.contains("summability"));
}

TEST(Cli, VerifyDefaultPasses) {
  const auto r = run({"verify"});
  EXPECT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["summary"]["fail"], 0);
  EXPECT_GT(j["summary"]["pass"].get<int>(), 8);
}

TEST(Cli, ConfigFile) {
  const auto r = run({"coeffs", "--config", fixture("beta1_classB.conf"), "--n", "2"});
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["params"]["beta"].get<double>(), 1.0);
  EXPECT_EQ(j["params"]["nu"].get<double>(), 0.3);
}

TEST(Cli, FlagsOverrideConfig) {
  const auto r = run({"coeffs", "--config", fixture("beta1_classB.conf"), "--beta", "2", "--n", "1"});
  EXPECT_EQ(nlohmann::json::parse(r.out)["params"]["beta"].get<double>(), 2.0);
}

TEST(Cli, CorruptedFixtureRejected) {
  const auto r = run({"verify", "--config", fixture("corrupted_c3.conf")});
  EXPECT_EQ(r.code, kExitCheckFailed) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_GT(j["summary"]["fail"].get<int>(), 0);
}

TEST(Cli, ConstraintError) {
  const auto r = run({"coeffs", "--config", fixture("bad_beta.conf")});
  EXPECT_EQ(r.code, kExitError);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["error"]["type"], "ConstraintViolation");
  EXPECT_EQ(j["error"]["constraint"], "beta_gt_minus1");
}

TEST(Cli, BadFlag) {
  const auto r = run({"coeffs", "--bogus", "1"});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_EQ(nlohmann::json::parse(r.out)["error"]["type"], "InvalidArgument");
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, BadPerturbation) { EXPECT_EQ(run({"coeffs", "--perturb", "3x"}).code, kExitError); }

TEST(Cli, ConjectureIsEvidence) {
  const auto r = run({"conjecture", "--beta", "1", "--gram-size", "4", "--quad-m", "48"});
  EXPECT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["status"], "evidence");
  EXPECT_EQ(j["gram"].size(), 4u);
}

TEST(Cli, OutFile) {
  const auto path = std::filesystem::temp_directory_path() / "jbessel_cli_out.json";
  const auto r = run({"coeffs", "--n", "2", "--out", path.string()});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  EXPECT_EQ(nlohmann::json::parse(f)["coefficients"].size(), 3u);
  std::filesystem::remove(path);
}

TEST(Cli, Help) { EXPECT_EQ(run({"--help"}).code, 0); }
