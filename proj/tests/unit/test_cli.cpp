#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlsg::cli::run;

namespace {

std::string spec(const std::string& name) { return std::string(NLSG_SPEC_DIR) + "/" + name + ".json"; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("nlsg_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int call(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run(args, out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

}  // namespace

TEST_F(Cli, CertifyPlantPrintsTable) {
  ASSERT_EQ(call({"certify", "plant", "--spec", spec("scalar_linear"), "--out", dir_.string()}), 0) << err_.str();
  const std::string csv = out_.str();
  EXPECT_EQ(csv.rfind("eps,phi1,phi2,phi3,phi4,Phi\n", 0), 0u);
  EXPECT_NE(csv.find("\n0.5,0.5,"), std::string::npos);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  EXPECT_EQ(slurp(dir_ / "scalar_linear_certify_plant.csv"), csv);
  const auto j = nlohmann::json::parse(slurp(dir_ / "scalar_linear_certify_plant.json"));
  EXPECT_EQ(j["header"]["b"], 1);
}

TEST_F(Cli, CertifyReichOnConstant) {
  ASSERT_EQ(call({"certify", "reich", "--spec", spec("constant_unit"), "--eps", "1", "--out", dir_.string()}), 0)
      << err_.str();
  EXPECT_EQ(out_.str().rfind("eps,phi_inf,phi2,Phi\n1,", 0), 0u);
}

TEST_F(Cli, VerifyPassesAndWritesReport) {
  ASSERT_EQ(call({"verify", "--spec", spec("scalar_linear"), "--eps", "0.5,0.25", "--claim", "plant_main,resolvent_roc",
                  "--seed", "3", "--grid-per-decade", "8", "--out", dir_.string()}),
            0)
      << err_.str();
  const auto j = nlohmann::json::parse(out_.str());
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["reports"].size(), 4u);
  EXPECT_EQ(j["header"]["seed"], 3);
  EXPECT_EQ(j["header"]["grid_per_decade"], 8);
  const std::string csv = slurp(dir_ / "scalar_linear_verify.csv");
  EXPECT_EQ(csv.rfind("claim,eps,threshold,direction,points,failures,pass,negative_control,", 0), 0u);
}

TEST_F(Cli, NegativeControlFailsButDoesNotFailTheRun) {
  ASSERT_EQ(call({"verify", "--spec", spec("scalar_linear"), "--eps", "0.1", "--claim", "resolvent_roc", "--falsify",
                  "100", "--out", dir_.string()}),
            0)
      << err_.str();
  const auto j = nlohmann::json::parse(out_.str());
  ASSERT_EQ(j["reports"].size(), 1u);
  EXPECT_FALSE(j["reports"][0]["pass"].get<bool>());
}

TEST_F(Cli, AxiomsExitCodes) {
  EXPECT_EQ(call({"axioms", "--spec", spec("identity"), "--out", dir_.string()}), 0) << err_.str();
  EXPECT_TRUE(fs::exists(dir_ / "identity_axioms.csv"));
  EXPECT_EQ(call({"axioms", "--spec", spec("anti_linear"), "--out", dir_.string()}), 1);
}

TEST_F(Cli, EvolveTrajectory) {
  ASSERT_EQ(call({"evolve", "--spec", spec("scalar_linear"), "--t-max", "2", "--delta", "1e-4", "--steps", "4", "--out",
                  dir_.string()}),
            0)
      << err_.str();
  std::istringstream in(out_.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,x1,n_used,delta_requested,route");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 5);
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(call({}), 2);
  EXPECT_EQ(call({"verify", "--spec", spec("scalar_linear"), "--bogus"}), 2);
  EXPECT_EQ(call({"verify", "--spec", (dir_ / "missing.json").string()}), 2);
  EXPECT_EQ(call({"verify", "--spec", spec("scalar_linear"), "--claim", "nonsense", "--out", dir_.string()}), 2);
  EXPECT_EQ(call({"verify", "--spec", spec("scalar_linear"), "--eps", "0.5,x", "--out", dir_.string()}), 2);
  const fs::path bad = dir_ / "bad.json";
  std::ofstream(bad) << R"({"version": 1, "space": {"norm": "euclidean"}, "operator": {"kind": "constant", "q": [1]},
                           "x0": [1], "extra": true})";
  EXPECT_EQ(call({"axioms", "--spec", bad.string(), "--out", dir_.string()}), 2);
  EXPECT_NE(err_.str().find("extra"), std::string::npos);
}

TEST_F(Cli, HelpExitsZero) { EXPECT_EQ(call({"--help"}), 0); }
