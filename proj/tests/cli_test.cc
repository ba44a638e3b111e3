#include "opasim/cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include "opasim/csv.h"

namespace opasim {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "opasim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("opasim_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return dir_ / name; }

  void WriteText(const std::string& name, const std::string& text) const {
    std::ofstream(Path(name)) << text;
  }

  fs::path dir_;
};

TEST_F(CliTest, ScanFig3cWritesCsv) {
  const CliRun r = Cli({"scan", "fig3c", Path("out.csv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::ifstream in(Path("out.csv"));
  const CsvScan csv = ReadScanCsv(in);
  ASSERT_EQ(csv.rows.size(), 801u);
  const double center = *csv.rows[400].value_db;
  const double baseline = *csv.rows.front().value_db;
  EXPECT_LT(center, baseline);
  EXPECT_LT(baseline, 0.0);
  EXPECT_NE(r.out.find("fig3c:"), std::string::npos);
}

TEST_F(CliTest, ScanFig2aToStdout) {
  const CliRun r = Cli({"scan", "fig2a", "--points", "401", "--span-gammas", "8"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream in(r.out);
  EXPECT_EQ(ReadScanCsv(in).rows.size(), 401u);
  EXPECT_NE(r.err.find("shoulders=0"), std::string::npos) << r.err;
}

TEST_F(CliTest, ExitCodes) {
  CliRun r = Cli({"scan", "nosuch"});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("unknown scenario"), std::string::npos);

  WriteText("hot.cfg", "opa.pump_fraction = 1.5\n");
  r = Cli({"scan", "fig3c", "--config", Path("hot.cfg")});
  EXPECT_EQ(r.code, kExitPhysics);
  EXPECT_NE(r.err.find("at/above threshold"), std::string::npos);

  r = Cli({"scan", "fig3c", "--config", Path("missing.cfg")});
  EXPECT_EQ(r.code, kExitIo);

  r = Cli({"scan", "fig3c", Path("no/such/dir/out.csv")});
  EXPECT_EQ(r.code, kExitIo);

  r = Cli({"scan"});
  EXPECT_EQ(r.code, kExitValidation);
  r = Cli({"scan", "fig3c", "--points", "11"});
  EXPECT_EQ(r.code, kExitValidation);
}

TEST_F(CliTest, SelfCheckModes) {
  CliRun r = Cli({"selfcheck"});
  EXPECT_EQ(r.code, kExitOk) << r.out;
  EXPECT_NE(r.out.find("all invariants pass"), std::string::npos);

  r = Cli({"selfcheck", "--strict"});
  EXPECT_NE(r.code, kExitOk);
  EXPECT_NE(r.out.find("FAIL  Lyapunov"), std::string::npos) << r.out;

  r = Cli({"selfcheck", "--inject-fault", "negative-loss"});
  EXPECT_NE(r.code, kExitOk);
  EXPECT_NE(r.out.find("FAIL  cavity decay invariants"), std::string::npos)
      << r.out;
}

TEST_F(CliTest, CalibrateWritesDerivedConfig) {
  WriteText("base.cfg", "opa.t_out = 0.03\n");
  const CliRun r = Cli({"calibrate", "--config", Path("base.cfg")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("detected_squeezing_db=-2.0000"), std::string::npos)
      << r.out;
  const Config derived = LoadConfigFile(Path("base.cfg.calibrated"));
  ASSERT_TRUE(derived.detection.efficiency.has_value());
  EXPECT_GT(*derived.detection.efficiency, 0.0);
  EXPECT_LT(*derived.detection.efficiency, 1.0);

  WriteText("fixed.cfg", "detection.efficiency = 0.5\n");
  EXPECT_EQ(Cli({"calibrate", "--config", Path("fixed.cfg")}).code,
            kExitValidation);
}

TEST_F(CliTest, BatchWritesEveryPanel) {
  ASSERT_EQ(Cli({"fig2", "--all", "--outdir", Path("f2")}).code, kExitOk);
  ASSERT_EQ(Cli({"fig3", "--all", "--outdir", Path("f3")}).code, kExitOk);
  auto count = [](const fs::path& d) {
    return std::distance(fs::directory_iterator(d), fs::directory_iterator());
  };
  EXPECT_EQ(count(Path("f2")), 5);
  EXPECT_EQ(count(Path("f3")), 6);
  EXPECT_TRUE(fs::exists(Path("f3/fig3f.csv")));
}

TEST_F(CliTest, BinaryExitStatus) {
  const char* bin = std::getenv("OPASIM_BIN");
  if (bin == nullptr) GTEST_SKIP() << "OPASIM_BIN not set";
  const std::string base = std::string(bin) + " scan ";
  int status = std::system((base + "nosuch >/dev/null 2>&1").c_str());
  EXPECT_EQ(WEXITSTATUS(status), kExitValidation);
  status = std::system(
      (base + "fig3c " + Path("bin.csv") + " >/dev/null 2>&1").c_str());
  EXPECT_EQ(WEXITSTATUS(status), kExitOk);
  EXPECT_TRUE(fs::exists(Path("bin.csv")));
}

}  // namespace
}  // namespace opasim
