#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <regex>
#include <sstream>

#include "lensbeam/config_io.hpp"
#include "lensbeam/errors.hpp"
#include "lensbeam/report.hpp"

namespace lensbeam::cli {
namespace {

using sim::FilterSelection;
using sim::ScenarioConfig;

ScenarioConfig small(FilterSelection f = FilterSelection::both) {
  ScenarioConfig c;
  c.n_runs = 20;
  c.n_slots = 6;
  c.seed = 4242;
  c.filter = f;
  return c;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) {
    out.push_back(l);
  }
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("lensbeam_report_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::remove_all(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::filesystem::path dir_;
};

TEST(MseCsv, OneRowPerSlotFilterAndParameter) {
  const ScenarioConfig cfg = small();
  const auto result = sim::monte_carlo(cfg, {1});
  const auto lines = lines_of(format_mse_csv(result));
  int data = 0;
  bool header_seen = false;
  for (const auto& l : lines) {
    if (l.rfind('#', 0) == 0) {
      EXPECT_FALSE(header_seen) << "comment after column header";
      continue;
    }
    if (!header_seen) {
      EXPECT_EQ(l, "slot,filter,parameter,mse,stderr,n_runs");
      header_seen = true;
      continue;
    }
    ++data;
  }
  EXPECT_EQ(data, cfg.n_slots * 2 * static_cast<int>(sim::reported_parameters(cfg).size()));
}

TEST(MseCsv, RowsMatchTheCurves) {
  const auto result = sim::monte_carlo(small(FilterSelection::ukf), {1});
  const auto& aoa = result.curves(sim::FilterKind::ukf)->get("aoa");
  const std::regex row(R"(^(\d+),ukf,aoa,([^,]+),([^,]+),(\d+)$)");
  int seen = 0;
  for (const auto& l : lines_of(format_mse_csv(result))) {
    std::smatch m;
    if (std::regex_match(l, m, row)) {
      const int slot = std::stoi(m[1]);
      ASSERT_GE(slot, 1);
      EXPECT_EQ(std::stod(m[2]), aoa.mse[slot - 1]);
      EXPECT_EQ(std::stod(m[3]), aoa.std_error[slot - 1]);
      EXPECT_EQ(std::stoi(m[4]), aoa.n_runs);
      EXPECT_EQ(slot, ++seen);
    }
  }
  EXPECT_EQ(seen, 6);
}

TEST(MseCsv, HeaderCarriesSeedAndConfig) {
  const ScenarioConfig cfg = small();
  const std::string csv = format_mse_csv(sim::monte_carlo(cfg, {1}));
  EXPECT_EQ(csv.rfind("# lensbeam " + version_string() + "\n", 0), 0u);
  EXPECT_NE(csv.find("# seed = 4242\n"), std::string::npos);
  char hash[32];
  std::snprintf(hash, sizeof hash, "0x%016llx", static_cast<unsigned long long>(sim::config_hash(cfg)));
  EXPECT_NE(csv.find(std::string("# config_hash = ") + hash), std::string::npos);
  std::string echoed;
  for (const auto& l : lines_of(csv)) {
    if (l.rfind("# config: ", 0) == 0) {
      echoed += l.substr(10) + "\n";
    }
  }
  EXPECT_EQ(sim::config_hash(parse_config_text(echoed)), sim::config_hash(cfg));
}

TEST(Summary, ComparisonReportsSignedEnhancement) {
  const std::string s = format_summary(sim::monte_carlo(small(), {1}));
  EXPECT_TRUE(std::regex_search(s, std::regex(R"(enhancement aoa: [+-]\d+\.\d\d%)"))) << s;
  EXPECT_TRUE(std::regex_search(s, std::regex(R"(enhancement aod: [+-]\d+\.\d\d%)"))) << s;
  EXPECT_NE(s.find("runs: 20 requested, 20 succeeded"), std::string::npos) << s;
  EXPECT_NE(s.find("failures: episodes=0 ukf=0 ekf=0"), std::string::npos) << s;
  EXPECT_NE(s.find("chosen (gamma, kappa) at slot 1:"), std::string::npos) << s;
}

TEST(Summary, SingleFilterHasNoEnhancement) {
  const std::string s = format_summary(sim::monte_carlo(small(FilterSelection::ukf), {1}));
  EXPECT_EQ(s.find("enhancement"), std::string::npos);
  EXPECT_NE(s.find("ukf aoa = "), std::string::npos);
}

TEST(Summary, ReportsFailures) {
  ScenarioConfig cfg = small();
  cfg.n_slots = 20;
  cfg.n_runs = 40;
  cfg.snr_db = std::numeric_limits<double>::infinity();
  const auto result = sim::monte_carlo(cfg, {1});
  ASSERT_GT(result.failures.ekf, 0);
  const std::string s = format_summary(result);
  EXPECT_NE(s.find("failures: episodes=" + std::to_string(result.failures.episodes) +
                   " ukf=0 ekf=" + std::to_string(result.failures.ekf)),
            std::string::npos)
      << s;
}

TEST(Summary, ConfigEchoReproducesTheRun) {
  ScenarioConfig cfg = small();
  cfg.sigma2 = 0.1;
  cfg.k_users = 3;
  const std::string s = format_summary(sim::monte_carlo(cfg, {1}));
  const std::string echo = extract_config_echo(s);
  EXPECT_EQ(echo, sim::canonical_text(cfg));
  const ScenarioConfig back = parse_config_text(echo);
  EXPECT_EQ(sim::config_hash(back), sim::config_hash(cfg));
  EXPECT_THROW(extract_config_echo("no markers here"), ConfigError);
}

TEST_F(TempDir, EmitWritesByteIdenticalFiles) {
  const ScenarioConfig cfg = small();
  emit_results(sim::monte_carlo(cfg, {1}), dir_ / "a" / "nested");
  emit_results(sim::monte_carlo(cfg, {3}), dir_ / "b");
  for (const char* f : {"mse.csv", "summary.txt"}) {
    const std::string a = slurp(dir_ / "a" / "nested" / f);
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, slurp(dir_ / "b" / f)) << f;
  }
}

TEST_F(TempDir, UnwritableDirectoryIsIoError) {
  std::filesystem::create_directories(dir_);
  const auto blocker = dir_ / "file";
  std::ofstream(blocker) << "x";
  const auto result = sim::monte_carlo(small(FilterSelection::ukf), {1});
  EXPECT_THROW(emit_results(result, blocker / "sub"), IoError);
}

}  // namespace
}  // namespace lensbeam::cli
