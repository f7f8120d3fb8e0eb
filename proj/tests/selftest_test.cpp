#include <gtest/gtest.h>

#include <chrono>
#include <sstream>

#include "lensbeam/selftest.hpp"

namespace lensbeam::cli {
namespace {

TEST(Selftest, AllChecksPassQuickly) {
  const auto start = std::chrono::steady_clock::now();
  const auto checks = run_selftest();
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ASSERT_GE(checks.size(), 4u);
  for (const auto& c : checks) {
    EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
  }
  EXPECT_LT(seconds, 30.0);
}

TEST(Selftest, AddedGainCovarianceIsCaught) {
  SelftestOptions opts;
  opts.update_form = filter::CovarianceUpdate::add_gain;
  int failed = 0;
  for (const auto& c : run_selftest(opts)) {
    if (!c.passed) {
      ++failed;
      EXPECT_NE(c.name.find("kalman"), std::string::npos) << c.name;
    }
  }
  EXPECT_EQ(failed, 1);
}

TEST(Selftest, PrintsOneLinePerCheck) {
  std::vector<SelftestCheck> checks{{"alpha", true, "fine"}, {"beta", false, "off by 2"}};
  std::ostringstream out;
  EXPECT_FALSE(print_selftest(checks, out));
  EXPECT_EQ(out.str(), "PASS alpha (fine)\nFAIL beta (off by 2)\n");
  checks.pop_back();
  std::ostringstream ok;
  EXPECT_TRUE(print_selftest(checks, ok));
}

}  // namespace
}  // namespace lensbeam::cli
