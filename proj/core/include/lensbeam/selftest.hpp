#pragma once

// Fast invariant checks shipped with the library and exposed by the CLI.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lensbeam/unscented.hpp"

namespace lensbeam::cli {

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestOptions {
  /// Covariance update used by the filter under test; the alternate form
  /// exists so the oracle check can be shown to catch it.
  filter::CovarianceUpdate update_form = filter::CovarianceUpdate::subtract_gain;
  std::uint64_t seed = 20240917;
};

std::vector<SelftestCheck> run_selftest(const SelftestOptions& options = {});

/// Prints one "PASS name (detail)" / "FAIL ..." line per check; returns true
/// when everything passed.
bool print_selftest(const std::vector<SelftestCheck>& checks, std::ostream& out);

}  // namespace lensbeam::cli
