#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lensbeam::tool {

enum ExitCode : int { kOk = 0, kValidation = 1, kRuntime = 2 };

struct RunOptions {
  std::optional<std::filesystem::path> config;
  std::vector<std::string> overrides;  // key=value
  std::filesystem::path out_dir;
  int threads = 0;
  bool quiet = false;
};

struct SweepOptions {
  RunOptions run;
  std::string param;
  std::vector<std::string> values;
};

/// Output directory when no --out is given: $LENSBEAM_OUT, else "results".
std::filesystem::path default_out_dir();

int cmd_run(const RunOptions& opts, bool force_both, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err);
int cmd_selftest(std::ostream& out);

}  // namespace lensbeam::tool
