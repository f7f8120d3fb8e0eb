#pragma once

// Result files: `mse.csv` (per-slot curves) and `summary.txt`. Both embed the
// master seed and the resolved config, and are byte-stable for equal inputs.

#include <filesystem>
#include <string>

#include "lensbeam/simulation.hpp"

namespace lensbeam::cli {

/// Version string baked in at build time (git describe when available).
std::string version_string();

std::string format_mse_csv(const sim::MonteCarloResult& result);
std::string format_summary(const sim::MonteCarloResult& result);

/// Writes mse.csv and summary.txt into `out_dir`, creating it if needed.
/// Throws IoError when the directory or files cannot be written.
void emit_results(const sim::MonteCarloResult& result, const std::filesystem::path& out_dir);

/// Lines of the config echo between the summary's config markers.
std::string extract_config_echo(const std::string& summary);

}  // namespace lensbeam::cli
