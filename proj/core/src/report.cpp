#include "lensbeam/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "lensbeam/errors.hpp"
#include "lensbeam/format.hpp"

#ifndef LENSBEAM_VERSION
#define LENSBEAM_VERSION "unknown"
#endif

namespace lensbeam::cli {

namespace {

constexpr std::string_view kConfigBegin = "--- config ---\n";
constexpr std::string_view kConfigEnd = "--- end config ---\n";

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string percent(double p) {
  if (!std::isfinite(p)) {
    return p > 0 ? "+inf%" : "-inf%";
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%+.2f%%", p);
  return buf;
}

std::string header_lines(const sim::MonteCarloResult& result, std::string_view prefix) {
  std::ostringstream os;
  os << prefix << "lensbeam " << version_string() << "\n";
  os << prefix << "seed = " << result.config.seed << "\n";
  os << prefix << "config_hash = " << hex64(sim::config_hash(result.config)) << "\n";
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  out << content;
  out.flush();
  if (!out) {
    throw IoError("failed writing '" + path.string() + "'");
  }
}

}  // namespace

std::string version_string() { return LENSBEAM_VERSION; }

std::string format_mse_csv(const sim::MonteCarloResult& result) {
  std::ostringstream os;
  os << header_lines(result, "# ");
  std::istringstream cfg(sim::canonical_text(result.config));
  for (std::string line; std::getline(cfg, line);) {
    if (!line.empty()) {
      os << "# config: " << line << "\n";
    }
  }
  os << "slot,filter,parameter,mse,stderr,n_runs\n";
  const int n_slots = result.config.n_slots;
  for (int s = 0; s < n_slots; ++s) {
    for (const auto& f : result.filters) {
      for (const auto& c : f.curves) {
        os << (s + 1) << ',' << sim::to_string(f.kind) << ',' << c.name << ','
           << format_double(c.mse[s]) << ',' << format_double(c.std_error[s]) << ',' << c.n_runs
           << "\n";
      }
    }
  }
  return os.str();
}

std::string format_summary(const sim::MonteCarloResult& result) {
  const auto& cfg = result.config;
  std::ostringstream os;
  os << header_lines(result, "");
  os << "runs: " << result.n_runs << " requested, " << result.n_succeeded << " succeeded\n";
  os << "failures: episodes=" << result.failures.episodes << " ukf=" << result.failures.ukf
     << " ekf=" << result.failures.ekf << "\n";
  os << "noise variance: " << format_double(cfg.noise_var())
     << " (reference power " << format_double(cfg.reference_power()) << ")\n";
  os << "common random numbers: " << (result.common_random_numbers ? "yes" : "NO") << "\n";
  os << "min posterior eigenvalue: " << format_double(result.min_cov_eigenvalue) << "\n";

  os << "\nfinal-slot MSE (slot " << cfg.n_slots << "):\n";
  for (const auto& f : result.filters) {
    for (const auto& c : f.curves) {
      os << "  " << sim::to_string(f.kind) << ' ' << c.name << " = " << format_double(c.final_mse())
         << " +- " << format_double(c.std_error.back()) << "\n";
    }
  }
  if (result.curves(sim::FilterKind::ukf) != nullptr &&
      result.curves(sim::FilterKind::ekf) != nullptr) {
    os << "\nenhancement of ukf over ekf at the final slot:\n";
    for (const auto& e : sim::enhancement_table(result)) {
      os << "  enhancement " << e.parameter << ": " << percent(e.percent) << "\n";
    }
  }
  if (!result.chosen_spread.empty()) {
    os << "\nchosen (gamma, kappa) at slot 1:\n";
    for (const auto& sc : result.chosen_spread) {
      os << "  (" << format_double(sc.params.gamma) << ", " << format_double(sc.params.kappa)
         << "): " << sc.count << "\n";
    }
  }
  os << "\n" << kConfigBegin << sim::canonical_text(cfg) << kConfigEnd;
  return os.str();
}

void emit_results(const sim::MonteCarloResult& result, const std::filesystem::path& out_dir) {
  if (result.filters.empty()) {
    throw InvalidParameterError("emit_results: result holds no filter curves");
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory '" + out_dir.string() + "': " + ec.message());
  }
  write_file(out_dir / "mse.csv", format_mse_csv(result));
  write_file(out_dir / "summary.txt", format_summary(result));
}

std::string extract_config_echo(const std::string& summary) {
  const auto begin = summary.find(kConfigBegin);
  const auto end = summary.find(kConfigEnd);
  if (begin == std::string::npos || end == std::string::npos || end < begin) {
    throw ConfigError("summary has no config echo");
  }
  const auto start = begin + kConfigBegin.size();
  return summary.substr(start, end - start);
}

}  // namespace lensbeam::cli
