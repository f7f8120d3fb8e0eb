#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "lensbeam/config_io.hpp"
#include "lensbeam/errors.hpp"
#include "lensbeam/format.hpp"
#include "lensbeam/report.hpp"
#include "lensbeam/selftest.hpp"
#include "lensbeam/simulation.hpp"

namespace lensbeam::tool {

namespace {

sim::ScenarioConfig load(const RunOptions& opts) {
  std::vector<cli::Override> overrides;
  for (const auto& s : opts.overrides) {
    overrides.push_back(cli::parse_override(s));
  }
  if (opts.config) {
    return cli::parse_config(*opts.config, overrides);
  }
  return cli::parse_config_text("", overrides, "<defaults>");
}

// Runs one scenario and writes its files; errors propagate.
sim::MonteCarloResult execute(const sim::ScenarioConfig& cfg, const RunOptions& opts,
                              const std::filesystem::path& out_dir, std::ostream& err) {
  sim::MonteCarloOptions mc;
  mc.threads = opts.threads;
  if (!opts.quiet) {
    const int step = std::max(1, cfg.n_runs / 20);
    mc.progress = [&err, step](int done, int total) {
      if (done % step == 0 || done == total) {
        err << "\r  " << done << "/" << total << " episodes" << (done == total ? "\n" : "")
            << std::flush;
      }
    };
  }
  sim::MonteCarloResult result = sim::monte_carlo(cfg, mc);
  cli::emit_results(result, out_dir);
  return result;
}

void print_brief(const sim::MonteCarloResult& result, const std::filesystem::path& out_dir,
                 std::ostream& out) {
  for (const auto& f : result.filters) {
    out << sim::to_string(f.kind) << " final aoa mse " << format_double(f.get("aoa").final_mse())
        << ", aod mse " << format_double(f.get("aod").final_mse()) << "\n";
  }
  if (result.failures.episodes > 0) {
    out << "failed episodes: " << result.failures.episodes << " (excluded)\n";
  }
  out << "wrote " << (out_dir / "mse.csv").string() << " and "
      << (out_dir / "summary.txt").string() << "\n";
}

template <typename F>
int guarded(std::ostream& err, F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const InvalidParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntime;
  }
}

}  // namespace

std::filesystem::path default_out_dir() {
  if (const char* env = std::getenv("LENSBEAM_OUT"); env != nullptr && *env != '\0') {
    return env;
  }
  return "results";
}

int cmd_run(const RunOptions& opts, bool force_both, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    sim::ScenarioConfig cfg = load(opts);
    if (force_both) {
      cfg.filter = sim::FilterSelection::both;
    }
    const auto result = execute(cfg, opts, opts.out_dir, err);
    print_brief(result, opts.out_dir, out);
    if (force_both) {
      for (const auto& e : sim::enhancement_table(result)) {
        if (e.parameter == "aoa" || e.parameter == "aod" || e.parameter == "gain") {
          char buf[32];
          std::snprintf(buf, sizeof(buf), "%+.2f%%", e.percent);
          out << "enhancement " << e.parameter << ": " << buf << "\n";
        }
      }
    }
    return int{kOk};
  });
}

int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.values.empty()) {
      throw ConfigError("sweep: --values needs at least one value");
    }
    // Validate every point before spending time on any of them.
    std::vector<sim::ScenarioConfig> configs;
    for (const auto& v : opts.values) {
      RunOptions point = opts.run;
      point.overrides.push_back(opts.param + "=" + v);
      configs.push_back(load(point));
    }
    std::ostringstream table;
    table << "# lensbeam " << cli::version_string() << "\n";
    table << "# seed = " << configs.front().seed << "\n";
    table << "# sweep over " << opts.param << "; base config (first point):\n";
    std::istringstream base(sim::canonical_text(configs.front()));
    for (std::string line; std::getline(base, line);) {
      if (!line.empty()) {
        table << "# config: " << line << "\n";
      }
    }
    table << opts.param << ",filter,parameter,final_mse,stderr,n_runs,config_hash\n";
    for (std::size_t i = 0; i < configs.size(); ++i) {
      const auto dir = opts.run.out_dir / (opts.param + "=" + opts.values[i]);
      out << opts.param << " = " << opts.values[i] << "\n";
      const auto result = execute(configs[i], opts.run, dir, err);
      print_brief(result, dir, out);
      char hash[19];
      std::snprintf(hash, sizeof(hash), "0x%016llx",
                    static_cast<unsigned long long>(sim::config_hash(configs[i])));
      for (const auto& f : result.filters) {
        for (const auto& c : f.curves) {
          table << opts.values[i] << ',' << sim::to_string(f.kind) << ',' << c.name << ','
                << format_double(c.final_mse()) << ',' << format_double(c.std_error.back()) << ','
                << c.n_runs << ',' << hash << "\n";
        }
      }
    }
    const auto path = opts.run.out_dir / "sweep.csv";
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file || !(file << table.str())) {
      throw IoError("cannot write '" + path.string() + "'");
    }
    out << "wrote " << path.string() << "\n";
    return int{kOk};
  });
}

int cmd_selftest(std::ostream& out) {
  const bool ok = cli::print_selftest(cli::run_selftest(), out);
  return ok ? kOk : kRuntime;
}

}  // namespace lensbeam::tool
