#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "lensbeam/report.hpp"

namespace {

void add_run_flags(CLI::App* cmd, lensbeam::tool::RunOptions& opts, std::string& out) {
  cmd->add_option("--config,-c", opts.config, "Scenario file")->check(CLI::ExistingFile);
  cmd->add_option("--set,-s", opts.overrides, "Override a config key (key=value), repeatable")
      ->take_all();
  cmd->add_option("--out,-o", out, "Output directory (default: $LENSBEAM_OUT or ./results)");
  cmd->add_option("--threads,-j", opts.threads, "Worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--quiet,-q", opts.quiet, "No progress counter");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace lensbeam::tool;

  CLI::App app{"Beamspace channel tracking simulator (UKF / EKF)"};
  app.set_version_flag("--version", lensbeam::cli::version_string());
  app.require_subcommand(1);

  RunOptions run_opts;
  std::string run_out;
  auto* run = app.add_subcommand("run", "Run a Monte Carlo experiment");
  add_run_flags(run, run_opts, run_out);

  RunOptions cmp_opts;
  std::string cmp_out;
  auto* compare = app.add_subcommand("compare", "Run UKF and EKF on common random numbers");
  add_run_flags(compare, cmp_opts, cmp_out);

  SweepOptions sweep_opts;
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Repeat a run over values of one key");
  add_run_flags(sweep, sweep_opts.run, sweep_out);
  sweep->add_option("--param,-p", sweep_opts.param, "Config key to vary")->required();
  sweep->add_option("--values,-v", sweep_opts.values, "Comma-separated values")
      ->required()
      ->delimiter(',');

  auto* selftest = app.add_subcommand("selftest", "Run the built-in invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  auto resolve = [](const std::string& flag) {
    return flag.empty() ? default_out_dir() : std::filesystem::path(flag);
  };
  if (run->parsed()) {
    run_opts.out_dir = resolve(run_out);
    return cmd_run(run_opts, false, std::cout, std::cerr);
  }
  if (compare->parsed()) {
    cmp_opts.out_dir = resolve(cmp_out);
    return cmd_run(cmp_opts, true, std::cout, std::cerr);
  }
  if (sweep->parsed()) {
    sweep_opts.run.out_dir = resolve(sweep_out);
    return cmd_sweep(sweep_opts, std::cout, std::cerr);
  }
  if (selftest->parsed()) {
    return cmd_selftest(std::cout);
  }
  return kValidation;
}
