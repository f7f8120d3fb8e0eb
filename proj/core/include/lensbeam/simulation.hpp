#pragma once

// Tracking episodes, Monte Carlo aggregation and UKF/EKF comparison.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lensbeam/scenario.hpp"
#include "lensbeam/unscented.hpp"

namespace lensbeam::sim {

enum class FilterKind { ukf, ekf };

std::string_view to_string(FilterKind kind);

/// Squared errors of one tracked path at one slot.
struct PathErrors {
  double aoa = 0.0;
  double aod = 0.0;
  double gain = 0.0;  ///< |alpha_hat - alpha|^2
};

struct FilterTrace {
  FilterKind kind = FilterKind::ukf;
  /// [slot][path]
  std::vector<std::vector<PathErrors>> sq_errors;
  /// Posterior mean per slot, stacked like the truth.
  std::vector<Eigen::VectorXd> tracked;
  /// Fingerprint of every observation this filter consumed.
  std::uint64_t input_hash = 0;
  bool failed = false;
  std::string failure;
  int failed_slot = -1;
  /// Worst posterior covariance health seen (smallest eigenvalue).
  double min_cov_eigenvalue = 0.0;
};

struct RunResult {
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  int n_slots = 0;
  /// True tracked parameters per slot (slot 1 .. n_slots).
  std::vector<Eigen::VectorXd> truth;
  std::uint64_t truth_hash = 0;
  std::uint64_t observation_hash = 0;
  std::vector<FilterTrace> traces;
  /// Spread chosen at slot 1 (UKF only).
  std::optional<filter::UtParams> chosen;

  bool failed() const;
  const FilterTrace* trace(FilterKind kind) const;
};

/// One tracking episode: draw the channel, select beams, then per slot evolve
/// the truth, synthesize the pilot, and step each enabled filter. Numerical
/// failures mark the episode failed instead of throwing.
RunResult run_episode(const ScenarioConfig& cfg, std::uint64_t seed);

/// Per-slot MSE of one parameter across runs.
struct ParameterCurve {
  std::string name;
  std::vector<double> mse;
  std::vector<double> std_error;
  int n_runs = 0;

  double final_mse() const { return mse.back(); }
};

struct MseCurves {
  ParameterCurve aoa;
  ParameterCurve aod;
};

/// Mean squared AoA and AoD error per slot, averaged over tracked paths and
/// runs. Failed runs are skipped. Throws InvalidParameterError when no
/// successful run is available.
MseCurves angle_mse(std::span<const RunResult> results, FilterKind kind = FilterKind::ukf);

/// Names of the parameters reported for `cfg`: aggregates `aoa`, `aod`,
/// `gain`, then per-path `*_p<i>` entries and LoS/NLoS splits when several
/// paths are tracked.
std::vector<std::string> reported_parameters(const ScenarioConfig& cfg);

std::vector<ParameterCurve> parameter_curves(std::span<const RunResult> results,
                                             FilterKind kind,
                                             std::span<const std::string> parameters);

struct FailureTally {
  int episodes = 0;  ///< episodes excluded from averages
  int ukf = 0;
  int ekf = 0;
};

struct SpreadCount {
  filter::UtParams params;
  int count = 0;
};

struct FilterCurves {
  FilterKind kind = FilterKind::ukf;
  std::vector<ParameterCurve> curves;

  const ParameterCurve& get(std::string_view name) const;
};

struct MonteCarloResult {
  ScenarioConfig config;
  int n_runs = 0;
  int n_succeeded = 0;
  FailureTally failures;
  std::vector<FilterCurves> filters;
  /// Spread choices, most frequent first (ties by grid order).
  std::vector<SpreadCount> chosen_spread;
  /// Every filter in every run consumed the same observations and truth.
  bool common_random_numbers = true;
  /// Smallest posterior covariance eigenvalue over all successful runs.
  double min_cov_eigenvalue = 0.0;
  std::vector<RunResult> runs;  ///< filled when MonteCarloOptions::keep_runs

  const FilterCurves* curves(FilterKind kind) const;
};

struct MonteCarloOptions {
  /// Worker threads; 0 uses the hardware concurrency.
  int threads = 0;
  bool keep_runs = false;
  /// Called after each finished episode with (done, total). May be called
  /// from worker threads, serialized.
  std::function<void(int, int)> progress;
};

/// n_runs episodes with seeds episode_seed(cfg.seed, i). Results do not depend
/// on the thread count. Throws NumericalError if every episode failed.
MonteCarloResult monte_carlo(const ScenarioConfig& cfg, const MonteCarloOptions& options = {});

struct Enhancement {
  std::string parameter;
  double ukf_final = 0.0;
  double ekf_final = 0.0;
  /// (MSE_EKF - MSE_UKF) / MSE_EKF at the final slot, in percent.
  double percent = 0.0;
};

struct Comparison {
  MonteCarloResult result;
  std::vector<Enhancement> enhancement;

  const Enhancement& get(std::string_view parameter) const;
};

double enhancement_percent(double mse_ukf, double mse_ekf);

/// Requires cfg.filter == both.
Comparison compare_filters(const ScenarioConfig& cfg, const MonteCarloOptions& options = {});

/// Enhancement table of an existing both-filter result.
std::vector<Enhancement> enhancement_table(const MonteCarloResult& result);

}  // namespace lensbeam::sim
