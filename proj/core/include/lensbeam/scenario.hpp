#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lensbeam/channel.hpp"
#include "lensbeam/unscented.hpp"

namespace lensbeam::sim {

enum class LinkMode { downlink, uplink };
enum class FilterSelection { ukf, ekf, both };

std::string_view to_string(LinkMode mode);
std::string_view to_string(FilterSelection selection);

/// One experiment. Defaults follow the downlink table; `table_defaults`
/// switches to the uplink table for LinkMode::uplink.
struct ScenarioConfig {
  LinkMode mode = LinkMode::downlink;
  int n_bs = 16;
  int n_ue = 8;
  double spacing_ratio = 0.5;
  /// Recorded only; just d / lambda enters the model.
  double carrier_ghz = 28.0;
  int k_users = 1;
  int paths_tracked_user = 1;
  int paths_other_users = 1;
  /// sigma_A^2 = sigma_D^2 [rad^2 per slot]
  double sigma2 = 0.0625;
  double rho = 0.99;
  /// +inf gives a noiseless link.
  double snr_db = 20.0;
  int n_slots = 20;
  int n_runs = 1000;
  std::uint64_t seed = 1;
  FilterSelection filter = FilterSelection::ukf;
  std::vector<double> ut_gamma{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<double> ut_kappa{0.0, 0.5, 1.0, 2.0, 3.0};
  double ut_beta = 2.0;
  /// Per-user average path loss; empty means 1 for every user.
  std::vector<double> path_loss;

  static ScenarioConfig table_defaults(LinkMode mode);

  /// Throws ConfigError naming the offending field.
  void validate() const;

  channel::EvolutionParams evolution() const { return {rho, sigma2, sigma2}; }
  /// Paths in the joint tracking state (DL: the tracked user's, UL: one per user).
  int tracked_paths() const;
  int state_dim() const { return channel::kParamsPerPath * tracked_paths(); }
  std::vector<filter::UtParams> spread_grid() const;
  std::vector<double> resolved_path_loss() const;
  /// Pilot power reference N_t N_r / L for the SNR definition.
  double reference_power() const;
  double noise_var() const;
  bool runs_ukf() const { return filter != FilterSelection::ekf; }
  bool runs_ekf() const { return filter != FilterSelection::ukf; }
};

/// Canonical `key = value` text with [sections]; parses back to the same config.
std::string canonical_text(const ScenarioConfig& cfg);
std::uint64_t config_hash(const ScenarioConfig& cfg);

}  // namespace lensbeam::sim
