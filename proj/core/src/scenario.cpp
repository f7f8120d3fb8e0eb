#include "lensbeam/scenario.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "lensbeam/errors.hpp"
#include "lensbeam/format.hpp"
#include "lensbeam/link.hpp"

namespace lensbeam::sim {

namespace {

[[noreturn]] void field_error(std::string_view field, const std::string& what) {
  throw ConfigError("field '" + std::string(field) + "': " + what);
}

void require_positive(std::string_view field, long long value) {
  if (value < 1) {
    field_error(field, "must be >= 1 (got " + std::to_string(value) + ")");
  }
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) {
      out += ", ";
    }
    out += format_double(values[i]);
  }
  return out;
}

}  // namespace

std::string_view to_string(LinkMode mode) { return mode == LinkMode::downlink ? "dl" : "ul"; }

std::string_view to_string(FilterSelection selection) {
  switch (selection) {
    case FilterSelection::ukf:
      return "ukf";
    case FilterSelection::ekf:
      return "ekf";
    case FilterSelection::both:
      return "both";
  }
  return "ukf";
}

ScenarioConfig ScenarioConfig::table_defaults(LinkMode mode) {
  ScenarioConfig cfg;
  cfg.mode = mode;
  if (mode == LinkMode::uplink) {
    cfg.k_users = 4;
    cfg.sigma2 = 0.1225;
    cfg.snr_db = 0.0;
  }
  return cfg;
}

void ScenarioConfig::validate() const {
  require_positive("n_bs", n_bs);
  require_positive("n_ue", n_ue);
  if (!(spacing_ratio > 0.0) || !std::isfinite(spacing_ratio)) {
    field_error("spacing_ratio", "must be finite and > 0");
  }
  if (!(carrier_ghz > 0.0) || !std::isfinite(carrier_ghz)) {
    field_error("carrier_ghz", "must be finite and > 0");
  }
  require_positive("k_users", k_users);
  require_positive("paths_tracked_user", paths_tracked_user);
  require_positive("paths_other_users", paths_other_users);
  if (mode == LinkMode::uplink && paths_tracked_user != 1) {
    field_error("paths_tracked_user", "uplink tracking supports exactly one path per user");
  }
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
    field_error("sigma2", "must be finite and >= 0");
  }
  if (!(rho > 0.0 && rho <= 1.0)) {
    field_error("rho", "must lie in (0, 1]");
  }
  if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity()) {
    field_error("snr_db", "must be a number or +inf");
  }
  require_positive("n_slots", n_slots);
  require_positive("n_runs", n_runs);
  if (ut_gamma.empty()) {
    field_error("ut_gamma", "must list at least one value");
  }
  for (double g : ut_gamma) {
    if (!(g > 0.0 && g <= 1.0)) {
      field_error("ut_gamma", "values must lie in (0, 1]");
    }
  }
  if (ut_kappa.empty()) {
    field_error("ut_kappa", "must list at least one value");
  }
  for (double k : ut_kappa) {
    if (!(k >= 0.0) || !std::isfinite(k)) {
      field_error("ut_kappa", "values must be finite and >= 0");
    }
  }
  if (!std::isfinite(ut_beta)) {
    field_error("ut_beta", "must be finite");
  }
  if (!path_loss.empty()) {
    if (static_cast<int>(path_loss.size()) != k_users) {
      field_error("path_loss", "needs one value per user (" + std::to_string(k_users) + ")");
    }
    for (double p : path_loss) {
      if (!(p > 0.0) || !std::isfinite(p)) {
        field_error("path_loss", "values must be finite and > 0");
      }
    }
  }
}

int ScenarioConfig::tracked_paths() const {
  return mode == LinkMode::downlink ? paths_tracked_user : k_users;
}

std::vector<filter::UtParams> ScenarioConfig::spread_grid() const {
  return filter::make_spread_grid(ut_gamma, ut_kappa, ut_beta, state_dim());
}

std::vector<double> ScenarioConfig::resolved_path_loss() const {
  return path_loss.empty() ? std::vector<double>(k_users, 1.0) : path_loss;
}

double ScenarioConfig::reference_power() const {
  const int paths = mode == LinkMode::downlink ? paths_tracked_user : 1;
  return link::reference_power(n_bs, n_ue, paths);
}

double ScenarioConfig::noise_var() const {
  return link::snr_to_noise_var(snr_db, reference_power());
}

std::string canonical_text(const ScenarioConfig& cfg) {
  std::ostringstream os;
  os << "mode = " << to_string(cfg.mode) << "\n";
  os << "\n[array]\n";
  os << "n_bs = " << cfg.n_bs << "\n";
  os << "n_ue = " << cfg.n_ue << "\n";
  os << "spacing_ratio = " << format_double(cfg.spacing_ratio) << "\n";
  os << "carrier_ghz = " << format_double(cfg.carrier_ghz) << "\n";
  os << "\n[channel]\n";
  os << "k_users = " << cfg.k_users << "\n";
  os << "paths_tracked_user = " << cfg.paths_tracked_user << "\n";
  os << "paths_other_users = " << cfg.paths_other_users << "\n";
  os << "sigma2 = " << format_double(cfg.sigma2) << "\n";
  os << "rho = " << format_double(cfg.rho) << "\n";
  os << "snr_db = " << format_double(cfg.snr_db) << "\n";
  os << "path_loss = " << join(cfg.path_loss) << "\n";
  os << "\n[filter]\n";
  os << "filter = " << to_string(cfg.filter) << "\n";
  os << "ut_gamma = " << join(cfg.ut_gamma) << "\n";
  os << "ut_kappa = " << join(cfg.ut_kappa) << "\n";
  os << "ut_beta = " << format_double(cfg.ut_beta) << "\n";
  os << "\n[run]\n";
  os << "n_slots = " << cfg.n_slots << "\n";
  os << "n_runs = " << cfg.n_runs << "\n";
  os << "seed = " << cfg.seed << "\n";
  return os.str();
}

std::uint64_t config_hash(const ScenarioConfig& cfg) {
  Fnv1a h;
  h.update(canonical_text(cfg));
  return h.value();
}

}  // namespace lensbeam::sim
