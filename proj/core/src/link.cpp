#include "lensbeam/link.hpp"

#include <cmath>
#include <string>

#include "lensbeam/errors.hpp"

namespace lensbeam::link {

void BeamSelector::validate() const {
  if (length < 1 || index < 0 || index >= length) {
    throw ConfigError("beam selector: index " + std::to_string(index) +
                      " out of range for length " + std::to_string(length));
  }
}

Eigen::VectorXcd BeamSelector::vector() const {
  validate();
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(length);
  v(index) = 1.0;
  return v;
}

LinkConfig LinkConfig::uniform(int n_users, double noise_var) {
  LinkConfig cfg;
  cfg.n_users = n_users;
  cfg.noise_var = noise_var;
  cfg.path_loss.assign(n_users, 1.0);
  cfg.pilots.assign(n_users, Complex{1.0, 0.0});
  return cfg;
}

void LinkConfig::validate() const {
  if (n_users < 1) {
    throw ConfigError("link: n_users must be >= 1");
  }
  if (!(noise_var >= 0.0) || !std::isfinite(noise_var)) {
    throw ConfigError("link: noise_var must be finite and non-negative");
  }
  if (static_cast<int>(path_loss.size()) != n_users ||
      static_cast<int>(pilots.size()) != n_users) {
    throw ConfigError("link: path_loss and pilots must have one entry per user");
  }
  for (double rho : path_loss) {
    if (!(rho > 0.0) || !std::isfinite(rho)) {
      throw ConfigError("link: path loss must be finite and > 0");
    }
  }
  for (const auto& s : pilots) {
    if (std::abs(std::abs(s) - 1.0) > 1e-12) {
      throw ConfigError("link: pilots must have unit magnitude");
    }
  }
}

BeamPair select_beams(const BeamspaceChannel& hb) {
  const auto& m = hb.entries;
  double best = 0.0;
  int best_row = -1;
  int best_col = -1;
  // Row-major scan with strict comparison keeps the first maximum in
  // (row, col) lexicographic order.
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      const double mag = std::norm(m(r, c));
      if (mag > best) {
        best = mag;
        best_row = r;
        best_col = c;
      }
    }
  }
  if (best_row < 0) {
    throw DegenerateChannelError("select_beams: beamspace channel is identically zero");
  }
  return BeamPair{BeamSelector{best_row, static_cast<int>(m.rows())},
                  BeamSelector{best_col, static_cast<int>(m.cols())}};
}

Eigen::VectorXcd draw_noise(int n, double noise_var, Rng& rng) {
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) {
    v(i) = complex_gaussian(rng, noise_var);
  }
  return v;
}

Complex dl_received(int k, std::span<const BeamspaceChannel> channels,
                    std::span<const BeamSelector> precoders, const BeamSelector& combiner,
                    const LinkConfig& cfg, Rng& rng) {
  cfg.validate();
  if (k < 0 || k >= cfg.n_users || static_cast<int>(channels.size()) != cfg.n_users ||
      static_cast<int>(precoders.size()) != cfg.n_users) {
    throw ConfigError("dl_received: user index or per-user inputs do not match n_users");
  }
  const auto& hb = channels[k].entries;
  combiner.validate();
  if (combiner.length != hb.rows()) {
    throw ConfigError("dl_received: combiner length does not match receive beams");
  }
  Complex y{0.0, 0.0};
  for (int i = 0; i < cfg.n_users; ++i) {
    precoders[i].validate();
    if (precoders[i].length != hb.cols()) {
      throw ConfigError("dl_received: precoder length does not match transmit beams");
    }
    y += hb(combiner.index, precoders[i].index) * cfg.pilots[i];
  }
  const Eigen::VectorXcd v = draw_noise(static_cast<int>(hb.rows()), cfg.noise_var, rng);
  return y + v(combiner.index);
}

Eigen::VectorXcd ul_received(std::span<const BeamspaceChannel> channels,
                             std::span<const BeamSelector> combiners,
                             std::span<const BeamSelector> precoders, const LinkConfig& cfg,
                             Rng& rng) {
  cfg.validate();
  const int n_users = cfg.n_users;
  if (static_cast<int>(channels.size()) != n_users ||
      static_cast<int>(combiners.size()) != n_users ||
      static_cast<int>(precoders.size()) != n_users) {
    throw ConfigError("ul_received: expected " + std::to_string(n_users) +
                      " channels, combiners and precoders");
  }
  const int n_bs = channels[0].rows();
  for (int i = 0; i < n_users; ++i) {
    combiners[i].validate();
    precoders[i].validate();
    if (channels[i].rows() != n_bs || combiners[i].length != n_bs ||
        precoders[i].length != channels[i].cols()) {
      throw ConfigError("ul_received: dimension mismatch for user " + std::to_string(i));
    }
  }
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(n_users);
  for (int j = 0; j < n_users; ++j) {
    for (int i = 0; i < n_users; ++i) {
      const double d = 1.0 / std::sqrt(cfg.path_loss[i]);
      y(j) += channels[i].entries(combiners[j].index, precoders[i].index) * d * cfg.pilots[i];
    }
  }
  const Eigen::VectorXcd v = draw_noise(n_bs, cfg.noise_var, rng);
  for (int j = 0; j < n_users; ++j) {
    y(j) += v(combiners[j].index);
  }
  return y;
}

double snr_to_noise_var(double snr_db, double ref_power) {
  if (!(ref_power > 0.0)) {
    throw InvalidParameterError("snr_to_noise_var: ref_power must be > 0");
  }
  return ref_power * std::pow(10.0, -snr_db / 10.0);
}

double reference_power(int n_t, int n_r, int n_paths) {
  return static_cast<double>(n_t) * n_r / n_paths;
}

}  // namespace lensbeam::link
