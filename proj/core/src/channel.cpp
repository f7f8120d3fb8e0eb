#include "lensbeam/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lensbeam/errors.hpp"

namespace lensbeam::channel {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDirichletSingularity = 1e-12;

// Element offset q for index n of an N-element array centred at zero.
double centred_index(int n, int n_elements) { return n - 0.5 * (n_elements - 1); }

}  // namespace

void ArrayGeometry::validate() const {
  if (n_elements < 1) {
    throw ConfigError("array geometry: n_elements must be >= 1, got " +
                      std::to_string(n_elements));
  }
  if (!(spacing_ratio > 0.0) || !std::isfinite(spacing_ratio)) {
    throw ConfigError("array geometry: spacing_ratio must be finite and > 0");
  }
}

void EvolutionParams::validate() const {
  if (!(rho > 0.0 && rho <= 1.0)) {
    throw ConfigError("evolution: rho must lie in (0, 1], got " + std::to_string(rho));
  }
  if (!(sigma2_a >= 0.0) || !(sigma2_d >= 0.0) || !std::isfinite(sigma2_a) ||
      !std::isfinite(sigma2_d)) {
    throw ConfigError("evolution: angle variances must be finite and non-negative");
  }
}

Eigen::VectorXcd steering_vector(const ArrayGeometry& geom, double theta) {
  const int n = geom.n_elements;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const double phase_step = -2.0 * kPi * geom.spacing_ratio * std::sin(theta);
  Eigen::VectorXcd a(n);
  for (int i = 0; i < n; ++i) {
    a(i) = scale * std::polar(1.0, phase_step * centred_index(i, n));
  }
  return a;
}

double virtual_angle(int n, int index) { return (index - 0.5 * (n + 1)) / n; }

Eigen::MatrixXcd dft_matrix(int n) {
  if (n < 1) {
    throw ConfigError("dft_matrix: size must be >= 1");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  Eigen::MatrixXcd u(n, n);
  for (int row = 0; row < n; ++row) {
    const double psi = virtual_angle(n, row);
    for (int col = 0; col < n; ++col) {
      // conj(exp(-j 2 pi psi q)) = exp(+j 2 pi psi q)
      u(row, col) = scale * std::polar(1.0, 2.0 * kPi * psi * centred_index(col, n));
    }
  }
  return u;
}

Eigen::MatrixXcd spatial_channel(const ArrayGeometry& rx, const ArrayGeometry& tx,
                                 const UserChannel& chan) {
  rx.validate();
  tx.validate();
  if (chan.paths.empty()) {
    throw ConfigError("spatial_channel: channel must have at least one path");
  }
  const double scale =
      std::sqrt(static_cast<double>(rx.n_elements) * tx.n_elements / chan.n_paths());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(rx.n_elements, tx.n_elements);
  for (const auto& path : chan.paths) {
    const Eigen::VectorXcd a_rx = steering_vector(rx, path.theta_a);
    const Eigen::VectorXcd a_tx = steering_vector(tx, path.theta_d);
    h.noalias() += path.gain() * (a_rx * a_tx.adjoint());
  }
  return scale * h;
}

BeamspaceChannel beamspace_transform(const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& u_rx,
                                     const Eigen::MatrixXcd& u_tx) {
  if (u_rx.rows() != u_rx.cols() || u_tx.rows() != u_tx.cols() || u_rx.cols() != h.rows() ||
      u_tx.cols() != h.cols()) {
    throw ConfigError("beamspace_transform: dimension mismatch (H is " +
                      std::to_string(h.rows()) + "x" + std::to_string(h.cols()) + ", U_rx " +
                      std::to_string(u_rx.rows()) + "x" + std::to_string(u_rx.cols()) +
                      ", U_tx " + std::to_string(u_tx.rows()) + "x" +
                      std::to_string(u_tx.cols()) + ")");
  }
  return BeamspaceChannel{u_rx * h * u_tx.adjoint()};
}

double dirichlet(int n, double phi) {
  // phi = k + eps with eps exact; D_n(k + eps) = (-1)^{k (n - 1)} D_n(eps).
  const double k = std::nearbyint(phi);
  const double eps = phi - k;
  const bool flip = std::fmod(std::abs(k), 2.0) == 1.0 && (n - 1) % 2 != 0;
  const double sign = flip ? -1.0 : 1.0;
  const double denom = std::sin(kPi * eps);
  if (std::abs(denom) < kDirichletSingularity) {
    return sign * n;
  }
  return sign * std::sin(kPi * n * eps) / denom;
}

Complex beamspace_element(double phi_a, double phi_d, double psi_t, double psi_r, int n_t,
                          int n_r) {
  const double rx_gain = dirichlet(n_r, phi_a - psi_r);
  Complex sum{0.0, 0.0};
  for (int i = 0; i < n_t; ++i) {
    const double q = centred_index(i, n_t);
    sum += std::polar(1.0, -2.0 * kPi * (psi_t - phi_d) * q);
  }
  return sum * rx_gain;
}

BeamspaceFrame::BeamspaceFrame(ArrayGeometry rx_geom, ArrayGeometry tx_geom)
    : rx(rx_geom), tx(tx_geom) {
  rx.validate();
  tx.validate();
  u_rx = dft_matrix(rx.n_elements);
  u_tx = dft_matrix(tx.n_elements);
}

BeamspaceChannel BeamspaceFrame::beamspace(const UserChannel& chan) const {
  return beamspace_transform(spatial_channel(rx, tx, chan), u_rx, u_tx);
}

Complex BeamspaceFrame::entry(const double* path_params, int n_paths, int row, int col) const {
  const int n_r = rx.n_elements;
  const int n_t = tx.n_elements;
  const double psi_r = virtual_angle(n_r, row);
  const double psi_t = virtual_angle(n_t, col);
  // [U a]_v = D_N(phi - psi_v) / N, real for a centred array.
  const double scale = std::sqrt(static_cast<double>(n_r) * n_t / n_paths) / (n_r * n_t);
  Complex sum{0.0, 0.0};
  for (int l = 0; l < n_paths; ++l) {
    const double* p = path_params + kParamsPerPath * l;
    const double phi_a = rx.spacing_ratio * std::sin(p[kThetaA]);
    const double phi_d = tx.spacing_ratio * std::sin(p[kThetaD]);
    const double pattern = dirichlet(n_r, phi_a - psi_r) * dirichlet(n_t, phi_d - psi_t);
    sum += Complex(p[kAlphaRe], p[kAlphaIm]) * pattern;
  }
  return scale * sum;
}

Complex BeamspaceFrame::entry(const UserChannel& chan, int row, int col) const {
  const Eigen::VectorXd x = to_state_vector(chan);
  return entry(x.data(), chan.n_paths(), row, col);
}

UserChannel evolve(const UserChannel& chan, const EvolutionParams& params, Rng& rng) {
  const double gain_half_var = 0.5 * params.gain_innovation_variance();
  UserChannel next = chan;
  for (auto& path : next.paths) {
    const double zeta_re = gaussian(rng, gain_half_var);
    const double zeta_im = gaussian(rng, gain_half_var);
    const double xi_a = gaussian(rng, params.sigma2_a);
    const double xi_d = gaussian(rng, params.sigma2_d);
    path.alpha_re = params.rho * path.alpha_re + zeta_re;
    path.alpha_im = params.rho * path.alpha_im + zeta_im;
    path.theta_a += xi_a;
    path.theta_d += xi_d;
  }
  return next;
}

Eigen::MatrixXd process_noise_cov(const EvolutionParams& params, int n_paths) {
  const int m = kParamsPerPath * n_paths;
  Eigen::VectorXd diag(m);
  const double gain_half_var = 0.5 * params.gain_innovation_variance();
  for (int l = 0; l < n_paths; ++l) {
    diag(kParamsPerPath * l + kAlphaRe) = gain_half_var;
    diag(kParamsPerPath * l + kAlphaIm) = gain_half_var;
    diag(kParamsPerPath * l + kThetaD) = params.sigma2_d;
    diag(kParamsPerPath * l + kThetaA) = params.sigma2_a;
  }
  return diag.asDiagonal();
}

Eigen::MatrixXd transition_matrix(const EvolutionParams& params, int n_paths) {
  Eigen::VectorXd diag = Eigen::VectorXd::Ones(kParamsPerPath * n_paths);
  for (int l = 0; l < n_paths; ++l) {
    diag(kParamsPerPath * l + kAlphaRe) = params.rho;
    diag(kParamsPerPath * l + kAlphaIm) = params.rho;
  }
  return diag.asDiagonal();
}

UserChannel draw_initial_channel(int n_paths, Rng& rng) {
  std::uniform_real_distribution<double> angle(0.0, kPi);
  UserChannel chan;
  chan.paths.reserve(n_paths);
  for (int l = 0; l < n_paths; ++l) {
    PathState p;
    const Complex alpha = complex_gaussian(rng, 1.0);
    p.alpha_re = alpha.real();
    p.alpha_im = alpha.imag();
    p.theta_a = angle(rng);
    p.theta_d = angle(rng);
    chan.paths.push_back(p);
  }
  return chan;
}

void append_state(const UserChannel& chan, Eigen::VectorXd& out, int offset) {
  for (int l = 0; l < chan.n_paths(); ++l) {
    const auto& p = chan.paths[l];
    const int base = offset + kParamsPerPath * l;
    out(base + kAlphaRe) = p.alpha_re;
    out(base + kAlphaIm) = p.alpha_im;
    out(base + kThetaD) = p.theta_d;
    out(base + kThetaA) = p.theta_a;
  }
}

Eigen::VectorXd to_state_vector(const UserChannel& chan) {
  Eigen::VectorXd x(kParamsPerPath * chan.n_paths());
  append_state(chan, x, 0);
  return x;
}

UserChannel from_state_vector(const Eigen::VectorXd& x, int offset, int n_paths) {
  UserChannel chan;
  chan.paths.resize(n_paths);
  for (int l = 0; l < n_paths; ++l) {
    const int base = offset + kParamsPerPath * l;
    chan.paths[l] = PathState{x(base + kAlphaRe), x(base + kAlphaIm), x(base + kThetaA),
                              x(base + kThetaD)};
  }
  return chan;
}

}  // namespace lensbeam::channel
