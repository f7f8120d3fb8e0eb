#pragma once

// Geometric narrowband channel for uniform linear arrays, its DFT beamspace
// representation, and the per-slot stochastic evolution of path parameters.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "lensbeam/random.hpp"

namespace lensbeam::channel {

using Complex = std::complex<double>;

struct ArrayGeometry {
  int n_elements = 1;
  /// Element spacing over carrier wavelength, d / lambda.
  double spacing_ratio = 0.5;

  void validate() const;
};

/// Tracked parameters of one propagation path. Angles are kept unwrapped.
struct PathState {
  double alpha_re = 0.0;
  double alpha_im = 0.0;
  double theta_a = 0.0;  ///< angle of arrival [rad]
  double theta_d = 0.0;  ///< angle of departure [rad]

  Complex gain() const { return {alpha_re, alpha_im}; }
};

/// Paths between one UE and the BS. The path count is fixed per episode.
struct UserChannel {
  std::vector<PathState> paths;

  int n_paths() const { return static_cast<int>(paths.size()); }
};

/// First-order Gauss-Markov gains and Gaussian random-walk angles.
struct EvolutionParams {
  double rho = 0.99;
  double sigma2_a = 0.0;  ///< AoA increment variance per slot [rad^2]
  double sigma2_d = 0.0;  ///< AoD increment variance per slot [rad^2]

  void validate() const;
  /// Total complex variance of the gain innovation, 1 - rho^2.
  double gain_innovation_variance() const { return 1.0 - rho * rho; }
};

struct BeamspaceChannel {
  Eigen::MatrixXcd entries;

  int rows() const { return static_cast<int>(entries.rows()); }
  int cols() const { return static_cast<int>(entries.cols()); }
};

/// ULA response (1/sqrt(N)) exp(-j 2 pi (d/lambda) q sin(theta)),
/// q = -(N-1)/2 ... (N-1)/2.
Eigen::VectorXcd steering_vector(const ArrayGeometry& geom, double theta);

/// Virtual angle psi_l = (l - (n+1)/2) / n of DFT beam l (0-based).
double virtual_angle(int n, int index);

/// Unitary DFT beamspace matrix; row l is (1/sqrt(n)) conj(u(psi_l)).
Eigen::MatrixXcd dft_matrix(int n);

/// sqrt(N_t N_r / L) sum_l alpha_l a_rx(theta_A,l) a_tx(theta_D,l)^H.
/// Rows index the receive array, columns the transmit array.
Eigen::MatrixXcd spatial_channel(const ArrayGeometry& rx, const ArrayGeometry& tx,
                                 const UserChannel& chan);

/// U_rx H U_tx^H. Throws ConfigError on non-conforming dimensions.
BeamspaceChannel beamspace_transform(const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& u_rx,
                                     const Eigen::MatrixXcd& u_tx);

/// Dirichlet kernel sin(pi n phi) / sin(pi phi), continuous at integer phi.
double dirichlet(int n, double phi);

/// Closed form of N_t N_r [U_r a(theta_A) a(theta_D)^H U_t^H]_{v,c} as a
/// phase-shifted Dirichlet sum over the transmit element index q:
///   sum_q exp(-j 2 pi (psi_t - phi_D) q) D_{n_r}(phi_A - psi_r),
/// where phi_X = (d/lambda) sin(theta_X).
Complex beamspace_element(double phi_a, double phi_d, double psi_t, double psi_r, int n_t,
                          int n_r);

/// Receive and transmit arrays together with their DFT matrices.
struct BeamspaceFrame {
  ArrayGeometry rx;
  ArrayGeometry tx;
  Eigen::MatrixXcd u_rx;
  Eigen::MatrixXcd u_tx;

  BeamspaceFrame(ArrayGeometry rx_geom, ArrayGeometry tx_geom);

  int n_rx() const { return rx.n_elements; }
  int n_tx() const { return tx.n_elements; }

  /// Full beamspace channel of `chan`.
  BeamspaceChannel beamspace(const UserChannel& chan) const;

  /// Entry (row, col) of the beamspace channel built from per-path parameters
  /// stored contiguously as (alpha_re, alpha_im, theta_d, theta_a) blocks.
  /// Equivalent to beamspace(chan).entries(row, col) without forming the matrix.
  Complex entry(const double* path_params, int n_paths, int row, int col) const;
  Complex entry(const UserChannel& chan, int row, int col) const;
};

/// One slot of evolution: alpha <- rho alpha + zeta, theta <- theta + xi.
/// Draw order per path: zeta_re, zeta_im, xi_A, xi_D.
UserChannel evolve(const UserChannel& chan, const EvolutionParams& params, Rng& rng);

/// Q = blockdiag over paths of diag((1-rho^2)/2, (1-rho^2)/2, sigma2_d, sigma2_a),
/// ordered like the per-path state block (alpha_re, alpha_im, theta_d, theta_a).
Eigen::MatrixXd process_noise_cov(const EvolutionParams& params, int n_paths);

/// Deterministic part of the state transition: blockdiag(rho, rho, 1, 1).
Eigen::MatrixXd transition_matrix(const EvolutionParams& params, int n_paths);

/// Angles U(0, pi), gains standard complex normal.
UserChannel draw_initial_channel(int n_paths, Rng& rng);

/// Per-path state layout helpers.
inline constexpr int kParamsPerPath = 4;
inline constexpr int kAlphaRe = 0;
inline constexpr int kAlphaIm = 1;
inline constexpr int kThetaD = 2;
inline constexpr int kThetaA = 3;

Eigen::VectorXd to_state_vector(const UserChannel& chan);
void append_state(const UserChannel& chan, Eigen::VectorXd& out, int offset);
UserChannel from_state_vector(const Eigen::VectorXd& x, int offset, int n_paths);

}  // namespace lensbeam::channel
