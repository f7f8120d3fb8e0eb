#pragma once

// One-hot beam selection (lens-array switch model) and noisy pilot
// observations for the downlink and uplink.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lensbeam/channel.hpp"
#include "lensbeam/random.hpp"

namespace lensbeam::link {

using channel::BeamspaceChannel;
using channel::Complex;

/// Switch selection of a single beam out of `length`.
struct BeamSelector {
  int index = 0;
  int length = 1;

  void validate() const;
  /// Realized one-hot vector.
  Eigen::VectorXcd vector() const;
};

struct BeamPair {
  BeamSelector rx;  ///< combiner side (rows of H_b)
  BeamSelector tx;  ///< precoder side (columns of H_b)
};

struct LinkConfig {
  int n_users = 1;
  /// Total complex noise variance per receive beam, sigma_v^2.
  double noise_var = 0.0;
  /// Average path loss rho_k per user (uplink scaling 1/sqrt(rho_k)).
  std::vector<double> path_loss;
  /// Pilot symbol per user; unit magnitude.
  std::vector<Complex> pilots;

  /// K users, unit path loss, unit pilots.
  static LinkConfig uniform(int n_users, double noise_var);
  void validate() const;
};

/// Dominant entry of H_b; ties resolved by smallest row, then smallest column.
/// Throws DegenerateChannelError on an all-zero matrix.
BeamPair select_beams(const BeamspaceChannel& hb);

/// Receiver noise vector with i.i.d. CN(0, noise_var) entries.
Eigen::VectorXcd draw_noise(int n, double noise_var, Rng& rng);

/// Downlink pilot at user k:
///   w^H H_b,k p_k s_k + sum_{i != k} w^H H_b,k p_i s_i + w^H v.
/// Interference is carried by user k's own channel. Draws one noise vector
/// of length rows(H_b,k).
Complex dl_received(int k, std::span<const BeamspaceChannel> channels,
                    std::span<const BeamSelector> precoders, const BeamSelector& combiner,
                    const LinkConfig& cfg, Rng& rng);

/// Uplink pilots at the BS: W^H [H_b,1 ... H_b,K] blkdiag(p_1..p_K) D s + W^H v,
/// with D = diag(1/sqrt(rho_k)). Draws one noise vector of length N_BS.
Eigen::VectorXcd ul_received(std::span<const BeamspaceChannel> channels,
                             std::span<const BeamSelector> combiners,
                             std::span<const BeamSelector> precoders, const LinkConfig& cfg,
                             Rng& rng);

/// sigma_v^2 = ref_power 10^(-snr_db / 10).
double snr_to_noise_var(double snr_db, double ref_power);

/// Mean received pilot power on the selected beam for unit-variance gains:
/// N_t N_r / L.
double reference_power(int n_t, int n_r, int n_paths);

}  // namespace lensbeam::link
