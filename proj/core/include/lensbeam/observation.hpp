#pragma once

// Beamspace pilot observation maps used by the trackers. Each complex
// observation is split into (real, imaginary) parts with R = (sigma_v^2 / 2) I.

#include <memory>
#include <vector>

#include "lensbeam/channel.hpp"
#include "lensbeam/filter_types.hpp"
#include "lensbeam/link.hpp"

namespace lensbeam::filter {

/// Downlink: state holds the tracked user's paths; g(x) = w^H H_b,k(x) p_k.
struct DlObservationParams {
  std::shared_ptr<const channel::BeamspaceFrame> frame;  ///< rx = UE array, tx = BS array
  link::BeamSelector combiner;
  link::BeamSelector precoder;
  double noise_var = 0.0;
};

/// Uplink: joint state of K single-path users; g(x) = W^H H_b(x) P D.
struct UlObservationParams {
  std::shared_ptr<const channel::BeamspaceFrame> frame;  ///< rx = BS array, tx = UE array
  std::vector<link::BeamSelector> combiners;
  std::vector<link::BeamSelector> precoders;
  std::vector<double> path_loss;
  double noise_var = 0.0;
};

ObservationModel dl_observation(const DlObservationParams& params);
ObservationModel ul_observation(const UlObservationParams& params);

/// Observation of one uplink user's own entry, w_j^H H_b,j(x_j) p_j / sqrt(rho_j),
/// ignoring the other users. Used by the per-user EKF baseline.
ObservationModel ul_single_user_observation(const UlObservationParams& params, int user);

/// Stack complex values as (re..., im...).
Eigen::VectorXd split_complex(const Eigen::VectorXcd& z);

}  // namespace lensbeam::filter
