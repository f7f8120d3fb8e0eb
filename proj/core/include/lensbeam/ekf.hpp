#pragma once

// Extended Kalman filter baseline with central-difference Jacobians.

#include <Eigen/Dense>

#include "lensbeam/channel.hpp"
#include "lensbeam/filter_types.hpp"

namespace lensbeam::filter {

inline constexpr double kJacobianStep = 1e-6;

/// d g / d x at `x` by central differences, one coordinate at a time.
Eigen::MatrixXd numeric_jacobian(const ObservationModel& model, const Eigen::VectorXd& x,
                                 double step = kJacobianStep);

/// Linear predict (A x + b, A Sigma A^T + Q) followed by a linearized update
/// about the predicted mean.
FilterState ekf_step(const FilterState& state, const LinearProcess& process,
                     const ObservationModel& model, const Eigen::VectorXd& y);

/// Stacked path states: A = blockdiag(rho, rho, 1, 1).
FilterState ekf_step(const FilterState& state, const channel::EvolutionParams& evo,
                     const Eigen::MatrixXd& q, const ObservationModel& model,
                     const Eigen::VectorXd& y);

}  // namespace lensbeam::filter
