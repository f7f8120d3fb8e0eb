#pragma once

// Scaled unscented transform and the unscented Kalman filter built on it.
//
// Spread is controlled by gamma and kappa through
//   Lambda = gamma^2 (m + kappa) - m,
// with weights
//   w_mean[0] = Lambda / (Lambda + m)
//   w_cov[0]  = Lambda / (Lambda + m) + (1 - gamma^2 + beta)
//   w_mean[i] = w_cov[i] = 1 / (2 (m + Lambda)),  i = 1..2m.
// Lambda + m must be strictly positive so that the square root is real.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lensbeam/channel.hpp"
#include "lensbeam/filter_types.hpp"

namespace lensbeam::filter {

struct UtParams {
  double gamma = 1.0;
  double kappa = 0.0;
  double beta = 2.0;

  double lambda(int m) const { return gamma * gamma * (m + kappa) - m; }
  /// m + Lambda = gamma^2 (m + kappa).
  double spread(int m) const { return gamma * gamma * (m + kappa); }
  /// Throws InvalidParameterError unless m + Lambda > 0.
  void validate(int m) const;

  friend bool operator==(const UtParams&, const UtParams&) = default;
};

struct UtWeights {
  Eigen::VectorXd mean;
  Eigen::VectorXd cov;
};

/// 2m+1 sigma points stored column-wise.
struct SigmaSet {
  Eigen::MatrixXd points;
  Eigen::VectorXd w_mean;
  Eigen::VectorXd w_cov;

  int size() const { return static_cast<int>(points.cols()); }
  /// Taken about the central point, so coincident points give it back exactly.
  Eigen::VectorXd weighted_mean() const;
  /// sum_i w_cov[i] (chi_i - center)(chi_i - center)^T
  Eigen::MatrixXd weighted_cov(const Eigen::VectorXd& center) const;
};

UtWeights compute_weights(int m, const UtParams& p);

/// Lower-triangular L with L L^T = symmetrized(s). Exact zero pivots of a
/// positive semidefinite matrix are accepted; otherwise jitter eps I is added
/// with eps = 1e-10, 1e-9, ... up to 1e-4 before giving up with NumericalError.
Eigen::MatrixXd lower_factor(const Eigen::MatrixXd& s);

SigmaSet sigma_points(const FilterState& state, const UtParams& p);

/// Unscented time update through an arbitrary deterministic map plus additive q.
FilterState unscented_predict(const FilterState& state, const VectorMap& f,
                              const Eigen::MatrixXd& q, const UtParams& p);

/// Time update for stacked path states: gains scaled by rho, angles unchanged.
FilterState ukf_predict(const FilterState& state, const channel::EvolutionParams& evo,
                        const Eigen::MatrixXd& q, const UtParams& p);

FilterState ukf_predict(const FilterState& state, const LinearProcess& process,
                        const UtParams& p);

/// Observation-side unscented moments.
struct ObservationMoments {
  Eigen::MatrixXd transformed;  ///< obs_dim x (2m+1)
  Eigen::VectorXd mean;         ///< z_bar
  Eigen::MatrixXd cov;          ///< Sigma_z including R
  Eigen::MatrixXd cross;        ///< Sigma_xz
};

ObservationMoments observation_moments(const SigmaSet& sigma, const ObservationModel& model);

/// Sign of the gain term in the posterior covariance. `subtract_gain` is the
/// standard unscented update; `add_gain` is kept only for ablation.
enum class CovarianceUpdate { subtract_gain, add_gain };

/// Measurement update: x = x_bar + K (y - z_bar), Sigma = Sigma_bar -/+ K Sigma_z K^T,
/// K = Sigma_xz Sigma_z^{-1}. `sigma` must be drawn from `pred`.
FilterState ukf_update(const FilterState& pred, const SigmaSet& sigma,
                       const ObservationModel& model, const Eigen::VectorXd& y,
                       CovarianceUpdate form = CovarianceUpdate::subtract_gain);

/// || y - z_bar ||^2 with z_bar the unscented observation mean of `state`.
double spread_objective(const FilterState& state, const ObservationModel& model,
                        const Eigen::VectorXd& y, const UtParams& p);

/// Grid candidate minimizing spread_objective; ties keep the earliest.
UtParams optimize_spread(const FilterState& state, const ObservationModel& model,
                         const Eigen::VectorXd& y, std::span<const UtParams> grid);

/// Same search where each candidate first runs the time update from `prior`,
/// so z_bar is the predicted observation mean under that candidate.
UtParams optimize_spread(const FilterState& prior, const LinearProcess& process,
                         const ObservationModel& model, const Eigen::VectorXd& y,
                         std::span<const UtParams> grid);

/// Cartesian product gammas x kappas (gamma-major), filtered to Lambda + m > 0.
std::vector<UtParams> make_spread_grid(std::span<const double> gammas,
                                       std::span<const double> kappas, double beta, int m);

/// gamma in {0.1, ..., 1.0} x kappa in {0, 0.5, 1, 2, 3}.
std::vector<UtParams> default_spread_grid(int m, double beta = 2.0);

}  // namespace lensbeam::filter
