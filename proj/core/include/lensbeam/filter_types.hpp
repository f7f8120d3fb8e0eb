#pragma once

#include <functional>

#include <Eigen/Dense>

namespace lensbeam::filter {

/// Gaussian belief over the stacked path parameters.
struct FilterState {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  int dim() const { return static_cast<int>(mean.size()); }
  /// Throws ConfigError if sizes disagree or the covariance is not symmetric.
  void validate() const;
};

using VectorMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Real-valued observation map. Complex outputs are stacked as
/// (re_0 .. re_{n-1}, im_0 .. im_{n-1}).
struct ObservationModel {
  VectorMap map;
  int obs_dim = 0;
  Eigen::MatrixXd noise_cov;  ///< R, obs_dim x obs_dim

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const { return map(x); }
};

/// x_t = transition x_{t-1} + offset + u, u ~ N(0, noise_cov).
struct LinearProcess {
  Eigen::MatrixXd transition;
  Eigen::VectorXd offset;  ///< empty means zero
  Eigen::MatrixXd noise_cov;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
};

/// Symmetric part (A + A^T) / 2.
Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& a);

/// Smallest eigenvalue of the symmetric part of `a`.
double min_eigenvalue(const Eigen::MatrixXd& a);

/// True when `cov` is symmetric within 1e-10 and its smallest eigenvalue is
/// at least -1e-9.
bool covariance_healthy(const Eigen::MatrixXd& cov);

}  // namespace lensbeam::filter
