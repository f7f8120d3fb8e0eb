#include "lensbeam/ekf.hpp"

#include "lensbeam/errors.hpp"

namespace lensbeam::filter {

Eigen::MatrixXd numeric_jacobian(const ObservationModel& model, const Eigen::VectorXd& x,
                                 double step) {
  Eigen::MatrixXd jac(model.obs_dim, x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe(i) = x(i) + step;
    const Eigen::VectorXd plus = model(probe);
    probe(i) = x(i) - step;
    const Eigen::VectorXd minus = model(probe);
    probe(i) = x(i);
    jac.col(i) = (plus - minus) / (2.0 * step);
  }
  return jac;
}

FilterState ekf_step(const FilterState& state, const LinearProcess& process,
                     const ObservationModel& model, const Eigen::VectorXd& y) {
  const Eigen::Index m = state.dim();
  if (process.transition.rows() != m || process.transition.cols() != m ||
      process.noise_cov.rows() != m || process.noise_cov.cols() != m) {
    throw ConfigError("ekf_step: process dimensions do not match the state");
  }
  if (y.size() != model.obs_dim) {
    throw ConfigError("ekf_step: observation dimensions do not conform");
  }
  FilterState pred;
  pred.mean = process.apply(state.mean);
  pred.cov = symmetrized(process.transition * state.cov * process.transition.transpose() +
                         process.noise_cov);

  const Eigen::MatrixXd jac = numeric_jacobian(model, pred.mean);
  const Eigen::MatrixXd innovation_cov =
      symmetrized(jac * pred.cov * jac.transpose() + model.noise_cov);
  const Eigen::MatrixXd cross = jac * pred.cov;
  Eigen::MatrixXd gain = Eigen::MatrixXd::Zero(m, model.obs_dim);
  if (!cross.isZero(0.0)) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(innovation_cov);
    if (!lu.isInvertible()) {
      throw NumericalError("ekf_step: innovation covariance is singular");
    }
    gain = lu.solve(cross).transpose();
  }

  FilterState post;
  post.mean = pred.mean + gain * (y - model(pred.mean));
  post.cov = symmetrized(pred.cov - gain * innovation_cov * gain.transpose());
  if (!post.mean.allFinite() || !post.cov.allFinite()) {
    throw NumericalError("ekf_step: non-finite posterior");
  }
  return post;
}

FilterState ekf_step(const FilterState& state, const channel::EvolutionParams& evo,
                     const Eigen::MatrixXd& q, const ObservationModel& model,
                     const Eigen::VectorXd& y) {
  const int n_paths = state.dim() / channel::kParamsPerPath;
  return ekf_step(state, LinearProcess{channel::transition_matrix(evo, n_paths), {}, q}, model,
                  y);
}

}  // namespace lensbeam::filter
