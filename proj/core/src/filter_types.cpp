#include "lensbeam/filter_types.hpp"

#include <cmath>

#include "lensbeam/errors.hpp"

namespace lensbeam::filter {

void FilterState::validate() const {
  if (cov.rows() != mean.size() || cov.cols() != mean.size()) {
    throw ConfigError("filter state: covariance must be m x m with m = " +
                      std::to_string(mean.size()));
  }
  if (!mean.allFinite() || !cov.allFinite()) {
    throw NumericalError("filter state: non-finite mean or covariance");
  }
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, cov.cwiseAbs().maxCoeff())) {
    throw ConfigError("filter state: covariance is not symmetric");
  }
}

Eigen::VectorXd LinearProcess::apply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out = transition * x;
  if (offset.size() != 0) {
    out += offset;
  }
  return out;
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& a) { return 0.5 * (a + a.transpose()); }

double min_eigenvalue(const Eigen::MatrixXd& a) {
  if (a.size() == 0) {
    return 0.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetrized(a), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool covariance_healthy(const Eigen::MatrixXd& cov) {
  if (!cov.allFinite()) {
    return false;
  }
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    return false;
  }
  return min_eigenvalue(cov) >= -1e-9;
}

}  // namespace lensbeam::filter
