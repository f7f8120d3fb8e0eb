#include "lensbeam/unscented.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "lensbeam/errors.hpp"

namespace lensbeam::filter {

namespace {

constexpr double kJitterStart = 1e-10;
constexpr double kJitterMax = 1e-4;

// Cholesky that tolerates exact zero pivots of a PSD matrix (the column is
// left at zero when its residual vanishes). Returns nullopt otherwise.
std::optional<Eigen::MatrixXd> psd_cholesky(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  const double scale = n > 0 ? a.diagonal().cwiseAbs().maxCoeff() : 0.0;
  const double tol = 16.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon() *
                     std::max(scale, std::numeric_limits<double>::min());
  for (Eigen::Index j = 0; j < n; ++j) {
    const double pivot = a(j, j) - l.row(j).head(j).squaredNorm();
    if (pivot > tol) {
      const double root = std::sqrt(pivot);
      l(j, j) = root;
      for (Eigen::Index i = j + 1; i < n; ++i) {
        l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / root;
      }
    } else if (pivot >= -tol) {
      for (Eigen::Index i = j + 1; i < n; ++i) {
        const double residual = a(i, j) - l.row(i).head(j).dot(l.row(j).head(j));
        if (std::abs(residual) > tol) {
          return std::nullopt;
        }
      }
    } else {
      return std::nullopt;
    }
  }
  return l;
}

// sum_i w_i c_i computed as c_0 + sum_i w_i (c_i - c_0); equal when the
// weights sum to one, and exact when the columns coincide.
Eigen::VectorXd centred_sum(const Eigen::MatrixXd& cols, const Eigen::VectorXd& w) {
  return cols.col(0) + (cols.colwise() - cols.col(0)) * w;
}

}  // namespace

void UtParams::validate(int m) const {
  if (!std::isfinite(gamma) || !std::isfinite(kappa) || !std::isfinite(beta)) {
    throw InvalidParameterError("unscented parameters must be finite");
  }
  if (!(spread(m) > 0.0)) {
    throw InvalidParameterError("unscented parameters: Lambda + m must be > 0 (gamma=" +
                                std::to_string(gamma) + ", kappa=" + std::to_string(kappa) +
                                ", m=" + std::to_string(m) + ")");
  }
}

Eigen::VectorXd SigmaSet::weighted_mean() const {
  return centred_sum(points, w_mean);
}

Eigen::MatrixXd SigmaSet::weighted_cov(const Eigen::VectorXd& center) const {
  const Eigen::MatrixXd dev = points.colwise() - center;
  return dev * w_cov.asDiagonal() * dev.transpose();
}

UtWeights compute_weights(int m, const UtParams& p) {
  p.validate(m);
  const double lambda = p.lambda(m);
  const double spread = p.spread(m);
  UtWeights w;
  w.mean = Eigen::VectorXd::Constant(2 * m + 1, 1.0 / (2.0 * spread));
  w.cov = w.mean;
  w.mean(0) = lambda / spread;
  w.cov(0) = lambda / spread + (1.0 - p.gamma * p.gamma + p.beta);
  return w;
}

Eigen::MatrixXd lower_factor(const Eigen::MatrixXd& s) {
  const Eigen::MatrixXd sym = symmetrized(s);
  if (!sym.allFinite()) {
    throw NumericalError("lower_factor: matrix has non-finite entries");
  }
  if (auto l = psd_cholesky(sym)) {
    return *l;
  }
  const Eigen::Index n = sym.rows();
  for (double eps = kJitterStart; eps <= kJitterMax * (1.0 + 1e-9); eps *= 10.0) {
    Eigen::LLT<Eigen::MatrixXd> llt(sym + eps * Eigen::MatrixXd::Identity(n, n));
    if (llt.info() == Eigen::Success) {
      return llt.matrixL();
    }
  }
  throw NumericalError("lower_factor: covariance not positive semidefinite after jitter");
}

SigmaSet sigma_points(const FilterState& state, const UtParams& p) {
  const int m = state.dim();
  const UtWeights w = compute_weights(m, p);
  const Eigen::MatrixXd l = lower_factor(p.spread(m) * state.cov);
  SigmaSet set;
  set.points.resize(m, 2 * m + 1);
  set.points.col(0) = state.mean;
  for (int i = 0; i < m; ++i) {
    set.points.col(1 + i) = state.mean + l.col(i);
    set.points.col(1 + m + i) = state.mean - l.col(i);
  }
  set.w_mean = w.mean;
  set.w_cov = w.cov;
  return set;
}

FilterState unscented_predict(const FilterState& state, const VectorMap& f,
                              const Eigen::MatrixXd& q, const UtParams& p) {
  const SigmaSet sigma = sigma_points(state, p);
  SigmaSet moved = sigma;
  for (int i = 0; i < sigma.size(); ++i) {
    moved.points.col(i) = f(sigma.points.col(i));
  }
  FilterState pred;
  pred.mean = moved.weighted_mean();
  pred.cov = symmetrized(moved.weighted_cov(pred.mean) + q);
  return pred;
}

FilterState ukf_predict(const FilterState& state, const channel::EvolutionParams& evo,
                        const Eigen::MatrixXd& q, const UtParams& p) {
  const int n_paths = state.dim() / channel::kParamsPerPath;
  LinearProcess process{channel::transition_matrix(evo, n_paths), {}, q};
  return ukf_predict(state, process, p);
}

FilterState ukf_predict(const FilterState& state, const LinearProcess& process,
                        const UtParams& p) {
  if (process.transition.rows() != state.dim() || process.transition.cols() != state.dim() ||
      process.noise_cov.rows() != state.dim() || process.noise_cov.cols() != state.dim()) {
    throw ConfigError("ukf_predict: process dimensions do not match the state");
  }
  return unscented_predict(
      state, [&process](const Eigen::VectorXd& x) { return process.apply(x); },
      process.noise_cov, p);
}

ObservationMoments observation_moments(const SigmaSet& sigma, const ObservationModel& model) {
  const int n_points = sigma.size();
  ObservationMoments mo;
  mo.transformed.resize(model.obs_dim, n_points);
  for (int i = 0; i < n_points; ++i) {
    const Eigen::VectorXd z = model(sigma.points.col(i));
    if (z.size() != model.obs_dim) {
      throw ConfigError("observation model returned " + std::to_string(z.size()) +
                        " values, expected " + std::to_string(model.obs_dim));
    }
    mo.transformed.col(i) = z;
  }
  mo.mean = centred_sum(mo.transformed, sigma.w_mean);
  const Eigen::VectorXd x_mean = sigma.weighted_mean();
  const Eigen::MatrixXd dz = mo.transformed.colwise() - mo.mean;
  const Eigen::MatrixXd dx = sigma.points.colwise() - x_mean;
  mo.cov = symmetrized(dz * sigma.w_cov.asDiagonal() * dz.transpose() + model.noise_cov);
  mo.cross = dx * sigma.w_cov.asDiagonal() * dz.transpose();
  return mo;
}

FilterState ukf_update(const FilterState& pred, const SigmaSet& sigma,
                       const ObservationModel& model, const Eigen::VectorXd& y,
                       CovarianceUpdate form) {
  if (y.size() != model.obs_dim || model.noise_cov.rows() != model.obs_dim ||
      model.noise_cov.cols() != model.obs_dim) {
    throw ConfigError("ukf_update: observation dimensions do not conform");
  }
  if (sigma.points.rows() != pred.dim()) {
    throw ConfigError("ukf_update: sigma set does not match the predicted state");
  }
  const ObservationMoments mo = observation_moments(sigma, model);
  Eigen::MatrixXd gain = Eigen::MatrixXd::Zero(pred.dim(), model.obs_dim);
  // A state with no spread carries no cross covariance and needs no gain.
  if (!mo.cross.isZero(0.0)) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(mo.cov);
    if (!lu.isInvertible()) {
      throw NumericalError("ukf_update: innovation covariance is singular");
    }
    // Sigma_z is symmetric, so K^T = Sigma_z^{-1} Sigma_xz^T.
    gain = lu.solve(mo.cross.transpose()).transpose();
  }
  FilterState post;
  post.mean = pred.mean + gain * (y - mo.mean);
  const Eigen::MatrixXd correction = gain * mo.cov * gain.transpose();
  const double sign = form == CovarianceUpdate::subtract_gain ? -1.0 : 1.0;
  post.cov = symmetrized(pred.cov + sign * correction);
  if (!post.mean.allFinite() || !post.cov.allFinite()) {
    throw NumericalError("ukf_update: non-finite posterior");
  }
  return post;
}

double spread_objective(const FilterState& state, const ObservationModel& model,
                        const Eigen::VectorXd& y, const UtParams& p) {
  const SigmaSet sigma = sigma_points(state, p);
  Eigen::MatrixXd z(model.obs_dim, sigma.size());
  for (int i = 0; i < sigma.size(); ++i) {
    z.col(i) = model(sigma.points.col(i));
  }
  return (y - centred_sum(z, sigma.w_mean)).squaredNorm();
}

UtParams optimize_spread(const FilterState& state, const ObservationModel& model,
                         const Eigen::VectorXd& y, std::span<const UtParams> grid) {
  if (grid.empty()) {
    throw InvalidParameterError("optimize_spread: empty candidate grid");
  }
  for (const auto& p : grid) {
    p.validate(state.dim());
  }
  UtParams best = grid.front();
  double best_value = std::numeric_limits<double>::infinity();
  for (const auto& p : grid) {
    const double value = spread_objective(state, model, y, p);
    if (value < best_value) {
      best_value = value;
      best = p;
    }
  }
  return best;
}

UtParams optimize_spread(const FilterState& prior, const LinearProcess& process,
                         const ObservationModel& model, const Eigen::VectorXd& y,
                         std::span<const UtParams> grid) {
  if (grid.empty()) {
    throw InvalidParameterError("optimize_spread: empty candidate grid");
  }
  for (const auto& p : grid) {
    p.validate(prior.dim());
  }
  UtParams best = grid.front();
  double best_value = std::numeric_limits<double>::infinity();
  for (const auto& p : grid) {
    const FilterState pred = ukf_predict(prior, process, p);
    const double value = spread_objective(pred, model, y, p);
    if (value < best_value) {
      best_value = value;
      best = p;
    }
  }
  return best;
}

std::vector<UtParams> make_spread_grid(std::span<const double> gammas,
                                       std::span<const double> kappas, double beta, int m) {
  std::vector<UtParams> grid;
  grid.reserve(gammas.size() * kappas.size());
  for (double g : gammas) {
    for (double k : kappas) {
      UtParams p{g, k, beta};
      if (std::isfinite(p.spread(m)) && p.spread(m) > 0.0) {
        grid.push_back(p);
      }
    }
  }
  return grid;
}

std::vector<UtParams> default_spread_grid(int m, double beta) {
  std::vector<double> gammas;
  for (int i = 1; i <= 10; ++i) {
    gammas.push_back(i / 10.0);
  }
  const std::vector<double> kappas{0.0, 0.5, 1.0, 2.0, 3.0};
  return make_spread_grid(gammas, kappas, beta, m);
}

}  // namespace lensbeam::filter
