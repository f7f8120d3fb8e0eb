#include "lensbeam/observation.hpp"

#include <cmath>
#include <string>

#include "lensbeam/errors.hpp"

namespace lensbeam::filter {

using channel::kParamsPerPath;

Eigen::VectorXd split_complex(const Eigen::VectorXcd& z) {
  const Eigen::Index n = z.size();
  Eigen::VectorXd out(2 * n);
  out.head(n) = z.real();
  out.tail(n) = z.imag();
  return out;
}

ObservationModel dl_observation(const DlObservationParams& params) {
  if (!params.frame) {
    throw ConfigError("dl_observation: missing beamspace frame");
  }
  params.combiner.validate();
  params.precoder.validate();
  if (params.combiner.length != params.frame->n_rx() ||
      params.precoder.length != params.frame->n_tx()) {
    throw ConfigError("dl_observation: selector lengths do not match the arrays");
  }
  ObservationModel model;
  model.obs_dim = 2;
  model.noise_cov = 0.5 * params.noise_var * Eigen::MatrixXd::Identity(2, 2);
  model.map = [frame = params.frame, row = params.combiner.index,
               col = params.precoder.index](const Eigen::VectorXd& x) {
    const int n_paths = static_cast<int>(x.size()) / kParamsPerPath;
    const channel::Complex z = frame->entry(x.data(), n_paths, row, col);
    return Eigen::Vector2d(z.real(), z.imag()).eval();
  };
  return model;
}

namespace {

void check_ul(const UlObservationParams& params) {
  if (!params.frame) {
    throw ConfigError("ul_observation: missing beamspace frame");
  }
  const std::size_t k = params.combiners.size();
  if (k == 0 || params.precoders.size() != k || params.path_loss.size() != k) {
    throw ConfigError("ul_observation: need one combiner, precoder and path loss per user");
  }
  for (std::size_t i = 0; i < k; ++i) {
    params.combiners[i].validate();
    params.precoders[i].validate();
    if (params.combiners[i].length != params.frame->n_rx() ||
        params.precoders[i].length != params.frame->n_tx()) {
      throw ConfigError("ul_observation: selector lengths do not match the arrays for user " +
                        std::to_string(i));
    }
    if (!(params.path_loss[i] > 0.0)) {
      throw ConfigError("ul_observation: path loss must be > 0");
    }
  }
}

}  // namespace

ObservationModel ul_observation(const UlObservationParams& params) {
  check_ul(params);
  const int n_users = static_cast<int>(params.combiners.size());
  std::vector<int> rows;
  std::vector<int> cols;
  std::vector<double> scale;
  for (int i = 0; i < n_users; ++i) {
    rows.push_back(params.combiners[i].index);
    cols.push_back(params.precoders[i].index);
    scale.push_back(1.0 / std::sqrt(params.path_loss[i]));
  }
  ObservationModel model;
  model.obs_dim = 2 * n_users;
  model.noise_cov = 0.5 * params.noise_var * Eigen::MatrixXd::Identity(2 * n_users, 2 * n_users);
  model.map = [frame = params.frame, rows, cols, scale, n_users](const Eigen::VectorXd& x) {
    if (x.size() != kParamsPerPath * n_users) {
      throw ConfigError("ul_observation: joint state must have 4 K entries");
    }
    Eigen::VectorXcd z = Eigen::VectorXcd::Zero(n_users);
    for (int j = 0; j < n_users; ++j) {
      for (int i = 0; i < n_users; ++i) {
        z(j) += scale[i] * frame->entry(x.data() + kParamsPerPath * i, 1, rows[j], cols[i]);
      }
    }
    return split_complex(z);
  };
  return model;
}

ObservationModel ul_single_user_observation(const UlObservationParams& params, int user) {
  check_ul(params);
  if (user < 0 || user >= static_cast<int>(params.combiners.size())) {
    throw ConfigError("ul_single_user_observation: user index out of range");
  }
  ObservationModel model;
  model.obs_dim = 2;
  model.noise_cov = 0.5 * params.noise_var * Eigen::MatrixXd::Identity(2, 2);
  model.map = [frame = params.frame, row = params.combiners[user].index,
               col = params.precoders[user].index,
               scale = 1.0 / std::sqrt(params.path_loss[user])](const Eigen::VectorXd& x) {
    const int n_paths = static_cast<int>(x.size()) / kParamsPerPath;
    const channel::Complex z = scale * frame->entry(x.data(), n_paths, row, col);
    return Eigen::Vector2d(z.real(), z.imag()).eval();
  };
  return model;
}

}  // namespace lensbeam::filter
