#include "lensbeam/trackers.hpp"

#include <utility>

#include "lensbeam/ekf.hpp"
#include "lensbeam/errors.hpp"

namespace lensbeam::filter {

UnscentedTracker::UnscentedTracker(FilterState initial, LinearProcess process,
                                   ObservationModel model, std::vector<UtParams> grid,
                                   CovarianceUpdate form)
    : state_(std::move(initial)),
      process_(std::move(process)),
      model_(std::move(model)),
      grid_(std::move(grid)),
      form_(form) {
  state_.validate();
  if (grid_.empty()) {
    throw InvalidParameterError("UnscentedTracker: empty spread grid");
  }
}

UnscentedTracker::UnscentedTracker(FilterState initial, LinearProcess process,
                                   ObservationModel model, UtParams fixed, CovarianceUpdate form)
    : state_(std::move(initial)),
      process_(std::move(process)),
      model_(std::move(model)),
      params_(fixed),
      form_(form) {
  state_.validate();
  fixed.validate(state_.dim());
}

const FilterState& UnscentedTracker::step(const Eigen::VectorXd& y) {
  if (!params_) {
    params_ = optimize_spread(state_, process_, model_, y, grid_);
  }
  const FilterState pred = ukf_predict(state_, process_, *params_);
  const SigmaSet sigma = sigma_points(pred, *params_);
  state_ = ukf_update(pred, sigma, model_, y, form_);
  return state_;
}

ExtendedTracker::ExtendedTracker(FilterState initial, LinearProcess process,
                                 ObservationModel model)
    : state_(std::move(initial)), process_(std::move(process)), model_(std::move(model)) {
  state_.validate();
}

const FilterState& ExtendedTracker::step(const Eigen::VectorXd& y) {
  state_ = ekf_step(state_, process_, model_, y);
  return state_;
}

}  // namespace lensbeam::filter
