#pragma once

// Slot-by-slot tracking loops. A tracker owns its belief and is not
// thread-safe; distinct trackers share nothing.

#include <optional>
#include <vector>

#include "lensbeam/filter_types.hpp"
#include "lensbeam/unscented.hpp"

namespace lensbeam::filter {

/// Unscented tracker: on the first step the spread (gamma, kappa) is chosen
/// from the grid by minimizing the innovation, then held fixed.
class UnscentedTracker {
 public:
  UnscentedTracker(FilterState initial, LinearProcess process, ObservationModel model,
                   std::vector<UtParams> grid,
                   CovarianceUpdate form = CovarianceUpdate::subtract_gain);

  /// Tracker with fixed spread parameters and no search.
  UnscentedTracker(FilterState initial, LinearProcess process, ObservationModel model,
                   UtParams fixed, CovarianceUpdate form = CovarianceUpdate::subtract_gain);

  const FilterState& step(const Eigen::VectorXd& y);

  const FilterState& state() const { return state_; }
  /// Spread in use; empty before the first step when searching.
  const std::optional<UtParams>& params() const { return params_; }

 private:
  FilterState state_;
  LinearProcess process_;
  ObservationModel model_;
  std::vector<UtParams> grid_;
  std::optional<UtParams> params_;
  CovarianceUpdate form_;
};

class ExtendedTracker {
 public:
  ExtendedTracker(FilterState initial, LinearProcess process, ObservationModel model);

  const FilterState& step(const Eigen::VectorXd& y);
  const FilterState& state() const { return state_; }

 private:
  FilterState state_;
  LinearProcess process_;
  ObservationModel model_;
};

}  // namespace lensbeam::filter
