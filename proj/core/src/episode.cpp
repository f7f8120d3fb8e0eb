#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <utility>

#include "lensbeam/channel.hpp"
#include "lensbeam/errors.hpp"
#include "lensbeam/filter_types.hpp"
#include "lensbeam/format.hpp"
#include "lensbeam/link.hpp"
#include "lensbeam/observation.hpp"
#include "lensbeam/simulation.hpp"
#include "lensbeam/trackers.hpp"

namespace lensbeam::sim {

using channel::kParamsPerPath;
using channel::UserChannel;

std::string_view to_string(FilterKind kind) { return kind == FilterKind::ukf ? "ukf" : "ekf"; }

bool RunResult::failed() const {
  for (const auto& t : traces) {
    if (t.failed) {
      return true;
    }
  }
  return false;
}

const FilterTrace* RunResult::trace(FilterKind kind) const {
  for (const auto& t : traces) {
    if (t.kind == kind) {
      return &t;
    }
  }
  return nullptr;
}

namespace {

// Everything a tracker needs beyond the truth: beams and observation maps.
struct LinkSetup {
  std::shared_ptr<const channel::BeamspaceFrame> frame;
  link::LinkConfig link_cfg;
  // Downlink
  link::BeamSelector combiner;
  std::vector<link::BeamSelector> precoders;
  // Uplink
  std::vector<link::BeamSelector> combiners;
};

Eigen::VectorXd tracked_truth(const ScenarioConfig& cfg, const std::vector<UserChannel>& users) {
  Eigen::VectorXd x(cfg.state_dim());
  if (cfg.mode == LinkMode::downlink) {
    channel::append_state(users[0], x, 0);
  } else {
    for (int k = 0; k < cfg.k_users; ++k) {
      channel::append_state(users[k], x, kParamsPerPath * k);
    }
  }
  return x;
}

// Filter-side state; UL EKF runs one 4-dimensional filter per user.
class TrackerSlot {
 public:
  virtual ~TrackerSlot() = default;
  virtual void step(const Eigen::VectorXd& y) = 0;
  virtual Eigen::VectorXd mean() const = 0;
  virtual double min_eigenvalue() const = 0;
  virtual bool healthy() const = 0;
};

class UkfSlot final : public TrackerSlot {
 public:
  explicit UkfSlot(filter::UnscentedTracker tracker) : tracker_(std::move(tracker)) {}
  void step(const Eigen::VectorXd& y) override { tracker_.step(y); }
  Eigen::VectorXd mean() const override { return tracker_.state().mean; }
  double min_eigenvalue() const override { return filter::min_eigenvalue(tracker_.state().cov); }
  bool healthy() const override { return filter::covariance_healthy(tracker_.state().cov); }
  const filter::UnscentedTracker& tracker() const { return tracker_; }

 private:
  filter::UnscentedTracker tracker_;
};

class EkfSlot final : public TrackerSlot {
 public:
  // `parts[i]` observes the entries `obs_index[i]` of the joint observation.
  EkfSlot(std::vector<filter::ExtendedTracker> parts, std::vector<std::vector<int>> obs_index)
      : parts_(std::move(parts)), obs_index_(std::move(obs_index)) {}

  void step(const Eigen::VectorXd& y) override {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      Eigen::VectorXd yi(obs_index_[i].size());
      for (std::size_t j = 0; j < obs_index_[i].size(); ++j) {
        yi(j) = y(obs_index_[i][j]);
      }
      parts_[i].step(yi);
    }
  }

  Eigen::VectorXd mean() const override {
    Eigen::Index n = 0;
    for (const auto& p : parts_) {
      n += p.state().dim();
    }
    Eigen::VectorXd x(n);
    Eigen::Index offset = 0;
    for (const auto& p : parts_) {
      x.segment(offset, p.state().dim()) = p.state().mean;
      offset += p.state().dim();
    }
    return x;
  }

  double min_eigenvalue() const override {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& p : parts_) {
      worst = std::min(worst, filter::min_eigenvalue(p.state().cov));
    }
    return worst;
  }

  bool healthy() const override {
    for (const auto& p : parts_) {
      if (!filter::covariance_healthy(p.state().cov)) {
        return false;
      }
    }
    return true;
  }

 private:
  std::vector<filter::ExtendedTracker> parts_;
  std::vector<std::vector<int>> obs_index_;
};

std::vector<PathErrors> path_errors(const Eigen::VectorXd& truth, const Eigen::VectorXd& est) {
  const int n_paths = static_cast<int>(truth.size()) / kParamsPerPath;
  std::vector<PathErrors> out(n_paths);
  for (int l = 0; l < n_paths; ++l) {
    const int b = kParamsPerPath * l;
    const double da = est(b + channel::kThetaA) - truth(b + channel::kThetaA);
    const double dd = est(b + channel::kThetaD) - truth(b + channel::kThetaD);
    const double dre = est(b + channel::kAlphaRe) - truth(b + channel::kAlphaRe);
    const double dim = est(b + channel::kAlphaIm) - truth(b + channel::kAlphaIm);
    out[l] = PathErrors{da * da, dd * dd, dre * dre + dim * dim};
  }
  return out;
}

void hash_vector(Fnv1a& h, const Eigen::VectorXd& v) { h.update(v.data(), sizeof(double) * v.size()); }

}  // namespace

RunResult run_episode(const ScenarioConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  const bool downlink = cfg.mode == LinkMode::downlink;
  const channel::ArrayGeometry bs{cfg.n_bs, cfg.spacing_ratio};
  const channel::ArrayGeometry ue{cfg.n_ue, cfg.spacing_ratio};

  LinkSetup setup;
  setup.frame = downlink ? std::make_shared<const channel::BeamspaceFrame>(ue, bs)
                         : std::make_shared<const channel::BeamspaceFrame>(bs, ue);
  const double noise_var = cfg.noise_var();
  setup.link_cfg = link::LinkConfig::uniform(cfg.k_users, noise_var);
  setup.link_cfg.path_loss = cfg.resolved_path_loss();

  // Initial channels; the tracked user (DL) is user 0.
  std::vector<UserChannel> users;
  users.reserve(cfg.k_users);
  for (int k = 0; k < cfg.k_users; ++k) {
    const int n_paths = (downlink && k > 0) ? cfg.paths_other_users
                                            : (downlink ? cfg.paths_tracked_user : 1);
    users.push_back(channel::draw_initial_channel(n_paths, rng));
  }

  std::vector<link::BeamspaceChannel> hb(cfg.k_users);
  for (int k = 0; k < cfg.k_users; ++k) {
    hb[k] = setup.frame->beamspace(users[k]);
  }
  for (int k = 0; k < cfg.k_users; ++k) {
    const link::BeamPair beams = link::select_beams(hb[k]);
    setup.precoders.push_back(beams.tx);
    setup.combiners.push_back(beams.rx);
  }
  setup.combiner = setup.combiners[0];

  const channel::EvolutionParams evo = cfg.evolution();
  const int n_tracked = cfg.tracked_paths();

  RunResult result;
  result.seed = seed;
  result.config_hash = config_hash(cfg);
  result.n_slots = cfg.n_slots;

  filter::FilterState initial{tracked_truth(cfg, users), channel::process_noise_cov(evo, n_tracked)};

  std::vector<std::unique_ptr<TrackerSlot>> slots;
  std::vector<FilterKind> kinds;

  filter::ObservationModel joint_model;
  filter::UlObservationParams ul_params;
  if (downlink) {
    joint_model = filter::dl_observation(
        filter::DlObservationParams{setup.frame, setup.combiner, setup.precoders[0], noise_var});
  } else {
    ul_params = filter::UlObservationParams{setup.frame, setup.combiners, setup.precoders,
                                            setup.link_cfg.path_loss, noise_var};
    joint_model = filter::ul_observation(ul_params);
  }

  const UkfSlot* ukf_slot = nullptr;
  if (cfg.runs_ukf()) {
    filter::LinearProcess process{channel::transition_matrix(evo, n_tracked), {},
                                  channel::process_noise_cov(evo, n_tracked)};
    auto slot = std::make_unique<UkfSlot>(
        filter::UnscentedTracker(initial, process, joint_model, cfg.spread_grid()));
    ukf_slot = slot.get();
    slots.push_back(std::move(slot));
    kinds.push_back(FilterKind::ukf);
  }
  if (cfg.runs_ekf()) {
    std::vector<filter::ExtendedTracker> parts;
    std::vector<std::vector<int>> obs_index;
    if (downlink) {
      filter::LinearProcess process{channel::transition_matrix(evo, n_tracked), {},
                                    channel::process_noise_cov(evo, n_tracked)};
      parts.emplace_back(initial, process, joint_model);
      obs_index.push_back({0, 1});
    } else {
      // Each user tracked on its own entry; other users act as interference.
      const filter::LinearProcess process{channel::transition_matrix(evo, 1), {},
                                          channel::process_noise_cov(evo, 1)};
      for (int k = 0; k < cfg.k_users; ++k) {
        filter::FilterState part{initial.mean.segment(kParamsPerPath * k, kParamsPerPath),
                                 initial.cov.block(kParamsPerPath * k, kParamsPerPath * k,
                                                   kParamsPerPath, kParamsPerPath)};
        parts.emplace_back(part, process, filter::ul_single_user_observation(ul_params, k));
        obs_index.push_back({k, cfg.k_users + k});
      }
    }
    slots.push_back(std::make_unique<EkfSlot>(std::move(parts), std::move(obs_index)));
    kinds.push_back(FilterKind::ekf);
  }

  result.traces.resize(slots.size());
  std::vector<Fnv1a> input_hash(slots.size());
  for (std::size_t f = 0; f < slots.size(); ++f) {
    result.traces[f].kind = kinds[f];
    result.traces[f].min_cov_eigenvalue = slots[f]->min_eigenvalue();
  }
  Fnv1a truth_hash;
  Fnv1a obs_hash;

  for (int t = 1; t <= cfg.n_slots; ++t) {
    for (auto& u : users) {
      u = channel::evolve(u, evo, rng);
    }
    for (int k = 0; k < cfg.k_users; ++k) {
      hb[k] = setup.frame->beamspace(users[k]);
    }
    Eigen::VectorXd y;
    if (downlink) {
      const channel::Complex z = link::dl_received(0, hb, setup.precoders, setup.combiner,
                                                   setup.link_cfg, rng);
      y = Eigen::Vector2d(z.real(), z.imag());
    } else {
      y = filter::split_complex(
          link::ul_received(hb, setup.combiners, setup.precoders, setup.link_cfg, rng));
    }
    const Eigen::VectorXd truth = tracked_truth(cfg, users);
    hash_vector(truth_hash, truth);
    hash_vector(obs_hash, y);
    result.truth.push_back(truth);

    for (std::size_t f = 0; f < slots.size(); ++f) {
      FilterTrace& trace = result.traces[f];
      if (!trace.failed) {
        hash_vector(input_hash[f], y);
        try {
          slots[f]->step(y);
          if (!slots[f]->healthy()) {
            throw NumericalError("posterior covariance is not symmetric positive semidefinite");
          }
          trace.min_cov_eigenvalue = std::min(trace.min_cov_eigenvalue, slots[f]->min_eigenvalue());
        } catch (const NumericalError& e) {
          trace.failed = true;
          trace.failed_slot = t;
          trace.failure = e.at_slot(t).what();
        }
      }
      const Eigen::VectorXd est = slots[f]->mean();
      trace.tracked.push_back(est);
      trace.sq_errors.push_back(path_errors(truth, est));
    }
    if (t == 1 && ukf_slot != nullptr) {
      result.chosen = ukf_slot->tracker().params();
    }
  }

  result.truth_hash = truth_hash.value();
  result.observation_hash = obs_hash.value();
  for (std::size_t f = 0; f < slots.size(); ++f) {
    result.traces[f].input_hash = input_hash[f].value();
  }
  return result;
}

}  // namespace lensbeam::sim
