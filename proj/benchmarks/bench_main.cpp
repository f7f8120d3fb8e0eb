#include <benchmark/benchmark.h>

#include <memory>

#include "lensbeam/channel.hpp"
#include "lensbeam/ekf.hpp"
#include "lensbeam/link.hpp"
#include "lensbeam/observation.hpp"
#include "lensbeam/simulation.hpp"
#include "lensbeam/trackers.hpp"
#include "lensbeam/unscented.hpp"

namespace {

using namespace lensbeam;

Eigen::MatrixXd spd(int m) {
  const Eigen::MatrixXd b = Eigen::MatrixXd::Random(m, m);
  return b * b.transpose() + Eigen::MatrixXd::Identity(m, m);
}

void BM_SigmaPoints(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const filter::FilterState s{Eigen::VectorXd::Random(m), spd(m)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(filter::sigma_points(s, {0.5, 1.0, 2.0}));
  }
}
BENCHMARK(BM_SigmaPoints)->Arg(4)->Arg(16)->Arg(20);

void BM_BeamspaceFullMatrix(benchmark::State& state) {
  const channel::BeamspaceFrame frame({8, 0.5}, {16, 0.5});
  Rng rng(1);
  const auto chan = channel::draw_initial_channel(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(frame.beamspace(chan));
  }
}
BENCHMARK(BM_BeamspaceFullMatrix)->Arg(1)->Arg(5);

void BM_BeamspaceSingleEntry(benchmark::State& state) {
  const channel::BeamspaceFrame frame({8, 0.5}, {16, 0.5});
  Rng rng(1);
  const auto chan = channel::draw_initial_channel(static_cast<int>(state.range(0)), rng);
  const Eigen::VectorXd x = channel::to_state_vector(chan);
  for (auto _ : state) {
    benchmark::DoNotOptimize(frame.entry(x.data(), chan.n_paths(), 3, 7));
  }
}
BENCHMARK(BM_BeamspaceSingleEntry)->Arg(1)->Arg(5);

// One filter step on the downlink model with `paths` tracked paths.
struct DownlinkSetup {
  filter::FilterState initial;
  filter::LinearProcess process;
  filter::ObservationModel model;
  Eigen::VectorXd y;

  explicit DownlinkSetup(int paths) {
    Rng rng(7);
    auto frame = std::make_shared<const channel::BeamspaceFrame>(channel::ArrayGeometry{8, 0.5},
                                                                 channel::ArrayGeometry{16, 0.5});
    const auto chan = channel::draw_initial_channel(paths, rng);
    const auto beams = link::select_beams(frame->beamspace(chan));
    const channel::EvolutionParams evo{0.99, 0.0625, 0.0625};
    initial = {channel::to_state_vector(chan), channel::process_noise_cov(evo, paths)};
    process = {channel::transition_matrix(evo, paths), {}, channel::process_noise_cov(evo, paths)};
    model = filter::dl_observation({frame, beams.rx, beams.tx, 0.01});
    y = model(initial.mean);
  }
};

void BM_UkfStepDownlink(benchmark::State& state) {
  const DownlinkSetup s(static_cast<int>(state.range(0)));
  const filter::UtParams p{0.5, 1.0, 2.0};
  for (auto _ : state) {
    filter::UnscentedTracker t(s.initial, s.process, s.model, p);
    benchmark::DoNotOptimize(t.step(s.y));
  }
}
BENCHMARK(BM_UkfStepDownlink)->Arg(1)->Arg(5);

void BM_SpreadSearchDownlink(benchmark::State& state) {
  const DownlinkSetup s(1);
  const auto grid = filter::default_spread_grid(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(filter::optimize_spread(s.initial, s.process, s.model, s.y, grid));
  }
}
BENCHMARK(BM_SpreadSearchDownlink);

void BM_EkfStepDownlink(benchmark::State& state) {
  const DownlinkSetup s(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(filter::ekf_step(s.initial, s.process, s.model, s.y));
  }
}
BENCHMARK(BM_EkfStepDownlink)->Arg(1)->Arg(5);

void BM_Episode(benchmark::State& state) {
  sim::ScenarioConfig cfg = sim::ScenarioConfig::table_defaults(
      state.range(0) == 0 ? sim::LinkMode::downlink : sim::LinkMode::uplink);
  cfg.filter = sim::FilterSelection::both;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim::run_episode(cfg, ++seed));
  }
  state.SetLabel(state.range(0) == 0 ? "dl" : "ul K=4");
}
BENCHMARK(BM_Episode)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
