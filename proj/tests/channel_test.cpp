#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lensbeam/channel.hpp"
#include "lensbeam/errors.hpp"
#include "oracles.hpp"

namespace lensbeam::channel {
namespace {

constexpr double kPi = std::numbers::pi;

UserChannel single_path(Complex alpha, double theta_a, double theta_d) {
  return UserChannel{{PathState{alpha.real(), alpha.imag(), theta_a, theta_d}}};
}

std::vector<oracle::Path> to_oracle(const UserChannel& chan) {
  std::vector<oracle::Path> out;
  for (const auto& p : chan.paths) {
    out.push_back({p.gain(), p.theta_a, p.theta_d});
  }
  return out;
}

TEST(SteeringVector, BroadsideIsUniform) {
  const Eigen::VectorXcd a = steering_vector({2, 0.5}, 0.0);
  EXPECT_NEAR(std::abs(a(0) - Complex(1 / std::sqrt(2.0), 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(a(1) - Complex(1 / std::sqrt(2.0), 0)), 0.0, 1e-15);
}

TEST(SteeringVector, EndfirePhases) {
  const Eigen::VectorXcd a = steering_vector({2, 0.5}, kPi / 2);
  const double s = 1 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(a(0) - s * std::polar(1.0, kPi / 2)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(a(1) - s * std::polar(1.0, -kPi / 2)), 0.0, 1e-15);
}

TEST(SteeringVector, UnitNormAndMatchesFormula) {
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> th(-4.0, 4.0);
  for (int n : {1, 2, 3, 7, 8, 16, 33}) {
    for (double d : {0.25, 0.5, 1.0}) {
      const double theta = th(g);
      const Eigen::VectorXcd a = steering_vector({n, d}, theta);
      EXPECT_NEAR(a.norm(), 1.0, 1e-12);
      EXPECT_LT((a - oracle::steering(n, d, theta)).cwiseAbs().maxCoeff(), 1e-13);
    }
  }
}

TEST(DftMatrix, SingleElement) {
  const Eigen::MatrixXcd u = dft_matrix(1);
  ASSERT_EQ(u.rows(), 1);
  EXPECT_NEAR(std::abs(u(0, 0) - Complex(1.0, 0.0)), 0.0, 1e-15);
}

TEST(DftMatrix, UnitaryForEverySize) {
  for (int n = 1; n <= 32; ++n) {
    const Eigen::MatrixXcd u = dft_matrix(n);
    EXPECT_LE((u * u.adjoint() - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-12)
        << "n=" << n;
  }
}

TEST(DftMatrix, RowsAreConjugatedVirtualSteeringVectors) {
  for (int n : {4, 5, 16}) {
    EXPECT_LT((dft_matrix(n) - oracle::dft(n)).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(DftMatrix, RejectsEmpty) { EXPECT_THROW(dft_matrix(0), ConfigError); }

TEST(VirtualAngle, LiteralGrid) {
  EXPECT_DOUBLE_EQ(virtual_angle(4, 0), -5.0 / 8.0);
  EXPECT_DOUBLE_EQ(virtual_angle(4, 3), 1.0 / 8.0);
  EXPECT_DOUBLE_EQ(virtual_angle(16, 8), -1.0 / 32.0);
}

TEST(SpatialChannel, ZeroGainsGiveZeroMatrix) {
  UserChannel chan{{PathState{0, 0, 0.3, 1.2}, PathState{0, 0, 2.0, 0.1}}};
  EXPECT_EQ(spatial_channel({8, 0.5}, {16, 0.5}, chan).cwiseAbs().maxCoeff(), 0.0);
}

TEST(SpatialChannel, SinglePathIsRankOne) {
  const auto chan = single_path({1.0, 0.0}, 0.7, 2.1);
  const Eigen::MatrixXcd h = spatial_channel({8, 0.5}, {16, 0.5}, chan);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h);
  const auto s = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < s.size(); ++i) {
    rank += s(i) > 1e-10 ? 1 : 0;
  }
  EXPECT_EQ(rank, 1);
}

TEST(SpatialChannel, FrobeniusNormOfUnitPath) {
  const auto chan = single_path({1.0, 0.0}, 0.4, 1.9);
  EXPECT_NEAR(spatial_channel({4, 0.5}, {4, 0.5}, chan).norm(), 4.0, 1e-12);
}

TEST(SpatialChannel, MatchesBruteForceMultipath) {
  std::mt19937_64 g(11);
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const UserChannel chan = draw_initial_channel(1 + trial % 5, rng);
    const Eigen::MatrixXcd h = spatial_channel({8, 0.5}, {16, 0.5}, chan);
    EXPECT_LT((h - oracle::spatial(8, 16, 0.5, to_oracle(chan))).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(SpatialChannel, RejectsEmptyChannel) {
  EXPECT_THROW(spatial_channel({4, 0.5}, {4, 0.5}, UserChannel{}), ConfigError);
}

TEST(BeamspaceTransform, ZeroStaysZero) {
  const auto hb = beamspace_transform(Eigen::MatrixXcd::Zero(8, 16), dft_matrix(8), dft_matrix(16));
  EXPECT_EQ(hb.entries.cwiseAbs().maxCoeff(), 0.0);
}

TEST(BeamspaceTransform, PreservesFrobeniusNorm) {
  std::mt19937_64 g(17);
  for (int trial = 0; trial < 100; ++trial) {
    const int r = 1 + trial % 16;
    const int c = 1 + (trial * 7) % 16;
    const Eigen::MatrixXcd h = oracle::random_complex(r, c, g);
    const auto hb = beamspace_transform(h, dft_matrix(r), dft_matrix(c));
    EXPECT_NEAR(hb.entries.norm() / h.norm(), 1.0, 1e-10);
  }
}

TEST(BeamspaceTransform, DimensionMismatchIsConfigError) {
  EXPECT_THROW(beamspace_transform(Eigen::MatrixXcd::Zero(8, 16), dft_matrix(16), dft_matrix(16)),
               ConfigError);
  EXPECT_THROW(beamspace_transform(Eigen::MatrixXcd::Zero(8, 16), dft_matrix(8), dft_matrix(8)),
               ConfigError);
}

TEST(BeamspaceTransform, OnGridPathFocusesIntoOneEntry) {
  const int n_r = 8;
  const int n_t = 16;
  const Complex alpha(0.6, -0.8);
  for (auto [v, c] : {std::pair{3, 5}, std::pair{5, 8}, std::pair{4, 12}}) {
    const auto chan =
        single_path(alpha, oracle::on_grid_angle(n_r, v), oracle::on_grid_angle(n_t, c));
    const BeamspaceFrame frame({n_r, 0.5}, {n_t, 0.5});
    const Eigen::MatrixXcd hb = frame.beamspace(chan).entries;
    EXPECT_NEAR(std::abs(hb(v, c)), std::abs(alpha) * std::sqrt(double(n_r * n_t)), 1e-10);
    Eigen::MatrixXcd rest = hb;
    rest(v, c) = 0.0;
    EXPECT_LT(rest.cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Dirichlet, PeakAtZero) {
  EXPECT_EQ(dirichlet(8, 0.0), 8.0);
  for (int n : {1, 2, 4, 8, 16}) {
    EXPECT_EQ(dirichlet(n, 0.0), static_cast<double>(n));
  }
}

TEST(Dirichlet, ZerosAtMultiplesOfOneOverN) {
  for (int k = 1; k < 8; ++k) {
    EXPECT_NEAR(dirichlet(8, k / 8.0), 0.0, 1e-13) << "k=" << k;
  }
}

TEST(Dirichlet, QuarterPointOfTwoElements) { EXPECT_NEAR(dirichlet(2, 0.25), std::sqrt(2.0), 1e-15); }

TEST(Dirichlet, LimitBranchMatchesPhasorSum) {
  for (int n : {1, 2, 3, 4, 7, 8}) {
    for (int k = -3; k <= 3; ++k) {
      EXPECT_DOUBLE_EQ(dirichlet(n, k), oracle::dirichlet_sum(n, k)) << n << " " << k;
      // Continuous across the threshold.
      EXPECT_NEAR(dirichlet(n, k + 1e-9), dirichlet(n, k), 1e-6);
    }
  }
}

TEST(Dirichlet, MatchesPhasorSumOffGrid) {
  std::mt19937_64 g(23);
  std::uniform_real_distribution<double> phi(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const int n = 1 + i % 16;
    const double x = phi(g);
    EXPECT_NEAR(dirichlet(n, x), oracle::dirichlet_sum(n, x), 1e-11);
  }
}

TEST(BeamspaceElement, AllZeroAnglesSumToProduct) {
  for (int n_t : {1, 2, 4, 8}) {
    for (int n_r : {1, 2, 4, 16}) {
      EXPECT_NEAR(std::abs(beamspace_element(0, 0, 0, 0, n_t, n_r) - Complex(n_t * n_r, 0)), 0.0,
                  1e-12);
    }
  }
}

TEST(BeamspaceElement, BoundedByArraySizes) {
  std::mt19937_64 g(29);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const int n_t = 1 + i % 9;
    const int n_r = 1 + (i / 9) % 9;
    EXPECT_LE(std::abs(beamspace_element(u(g), u(g), u(g), u(g), n_t, n_r)),
              n_t * n_r * (1 + 1e-12));
  }
}

TEST(BeamspaceElement, MatchesScaledBruteForceEntry) {
  std::mt19937_64 g(31);
  std::uniform_real_distribution<double> ang(0.0, kPi);
  for (int i = 0; i < 200; ++i) {
    const int n_t = i < 100 ? 4 : 1 + i % 16;
    const int n_r = i < 100 ? 4 : 1 + (i / 16) % 16;
    const double ta = ang(g);
    const double td = ang(g);
    const int v = static_cast<int>(g() % n_r);
    const int c = static_cast<int>(g() % n_t);
    const Eigen::MatrixXcd brute = oracle::dft(n_r) * oracle::steering(n_r, 0.5, ta) *
                                   oracle::steering(n_t, 0.5, td).adjoint() *
                                   oracle::dft(n_t).adjoint();
    const Complex got = beamspace_element(0.5 * std::sin(ta), 0.5 * std::sin(td),
                                          oracle::psi(n_t, c), oracle::psi(n_r, v), n_t, n_r);
    EXPECT_LT(std::abs(got - double(n_t * n_r) * brute(v, c)), 1e-9);
  }
}

TEST(BeamspaceFrame, EntryMatchesFullMatrix) {
  Rng rng(41);
  const BeamspaceFrame frame({8, 0.5}, {16, 0.5});
  for (int trial = 0; trial < 30; ++trial) {
    const UserChannel chan = draw_initial_channel(1 + trial % 5, rng);
    const Eigen::MatrixXcd full = frame.beamspace(chan).entries;
    const Eigen::MatrixXcd brute = oracle::beamspace(8, 16, 0.5, to_oracle(chan));
    EXPECT_LT((full - brute).cwiseAbs().maxCoeff(), 1e-11);
    for (int r = 0; r < 8; ++r) {
      for (int c = 0; c < 16; ++c) {
        EXPECT_LT(std::abs(frame.entry(chan, r, c) - full(r, c)), 1e-11);
      }
    }
  }
}

TEST(PowerFocusing, OnGridSingleEntryCarriesAllPower) {
  const BeamspaceFrame frame({16, 0.5}, {8, 0.5});
  for (int v = 4; v < 12; ++v) {
    const auto chan = single_path({1, 0}, oracle::on_grid_angle(16, v), oracle::on_grid_angle(8, 5));
    const Eigen::MatrixXcd hb = frame.beamspace(chan).entries;
    EXPECT_GE(std::norm(hb(v, 5)) / hb.squaredNorm(), 0.9999);
  }
}

TEST(PowerFocusing, RandomAnglesConcentrateInFewRows) {
  Rng rng(43);
  const BeamspaceFrame frame({16, 0.5}, {8, 0.5});
  double share = 0.0;
  const int draws = 1000;
  for (int i = 0; i < draws; ++i) {
    const Eigen::MatrixXcd hb = frame.beamspace(draw_initial_channel(1, rng)).entries;
    Eigen::VectorXd rows = hb.cwiseAbs2().rowwise().sum();
    std::sort(rows.data(), rows.data() + rows.size(), std::greater<>());
    share += rows.head(4).sum() / rows.sum();
  }
  EXPECT_GE(share / draws, 0.8);
}

TEST(Evolve, StaticWhenNoiseless) {
  Rng rng(7);
  UserChannel chan = draw_initial_channel(3, rng);
  const UserChannel start = chan;
  const EvolutionParams still{1.0, 0.0, 0.0};
  for (int t = 0; t < 50; ++t) {
    chan = evolve(chan, still, rng);
  }
  for (int l = 0; l < 3; ++l) {
    EXPECT_EQ(chan.paths[l].alpha_re, start.paths[l].alpha_re);
    EXPECT_EQ(chan.paths[l].alpha_im, start.paths[l].alpha_im);
    EXPECT_EQ(chan.paths[l].theta_a, start.paths[l].theta_a);
    EXPECT_EQ(chan.paths[l].theta_d, start.paths[l].theta_d);
  }
}

TEST(Evolve, IncrementVariances) {
  Rng rng(2024);
  const EvolutionParams evo{0.99, 0.0625, 0.0625};
  const UserChannel start = single_path({0.3, -1.1}, 1.0, 2.0);
  const int n = 100000;
  double gain = 0.0, re = 0.0, aoa = 0.0, aod = 0.0, cross = 0.0;
  for (int i = 0; i < n; ++i) {
    const PathState p = evolve(start, evo, rng).paths[0];
    const Complex inc = p.gain() - 0.99 * start.paths[0].gain();
    gain += std::norm(inc);
    re += inc.real() * inc.real();
    const double da = p.theta_a - 1.0;
    const double dd = p.theta_d - 2.0;
    aoa += da * da;
    aod += dd * dd;
    cross += da * dd;
  }
  EXPECT_NEAR(gain / n, 0.0199, 0.05 * 0.0199);
  EXPECT_NEAR(re / n, 0.00995, 0.05 * 0.00995);
  EXPECT_NEAR(aoa / n, 0.0625, 0.05 * 0.0625);
  EXPECT_NEAR(aod / n, 0.0625, 0.05 * 0.0625);
  EXPECT_NEAR(cross / n, 0.0, 0.002);
}

TEST(Evolve, GainPowerStaysStationary) {
  Rng rng(99);
  const EvolutionParams evo{0.99, 0.0, 0.0};
  const int n = 10000;
  std::vector<UserChannel> chans;
  for (int i = 0; i < n; ++i) {
    chans.push_back(draw_initial_channel(1, rng));
  }
  for (int t = 0; t < 20; ++t) {
    double power = 0.0;
    for (auto& c : chans) {
      c = evolve(c, evo, rng);
      power += std::norm(c.paths[0].gain());
    }
    EXPECT_NEAR(power / n, 1.0, 0.1) << "slot " << t;
  }
}

TEST(Evolve, RejectsInvalidParameters) {
  EXPECT_THROW((EvolutionParams{0.0, 0.1, 0.1}.validate()), ConfigError);
  EXPECT_THROW((EvolutionParams{1.5, 0.1, 0.1}.validate()), ConfigError);
  EXPECT_THROW((EvolutionParams{0.9, -0.1, 0.1}.validate()), ConfigError);
  EXPECT_NO_THROW((EvolutionParams{1.0, 0.0, 0.0}.validate()));
}

TEST(ProcessNoise, ZeroForStaticChannel) {
  EXPECT_EQ(process_noise_cov({1.0, 0.0, 0.0}, 2).cwiseAbs().maxCoeff(), 0.0);
}

TEST(ProcessNoise, SinglePathDiagonal) {
  const Eigen::MatrixXd q = process_noise_cov({0.99, 0.0625, 0.0625}, 1);
  ASSERT_EQ(q.rows(), 4);
  const Eigen::Vector4d expected(0.00995, 0.00995, 0.0625, 0.0625);
  EXPECT_LT((q.diagonal() - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ((q - Eigen::MatrixXd(q.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 0.0);
}

TEST(ProcessNoise, BlocksFollowStateLayout) {
  const Eigen::MatrixXd q = process_noise_cov({0.9, 0.2, 0.3}, 2);
  ASSERT_EQ(q.rows(), 8);
  for (int l = 0; l < 2; ++l) {
    EXPECT_DOUBLE_EQ(q(4 * l + kAlphaRe, 4 * l + kAlphaRe), 0.5 * (1 - 0.81));
    EXPECT_DOUBLE_EQ(q(4 * l + kAlphaIm, 4 * l + kAlphaIm), 0.5 * (1 - 0.81));
    EXPECT_DOUBLE_EQ(q(4 * l + kThetaA, 4 * l + kThetaA), 0.2);
    EXPECT_DOUBLE_EQ(q(4 * l + kThetaD, 4 * l + kThetaD), 0.3);
  }
  const Eigen::MatrixXd a = transition_matrix({0.9, 0.2, 0.3}, 2);
  EXPECT_EQ(a.diagonal(), (Eigen::VectorXd(8) << 0.9, 0.9, 1, 1, 0.9, 0.9, 1, 1).finished());
}

TEST(InitialChannel, AnglesAndGainStatistics) {
  Rng rng(1234);
  const int n = 20000;
  double power = 0.0;
  for (int i = 0; i < n; ++i) {
    const PathState p = draw_initial_channel(1, rng).paths[0];
    ASSERT_GE(p.theta_a, 0.0);
    ASSERT_LT(p.theta_a, kPi);
    ASSERT_GE(p.theta_d, 0.0);
    ASSERT_LT(p.theta_d, kPi);
    power += std::norm(p.gain());
  }
  EXPECT_NEAR(power / n, 1.0, 0.03);
}

TEST(StateVector, RoundTrip) {
  Rng rng(8);
  const UserChannel chan = draw_initial_channel(3, rng);
  const Eigen::VectorXd x = to_state_vector(chan);
  ASSERT_EQ(x.size(), 12);
  EXPECT_EQ(x(4 + kThetaA), chan.paths[1].theta_a);
  EXPECT_EQ(x(8 + kAlphaIm), chan.paths[2].alpha_im);
  const UserChannel back = from_state_vector(x, 0, 3);
  EXPECT_EQ(to_state_vector(back), x);
}

TEST(ArrayGeometry, Validation) {
  EXPECT_THROW((ArrayGeometry{0, 0.5}.validate()), ConfigError);
  EXPECT_THROW((ArrayGeometry{4, 0.0}.validate()), ConfigError);
  EXPECT_THROW((BeamspaceFrame({4, 0.5}, {0, 0.5})), ConfigError);
}

}  // namespace
}  // namespace lensbeam::channel
