#include "lensbeam/selftest.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "lensbeam/channel.hpp"
#include "lensbeam/errors.hpp"
#include "lensbeam/random.hpp"
#include "lensbeam/trackers.hpp"

namespace lensbeam::cli {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

Eigen::MatrixXd random_matrix(int rows, int cols, Rng& rng) {
  Eigen::MatrixXd a(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      a(i, j) = gaussian(rng, 1.0);
    }
  }
  return a;
}

SelftestCheck check_unitarity() {
  double worst = 0.0;
  for (int n : {1, 2, 3, 4, 8, 16, 32}) {
    const Eigen::MatrixXcd u = channel::dft_matrix(n);
    const double err = (u * u.adjoint() - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    worst = std::max(worst, err);
  }
  return {"dft unitarity", worst < 1e-12, "max |U U^H - I| = " + sci(worst)};
}

SelftestCheck check_moment_matching(Rng& rng) {
  double worst_mean = 0.0;
  double worst_cov = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + trial % 20;
    const Eigen::MatrixXd b = random_matrix(m, m, rng);
    filter::FilterState s{random_matrix(m, 1, rng), b * b.transpose()};
    for (const auto& p : filter::default_spread_grid(m)) {
      const filter::SigmaSet set = filter::sigma_points(s, p);
      worst_mean = std::max(worst_mean, (set.weighted_mean() - s.mean).cwiseAbs().maxCoeff());
    }
    const filter::SigmaSet set = filter::sigma_points(s, filter::UtParams{1.0, 0.0, 2.0});
    const double scale = std::max(1.0, s.cov.cwiseAbs().maxCoeff());
    worst_cov = std::max(worst_cov,
                         (set.weighted_cov(s.mean) - s.cov).cwiseAbs().maxCoeff() / scale);
  }
  const bool ok = worst_mean < 1e-12 && worst_cov < 1e-10;
  return {"unscented moment matching", ok,
          "mean err " + sci(worst_mean) + ", relative cov err " + sci(worst_cov)};
}

// Textbook Kalman filter, kept separate from the library filters.
struct AffineKalman {
  Eigen::MatrixXd a, q, h, r;
  Eigen::VectorXd b, d;

  void step(Eigen::VectorXd& x, Eigen::MatrixXd& p, const Eigen::VectorXd& y) const {
    x = a * x + b;
    p = a * p * a.transpose() + q;
    const Eigen::MatrixXd s = h * p * h.transpose() + r;
    const Eigen::MatrixXd k = p * h.transpose() * s.inverse();
    x += k * (y - h * x - d);
    p = p - k * s * k.transpose();
  }
};

SelftestCheck check_affine_oracle(const SelftestOptions& options, Rng& rng) {
  const int m = 4;
  const int n = 2;
  AffineKalman kf;
  kf.a = 0.9 * Eigen::MatrixXd::Identity(m, m) + 0.05 * random_matrix(m, m, rng);
  kf.b = 0.1 * random_matrix(m, 1, rng);
  const Eigen::MatrixXd gq = random_matrix(m, m, rng);
  kf.q = 0.01 * gq * gq.transpose() + 0.01 * Eigen::MatrixXd::Identity(m, m);
  kf.h = random_matrix(n, m, rng);
  kf.d = random_matrix(n, 1, rng);
  kf.r = 0.05 * Eigen::MatrixXd::Identity(n, n);

  const filter::LinearProcess process{kf.a, kf.b, kf.q};
  const filter::ObservationModel model{
      [h = kf.h, d = kf.d](const Eigen::VectorXd& x) -> Eigen::VectorXd { return h * x + d; }, n,
      kf.r};
  const filter::FilterState initial{random_matrix(m, 1, rng), kf.q};

  filter::UnscentedTracker ukf(initial, process, model, filter::UtParams{0.5, 1.0, 2.0},
                               options.update_form);
  filter::ExtendedTracker ekf(initial, process, model);
  Eigen::VectorXd x = initial.mean;
  Eigen::MatrixXd p = initial.cov;
  Eigen::VectorXd truth = initial.mean;

  double ukf_err = 0.0;
  double ekf_err = 0.0;
  for (int t = 0; t < 20; ++t) {
    truth = kf.a * truth + kf.b + 0.1 * random_matrix(m, 1, rng);
    const Eigen::VectorXd y = kf.h * truth + kf.d + 0.2 * random_matrix(n, 1, rng);
    kf.step(x, p, y);
    const auto& u = ukf.step(y);
    const auto& e = ekf.step(y);
    ukf_err = std::max({ukf_err, (u.mean - x).cwiseAbs().maxCoeff(), (u.cov - p).cwiseAbs().maxCoeff()});
    ekf_err = std::max({ekf_err, (e.mean - x).cwiseAbs().maxCoeff(), (e.cov - p).cwiseAbs().maxCoeff()});
  }
  const bool ok = ukf_err < 1e-8 && ekf_err < 1e-6;
  return {"affine kalman oracle", ok, "ukf err " + sci(ukf_err) + ", ekf err " + sci(ekf_err)};
}

SelftestCheck check_beamspace_element(Rng& rng) {
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  const int sizes[] = {2, 4, 8, 16};
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n_t = sizes[trial % 4];
    const int n_r = sizes[(trial / 4) % 4];
    const channel::ArrayGeometry tx{n_t, 0.5};
    const channel::ArrayGeometry rx{n_r, 0.5};
    const double theta_a = angle(rng);
    const double theta_d = angle(rng);
    const int row = static_cast<int>(rng() % n_r);
    const int col = static_cast<int>(rng() % n_t);
    const Eigen::MatrixXcd brute = channel::dft_matrix(n_r) * channel::steering_vector(rx, theta_a) *
                                   channel::steering_vector(tx, theta_d).adjoint() *
                                   channel::dft_matrix(n_t).adjoint();
    const channel::Complex closed =
        channel::beamspace_element(0.5 * std::sin(theta_a), 0.5 * std::sin(theta_d),
                                   channel::virtual_angle(n_t, col), channel::virtual_angle(n_r, row),
                                   n_t, n_r) /
        static_cast<double>(n_t * n_r);
    worst = std::max(worst, std::abs(closed - brute(row, col)));
  }
  bool exact = true;
  for (int n : {2, 4, 8, 16}) {
    exact = exact && channel::dirichlet(n, 0.0) == static_cast<double>(n);
  }
  return {"beamspace element closed form", worst < 1e-9 && exact,
          "max err " + sci(worst) + (exact ? "" : ", dirichlet(n, 0) != n")};
}

template <typename F>
SelftestCheck guarded(const std::string& name, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {name, false, std::string("threw: ") + e.what()};
  }
}

}  // namespace

std::vector<SelftestCheck> run_selftest(const SelftestOptions& options) {
  Rng rng(options.seed);
  std::vector<SelftestCheck> checks;
  checks.push_back(guarded("dft unitarity", [] { return check_unitarity(); }));
  checks.push_back(guarded("unscented moment matching", [&] { return check_moment_matching(rng); }));
  checks.push_back(
      guarded("affine kalman oracle", [&] { return check_affine_oracle(options, rng); }));
  checks.push_back(
      guarded("beamspace element closed form", [&] { return check_beamspace_element(rng); }));
  return checks;
}

bool print_selftest(const std::vector<SelftestCheck>& checks, std::ostream& out) {
  bool all = true;
  for (const auto& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.detail << ")\n";
    all = all && c.passed;
  }
  return all;
}

}  // namespace lensbeam::cli
