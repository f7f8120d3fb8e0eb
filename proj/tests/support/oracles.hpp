#pragma once

// Reference computations for tests. Written from the defining formulas and
// kept free of library calls so they can check the library independently.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Dense>

namespace oracle {

using cd = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

// a(theta)[i] = exp(-j 2 pi d sin(theta) q_i) / sqrt(N), q_i = i - (N-1)/2
inline Eigen::VectorXcd steering(int n, double d, double theta) {
  Eigen::VectorXcd a(n);
  for (int i = 0; i < n; ++i) {
    const double q = i - (n - 1) / 2.0;
    a(i) = std::exp(cd(0.0, -2.0 * pi * d * q * std::sin(theta))) / std::sqrt(double(n));
  }
  return a;
}

inline double psi(int n, int l) { return (l - (n + 1) / 2.0) / n; }

// Row l is conj(u(psi_l)) / sqrt(n) with u(psi)[i] = exp(-j 2 pi psi (i - (n-1)/2)).
inline Eigen::MatrixXcd dft(int n) {
  Eigen::MatrixXcd u(n, n);
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      const cd ui = std::exp(cd(0.0, -2.0 * pi * psi(n, l) * (i - (n - 1) / 2.0)));
      u(l, i) = std::conj(ui) / std::sqrt(double(n));
    }
  }
  return u;
}

// Sum of unit phasors; equals sin(pi n phi) / sin(pi phi) away from integers.
inline double dirichlet_sum(int n, double phi) {
  cd s = 0.0;
  for (int i = 0; i < n; ++i) {
    s += std::exp(cd(0.0, 2.0 * pi * phi * (i - (n - 1) / 2.0)));
  }
  return s.real();
}

struct Path {
  cd alpha;
  double theta_a;
  double theta_d;
};

inline Eigen::MatrixXcd spatial(int n_r, int n_t, double d, const std::vector<Path>& paths) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n_r, n_t);
  for (const auto& p : paths) {
    h += p.alpha * steering(n_r, d, p.theta_a) * steering(n_t, d, p.theta_d).adjoint();
  }
  return std::sqrt(double(n_r) * n_t / paths.size()) * h;
}

inline Eigen::MatrixXcd beamspace(int n_r, int n_t, double d, const std::vector<Path>& paths) {
  return dft(n_r) * spatial(n_r, n_t, d, paths) * dft(n_t).adjoint();
}

// Angle whose spatial frequency d sin(theta) sits exactly on beam l.
inline double on_grid_angle(int n, int l, double d = 0.5) { return std::asin(psi(n, l) / d); }

// Textbook Kalman filter for x' = A x + b + w, y = H x + c + v.
struct Kalman {
  Eigen::MatrixXd A, Q, H, R;
  Eigen::VectorXd b, c;
  Eigen::VectorXd x;
  Eigen::MatrixXd P;

  void predict() {
    x = A * x + b;
    P = A * P * A.transpose() + Q;
  }
  void update(const Eigen::VectorXd& y) {
    const Eigen::MatrixXd S = H * P * H.transpose() + R;
    const Eigen::MatrixXd K = P * H.transpose() * S.inverse();
    x = x + K * (y - H * x - c);
    P = P - K * S * K.transpose();
    P = 0.5 * (P + P.transpose());
  }
};

inline Eigen::MatrixXd random_matrix(int r, int c, std::mt19937_64& g) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd m(r, c);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) {
      m(i, j) = n(g);
    }
  }
  return m;
}

inline Eigen::MatrixXd random_spd(int n, std::mt19937_64& g, double floor = 0.0) {
  const Eigen::MatrixXd b = random_matrix(n, n, g);
  return b * b.transpose() + floor * Eigen::MatrixXd::Identity(n, n);
}

inline Eigen::MatrixXcd random_complex(int r, int c, std::mt19937_64& g) {
  Eigen::MatrixXcd m(r, c);
  m.real() = random_matrix(r, c, g);
  m.imag() = random_matrix(r, c, g);
  return m;
}

}  // namespace oracle
