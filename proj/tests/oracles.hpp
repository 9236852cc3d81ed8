#pragma once

// Reference computations used to cross-check the library. Nothing here calls
// into the routines being checked except for the value types.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "monoscore/monoscore.hpp"

namespace oracle {

using monoscore::complex;
using monoscore::ComplexMatrix;

inline Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  Eigen::MatrixXcd out(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) out(r, c) = m(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  }
  return out;
}

inline ComplexMatrix from_eigen(const Eigen::MatrixXcd& m) {
  ComplexMatrix out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = m(r, c);
  }
  return out;
}

/// Descending eigenvalues of a Hermitian matrix.
inline std::vector<double> eigenvalues(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(m), Eigen::EigenvaluesOnly);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

inline double entropy_bits(const std::vector<double>& ev) {
  double s = 0.0;
  for (double x : ev) {
    if (x > 1e-14) s -= x * std::log2(x);
  }
  return s;
}

inline double entropy_bits(const ComplexMatrix& m) { return entropy_bits(eigenvalues(m)); }

/// Concurrence from the spectrum of rho * rho~ (no matrix square roots).
inline double concurrence_rho_rho_tilde(const ComplexMatrix& rho) {
  // The square roots of the spectrum of rho * rho~ are the singular values of
  // tau = X^T (Y x Y) X with rho = X X^dagger; this avoids square-rooting
  // eigenvalue noise on rank-deficient states.
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(to_eigen(rho));
  Eigen::Matrix4cd x = es.eigenvectors();
  for (int k = 0; k < 4; ++k) x.col(k) *= std::sqrt(std::max(0.0, es.eigenvalues()(k)));
  const Eigen::Matrix4cd tau = x.transpose() * yy * x;
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(tau);
  const auto& s = svd.singularValues();
  return std::max(0.0, s(0) - s(1) - s(2) - s(3));
}

/// Pure two-qubit concurrence |<psi| sigma_y x sigma_y |psi*>| = 2|ad - bc|.
inline double pure_concurrence(const std::vector<complex>& psi) {
  return 2.0 * std::abs(psi[0] * psi[3] - psi[1] * psi[2]);
}

struct GridResult {
  double value = 0.0;
  double theta = 0.0;
  double phi = 0.0;
};

/// Brute-force minimum over a theta x phi grid of projective measurements on
/// one qubit of a two-qubit state. Each outcome's unnormalized conditional
/// state is formed explicitly as tr_measured[(1 x P) rho] with the projector
/// P = |n><n| built from the state vector |n>. Only theta in [0, pi/2] is
/// scanned: n and -n give the same measurement.
///
/// objective: conditional entropy sum p_i S(rho_i), or the entropy of the
/// dephased state sum_i (1 x P_i) rho (1 x P_i).
namespace detail {

inline Eigen::Matrix4cd measured_second(const ComplexMatrix& rho, bool measure_first) {
  Eigen::Matrix4cd r = to_eigen(rho);
  if (measure_first) {
    Eigen::Matrix4cd swap = Eigen::Matrix4cd::Zero();
    swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
    r = swap * r * swap;
  }
  return r;
}

inline double grid_objective(const Eigen::Matrix4cd& r, bool post_measurement, double theta, double phi) {
  const Eigen::Vector2cd up(std::cos(theta / 2), std::polar(std::sin(theta / 2), phi));
  const Eigen::Vector2cd down(-std::polar(std::sin(theta / 2), -phi), std::cos(theta / 2));
  double total = 0.0;
  double cond = 0.0;
  for (const auto* v : {&up, &down}) {
    // (tr_B[(1 x |n><n|) rho])_{a a'} = <a n| rho |a' n>
    Eigen::Matrix2cd block;
    for (int a = 0; a < 2; ++a) {
      for (int ap = 0; ap < 2; ++ap) {
        complex s = 0.0;
        for (int b = 0; b < 2; ++b) {
          for (int bp = 0; bp < 2; ++bp) s += std::conj((*v)(b)) * r(2 * a + b, 2 * ap + bp) * (*v)(bp);
        }
        block(a, ap) = s;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es;
    es.computeDirect(block, Eigen::EigenvaluesOnly);
    const double p = block.trace().real();
    for (int k = 0; k < 2; ++k) {
      const double mu = es.eigenvalues()(k);
      if (mu > 1e-14) total -= mu * std::log2(mu);
      if (p > 1e-14 && mu > 1e-14) cond -= mu * std::log2(mu / p);
    }
  }
  return post_measurement ? total : cond;
}

inline std::vector<GridResult> grid_scan(const Eigen::Matrix4cd& r, bool post_measurement, int theta_steps,
                                         int phi_steps) {
  std::vector<GridResult> out;
  const int half = theta_steps / 2;
  out.reserve(static_cast<std::size_t>((half + 1) * phi_steps));
  for (int i = 0; i <= half; ++i) {
    const double theta = std::numbers::pi * i / theta_steps;
    for (int j = 0; j < phi_steps; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / phi_steps;
      out.push_back({grid_objective(r, post_measurement, theta, phi), theta, phi});
    }
  }
  return out;
}

}  // namespace detail

inline GridResult dense_grid_minimum(const ComplexMatrix& rho, bool measure_first, bool post_measurement,
                                     int theta_steps = 720, int phi_steps = 1440) {
  const auto r = detail::measured_second(rho, measure_first);
  const auto all = detail::grid_scan(r, post_measurement, theta_steps, phi_steps);
  return *std::min_element(all.begin(), all.end(),
                           [](const GridResult& a, const GridResult& b) { return a.value < b.value; });
}

/// The dense grid, then repeated 21 x 21 sub-grids (each 10x narrower) around
/// the best `seeds` grid points; resolves the minimum far below the grid step.
inline GridResult zoomed_grid_minimum(const ComplexMatrix& rho, bool measure_first, bool post_measurement,
                                      int theta_steps = 720, int phi_steps = 1440, int seeds = 8) {
  const auto r = detail::measured_second(rho, measure_first);
  auto all = detail::grid_scan(r, post_measurement, theta_steps, phi_steps);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(seeds), all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(),
                    [](const GridResult& a, const GridResult& b) { return a.value < b.value; });
  GridResult best = all[0];
  for (std::size_t s = 0; s < k; ++s) {
    GridResult local = all[s];
    double wt = std::numbers::pi / theta_steps;
    double wp = 2.0 * std::numbers::pi / phi_steps;
    for (int level = 0; level < 7; ++level) {
      const GridResult centre = local;
      for (int i = -10; i <= 10; ++i) {
        for (int j = -10; j <= 10; ++j) {
          const double t = centre.theta + wt * i / 10.0;
          const double p = centre.phi + wp * j / 10.0;
          const double v = detail::grid_objective(r, post_measurement, t, p);
          if (v < local.value) local = {v, t, p};
        }
      }
      wt /= 10.0;
      wp /= 10.0;
    }
    if (local.value < best.value) best = local;
  }
  return best;
}

/// Haar-average entropy of one qubit of an N-qubit pure state.
inline double page_mean_one_qubit(int n) {
  const int d = 1 << n;
  double h = 0.0;
  for (int j = d / 2 + 1; j <= d; ++j) h += 1.0 / j;
  return std::numbers::log2e * (h - 1.0 / d);
}

/// Largest alpha in (0, amax] at which `score` changes sign from negative to
/// non-negative, by a uniform scan with `points` samples.
inline double dense_crossing(const std::function<double(double)>& score, double amax, int points) {
  double last = 0.0;
  double prev_alpha = 0.0;
  bool prev_negative = false;
  for (int i = 1; i <= points; ++i) {
    const double a = amax * i / points;
    const bool negative = score(a) < -1e-10;
    if (prev_negative && !negative) last = 0.5 * (a + prev_alpha);
    prev_negative = negative;
    prev_alpha = a;
  }
  return last;
}

/// Random two-qubit density matrix: the first two qubits of a Haar state on
/// `n` qubits (n = 2 gives a pure state, n = 4 generically full rank).
inline monoscore::DensityMatrix random_two_qubit_state(int n, std::uint64_t seed, std::uint64_t index) {
  const auto psi = monoscore::sample_haar_pure(n, {seed, index});
  return monoscore::partial_trace(psi, {0, 1});
}

inline ComplexMatrix haar_unitary_2(std::mt19937_64& eng) {
  std::normal_distribution<double> g;
  Eigen::Matrix2cd z;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) z(r, c) = complex(g(eng), g(eng));
  }
  Eigen::HouseholderQR<Eigen::Matrix2cd> qr(z);
  Eigen::Matrix2cd q = qr.householderQ();
  return from_eigen(q);
}

}  // namespace oracle
