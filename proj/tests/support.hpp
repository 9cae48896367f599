#pragma once

// Random inputs and independent reference computations shared by the tests.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "fourbody/bivec4.hpp"
#include "fourbody/phase.hpp"
#include "fourbody/rng.hpp"

namespace fourbody::testing {

inline Bivector4 random_bivector(Rng& rng, double lo = -1.0, double hi = 1.0) {
  Bivector4 b;
  for (auto& c : b.c) c = rng.uniform(lo, hi);
  return b;
}

// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with the
// signs of R's diagonal fixed).
inline Eigen::Matrix4d random_orthogonal(Rng& rng) {
  Eigen::Matrix4d g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::Matrix4d> qr(g);
  Eigen::Matrix4d q = qr.householderQ();
  Eigen::Matrix4d const r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < 4; ++i) {
    if (r(i, i) < 0) q.col(i) *= -1.0;
  }
  return q;
}

inline Eigen::Matrix4d random_rotation(Rng& rng) {
  Eigen::Matrix4d q = random_orthogonal(rng);
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

// The moduli l1 <= l2 from the complex eigenvalues +-i l of the matrix.
inline std::array<double, 2> spectral_oracle(Bivector4 const& b) {
  Eigen::EigenSolver<Eigen::Matrix4d> es(b.matrix(), false);
  std::array<double, 4> im;
  for (int i = 0; i < 4; ++i) im[i] = std::abs(es.eigenvalues()(i).imag());
  std::sort(im.begin(), im.end());
  return {0.5 * (im[0] + im[1]), 0.5 * (im[2] + im[3])};
}

inline Masses random_masses(Rng& rng) {
  return Masses(rng.uniform(0.1, 2.0), rng.uniform(0.1, 2.0), rng.uniform(0.1, 2.0));
}

// A center-of-mass state with O(1) positions and velocities.
inline State random_state(Rng& rng, Masses const& m) {
  std::array<Vec4, 3> x, v;
  for (;;) {
    for (std::size_t i = 0; i < 3; ++i) {
      x[i] = rng.uniform_vec(-1.0, 1.0);
      v[i] = rng.uniform_vec(-1.0, 1.0);
    }
    recenter(m, x, v);
    auto const d = mutual_distances(x);
    if (*std::min_element(d.begin(), d.end()) > 0.2) return State(m, x, v);
  }
}

inline JacobiState random_jacobi(Rng& rng, Masses const& m) {
  return to_jacobi(random_state(rng, m));
}

// Central difference of f at x along coordinate i with step h.
template <int N>
double central_difference(std::function<double(Eigen::Matrix<double, N, 1> const&)> const& f,
                          Eigen::Matrix<double, N, 1> x, int i, double h) {
  double const x0 = x(i);
  x(i) = x0 + h;
  double const fp = f(x);
  x(i) = x0 - h;
  double const fm = f(x);
  return (fp - fm) / (2.0 * h);
}

inline double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace fourbody::testing
