#include "fourbody/bivec4.hpp"

#include <algorithm>
#include <initializer_list>
#include <span>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace fourbody {

namespace {

constexpr std::size_t kIndex[4][4] = {
    {6, 0, 1, 2}, {0, 6, 3, 4}, {1, 3, 6, 5}, {2, 4, 5, 6}};

Vec4 multiply(Eigen::Matrix4d const& m, Vec4 const& v) {
  return from_eigen(m * to_eigen(v));
}

// Removes the components along the (orthonormal) vectors of `basis`.
Vec4 orthogonalize(Vec4 v, std::span<Vec4 const> basis) {
  // Two passes keep the result orthogonal to working precision.
  for (int pass = 0; pass < 2; ++pass) {
    for (auto const& b : basis) v -= dot(v, b) * b;
  }
  return v;
}

}  // namespace

bool is_finite(Vec4 const& a) {
  return std::all_of(a.x.begin(), a.x.end(),
                     [](double c) { return std::isfinite(c); });
}

Bivector4 Bivector4::basis(std::size_t i, std::size_t j) {
  if (i == j || i > 3 || j > 3) {
    throw std::invalid_argument("Bivector4::basis: need distinct i, j < 4");
  }
  Bivector4 b;
  b.c[kIndex[i][j]] = i < j ? 1.0 : -1.0;
  return b;
}

double Bivector4::entry(std::size_t i, std::size_t j) const {
  if (i == j) return 0.0;
  double const v = c[kIndex[i][j]];
  return i < j ? v : -v;
}

Eigen::Matrix4d Bivector4::matrix() const {
  Eigen::Matrix4d m;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) m(i, j) = entry(i, j);
  }
  return m;
}

Bivector4 Bivector4::from_matrix(Eigen::Matrix4d const& m) {
  return {m(0, 1), m(0, 2), m(0, 3), m(1, 2), m(1, 3), m(2, 3)};
}

Bivector4 wedge(Vec4 const& a, Vec4 const& b) {
  auto w = [&](std::size_t i, std::size_t j) { return a[i] * b[j] - a[j] * b[i]; };
  return {w(0, 1), w(0, 2), w(0, 3), w(1, 2), w(1, 3), w(2, 3)};
}

double inner(Bivector4 const& p1, Bivector4 const& p2) {
  double s = 0.0;
  for (std::size_t i = 0; i < 6; ++i) s += p1.c[i] * p2.c[i];
  return s;
}

double norm_squared(Bivector4 const& p) { return inner(p, p); }
double norm(Bivector4 const& p) { return std::sqrt(inner(p, p)); }

double pfaffian(Bivector4 const& p) {
  auto const& c = p.c;
  return c[0] * c[5] - c[1] * c[4] + c[2] * c[3];
}

Bivector4 transform(Eigen::Matrix4d const& r, Bivector4 const& p) {
  return Bivector4::from_matrix(r * p.matrix() * r.transpose());
}

double rank_tolerance(Bivector4 const& p) { return 1e-10 * (1.0 + norm(p)); }

Bivector4 SpectralForm::reconstruct() const {
  return l1 * wedge(frame[0], frame[1]) + l2 * wedge(frame[2], frame[3]);
}

SpectralForm spectral_decompose(Bivector4 const& p) {
  SpectralForm out;
  double const tol = rank_tolerance(p);

  // l1^2 and l2^2 are the roots of y^2 - |L|^2 y + pf^2 = 0; equivalently
  // (l2 +- l1)^2 = |L|^2 +- 2|pf|. l1 is recovered from pf / l2, which keeps
  // full relative precision when l1 << l2.
  double const n2 = norm_squared(p);
  double const pf = std::abs(pfaffian(p));
  double const sum = std::sqrt(n2 + 2.0 * pf);
  double const diff = std::sqrt(std::max(0.0, n2 - 2.0 * pf));
  out.l2 = 0.5 * (sum + diff);
  out.l1 = out.l2 > 0.0 ? std::min(pf / out.l2, out.l2) : 0.0;
  out.rank = (out.l1 > tol ? 2 : 0) + (out.l2 > tol ? 2 : 0);
  out.degenerate = out.l2 - out.l1 <= tol;

  // -M^2 = M^T M is symmetric positive semidefinite with eigenvalues l1^2,
  // l2^2 (each twice). Its eigenvectors, sorted ascending, seed the frame;
  // the partner of each frame vector is -M e / l, which fixes the in-plane
  // orientation so that the coefficient on e1^e2 (resp. e3^e4) is +l1 (+l2).
  Eigen::Matrix4d const m = p.matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> const eig(m.transpose() * m);
  std::array<Vec4, 4> v;
  for (int k = 0; k < 4; ++k) v[k] = from_eigen(eig.eigenvectors().col(k));

  auto& f = out.frame;
  // First candidate (in order of preference) with a substantial component
  // orthogonal to f[0..n), else the one with the largest such component.
  auto pick = [&](std::size_t n, std::initializer_list<int> order) {
    std::span<Vec4 const> done(f.data(), n);
    Vec4 best;
    double best_norm = -1.0;
    for (int k : order) {
      Vec4 const r = orthogonalize(v[k], done);
      double const rn = norm(r);
      if (rn >= 0.5) return r / rn;
      if (rn > best_norm) {
        best = r;
        best_norm = rn;
      }
    }
    return best / best_norm;
  };
  auto partner = [&](std::size_t n, double l, std::initializer_list<int> order) {
    if (l > tol) {
      std::span<Vec4 const> done(f.data(), n);
      Vec4 const r = orthogonalize(-1.0 * multiply(m, f[n - 1]), done);
      if (double const rn = norm(r); rn > 0.0) return r / rn;
    }
    return pick(n, order);
  };

  f[0] = v[0];
  f[1] = partner(1, out.l1, {1, 2, 3});
  f[2] = pick(2, {2, 3, 1, 0});
  f[3] = partner(3, out.l2, {3, 2, 1, 0});
  return out;
}

Rank2Projection nearest_rank2(Bivector4 const& p) {
  SpectralForm const s = spectral_decompose(p);
  if (s.rank == 0) {
    throw std::invalid_argument(
        "nearest_rank2: zero bivector has no nearest rank-2 point");
  }
  Rank2Projection out;
  out.pi = s.l2 * wedge(s.frame[2], s.frame[3]);
  out.distance = s.l1;
  return out;
}

}  // namespace fourbody
