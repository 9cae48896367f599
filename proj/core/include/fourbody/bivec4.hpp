#pragma once

// Vectors and bivectors of Euclidean R^4.
//
// A bivector is stored by its six coefficients on e_i^e_j (i < j) and is
// identified with the 4x4 antisymmetric matrix M, M(i,j) = c_ij for i < j.
// The inner product is <P,R> = 1/2 tr(P^T R) = sum_{i<j} p_ij r_ij, so that
// |a^b|^2 = |a|^2 |b|^2 - <a,b>^2.

#include <array>
#include <cmath>
#include <cstddef>

#include <Eigen/Core>

namespace fourbody {

struct Vec4 {
  std::array<double, 4> x{};

  constexpr Vec4() = default;
  constexpr Vec4(double x1, double x2, double x3, double x4)
      : x{x1, x2, x3, x4} {}

  constexpr double operator[](std::size_t i) const { return x[i]; }
  constexpr double& operator[](std::size_t i) { return x[i]; }

  static constexpr Vec4 basis(std::size_t i) {
    Vec4 v;
    v.x[i] = 1.0;
    return v;
  }

  Vec4& operator+=(Vec4 const& o) {
    for (std::size_t i = 0; i < 4; ++i) x[i] += o.x[i];
    return *this;
  }
  Vec4& operator-=(Vec4 const& o) {
    for (std::size_t i = 0; i < 4; ++i) x[i] -= o.x[i];
    return *this;
  }
  Vec4& operator*=(double s) {
    for (auto& c : x) c *= s;
    return *this;
  }
  Vec4& operator/=(double s) {
    for (auto& c : x) c /= s;
    return *this;
  }

  friend bool operator==(Vec4 const&, Vec4 const&) = default;
};

inline Vec4 operator+(Vec4 a, Vec4 const& b) { return a += b; }
inline Vec4 operator-(Vec4 a, Vec4 const& b) { return a -= b; }
inline Vec4 operator-(Vec4 a) { return a *= -1.0; }
inline Vec4 operator*(double s, Vec4 a) { return a *= s; }
inline Vec4 operator*(Vec4 a, double s) { return a *= s; }
inline Vec4 operator/(Vec4 a, double s) { return a /= s; }

inline double dot(Vec4 const& a, Vec4 const& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}
inline double norm_squared(Vec4 const& a) { return dot(a, a); }
inline double norm(Vec4 const& a) { return std::sqrt(dot(a, a)); }
bool is_finite(Vec4 const& a);

inline Eigen::Vector4d to_eigen(Vec4 const& a) {
  return {a[0], a[1], a[2], a[3]};
}
inline Vec4 from_eigen(Eigen::Vector4d const& v) {
  return {v(0), v(1), v(2), v(3)};
}

class Bivector4 {
 public:
  // Coefficient order: c12, c13, c14, c23, c24, c34.
  std::array<double, 6> c{};

  constexpr Bivector4() = default;
  constexpr Bivector4(double c12, double c13, double c14, double c23,
                      double c24, double c34)
      : c{c12, c13, c14, c23, c24, c34} {}

  // e_i ^ e_j with 0-based indices, i != j.
  static Bivector4 basis(std::size_t i, std::size_t j);

  // Matrix entry M(i, j), 0-based, antisymmetric.
  double entry(std::size_t i, std::size_t j) const;

  Eigen::Matrix4d matrix() const;
  // Reads the strict upper triangle; the caller is responsible for M being
  // antisymmetric.
  static Bivector4 from_matrix(Eigen::Matrix4d const& m);

  Bivector4& operator+=(Bivector4 const& o) {
    for (std::size_t i = 0; i < 6; ++i) c[i] += o.c[i];
    return *this;
  }
  Bivector4& operator-=(Bivector4 const& o) {
    for (std::size_t i = 0; i < 6; ++i) c[i] -= o.c[i];
    return *this;
  }
  Bivector4& operator*=(double s) {
    for (auto& v : c) v *= s;
    return *this;
  }

  friend bool operator==(Bivector4 const&, Bivector4 const&) = default;
};

inline Bivector4 operator+(Bivector4 a, Bivector4 const& b) { return a += b; }
inline Bivector4 operator-(Bivector4 a, Bivector4 const& b) { return a -= b; }
inline Bivector4 operator*(double s, Bivector4 a) { return a *= s; }
inline Bivector4 operator*(Bivector4 a, double s) { return a *= s; }

Bivector4 wedge(Vec4 const& a, Vec4 const& b);
double inner(Bivector4 const& p1, Bivector4 const& p2);
double norm(Bivector4 const& p);
double norm_squared(Bivector4 const& p);

// c12 c34 - c13 c24 + c14 c23. Its absolute value is l1 * l2.
double pfaffian(Bivector4 const& p);

// Action of a linear map R on bivectors: R M R^T.
Bivector4 transform(Eigen::Matrix4d const& r, Bivector4 const& p);

// Rank and degeneracy threshold 1e-10 (1 + |L|).
double rank_tolerance(Bivector4 const& p);

struct SpectralForm {
  double l1 = 0.0;
  double l2 = 0.0;
  // Orthonormal; L = l1 e1^e2 + l2 e3^e4.
  std::array<Vec4, 4> frame{};
  // 0, 2 or 4.
  int rank = 0;
  // l2 - l1 below rank_tolerance: the split into invariant planes is not
  // unique and the returned frame is one valid choice.
  bool degenerate = false;

  Bivector4 reconstruct() const;
};

SpectralForm spectral_decompose(Bivector4 const& p);

struct Rank2Projection {
  Bivector4 pi;
  double distance = 0.0;
};

// Nearest bivector of rank exactly 2: l2 e3^e4, at distance l1.
// Throws std::invalid_argument for the zero bivector.
Rank2Projection nearest_rank2(Bivector4 const& p);

}  // namespace fourbody
