#include <gtest/gtest.h>

#include <cmath>

#include "fourbody/bivec4.hpp"
#include "support.hpp"

using namespace fourbody;
using fourbody::testing::random_bivector;
using fourbody::testing::random_orthogonal;
using fourbody::testing::spectral_oracle;

TEST(Wedge, BasisVectors) {
  EXPECT_EQ(wedge(Vec4::basis(0), Vec4::basis(1)), Bivector4(1, 0, 0, 0, 0, 0));
  EXPECT_EQ(wedge(Vec4::basis(1), Vec4::basis(0)), Bivector4(-1, 0, 0, 0, 0, 0));
  EXPECT_EQ(wedge(Vec4::basis(2), Vec4::basis(3)), Bivector4::basis(2, 3));
  EXPECT_EQ(Bivector4::basis(3, 0), -1.0 * Bivector4::basis(0, 3));
}

TEST(Wedge, AntisymmetricAndBilinear) {
  Rng rng(11);
  for (int n = 0; n < 200; ++n) {
    Vec4 const a = rng.uniform_vec(-1, 1), b = rng.uniform_vec(-1, 1), c = rng.uniform_vec(-1, 1);
    double const s = rng.uniform(-2, 2);
    Bivector4 const ab = wedge(a, b);
    Bivector4 const ba = wedge(b, a);
    for (int i = 0; i < 6; ++i) {
      EXPECT_NEAR(ab.c[i], -ba.c[i], 1e-15);
      EXPECT_NEAR(wedge(a, a).c[i], 0.0, 0.0);
      EXPECT_NEAR(wedge(s * a + c, b).c[i], s * ab.c[i] + wedge(c, b).c[i], 1e-14);
    }
    // |a^b|^2 = |a|^2 |b|^2 - (a.b)^2
    EXPECT_NEAR(norm_squared(ab), norm_squared(a) * norm_squared(b) - dot(a, b) * dot(a, b),
                1e-14);
  }
}

TEST(Bivector, MatrixRoundTrip) {
  Rng rng(3);
  Bivector4 const b = random_bivector(rng);
  Eigen::Matrix4d const m = b.matrix();
  EXPECT_LT((m + m.transpose()).norm(), 1e-300);
  EXPECT_EQ(Bivector4::from_matrix(m), b);
  EXPECT_DOUBLE_EQ(m(0, 1), b.c[0]);
  EXPECT_DOUBLE_EQ(m(2, 3), b.c[5]);
  EXPECT_DOUBLE_EQ(b.entry(3, 1), -b.c[4]);
  // The matrix of a^b is a b^T - b a^T.
  Vec4 const a = rng.uniform_vec(-1, 1), c = rng.uniform_vec(-1, 1);
  Eigen::Matrix4d const outer =
      to_eigen(a) * to_eigen(c).transpose() - to_eigen(c) * to_eigen(a).transpose();
  EXPECT_LT((wedge(a, c).matrix() - outer).norm(), 1e-15);
}

TEST(Bivector, InnerProductIsHalfFrobenius) {
  Rng rng(5);
  for (int n = 0; n < 100; ++n) {
    Bivector4 const a = random_bivector(rng), b = random_bivector(rng);
    double const frob = 0.5 * (a.matrix().transpose() * b.matrix()).trace();
    EXPECT_NEAR(inner(a, b), frob, 1e-14);
  }
}

TEST(Pfaffian, Examples) {
  EXPECT_DOUBLE_EQ(pfaffian(Bivector4::basis(0, 1) + Bivector4::basis(2, 3)), 1.0);
  EXPECT_DOUBLE_EQ(pfaffian(Bivector4::basis(0, 1)), 0.0);
  EXPECT_DOUBLE_EQ(pfaffian(Bivector4(0, 1, 0, 0, 1, 0)), -1.0);
}

TEST(Pfaffian, SquareIsDeterminant) {
  Rng rng(7);
  for (int n = 0; n < 500; ++n) {
    Bivector4 const b = random_bivector(rng);
    double const pf = pfaffian(b);
    EXPECT_NEAR(pf * pf, b.matrix().determinant(), 1e-13);
  }
}

TEST(Pfaffian, SimpleBivectorsAndDeterminantRule) {
  Rng rng(8);
  for (int n = 0; n < 200; ++n) {
    Vec4 const a = rng.uniform_vec(-1, 1), b = rng.uniform_vec(-1, 1);
    EXPECT_NEAR(pfaffian(wedge(a, b)), 0.0, 1e-15);
    // pf(R M R^T) = det(R) pf(M)
    Bivector4 const p = random_bivector(rng);
    Eigen::Matrix4d const r = random_orthogonal(rng);
    EXPECT_NEAR(pfaffian(transform(r, p)), r.determinant() * pfaffian(p), 1e-13);
  }
}

TEST(Spectral, CanonicalInput) {
  SpectralForm const s = spectral_decompose(0.3 * Bivector4::basis(0, 1) +
                                            2.0 * Bivector4::basis(2, 3));
  EXPECT_NEAR(s.l1, 0.3, 1e-15);
  EXPECT_NEAR(s.l2, 2.0, 1e-15);
  EXPECT_EQ(s.rank, 4);
  EXPECT_FALSE(s.degenerate);
}

TEST(Spectral, OrderIsSmallerFirst) {
  SpectralForm const s = spectral_decompose(3.0 * Bivector4::basis(0, 1) +
                                            1.0 * Bivector4::basis(2, 3));
  EXPECT_NEAR(s.l1, 1.0, 1e-15);
  EXPECT_NEAR(s.l2, 3.0, 1e-15);
}

TEST(Spectral, RankTwoAndZero) {
  Rng rng(13);
  Vec4 const a = rng.uniform_vec(-1, 1), b = rng.uniform_vec(-1, 1);
  SpectralForm const s = spectral_decompose(wedge(a, b));
  EXPECT_EQ(s.rank, 2);
  EXPECT_NEAR(s.l1, 0.0, 1e-12);
  EXPECT_NEAR(s.l2, norm(wedge(a, b)), 1e-14);
  EXPECT_LT(norm(s.reconstruct() - wedge(a, b)), 1e-13);

  SpectralForm const z = spectral_decompose(Bivector4{});
  EXPECT_EQ(z.rank, 0);
  EXPECT_EQ(z.l1, 0.0);
  EXPECT_EQ(z.l2, 0.0);
}

TEST(Spectral, Degenerate) {
  Rng rng(17);
  Eigen::Matrix4d const r = random_orthogonal(rng);
  Bivector4 const l = transform(r, Bivector4::basis(0, 1) + Bivector4::basis(2, 3));
  SpectralForm const s = spectral_decompose(l);
  EXPECT_TRUE(s.degenerate);
  EXPECT_EQ(s.rank, 4);
  EXPECT_NEAR(s.l1, 1.0, 1e-12);
  EXPECT_NEAR(s.l2, 1.0, 1e-12);
  EXPECT_LT(norm(s.reconstruct() - l), 1e-12);
}

TEST(SpectralProperty, AgreesWithEigenvaluesAndReconstructs) {
  Rng rng(19);
  for (int n = 0; n < 2000; ++n) {
    Bivector4 const b = random_bivector(rng);
    SpectralForm const s = spectral_decompose(b);
    auto const oracle = spectral_oracle(b);
    double const scale = 1.0 + norm(b);
    ASSERT_LE(s.l1, s.l2);
    EXPECT_NEAR(s.l1, oracle[0], 1e-10 * scale);
    EXPECT_NEAR(s.l2, oracle[1], 1e-10 * scale);
    EXPECT_NEAR(s.l1 * s.l2, std::abs(pfaffian(b)), 1e-12 * scale * scale);
    EXPECT_NEAR(s.l1 * s.l1 + s.l2 * s.l2, norm_squared(b), 1e-12 * scale * scale);
    EXPECT_LT(norm(s.reconstruct() - b), 1e-12 * scale);

    Eigen::Matrix4d f;
    for (int k = 0; k < 4; ++k) f.col(k) = to_eigen(s.frame[k]);
    EXPECT_LT((f.transpose() * f - Eigen::Matrix4d::Identity()).norm(), 1e-12);
  }
}

TEST(SpectralProperty, OrthogonalInvariance) {
  Rng rng(23);
  for (int n = 0; n < 500; ++n) {
    Bivector4 const b = random_bivector(rng);
    Eigen::Matrix4d const r = random_orthogonal(rng);
    SpectralForm const s = spectral_decompose(b);
    SpectralForm const t = spectral_decompose(transform(r, b));
    EXPECT_NEAR(s.l1, t.l1, 1e-12);
    EXPECT_NEAR(s.l2, t.l2, 1e-12);
    EXPECT_NEAR(norm(transform(r, b)), norm(b), 1e-13);
  }
}

TEST(Nearest, CanonicalExample) {
  Rank2Projection const p = nearest_rank2(0.5 * Bivector4::basis(0, 1) + 2.0 * Bivector4::basis(2, 3));
  EXPECT_NEAR(p.distance, 0.5, 1e-15);
  EXPECT_LT(norm(p.pi - 2.0 * Bivector4::basis(2, 3)), 1e-15);
}

TEST(Nearest, RankTwoIsFixedAndZeroThrows) {
  Rng rng(29);
  Bivector4 const s = wedge(rng.uniform_vec(-1, 1), rng.uniform_vec(-1, 1));
  Rank2Projection const p = nearest_rank2(s);
  EXPECT_NEAR(p.distance, 0.0, 1e-12);
  EXPECT_LT(norm(p.pi - s), 1e-12);
  EXPECT_THROW(nearest_rank2(Bivector4{}), std::invalid_argument);
}

TEST(NearestProperty, DistanceIsSmallerValueAndBeatsRandomSimpleBivectors) {
  Rng rng(31);
  for (int n = 0; n < 300; ++n) {
    Bivector4 const b = random_bivector(rng);
    Rank2Projection const p = nearest_rank2(b);
    SpectralForm const s = spectral_decompose(b);
    EXPECT_NEAR(norm(b - p.pi), s.l1, 1e-12 * (1 + norm(b)));
    EXPECT_NEAR(p.distance, s.l1, 1e-12 * (1 + norm(b)));
    EXPECT_LE(std::abs(pfaffian(p.pi)), 1e-12 * norm_squared(b));
    // No simple bivector is closer.
    for (int t = 0; t < 20; ++t) {
      Bivector4 const w = wedge(rng.uniform_vec(-1.5, 1.5), rng.uniform_vec(-1.5, 1.5));
      EXPECT_GE(norm(b - w), p.distance - 1e-12);
    }
  }
}

TEST(WeylProperty, SmallerValueBoundedByEachSummand) {
  Rng rng(37);
  for (int n = 0; n < 2000; ++n) {
    Vec4 const a = rng.uniform_vec(-1, 1), b = rng.uniform_vec(-1, 1);
    Vec4 const c = rng.uniform_vec(-1, 1), d = rng.uniform_vec(-1, 1);
    Bivector4 const l = wedge(a, b) + wedge(c, d);
    SpectralForm const s = spectral_decompose(l);
    if (s.rank != 4) continue;
    double const tol = 1e-10 * (1 + norm(l));
    EXPECT_LE(s.l1, norm(wedge(a, b)) + tol);
    EXPECT_LE(s.l1, norm(wedge(c, d)) + tol);
  }
}
