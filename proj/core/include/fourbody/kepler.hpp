#pragma once

// Circular two-body motion, the critical energies at infinity and the
// scale-invariant energy-momentum curves they trace.
//
// For a tight pair (i, j) carrying angular momentum l while the third body
// escapes, the energy tends to
//   H_ij / l^2,   H_ij = -(m_i m_j)^3 / (2 (m_i + m_j)).
// With h = H (l1 + l2)^2, k = l1 l2 / (l1 + l2)^2 and chi = l1 / (l1 + l2)
// the infinity curves are (h, k) = (H_ij / chi^2, chi (1 - chi)).

#include <string>

#include "fourbody/bivec4.hpp"
#include "fourbody/phase.hpp"

namespace fourbody {

// Body pair (i, j), 1-based, i < j.
class PairId {
 public:
  // Accepts the two indices in either order; throws for i == j or
  // indices outside 1..3.
  PairId(int i, int j);

  int i() const { return i_; }
  int j() const { return j_; }
  // The remaining body, 1-based.
  int other() const { return 6 - i_ - j_; }
  // "12", "13" or "23".
  std::string label() const;

  static std::array<PairId, 3> all();

  friend auto operator<=>(PairId const&, PairId const&) = default;

 private:
  int i_;
  int j_;
};

double h_ij(Masses const& m, PairId pair);

// h_ij / l^2. Throws std::invalid_argument for l <= 0.
double h_infinity(Masses const& m, PairId pair, double l);

struct CircularBinary {
  // Relative position and momentum, q along the first plane vector and p
  // along the second, q^p = l f1^f2.
  Vec4 q;
  Vec4 p;
};

// Separation r = l^2 / (mu m_i m_j), momentum l / r, energy h_infinity.
// Throws std::invalid_argument for l <= 0 or non-positive masses.
CircularBinary circular_binary(double mi, double mj, double l, Vec4 const& f1,
                               Vec4 const& f2);

struct CurvePoint {
  PairId pair;
  double chi;
  double k;
  double h;
};

// Throws std::domain_error unless 0 < chi < 1.
CurvePoint curve_point(Masses const& m, PairId pair, double chi);

// Small-chi root of k = chi (1 - chi), evaluated without cancellation.
// Throws std::domain_error unless 0 < k <= 1/4.
double chi_small_branch(double k);

struct HOfK {
  double chi;
  // H_ij / chi^2 on the small-chi branch.
  double closed;
  // (H_ij / k^2) (1 - 2k - k^2).
  double series;
};

HOfK h_of_k(Masses const& m, PairId pair, double k);

// |closed - series| <= kSeriesRemainderBound |H_ij| k for 0 < k <= 0.05.
// The remainder is -(H_ij / k^2)(2 k^3 + O(k^4)); at k = 0.05 the ratio
// |closed - series| / (|H_ij| k) is about 2.30.
inline constexpr double kSeriesRemainderBound = 2.5;
inline constexpr double kSeriesMaxK = 0.05;

}  // namespace fourbody
