#pragma once

// Unbounded sequences of states with prescribed angular momentum
// L = l1 e1^e2 + l2 e3^e4 whose energy increases to a critical value at
// infinity h_infinity(pair, l_k) strictly from below.
//
// Canonical case: pair (1, 2) carries l1. The triangle lies in the plane
// e1 e3 with its inertia axes along e1 and e3,
//   q1 = (a m2, 0, -b m3, 0), q2 = (-a m1, 0, -b m3, 0),
//   q3 = (0, 0, b (m1 + m2), 0),
// a = r / (m1 + m2), r the circular separation for l1, b the escape
// parameter. The binary moves on its circular orbit in the plane e1 e2 and
// the outer relative velocity is l2 / (nu |Q|) along e4. Other cases are the
// canonical one up to a relabelling of bodies and of the two planes.

#include <optional>
#include <span>
#include <vector>

#include "fourbody/kepler.hpp"
#include "fourbody/phase.hpp"

namespace fourbody {

struct EscapeFamily {
  Masses masses;
  // The tight binary.
  PairId pair{1, 2};
  // 1 or 2: which of l1, l2 the binary carries.
  int k_index = 1;
  double l1 = 1.0;
  double l2 = 1.0;

  // Throws std::invalid_argument for non-positive l or k_index not in {1,2}.
  void validate() const;
  double binary_l() const { return k_index == 1 ? l1 : l2; }
  // h_infinity(masses, pair, l_k).
  double limit() const;
  // l1 e1^e2 + l2 e3^e4.
  Bivector4 target() const;
};

struct EscapeParams {
  EscapeFamily family;
  double beta = 1.0;
};

State escape_state(EscapeParams const& params);

struct EscapeSample {
  double beta;
  double energy;
  // energy - limit.
  double gap;
};

struct EscapeSweep {
  std::vector<EscapeSample> samples;
  // Least beta in the ladder from which every gap is negative.
  std::optional<double> beta0;
  // Least-squares slope of log|gap| against log beta over the last decade
  // of the ladder.
  double tail_slope = 0.0;
  // Limit extrapolated from the last two samples assuming gap ~ -c / beta.
  double extrapolated_limit = 0.0;
};

// Throws std::invalid_argument unless betas is non-empty, positive and
// strictly increasing.
EscapeSweep escape_sweep(EscapeFamily const& family, std::span<double const> betas);

// beta_start * factor^n, n = 0..count-1.
std::vector<double> geometric_ladder(double beta_start, double factor, int count);

// Richardson estimate 2 H(2 beta) - H(beta) of the limit energy.
double extrapolate_limit(EscapeFamily const& family, double beta);

}  // namespace fourbody
