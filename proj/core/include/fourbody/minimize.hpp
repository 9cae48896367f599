#pragma once

// Minimum of the energy on the level set of a rank-4 angular momentum.
//
// Unknowns are the Jacobi coordinates x = (q, Q, p, P) in R^16 with the six
// bilinear constraints q^p + Q^P = L. Each local run is an augmented
// Lagrangian method
//   F(x) = H(x) + lambda . c(x) + rho/2 |c(x)|^2
// whose inner problems are solved by L-BFGS with a backtracking line search
// in block-scaled variables; once the constraint violation is small the
// KKT point is polished by Newton steps on the full KKT system, solved in
// the least-squares sense because the level set carries a continuous
// symmetry (the stabilizer of L in SO(4)).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fourbody/bivec4.hpp"
#include "fourbody/phase.hpp"

namespace fourbody {

using Vector16 = Eigen::Matrix<double, 16, 1>;
using Matrix16 = Eigen::Matrix<double, 16, 16>;
using Vector6 = Eigen::Matrix<double, 6, 1>;
using Jacobian6x16 = Eigen::Matrix<double, 6, 16>;

// Layout: q = x[0..4), Q = x[4..8), p = x[8..12), P = x[12..16).
Vector16 pack(JacobiState const& j);
JacobiState unpack(Masses const& masses, Vector16 const& x);

struct ObjectiveGradient {
  double energy;
  Vector16 gradient;
};

// Throws CollisionError.
ObjectiveGradient objective_and_gradient(JacobiState const& j);
Matrix16 objective_hessian(JacobiState const& j);

// A rank-4 angular momentum.
class ConstraintTarget {
 public:
  // Throws std::invalid_argument unless spectral_decompose(l).rank == 4.
  explicit ConstraintTarget(Bivector4 const& l);
  // l1 e1^e2 + l2 e3^e4.
  static ConstraintTarget canonical(double l1, double l2);

  Bivector4 const& bivector() const { return l_; }
  SpectralForm const& spectral() const { return spectral_; }

 private:
  Bivector4 l_;
  SpectralForm spectral_;
};

struct ConstraintEval {
  // Components of q^p + Q^P - L in the order c12, c13, c14, c23, c24, c34.
  Vector6 c;
  Jacobian6x16 jacobian;
};

ConstraintEval constraint_and_jacobian(JacobiState const& j,
                                       ConstraintTarget const& target);

// |grad H - J^T (J J^T)^-1 J grad H|: the gradient projected on the tangent
// space of the constraint set.
double projected_gradient_norm(JacobiState const& j, ConstraintTarget const& target);

struct MinimizeConfig {
  int restarts = 16;
  int max_outer = 60;
  // Final stationarity tolerance of the inner L-BFGS solves (scaled).
  double inner_tol = 1e-9;
  // Converged runs satisfy |c| <= constraint_tol (1 + |L|).
  double constraint_tol = 1e-10;
  std::uint64_t rng_seed = 1;

  void validate() const;
};

// Stationarity threshold for a converged run: projected gradient
// <= kProjectedGradientTol (1 + |H|).
inline constexpr double kProjectedGradientTol = 1e-7;

struct LocalRun {
  JacobiState jacobi;
  double energy = 0.0;
  double constraint_residual = 0.0;
  double projected_gradient = 0.0;
  int outer_iterations = 0;
  bool converged = false;
  std::string diagnostics;
};

// One augmented-Lagrangian run from the given seed.
LocalRun minimize_from(JacobiState const& seed, ConstraintTarget const& target,
                       MinimizeConfig const& config);

struct MinResult {
  State state;
  double energy;
  double constraint_residual;
  double projected_gradient;
  // Converged restarts whose energy is within 1e-6 (relative) of the best.
  int restarts_agreeing;
  int restarts_converged;
  bool converged;
  // Energy of every restart, in seed order (NaN for runs that failed).
  std::vector<double> restart_energies;
  std::string diagnostics;
};

// Seeds used by minimize_at_L: index 0 is an escape state of the pair with
// the lowest critical energy at infinity (so it is exactly feasible), the
// others are random triangles with minimum-kinetic-energy momenta for L.
std::vector<JacobiState> make_seeds(Masses const& masses, ConstraintTarget const& target,
                                    int count, std::uint64_t seed);

// Multi-restart minimization; extra_seeds are run in addition to the
// config.restarts generated seeds. Restarts run in parallel. The best run
// has the lowest energy among converged runs, ties broken by the lowest
// constraint residual. Throws std::invalid_argument for a bad config.
MinResult minimize_at_L(Masses const& masses, ConstraintTarget const& target,
                        MinimizeConfig const& config,
                        std::span<JacobiState const> extra_seeds = {});

struct BranchPoint {
  double k;
  double l1;
  double l2;
  // H_min (l1 + l2)^2 with l1 + l2 = 1.
  double h;
  double energy;
  double constraint_residual;
  bool converged;
  State state;
};

// Minimal branch at l1 + l2 = 1, l1 = chi_small_branch(k). Grid points are
// solved from k = max downwards, each warm-started from the previous
// minimizer; the result is ordered as the input grid. Throws
// std::domain_error for k outside (0, 1/4].
std::vector<BranchPoint> sweep_k(Masses const& masses, std::span<double const> k_grid,
                                 MinimizeConfig const& config);

}  // namespace fourbody
