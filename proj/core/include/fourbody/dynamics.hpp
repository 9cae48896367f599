#pragma once

// Newtonian equations of motion in R^4 and fixed-step symplectic
// integration in body coordinates.

#include <cstdint>
#include <string>
#include <vector>

#include "fourbody/phase.hpp"

namespace fourbody {

// q_i'' = sum_{j != i} m_j (q_j - q_i) / d_ij^3. Throws CollisionError.
std::array<Vec4, 3> accelerations(Masses const& masses,
                                  std::array<Vec4, 3> const& positions);
std::array<Vec4, 3> accelerations(State const& s);

enum class Scheme {
  kLeapfrog,     // kick-drift-kick, order 2
  kComposition4  // triple-jump composition of leapfrog, order 4
};

std::string to_string(Scheme s);
// Accepts "leapfrog", "composition4" (alias "yoshida4").
Scheme scheme_from_string(std::string const& name);
int order(Scheme s);

struct IntegratorConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  Scheme scheme = Scheme::kComposition4;
  // Record a sample every this many steps (the last step is always kept).
  int record_every = 1;

  // Throws std::invalid_argument unless dt > 0, t_end >= dt and
  // record_every >= 1.
  void validate() const;
};

struct Drift {
  double dH;
  double dL;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  // Energy and angular-momentum deviation from the initial state.
  std::vector<Drift> drift;
  // Set when integration stopped early at a close encounter; the samples
  // up to that point are kept.
  bool aborted = false;
  std::string abort_reason;
};

// The run uses n = round(t_end / dt) steps of size t_end / n, so the last
// sample lands on t_end.
Trajectory integrate(State const& s, IntegratorConfig const& cfg);

// 2 pi sqrt(I / 2T), with I = sum m_i |q_i|^2: the period of the rigid
// rotation having the state's moment of inertia and kinetic energy. For a
// circular binary this is the orbital period.
double characteristic_period(State const& s);

// Mutual distances in increasing order; a rotation-invariant shape.
std::array<double, 3> shape(State const& s);
double shape_distance(State const& a, State const& b);

// Moves s onto the level set L(state) = target with minimum-norm
// Gauss-Newton corrections in Jacobi coordinates. Throws std::runtime_error
// if the residual does not drop below 1e-13 (1 + |target|).
State project_angular_momentum(State const& s, Bivector4 const& target);

struct StabilityTrial {
  double initial_offset;
  double max_distance;
  bool within_bound;
};

struct StabilityReport {
  std::vector<StabilityTrial> trials;
  double bound_factor;
  bool pass;
  // States explicitly that the outcome is empirical evidence only.
  std::string summary;
};

struct StabilityConfig {
  double delta = 1e-4;
  int trials = 20;
  double bound_factor = 10.0;
  std::uint64_t seed = 1;
};

// Each trial perturbs every position and velocity coordinate by a relative
// normal perturbation of size delta, restores the center-of-mass frame and
// the angular momentum of s0 (project_angular_momentum), integrates with
// cfg and records the largest shape distance from s0 over the run. A trial
// is within bound when that maximum stays below bound_factor times the
// initial shape offset, floored at 1e-10 of the shape size to absorb
// round-off when delta = 0.
StabilityReport stability_probe(State const& s0, StabilityConfig const& probe,
                                IntegratorConfig const& cfg);

}  // namespace fourbody
