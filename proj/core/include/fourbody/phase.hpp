#pragma once

// Phase space of the three-body problem in R^4 (G = 1).
//
// States are stored in body coordinates with the center of mass at the
// origin and zero total momentum. Jacobi coordinates
//   q = q2 - q1,  Q = q3 - (m1 q1 + m2 q2) / (m1 + m2),
//   p = mu dq/dt, P = nu dQ/dt
// diagonalize the kinetic energy with the reduced masses mu and nu.

#include <array>
#include <stdexcept>

#include "fourbody/bivec4.hpp"

namespace fourbody {

class Masses {
 public:
  // Throws std::invalid_argument unless all masses are positive and finite.
  Masses(double m1, double m2, double m3);

  double operator[](std::size_t i) const { return m_[i]; }
  std::array<double, 3> const& values() const { return m_; }

  double total() const { return m_[0] + m_[1] + m_[2]; }
  double binary_total() const { return m_[0] + m_[1]; }
  // m1 m2 / (m1 + m2).
  double mu() const { return m_[0] * m_[1] / binary_total(); }
  // m3 (m1 + m2) / (m1 + m2 + m3).
  double nu() const { return m_[2] * binary_total() / total(); }

  friend bool operator==(Masses const&, Masses const&) = default;

 private:
  std::array<double, 3> m_;
};

// Raised when two bodies are closer than 1e-13 of the configuration scale.
class CollisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a State would violate the center-of-mass invariants.
class InvalidState : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class State {
 public:
  // Validates: finite entries, sum m_i q_i = 0 and sum m_i v_i = 0 within
  // 1e-12 of the mass-weighted scale, no collision.
  State(Masses masses, std::array<Vec4, 3> positions,
        std::array<Vec4, 3> velocities);

  Masses const& masses() const { return masses_; }
  std::array<Vec4, 3> const& positions() const { return positions_; }
  std::array<Vec4, 3> const& velocities() const { return velocities_; }
  Vec4 const& position(std::size_t i) const { return positions_[i]; }
  Vec4 const& velocity(std::size_t i) const { return velocities_[i]; }

 private:
  Masses masses_;
  std::array<Vec4, 3> positions_;
  std::array<Vec4, 3> velocities_;
};

struct JacobiState {
  Masses masses;
  Vec4 q, Q, p, P;
};

// Subtracts the mass-weighted mean position and velocity.
void recenter(Masses const& masses, std::array<Vec4, 3>& positions,
              std::array<Vec4, 3>& velocities);

// Throws CollisionError if some |q_i - q_j| < 1e-13 max_ij |q_i - q_j|
// (or all bodies coincide).
void check_no_collision(std::array<Vec4, 3> const& positions);

JacobiState to_jacobi(State const& s);
State from_jacobi(JacobiState const& j);

// Mutual distances (d12, d13, d23).
std::array<double, 3> mutual_distances(std::array<Vec4, 3> const& positions);
std::array<double, 3> mutual_distances(JacobiState const& j);

// q^p + Q^P.
Bivector4 angular_momentum(JacobiState const& j);
Bivector4 angular_momentum(State const& s);
// sum m_i q_i ^ v_i.
Bivector4 angular_momentum_bodies(State const& s);

// |p|^2 / 2 mu + |P|^2 / 2 nu.
double kinetic_energy(JacobiState const& j);
// 1/2 sum m_i |v_i|^2.
double kinetic_energy_bodies(State const& s);
// -m1 m2 / d12 - m2 m3 / d23 - m1 m3 / d13. Throws CollisionError.
double potential_energy(Masses const& masses,
                        std::array<Vec4, 3> const& positions);
double potential_energy(JacobiState const& j);

double energy(JacobiState const& j);
double energy(State const& s);

// Kinetic energy plus pair potential of bodies 1 and 2 only.
double binary_energy(JacobiState const& j);

// (q, p, Q, P) -> (s q, p / s, s Q, P / s); preserves the angular momentum
// and maps T + V to T / s^2 + V / s.
JacobiState scale_map(JacobiState const& j, double s);

// Replaces P by its component orthogonal to Q. Throws for Q = 0.
JacobiState drop_radial_momentum(JacobiState const& j);

// Replaces (q, p) by the circular binary with the same bivector q^p.
// Throws std::invalid_argument for q^p = 0.
JacobiState circularize_binary(JacobiState const& j);

}  // namespace fourbody
