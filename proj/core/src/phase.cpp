#include "fourbody/phase.hpp"

#include <algorithm>
#include <cmath>

#include "fourbody/kepler.hpp"

namespace fourbody {

namespace {

constexpr double kComTolerance = 1e-12;
constexpr double kCollisionFraction = 1e-13;

Vec4 weighted_sum(Masses const& m, std::array<Vec4, 3> const& v) {
  return m[0] * v[0] + m[1] * v[1] + m[2] * v[2];
}

double weighted_scale(Masses const& m, std::array<Vec4, 3> const& v) {
  return m[0] * norm(v[0]) + m[1] * norm(v[1]) + m[2] * norm(v[2]);
}

// Relative vectors q3 - q1 and q3 - q2 expressed through (q, Q).
Vec4 r13(Masses const& m, Vec4 const& q, Vec4 const& Q) {
  return Q + (m[1] / m.binary_total()) * q;
}
Vec4 r23(Masses const& m, Vec4 const& q, Vec4 const& Q) {
  return Q - (m[0] / m.binary_total()) * q;
}

}  // namespace

Masses::Masses(double m1, double m2, double m3) : m_{m1, m2, m3} {
  for (double m : m_) {
    if (!(m > 0.0) || !std::isfinite(m)) {
      throw std::invalid_argument("Masses: all masses must be positive");
    }
  }
}

void check_no_collision(std::array<Vec4, 3> const& positions) {
  auto const d = mutual_distances(positions);
  double const scale = std::max({d[0], d[1], d[2]});
  if (!(scale > 0.0) || std::min({d[0], d[1], d[2]}) < kCollisionFraction * scale) {
    throw CollisionError("collision: two bodies coincide");
  }
}

State::State(Masses masses, std::array<Vec4, 3> positions,
             std::array<Vec4, 3> velocities)
    : masses_(masses), positions_(positions), velocities_(velocities) {
  for (std::size_t i = 0; i < 3; ++i) {
    if (!is_finite(positions_[i]) || !is_finite(velocities_[i])) {
      throw InvalidState("State: non-finite coordinate");
    }
  }
  if (norm(weighted_sum(masses_, positions_)) >
      kComTolerance * weighted_scale(masses_, positions_)) {
    throw InvalidState("State: center of mass is not at the origin");
  }
  if (norm(weighted_sum(masses_, velocities_)) >
      kComTolerance * weighted_scale(masses_, velocities_)) {
    throw InvalidState("State: total momentum is not zero");
  }
  check_no_collision(positions_);
}

void recenter(Masses const& masses, std::array<Vec4, 3>& positions,
              std::array<Vec4, 3>& velocities) {
  Vec4 const c = weighted_sum(masses, positions) / masses.total();
  Vec4 const w = weighted_sum(masses, velocities) / masses.total();
  for (auto& x : positions) x -= c;
  for (auto& v : velocities) v -= w;
}

JacobiState to_jacobi(State const& s) {
  Masses const& m = s.masses();
  auto const& x = s.positions();
  auto const& v = s.velocities();
  double const m12 = m.binary_total();
  Vec4 const c = (m[0] * x[0] + m[1] * x[1]) / m12;
  Vec4 const w = (m[0] * v[0] + m[1] * v[1]) / m12;
  return {m, x[1] - x[0], x[2] - c, m.mu() * (v[1] - v[0]), m.nu() * (v[2] - w)};
}

namespace {

std::array<Vec4, 3> split(Masses const& m, Vec4 const& rel, Vec4 const& outer) {
  double const m12 = m.binary_total();
  Vec4 const c = -(m[2] / m.total()) * outer;
  return {c - (m[1] / m12) * rel, c + (m[0] / m12) * rel,
          (m12 / m.total()) * outer};
}

}  // namespace

State from_jacobi(JacobiState const& j) {
  Masses const& m = j.masses;
  return State(m, split(m, j.q, j.Q), split(m, j.p / m.mu(), j.P / m.nu()));
}

std::array<double, 3> mutual_distances(std::array<Vec4, 3> const& x) {
  return {norm(x[1] - x[0]), norm(x[2] - x[0]), norm(x[2] - x[1])};
}

std::array<double, 3> mutual_distances(JacobiState const& j) {
  return {norm(j.q), norm(r13(j.masses, j.q, j.Q)), norm(r23(j.masses, j.q, j.Q))};
}

Bivector4 angular_momentum(JacobiState const& j) {
  return wedge(j.q, j.p) + wedge(j.Q, j.P);
}

Bivector4 angular_momentum(State const& s) { return angular_momentum(to_jacobi(s)); }

Bivector4 angular_momentum_bodies(State const& s) {
  Bivector4 l;
  for (std::size_t i = 0; i < 3; ++i) {
    l += s.masses()[i] * wedge(s.position(i), s.velocity(i));
  }
  return l;
}

double kinetic_energy(JacobiState const& j) {
  return norm_squared(j.p) / (2.0 * j.masses.mu()) +
         norm_squared(j.P) / (2.0 * j.masses.nu());
}

double kinetic_energy_bodies(State const& s) {
  double t = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    t += 0.5 * s.masses()[i] * norm_squared(s.velocity(i));
  }
  return t;
}

namespace {

double potential_from_distances(Masses const& m, std::array<double, 3> const& d) {
  double const scale = std::max({d[0], d[1], d[2]});
  if (!(scale > 0.0) || std::min({d[0], d[1], d[2]}) < kCollisionFraction * scale) {
    throw CollisionError("collision: two bodies coincide");
  }
  return -m[0] * m[1] / d[0] - m[0] * m[2] / d[1] - m[1] * m[2] / d[2];
}

}  // namespace

double potential_energy(Masses const& masses, std::array<Vec4, 3> const& positions) {
  return potential_from_distances(masses, mutual_distances(positions));
}

double potential_energy(JacobiState const& j) {
  return potential_from_distances(j.masses, mutual_distances(j));
}

double energy(JacobiState const& j) { return kinetic_energy(j) + potential_energy(j); }

double energy(State const& s) {
  return kinetic_energy_bodies(s) + potential_energy(s.masses(), s.positions());
}

double binary_energy(JacobiState const& j) {
  double const r = norm(j.q);
  if (!(r > 0.0)) throw CollisionError("binary_energy: q = 0");
  return norm_squared(j.p) / (2.0 * j.masses.mu()) -
         j.masses[0] * j.masses[1] / r;
}

JacobiState scale_map(JacobiState const& j, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("scale_map: factor must be positive");
  return {j.masses, s * j.q, s * j.Q, j.p / s, j.P / s};
}

JacobiState drop_radial_momentum(JacobiState const& j) {
  double const q2 = norm_squared(j.Q);
  if (!(q2 > 0.0)) {
    throw std::invalid_argument("drop_radial_momentum: Q = 0");
  }
  JacobiState out = j;
  out.P = j.P - (dot(j.P, j.Q) / q2) * j.Q;
  return out;
}

JacobiState circularize_binary(JacobiState const& j) {
  double const l = norm(wedge(j.q, j.p));
  if (!(l > 0.0)) {
    throw std::invalid_argument(
        "circularize_binary: q^p = 0 admits no circular orbit");
  }
  Vec4 const f1 = j.q / norm(j.q);
  Vec4 f2 = j.p - dot(j.p, f1) * f1;
  f2 /= norm(f2);
  auto const c = circular_binary(j.masses[0], j.masses[1], l, f1, f2);
  JacobiState out = j;
  out.q = c.q;
  out.p = c.p;
  return out;
}

}  // namespace fourbody
