#include "fourbody/escape.hpp"

#include <cmath>
#include <stdexcept>

namespace fourbody {

void EscapeFamily::validate() const {
  if (!(l1 > 0.0) || !(l2 > 0.0)) {
    throw std::invalid_argument("escape: l1 and l2 must be positive (rank-4 L)");
  }
  if (k_index != 1 && k_index != 2) {
    throw std::invalid_argument("escape: k_index must be 1 or 2");
  }
}

double EscapeFamily::limit() const { return h_infinity(masses, pair, binary_l()); }

Bivector4 EscapeFamily::target() const {
  return l1 * Bivector4::basis(0, 1) + l2 * Bivector4::basis(2, 3);
}

namespace {

Vec4 swap_planes(Vec4 const& v) { return {v[2], v[3], v[0], v[1]}; }

}  // namespace

State escape_state(EscapeParams const& params) {
  EscapeFamily const& f = params.family;
  f.validate();
  if (!(params.beta > 0.0)) throw std::invalid_argument("escape: beta must be positive");

  // Canonical labelling: bodies (a, b, c) = (i, j, other) become (1, 2, 3).
  std::array<int, 3> const body = {f.pair.i() - 1, f.pair.j() - 1, f.pair.other() - 1};
  Masses const canon(f.masses[body[0]], f.masses[body[1]], f.masses[body[2]]);
  double const l_binary = f.binary_l();
  double const l_outer = f.k_index == 1 ? f.l2 : f.l1;

  auto const bin = circular_binary(canon[0], canon[1], l_binary, -1.0 * Vec4::basis(0),
                                   -1.0 * Vec4::basis(1));
  double const outer = params.beta * canon.total();
  JacobiState const j{canon, bin.q, outer * Vec4::basis(2), bin.p,
                      (l_outer / outer) * Vec4::basis(3)};
  State const s = from_jacobi(j);

  std::array<Vec4, 3> positions;
  std::array<Vec4, 3> velocities;
  for (std::size_t n = 0; n < 3; ++n) {
    Vec4 x = s.position(n);
    Vec4 v = s.velocity(n);
    if (f.k_index == 2) {
      x = swap_planes(x);
      v = swap_planes(v);
    }
    positions[body[n]] = x;
    velocities[body[n]] = v;
  }
  return State(f.masses, positions, velocities);
}

std::vector<double> geometric_ladder(double beta_start, double factor, int count) {
  if (!(beta_start > 0.0) || !(factor > 1.0) || count < 1) {
    throw std::invalid_argument(
        "geometric_ladder: need beta_start > 0, factor > 1, count >= 1");
  }
  std::vector<double> out;
  out.reserve(count);
  for (int n = 0; n < count; ++n) out.push_back(beta_start * std::pow(factor, n));
  return out;
}

EscapeSweep escape_sweep(EscapeFamily const& family, std::span<double const> betas) {
  family.validate();
  if (betas.empty()) throw std::invalid_argument("escape_sweep: empty beta list");
  for (std::size_t n = 0; n < betas.size(); ++n) {
    if (!(betas[n] > 0.0) || (n > 0 && !(betas[n] > betas[n - 1]))) {
      throw std::invalid_argument("escape_sweep: betas must be positive and increasing");
    }
  }

  double const limit = family.limit();
  EscapeSweep out;
  for (double beta : betas) {
    double const h = energy(escape_state({family, beta}));
    out.samples.push_back({beta, h, h - limit});
  }

  for (std::size_t n = out.samples.size(); n-- > 0;) {
    if (!(out.samples[n].gap < 0.0)) break;
    out.beta0 = out.samples[n].beta;
  }

  // Slope over samples within a factor 10 of the last beta.
  double const lo = betas.back() / 10.0 * (1.0 - 1e-12);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (auto const& s : out.samples) {
    if (s.beta < lo || s.gap == 0.0) continue;
    double const x = std::log(s.beta);
    double const y = std::log(std::abs(s.gap));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count >= 2) {
    out.tail_slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  }

  auto const& last = out.samples.back();
  if (out.samples.size() >= 2) {
    auto const& prev = out.samples[out.samples.size() - 2];
    out.extrapolated_limit =
        (last.beta * last.energy - prev.beta * prev.energy) / (last.beta - prev.beta);
  } else {
    out.extrapolated_limit = last.energy;
  }
  return out;
}

double extrapolate_limit(EscapeFamily const& family, double beta) {
  double const h1 = energy(escape_state({family, beta}));
  double const h2 = energy(escape_state({family, 2.0 * beta}));
  return 2.0 * h2 - h1;
}

}  // namespace fourbody
