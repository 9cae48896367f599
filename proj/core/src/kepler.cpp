#include "fourbody/kepler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fourbody {

PairId::PairId(int i, int j) : i_(std::min(i, j)), j_(std::max(i, j)) {
  if (i == j || i_ < 1 || j_ > 3) {
    throw std::invalid_argument("PairId: need two distinct bodies in 1..3");
  }
}

std::string PairId::label() const { return std::to_string(i_) + std::to_string(j_); }

std::array<PairId, 3> PairId::all() { return {PairId(1, 2), PairId(1, 3), PairId(2, 3)}; }

double h_ij(Masses const& m, PairId pair) {
  double const mi = m[pair.i() - 1];
  double const mj = m[pair.j() - 1];
  double const prod = mi * mj;
  return -prod * prod * prod / (2.0 * (mi + mj));
}

double h_infinity(Masses const& m, PairId pair, double l) {
  if (!(l > 0.0)) throw std::invalid_argument("h_infinity: l must be positive");
  return h_ij(m, pair) / (l * l);
}

CircularBinary circular_binary(double mi, double mj, double l, Vec4 const& f1,
                               Vec4 const& f2) {
  if (!(mi > 0.0) || !(mj > 0.0)) {
    throw std::invalid_argument("circular_binary: masses must be positive");
  }
  if (!(l > 0.0)) {
    throw std::invalid_argument("circular_binary: no circular orbit with l = 0");
  }
  double const mu = mi * mj / (mi + mj);
  double const r = l * l / (mu * mi * mj);
  return {r * f1, (l / r) * f2};
}

CurvePoint curve_point(Masses const& m, PairId pair, double chi) {
  if (!(chi > 0.0 && chi < 1.0)) {
    throw std::domain_error("curve_point: chi must lie in (0, 1)");
  }
  return {pair, chi, chi * (1.0 - chi), h_ij(m, pair) / (chi * chi)};
}

double chi_small_branch(double k) {
  if (!(k > 0.0 && k <= 0.25)) {
    throw std::domain_error("chi_small_branch: k must lie in (0, 1/4]");
  }
  // (1 - sqrt(1 - 4k)) / 2 rewritten as 2k / (1 + sqrt(1 - 4k)).
  return 2.0 * k / (1.0 + std::sqrt(1.0 - 4.0 * k));
}

HOfK h_of_k(Masses const& m, PairId pair, double k) {
  double const chi = chi_small_branch(k);
  double const hij = h_ij(m, pair);
  return {chi, hij / (chi * chi), hij / (k * k) * (1.0 - 2.0 * k - k * k)};
}

}  // namespace fourbody
