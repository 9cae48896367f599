#pragma once

// Reproducible random numbers. std::mt19937_64 output is fixed by the
// standard; the distributions below are written out so that sequences are
// identical across standard libraries.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "fourbody/bivec4.hpp"

namespace fourbody {

// splitmix64 finalizer, used to derive independent stream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal (Box-Muller, one value per call).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double const u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Vec4 uniform_vec(double lo, double hi) {
    return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)};
  }
  Vec4 normal_vec() { return {normal(), normal(), normal(), normal()}; }
  Vec4 unit_vec() {
    Vec4 v = normal_vec();
    while (norm(v) < 1e-6) v = normal_vec();
    return v / norm(v);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fourbody
