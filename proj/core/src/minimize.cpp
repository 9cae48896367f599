#include "fourbody/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "fourbody/escape.hpp"
#include "fourbody/kepler.hpp"
#include "fourbody/parallel.hpp"
#include "fourbody/rng.hpp"

namespace fourbody {

namespace {

constexpr std::array<std::array<int, 2>, 6> kPlanes = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
constexpr double kAgreementTol = 1e-6;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Pair potentials -k / |cq q + cQ Q|.
struct PairTerm {
  double k;
  double cq;
  double cQ;
};

std::array<PairTerm, 3> pair_terms(Masses const& m) {
  double const m12 = m.binary_total();
  return {{{m[0] * m[1], 1.0, 0.0},
           {m[0] * m[2], m[1] / m12, 1.0},
           {m[1] * m[2], -m[0] / m12, 1.0}}};
}

Eigen::Vector4d segment(Vector16 const& x, int block) {
  return x.segment<4>(4 * block);
}

}  // namespace

Vector16 pack(JacobiState const& j) {
  Vector16 x;
  x << to_eigen(j.q), to_eigen(j.Q), to_eigen(j.p), to_eigen(j.P);
  return x;
}

JacobiState unpack(Masses const& masses, Vector16 const& x) {
  return {masses, from_eigen(segment(x, 0)), from_eigen(segment(x, 1)),
          from_eigen(segment(x, 2)), from_eigen(segment(x, 3))};
}

ObjectiveGradient objective_and_gradient(JacobiState const& j) {
  ObjectiveGradient out;
  out.energy = energy(j);
  Eigen::Vector4d const q = to_eigen(j.q);
  Eigen::Vector4d const Q = to_eigen(j.Q);
  Eigen::Vector4d gq = Eigen::Vector4d::Zero();
  Eigen::Vector4d gQ = Eigen::Vector4d::Zero();
  for (auto const& t : pair_terms(j.masses)) {
    Eigen::Vector4d const r = t.cq * q + t.cQ * Q;
    double const d = r.norm();
    Eigen::Vector4d const g = (t.k / (d * d * d)) * r;
    gq += t.cq * g;
    gQ += t.cQ * g;
  }
  out.gradient << gq, gQ, to_eigen(j.p) / j.masses.mu(), to_eigen(j.P) / j.masses.nu();
  return out;
}

Matrix16 objective_hessian(JacobiState const& j) {
  Matrix16 h = Matrix16::Zero();
  Eigen::Vector4d const q = to_eigen(j.q);
  Eigen::Vector4d const Q = to_eigen(j.Q);
  for (auto const& t : pair_terms(j.masses)) {
    Eigen::Vector4d const r = t.cq * q + t.cQ * Q;
    double const d = r.norm();
    double const d3 = d * d * d;
    Eigen::Matrix4d const g =
        t.k * (Eigen::Matrix4d::Identity() / d3 - 3.0 * r * r.transpose() / (d3 * d * d));
    h.block<4, 4>(0, 0) += t.cq * t.cq * g;
    h.block<4, 4>(0, 4) += t.cq * t.cQ * g;
    h.block<4, 4>(4, 0) += t.cq * t.cQ * g;
    h.block<4, 4>(4, 4) += t.cQ * t.cQ * g;
  }
  h.block<4, 4>(8, 8).diagonal().setConstant(1.0 / j.masses.mu());
  h.block<4, 4>(12, 12).diagonal().setConstant(1.0 / j.masses.nu());
  return h;
}

ConstraintTarget::ConstraintTarget(Bivector4 const& l)
    : l_(l), spectral_(spectral_decompose(l)) {
  if (spectral_.rank != 4) {
    throw std::invalid_argument(
        "angular momentum must have rank 4 (l1 * l2 != 0); got rank " +
        std::to_string(spectral_.rank));
  }
}

ConstraintTarget ConstraintTarget::canonical(double l1, double l2) {
  return ConstraintTarget(l1 * Bivector4::basis(0, 1) + l2 * Bivector4::basis(2, 3));
}

ConstraintEval constraint_and_jacobian(JacobiState const& j,
                                       ConstraintTarget const& target) {
  ConstraintEval out;
  Bivector4 const c = angular_momentum(j) - target.bivector();
  out.jacobian.setZero();
  // Blocks (position offset, momentum offset) for q^p and Q^P.
  std::array<std::pair<Vec4 const*, Vec4 const*>, 2> const terms = {
      std::pair{&j.q, &j.p}, std::pair{&j.Q, &j.P}};
  for (int n = 0; n < 6; ++n) {
    out.c(n) = c.c[n];
    auto const [a, b] = kPlanes[n];
    for (int t = 0; t < 2; ++t) {
      Vec4 const& x = *terms[t].first;
      Vec4 const& y = *terms[t].second;
      int const xo = 4 * t;
      int const yo = 8 + 4 * t;
      out.jacobian(n, xo + a) = y[b];
      out.jacobian(n, xo + b) = -y[a];
      out.jacobian(n, yo + b) = x[a];
      out.jacobian(n, yo + a) = -x[b];
    }
  }
  return out;
}

namespace {

// Least-squares multipliers: argmin |g + J^T lambda|.
Vector6 multiplier_estimate(Vector16 const& g, Jacobian6x16 const& jac) {
  Eigen::Matrix<double, 16, 6> const jt = jac.transpose();
  return jt.completeOrthogonalDecomposition().solve(-g);
}

}  // namespace

double projected_gradient_norm(JacobiState const& j, ConstraintTarget const& target) {
  Vector16 const g = objective_and_gradient(j).gradient;
  Jacobian6x16 const jac = constraint_and_jacobian(j, target).jacobian;
  return (g + jac.transpose() * multiplier_estimate(g, jac)).norm();
}

void MinimizeConfig::validate() const {
  if (restarts < 1) throw std::invalid_argument("minimize: restarts must be >= 1");
  if (max_outer < 1) throw std::invalid_argument("minimize: max_outer must be >= 1");
  if (!(inner_tol > 0.0)) throw std::invalid_argument("minimize: inner_tol must be > 0");
  if (!(constraint_tol > 0.0)) {
    throw std::invalid_argument("minimize: constraint_tol must be > 0");
  }
}

namespace {

// Evaluation of a scaled objective; returns +inf outside the domain.
using ScaledFn = std::function<double(Vector16 const&, Vector16&)>;
// Accepts or rejects a line-search trial point.
using GuardFn = std::function<bool(Vector16 const&, Vector16 const&)>;

struct LbfgsOutcome {
  Vector16 z;
  double f;
  int iterations;
  bool converged;
};

LbfgsOutcome lbfgs(ScaledFn const& fg, GuardFn const& guard, Vector16 z, double gtol,
                   int max_iter) {
  constexpr std::size_t kMemory = 10;
  Vector16 g;
  double f = fg(z, g);
  std::deque<std::pair<Vector16, Vector16>> history;
  int it = 0;
  for (; it < max_iter; ++it) {
    if (g.norm() <= gtol * (1.0 + std::abs(f))) return {z, f, it, true};

    // Two-loop recursion.
    Vector16 d = -g;
    std::vector<double> alpha(history.size());
    for (std::size_t k = history.size(); k-- > 0;) {
      auto const& [s, y] = history[k];
      alpha[k] = s.dot(d) / y.dot(s);
      d -= alpha[k] * y;
    }
    if (!history.empty()) {
      auto const& [s, y] = history.back();
      d *= s.dot(y) / y.dot(y);
    } else {
      d *= std::min(1.0, 0.1 * (1.0 + z.norm()) / g.norm());
    }
    for (std::size_t k = 0; k < history.size(); ++k) {
      auto const& [s, y] = history[k];
      d += (alpha[k] - y.dot(d) / y.dot(s)) * s;
    }
    if (!(g.dot(d) < 0.0)) {
      history.clear();
      d = -g * std::min(1.0, 0.1 * (1.0 + z.norm()) / g.norm());
    }
    // Cap the trial step at 30% of the current point.
    double t = std::min(1.0, 0.3 * (1.0 + z.norm()) / d.norm());

    Vector16 g_new;
    double f_new = kInf;
    Vector16 z_new;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
      z_new = z + t * d;
      if (!guard(z, z_new)) continue;
      f_new = fg(z_new, g_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * t * g.dot(d)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) return {z, f, it, false};

    Vector16 const s = z_new - z;
    Vector16 const y = g_new - g;
    if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
      history.emplace_back(s, y);
      if (history.size() > kMemory) history.pop_front();
    }
    bool const stalled = std::abs(f_new - f) <= 1e-16 * std::abs(f) && s.norm() <= 1e-15 * (1.0 + z.norm());
    z = z_new;
    f = f_new;
    g = g_new;
    if (stalled) return {z, f, it + 1, g.norm() <= gtol * (1.0 + std::abs(f))};
  }
  return {z, f, it, g.norm() <= gtol * (1.0 + std::abs(f))};
}

// Per-block scale of (q, Q, p, P).
Vector16 block_scales(JacobiState const& j) {
  double const sq = norm(j.q), sQ = norm(j.Q), sp = norm(j.p), sP = norm(j.P);
  double const pos = std::max(sq, sQ);
  double const mom = std::max(sp, sP);
  auto floor = [](double v, double ref) { return std::max(v, 1e-8 * ref); };
  Vector16 d;
  d.segment<4>(0).setConstant(floor(sq, pos));
  d.segment<4>(4).setConstant(floor(sQ, pos));
  d.segment<4>(8).setConstant(mom > 0.0 ? floor(sp, mom) : 1.0 / pos);
  d.segment<4>(12).setConstant(mom > 0.0 ? floor(sP, mom) : 1.0 / pos);
  return d;
}

// Rejects points where some mutual distance fell below a quarter of its
// reference value. The augmented Lagrangian is unbounded below at binary
// collisions for any finite penalty, so each inner solve is confined to this
// region around its starting point.
bool collision_guard(Masses const& m, std::array<double, 3> const& ref, Vector16 const& x) {
  auto const d = mutual_distances(unpack(m, x));
  for (int k = 0; k < 3; ++k) {
    if (!(d[k] >= 0.25 * ref[k])) return false;
  }
  return true;
}

bool near_guard(Masses const& m, std::array<double, 3> const& ref, Vector16 const& x) {
  auto const d = mutual_distances(unpack(m, x));
  for (int k = 0; k < 3; ++k) {
    if (d[k] < 0.35 * ref[k]) return true;
  }
  return false;
}

struct EvalPoint {
  double energy;
  Vector16 gradient;
  ConstraintEval constraint;
};

std::optional<EvalPoint> evaluate(Masses const& m, Vector16 const& x,
                                  ConstraintTarget const& target) {
  JacobiState const j = unpack(m, x);
  try {
    auto og = objective_and_gradient(j);
    if (!std::isfinite(og.energy)) return std::nullopt;
    return EvalPoint{og.energy, og.gradient, constraint_and_jacobian(j, target)};
  } catch (CollisionError const&) {
    return std::nullopt;
  }
}

// Minimum-norm Gauss-Newton steps back onto c = 0; the constraint Jacobian
// stays well conditioned even where the KKT matrix does not.
std::optional<EvalPoint> restore(Masses const& m, Vector16& x, ConstraintTarget const& target) {
  double const tol = 1e-15 * (1.0 + norm(target.bivector()));
  auto e = evaluate(m, x, target);
  for (int it = 0; e && it < 8 && e->constraint.c.norm() > tol; ++it) {
    Jacobian6x16 const& jac = e->constraint.jacobian;
    Eigen::Matrix<double, 6, 6> const jjt = jac * jac.transpose();
    Vector16 const x_new = x - jac.transpose() * jjt.ldlt().solve(e->constraint.c);
    auto e_new = evaluate(m, x_new, target);
    if (!e_new || !(e_new->constraint.c.norm() < e->constraint.c.norm())) break;
    x = x_new;
    e = e_new;
  }
  return e;
}

struct PolishOutcome {
  Vector16 x;
  double residual;
  double projected_gradient;
  double energy;
};

// Newton iterations on grad H + J^T lambda = 0, c = 0 in scaled variables,
// each trial point restored onto the constraint set. The KKT matrix is
// singular along the symmetry orbit, so every step is the minimum-norm
// least-squares solution.
std::optional<PolishOutcome> newton_polish(Masses const& m, Vector16 x, Vector16 const& d,
                                           ConstraintTarget const& target) {
  using Matrix22 = Eigen::Matrix<double, 22, 22>;
  using Vector22 = Eigen::Matrix<double, 22, 1>;

  auto kkt_residual = [&](Vector6 const& lambda,
                          EvalPoint const& e) -> Vector22 {
    Vector22 r;
    r.head<16>() = d.asDiagonal() * (e.gradient + e.constraint.jacobian.transpose() * lambda);
    r.tail<6>() = e.constraint.c;
    return r;
  };

  auto e = restore(m, x, target);
  if (!e) return std::nullopt;
  Vector6 lambda = multiplier_estimate(e->gradient, e->constraint.jacobian);
  Vector22 r = kkt_residual(lambda, *e);

  for (int it = 0; it < 30; ++it) {
    JacobiState const j = unpack(m, x);
    Matrix16 w = objective_hessian(j);
    // Second derivatives of lambda . c: the (q, p) and (Q, P) blocks equal
    // the antisymmetric matrix of lambda.
    Bivector4 lb;
    for (int n = 0; n < 6; ++n) lb.c[n] = lambda(n);
    Eigen::Matrix4d const lm = lb.matrix();
    for (int t = 0; t < 2; ++t) {
      w.block<4, 4>(4 * t, 8 + 4 * t) += lm;
      w.block<4, 4>(8 + 4 * t, 4 * t) += lm.transpose();
    }
    Matrix22 k = Matrix22::Zero();
    k.topLeftCorner<16, 16>() = d.asDiagonal() * w * d.asDiagonal();
    k.topRightCorner<16, 6>() = d.asDiagonal() * e->constraint.jacobian.transpose();
    k.bottomLeftCorner<6, 16>() = e->constraint.jacobian * d.asDiagonal();

    Eigen::JacobiSVD<Matrix22> svd(k, Eigen::ComputeFullU | Eigen::ComputeFullV);
    svd.setThreshold(1e-15);
    Vector22 const step = svd.solve(-r);

    bool improved = false;
    for (double t = 1.0; t >= 1.0 / 64.0; t *= 0.5) {
      Vector16 x_new = x + t * d.asDiagonal() * step.head<16>();
      if (!collision_guard(m, mutual_distances(unpack(m, x)), x_new)) continue;
      auto e_new = restore(m, x_new, target);
      if (!e_new) continue;
      Vector6 const lambda_new = lambda + t * step.tail<6>();
      Vector22 const r_new = kkt_residual(lambda_new, *e_new);
      if (r_new.norm() < r.norm()) {
        x = x_new;
        lambda = lambda_new;
        e = e_new;
        improved = r_new.norm() < 0.9 * r.norm();
        r = r_new;
        break;
      }
    }
    if (!improved) break;
  }
  JacobiState const j = unpack(m, x);
  return PolishOutcome{x, e->constraint.c.norm(), projected_gradient_norm(j, target),
                       e->energy};
}

}  // namespace

LocalRun minimize_from(JacobiState const& seed, ConstraintTarget const& target,
                       MinimizeConfig const& config) {
  config.validate();
  Masses const& m = seed.masses;
  double const l_norm = norm(target.bivector());
  double const c_tol = config.constraint_tol * (1.0 + l_norm);
  double const l_min = target.spectral().l1;

  Vector16 d = block_scales(seed);
  Vector16 x = pack(seed);
  auto e0 = evaluate(m, x, target);
  if (!e0) throw CollisionError("minimize_from: seed is a collision");

  Vector6 lambda = Vector6::Zero();
  double rho = 100.0 * std::max(std::abs(e0->energy), 1e-12) / (l_norm * l_norm);
  double eta = 0.1 * (1.0 + l_norm);
  double omega = 1e-3;

  ScaledFn const fg = [&](Vector16 const& z, Vector16& g) {
    Vector16 const xx = d.asDiagonal() * z;
    auto ev = evaluate(m, xx, target);
    if (!ev) return kInf;
    Vector6 const& c = ev->constraint.c;
    g = d.asDiagonal() *
        (ev->gradient + ev->constraint.jacobian.transpose() * (lambda + rho * c));
    return ev->energy + lambda.dot(c) + 0.5 * rho * c.squaredNorm();
  };
  std::array<double, 3> ref = mutual_distances(seed);
  GuardFn const guard = [&](Vector16 const&, Vector16 const& z1) {
    return collision_guard(m, ref, d.asDiagonal() * z1);
  };

  LocalRun run{seed, e0->energy, e0->constraint.c.norm(), 0.0, 0, false, {}};
  std::ostringstream diag;
  Vector16 z = x.cwiseQuotient(d);
  for (int outer = 0; outer < config.max_outer; ++outer) {
    run.outer_iterations = outer + 1;
    ref = mutual_distances(unpack(m, x));
    d = block_scales(unpack(m, x));
    z = x.cwiseQuotient(d);
    auto const inner = lbfgs(fg, guard, z, std::max(omega, config.inner_tol), 5000);
    Vector16 const x_trial = d.asDiagonal() * inner.z;
    if (near_guard(m, ref, x_trial)) {
      // A contraction that keeps the constraint nearly satisfied is genuine
      // progress; one that gives up the constraint is a collision dive and
      // means the penalty is too weak.
      auto const et = evaluate(m, x_trial, target);
      if (!et || et->constraint.c.norm() > 0.1 * l_min) {
        rho *= 10.0;
        continue;
      }
    }
    z = inner.z;
    x = x_trial;
    auto ev = evaluate(m, x, target);
    if (!ev) break;
    double const cn = ev->constraint.c.norm();
    if (cn <= eta) {
      lambda += rho * ev->constraint.c;
      eta = std::max(0.25 * eta, 0.1 * c_tol);
      omega = std::max(0.1 * omega, config.inner_tol);
    } else {
      rho *= 10.0;
    }

    if (cn <= 1e-4 * (1.0 + l_norm) && omega <= 1e-5) {
      if (auto pol = newton_polish(m, x, d, target)) {
        bool const ok = pol->residual <= c_tol &&
                        pol->projected_gradient <= kProjectedGradientTol * (1.0 + std::abs(pol->energy));
        if (ok) {
          run.jacobi = unpack(m, pol->x);
          run.energy = pol->energy;
          run.constraint_residual = pol->residual;
          run.projected_gradient = pol->projected_gradient;
          run.converged = true;
          diag << "converged after " << outer + 1 << " outer iterations";
          run.diagnostics = diag.str();
          return run;
        }
      }
    }
  }

  run.jacobi = unpack(m, x);
  if (auto ev = evaluate(m, x, target)) {
    run.energy = ev->energy;
    run.constraint_residual = ev->constraint.c.norm();
    run.projected_gradient = projected_gradient_norm(run.jacobi, target);
  } else {
    run.energy = std::numeric_limits<double>::quiet_NaN();
  }
  diag << "not converged after " << config.max_outer << " outer iterations: residual "
       << run.constraint_residual << ", projected gradient " << run.projected_gradient
       << ", penalty " << rho;
  run.diagnostics = diag.str();
  return run;
}

namespace {

// Momenta of least kinetic energy reaching L in the least-squares sense for
// a fixed configuration (q, Q).
JacobiState minimum_kinetic_momenta(Masses const& m, Vec4 const& q, Vec4 const& Q,
                                    ConstraintTarget const& target) {
  JacobiState j{m, q, Q, {}, {}};
  ConstraintEval const ce = constraint_and_jacobian(j, target);
  Eigen::Matrix<double, 6, 8> a = ce.jacobian.rightCols<8>();
  Eigen::Matrix<double, 8, 1> w;
  w.head<4>().setConstant(std::sqrt(m.mu()));
  w.tail<4>().setConstant(std::sqrt(m.nu()));
  a = a * w.asDiagonal();
  Eigen::Matrix<double, 8, 1> const u =
      a.completeOrthogonalDecomposition().solve(-ce.c);  // c = -L at zero momenta
  Eigen::Matrix<double, 8, 1> const y = w.cwiseProduct(u);
  j.p = from_eigen(y.head<4>());
  j.P = from_eigen(y.tail<4>());
  return j;
}

JacobiState rotate(JacobiState j, Eigen::Matrix4d const& r) {
  auto apply = [&](Vec4 const& v) { return from_eigen(r * to_eigen(v)); };
  j.q = apply(j.q);
  j.Q = apply(j.Q);
  j.p = apply(j.p);
  j.P = apply(j.P);
  return j;
}

}  // namespace

std::vector<JacobiState> make_seeds(Masses const& masses, ConstraintTarget const& target,
                                    int count, std::uint64_t seed) {
  std::vector<JacobiState> seeds;
  if (count < 1) return seeds;
  SpectralForm const& sf = target.spectral();
  double const l1 = sf.l1;
  double const l2 = sf.l2;
  Eigen::Matrix4d frame;
  for (int k = 0; k < 4; ++k) frame.col(k) = to_eigen(sf.frame[k]);

  // Escape seed for the pair with the lowest critical energy at infinity.
  auto const pairs = PairId::all();
  PairId best = pairs[0];
  for (auto const& pr : pairs) {
    if (h_infinity(masses, pr, l1) < h_infinity(masses, best, l1)) best = pr;
  }
  double const mi = masses[best.i() - 1];
  double const mj = masses[best.j() - 1];
  double const mk = masses[best.other() - 1];
  double const r_bin = l1 * l1 / ((mi * mj / (mi + mj)) * mi * mj);
  double const nu_out = mk * (mi + mj) / masses.total();
  double const r_out = l2 * l2 / (nu_out * (mi + mj) * mk);
  double const beta = std::max(3.0 * r_bin, r_out) / masses.total();
  State const esc = escape_state({{masses, best, 1, l1, l2}, beta});
  seeds.push_back(rotate(to_jacobi(esc), frame));

  double const lm = 0.5 * (l1 + l2);
  double const scale = lm * lm / (masses.mu() * masses[0] * masses[1]);
  for (int n = 1; n < count; ++n) {
    Rng rng(mix_seed(seed) ^ static_cast<std::uint64_t>(n));
    for (int attempt = 0;; ++attempt) {
      Vec4 const q = scale * rng.uniform(0.5, 2.0) * rng.unit_vec();
      Vec4 const Q = scale * rng.uniform(0.5, 2.0) * rng.unit_vec();
      JacobiState const j = minimum_kinetic_momenta(masses, q, Q, target);
      auto const dist = mutual_distances(j);
      if (*std::min_element(dist.begin(), dist.end()) > 0.05 * scale || attempt > 50) {
        seeds.push_back(j);
        break;
      }
    }
  }
  return seeds;
}

namespace {

bool better(LocalRun const& a, LocalRun const& b) {
  if (a.energy != b.energy) return a.energy < b.energy;
  return a.constraint_residual < b.constraint_residual;
}

}  // namespace

MinResult minimize_at_L(Masses const& masses, ConstraintTarget const& target,
                        MinimizeConfig const& config,
                        std::span<JacobiState const> extra_seeds) {
  config.validate();
  std::vector<JacobiState> seeds =
      make_seeds(masses, target, config.restarts, config.rng_seed);
  seeds.insert(seeds.end(), extra_seeds.begin(), extra_seeds.end());

  std::vector<std::optional<LocalRun>> runs(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) {
    try {
      runs[i] = minimize_from(seeds[i], target, config);
    } catch (std::exception const&) {
      runs[i].reset();
    }
  });

  LocalRun const* best = nullptr;
  LocalRun const* best_any = nullptr;
  int converged = 0;
  std::vector<double> energies;
  for (auto const& r : runs) {
    energies.push_back(r ? r->energy : std::numeric_limits<double>::quiet_NaN());
    if (!r || !std::isfinite(r->energy)) continue;
    if (!best_any || better(*r, *best_any)) best_any = &*r;
    if (!r->converged) continue;
    ++converged;
    if (!best || better(*r, *best)) best = &*r;
  }
  if (!best_any) throw std::runtime_error("minimize_at_L: every restart failed");
  LocalRun const& chosen = best ? *best : *best_any;

  int agreeing = 0;
  if (best) {
    for (auto const& r : runs) {
      if (r && r->converged &&
          std::abs(r->energy - best->energy) <= kAgreementTol * std::abs(best->energy)) {
        ++agreeing;
      }
    }
  }

  std::ostringstream diag;
  diag << converged << " of " << runs.size() << " restarts converged; " << agreeing
       << " agree with the best; best run: " << chosen.diagnostics;
  return MinResult{from_jacobi(chosen.jacobi),
                   chosen.energy,
                   chosen.constraint_residual,
                   chosen.projected_gradient,
                   agreeing,
                   converged,
                   best != nullptr,
                   std::move(energies),
                   diag.str()};
}

std::vector<BranchPoint> sweep_k(Masses const& masses, std::span<double const> k_grid,
                                 MinimizeConfig const& config) {
  config.validate();
  std::vector<std::size_t> order(k_grid.size());
  std::iota(order.begin(), order.end(), 0);
  for (double k : k_grid) chi_small_branch(k);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return k_grid[a] > k_grid[b]; });

  std::vector<std::optional<BranchPoint>> out(k_grid.size());
  std::optional<JacobiState> warm;
  for (std::size_t idx : order) {
    double const k = k_grid[idx];
    double const l1 = chi_small_branch(k);
    double const l2 = 1.0 - l1;
    auto const target = ConstraintTarget::canonical(l1, l2);
    std::vector<JacobiState> extra;
    if (warm) extra.push_back(*warm);
    MinResult const r = minimize_at_L(masses, target, config, extra);
    double const total = l1 + l2;
    out[idx] = BranchPoint{k, l1, l2, r.energy * total * total, r.energy,
                           r.constraint_residual, r.converged, r.state};
    if (r.converged) warm = to_jacobi(r.state);
  }
  std::vector<BranchPoint> result;
  result.reserve(out.size());
  for (auto& p : out) result.push_back(std::move(*p));
  return result;
}

}  // namespace fourbody
