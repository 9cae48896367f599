#include "fourbody/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "fourbody/minimize.hpp"
#include "fourbody/parallel.hpp"
#include "fourbody/rng.hpp"

namespace fourbody {

std::array<Vec4, 3> accelerations(Masses const& masses,
                                  std::array<Vec4, 3> const& x) {
  check_no_collision(x);
  std::array<Vec4, 3> a{};
  constexpr std::array<std::array<std::size_t, 2>, 3> kPairs = {{{0, 1}, {0, 2}, {1, 2}}};
  for (auto const [i, j] : kPairs) {
    Vec4 const r = x[j] - x[i];
    double const d = norm(r);
    Vec4 const u = r / (d * d * d);
    a[i] += masses[j] * u;
    a[j] -= masses[i] * u;
  }
  return a;
}

std::array<Vec4, 3> accelerations(State const& s) {
  return accelerations(s.masses(), s.positions());
}

std::string to_string(Scheme s) {
  return s == Scheme::kLeapfrog ? "leapfrog" : "composition4";
}

Scheme scheme_from_string(std::string const& name) {
  if (name == "leapfrog") return Scheme::kLeapfrog;
  if (name == "composition4" || name == "yoshida4") return Scheme::kComposition4;
  throw std::invalid_argument("unknown integration scheme '" + name +
                              "' (expected leapfrog or composition4)");
}

int order(Scheme s) { return s == Scheme::kLeapfrog ? 2 : 4; }

void IntegratorConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
  if (!(t_end >= dt)) throw std::invalid_argument("integrate: t_end must be >= dt");
  if (record_every < 1) throw std::invalid_argument("integrate: record_every must be >= 1");
}

namespace {

struct Phase {
  std::array<Vec4, 3> x;
  std::array<Vec4, 3> v;
  std::array<Vec4, 3> a;
};

void kick_drift_kick(Masses const& m, Phase& ph, double h) {
  for (std::size_t i = 0; i < 3; ++i) ph.v[i] += (0.5 * h) * ph.a[i];
  for (std::size_t i = 0; i < 3; ++i) ph.x[i] += h * ph.v[i];
  ph.a = accelerations(m, ph.x);
  for (std::size_t i = 0; i < 3; ++i) ph.v[i] += (0.5 * h) * ph.a[i];
}

}  // namespace

Trajectory integrate(State const& s, IntegratorConfig const& cfg) {
  cfg.validate();
  Masses const& m = s.masses();
  long long const n = std::max(1LL, std::llround(cfg.t_end / cfg.dt));
  double const h = cfg.t_end / static_cast<double>(n);

  // Triple-jump weights of the fourth-order composition.
  double const w1 = 1.0 / (2.0 - std::cbrt(2.0));
  double const w0 = 1.0 - 2.0 * w1;

  double const h0 = energy(s);
  Bivector4 const l0 = angular_momentum_bodies(s);

  Trajectory out;
  auto record = [&](double t, State const& st) {
    out.times.push_back(t);
    out.drift.push_back({energy(st) - h0, norm(angular_momentum_bodies(st) - l0)});
    out.states.push_back(st);
  };
  record(0.0, s);

  Phase ph{s.positions(), s.velocities(), accelerations(s)};
  for (long long step = 1; step <= n; ++step) {
    try {
      if (cfg.scheme == Scheme::kLeapfrog) {
        kick_drift_kick(m, ph, h);
      } else {
        kick_drift_kick(m, ph, w1 * h);
        kick_drift_kick(m, ph, w0 * h);
        kick_drift_kick(m, ph, w1 * h);
      }
    } catch (CollisionError const& e) {
      out.aborted = true;
      std::ostringstream msg;
      msg << "close encounter at step " << step << ": " << e.what();
      out.abort_reason = msg.str();
      return out;
    }
    if (step % cfg.record_every == 0 || step == n) {
      // Round-off may move the center of mass by a few ulps; restore it
      // before re-validating.
      auto x = ph.x;
      auto v = ph.v;
      recenter(m, x, v);
      record(static_cast<double>(step) * h, State(m, x, v));
    }
  }
  return out;
}

double characteristic_period(State const& s) {
  double inertia = 0.0;
  for (std::size_t i = 0; i < 3; ++i) inertia += s.masses()[i] * norm_squared(s.position(i));
  double const t = kinetic_energy_bodies(s);
  if (!(t > 0.0)) throw std::invalid_argument("characteristic_period: state at rest");
  return 2.0 * std::numbers::pi * std::sqrt(inertia / (2.0 * t));
}

std::array<double, 3> shape(State const& s) {
  auto d = mutual_distances(s.positions());
  std::sort(d.begin(), d.end());
  return d;
}

double shape_distance(State const& a, State const& b) {
  auto const sa = shape(a);
  auto const sb = shape(b);
  double sum = 0.0;
  for (std::size_t k = 0; k < 3; ++k) sum += (sa[k] - sb[k]) * (sa[k] - sb[k]);
  return std::sqrt(sum);
}

State project_angular_momentum(State const& s, Bivector4 const& target) {
  ConstraintTarget const tgt(target);
  Masses const& m = s.masses();
  Vector16 x = pack(to_jacobi(s));
  double const tol = 1e-13 * (1.0 + norm(target));
  for (int it = 0; it < 20; ++it) {
    ConstraintEval const ce = constraint_and_jacobian(unpack(m, x), tgt);
    if (ce.c.norm() <= tol) return from_jacobi(unpack(m, x));
    Eigen::Matrix<double, 6, 6> const jjt = ce.jacobian * ce.jacobian.transpose();
    x -= ce.jacobian.transpose() * jjt.ldlt().solve(ce.c);
  }
  ConstraintEval const ce = constraint_and_jacobian(unpack(m, x), tgt);
  if (ce.c.norm() <= tol) return from_jacobi(unpack(m, x));
  throw std::runtime_error("project_angular_momentum: Gauss-Newton did not converge");
}

StabilityReport stability_probe(State const& s0, StabilityConfig const& probe,
                                IntegratorConfig const& cfg) {
  if (!(probe.delta >= 0.0) || probe.trials < 1 || !(probe.bound_factor > 0.0)) {
    throw std::invalid_argument("stability_probe: need delta >= 0, trials >= 1");
  }
  cfg.validate();
  Masses const& m = s0.masses();
  Bivector4 const l0 = angular_momentum(s0);
  auto const base_shape = shape(s0);
  double const floor = 1e-10 * std::sqrt(base_shape[0] * base_shape[0] +
                                         base_shape[1] * base_shape[1] +
                                         base_shape[2] * base_shape[2]);

  StabilityReport report;
  report.bound_factor = probe.bound_factor;
  report.trials.resize(probe.trials);
  parallel_for(static_cast<std::size_t>(probe.trials), [&](std::size_t n) {
    Rng rng(mix_seed(probe.seed) ^ static_cast<std::uint64_t>(n));
    auto x = s0.positions();
    auto v = s0.velocities();
    for (std::size_t i = 0; i < 3; ++i) {
      x[i] += (probe.delta * norm(x[i])) * rng.unit_vec();
      v[i] += (probe.delta * norm(v[i])) * rng.unit_vec();
    }
    recenter(m, x, v);
    State const start = project_angular_momentum(State(m, x, v), l0);
    double const offset = shape_distance(start, s0);
    Trajectory const traj = integrate(start, cfg);
    double worst = 0.0;
    for (auto const& st : traj.states) worst = std::max(worst, shape_distance(st, s0));
    bool const ok = !traj.aborted && worst <= probe.bound_factor * std::max(offset, floor);
    report.trials[n] = {offset, worst, ok};
  });

  report.pass = std::all_of(report.trials.begin(), report.trials.end(),
                            [](StabilityTrial const& t) { return t.within_bound; });
  int const inside = static_cast<int>(std::count_if(
      report.trials.begin(), report.trials.end(),
      [](StabilityTrial const& t) { return t.within_bound; }));
  std::ostringstream msg;
  msg << inside << " of " << probe.trials << " perturbed runs stayed within "
      << probe.bound_factor << "x their initial shape offset";
  if (!report.pass) msg << " (bound exceeded in some runs)";
  msg << ". Empirical evidence of stability only, not a proof.";
  report.summary = msg.str();
  return report;
}

}  // namespace fourbody
