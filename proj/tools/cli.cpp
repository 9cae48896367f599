#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <unistd.h>

#include <nlohmann/json.hpp>

#include "fourbody/escape.hpp"
#include "fourbody/state_io.hpp"
#include "fourbody/version.hpp"

namespace fourbody::cli {

namespace {

std::string trim(std::string_view s) {
  auto const b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  auto const e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto const pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

double parse_plain(std::string const& s) {
  double v = 0.0;
  auto const* end = s.data() + s.size();
  auto const [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  return v;
}

// Decimal without exponent as numerator / 10^scale.
struct Decimal {
  unsigned long long digits;
  int scale;
  bool negative;
};

std::optional<Decimal> parse_decimal(std::string const& s) {
  static std::regex const re(R"(([+-]?)(\d*)(?:\.(\d*))?)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) return std::nullopt;
  std::string const digits = m[2].str() + m[3].str();
  if (digits.empty() || digits.size() > 18) return std::nullopt;
  return Decimal{std::stoull(digits), static_cast<int>(m[3].length()), m[1].str() == "-"};
}

}  // namespace

double parse_real(std::string_view text) {
  std::string const s = trim(text);
  auto const slash = s.find('/');
  if (slash == std::string::npos) return parse_plain(s);

  std::string const a = trim(std::string_view(s).substr(0, slash));
  std::string const b = trim(std::string_view(s).substr(slash + 1));
  if (b.find('/') != std::string::npos) throw std::invalid_argument("not a number: '" + s + "'");
  auto const da = parse_decimal(a);
  auto const db = parse_decimal(b);
  if (da && db && db->digits != 0) {
    // a/b = (na 10^sb) / (nb 10^sa), reduced, in exact integers when they fit
    // below 2^53; a single division then rounds correctly.
    unsigned long long num = da->digits;
    unsigned long long den = db->digits;
    unsigned long long const g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    int const shift = db->scale - da->scale;
    bool fits = true;
    constexpr unsigned long long kExact = 1ULL << 53;
    auto scale_up = [&](unsigned long long& v, int n) {
      for (; n > 0 && fits; --n) {
        if (v > kExact / 10) fits = false;
        v *= 10;
      }
    };
    scale_up(shift > 0 ? num : den, std::abs(shift));
    unsigned long long const g2 = std::gcd(num, den);
    if (g2 > 1) {
      num /= g2;
      den /= g2;
    }
    if (fits && num <= kExact && den <= kExact) {
      double const v = static_cast<double>(num) / static_cast<double>(den);
      return da->negative != db->negative ? -v : v;
    }
  }
  double const den = parse_plain(b);
  if (den == 0.0) throw std::invalid_argument("division by zero in '" + s + "'");
  return parse_plain(a) / den;
}

Masses parse_masses(std::string_view text) {
  auto const parts = split(text, ',');
  if (parts.size() != 3) {
    throw std::invalid_argument("--masses expects three comma-separated values");
  }
  double const m1 = parse_real(parts[0]);
  double const m2 = parse_real(parts[1]);
  double const m3 = parse_real(parts[2]);
  return Masses(m1, m2, m3);
}

PairId parse_pair(std::string_view text) {
  auto const parts = split(text, ',');
  if (parts.size() != 2) throw std::invalid_argument("--pair expects i,j");
  int v[2];
  for (int n = 0; n < 2; ++n) {
    auto const& s = parts[n];
    auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v[n]);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw std::invalid_argument("--pair expects two body indices, got '" +
                                  std::string(text) + "'");
    }
  }
  return PairId(v[0], v[1]);
}

std::vector<double> parse_k_grid(std::string_view text) {
  auto const parts = split(text, ':');
  if (parts.size() != 3) throw std::invalid_argument("--k-grid expects lo:hi:n");
  double const lo = parse_real(parts[0]);
  double const hi = parse_real(parts[1]);
  int n = 0;
  auto const& s = parts[2];
  auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (ec != std::errc() || ptr != s.data() + s.size() || n < 1) {
    throw std::invalid_argument("--k-grid: n must be a positive integer");
  }
  if (!(lo > 0.0) || !(hi <= 0.25) || !(lo <= hi) || (n == 1 && lo != hi)) {
    throw std::invalid_argument("--k-grid: need 0 < lo <= hi <= 1/4 (and lo = hi when n = 1)");
  }
  std::vector<double> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  }
  out.back() = hi;
  return out;
}

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_atomic(std::filesystem::path const& path, std::string const& content) {
  if (path.empty()) throw std::invalid_argument("--out is required");
  std::filesystem::path tmp = path;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

std::string metadata_block(Masses const& masses, std::uint64_t seed) {
  std::ostringstream os;
  os << "# masses " << format_real(masses[0]) << ',' << format_real(masses[1]) << ','
     << format_real(masses[2]) << '\n'
     << "# seed " << seed << '\n'
     << "# version " << kVersion << '\n';
  return os.str();
}

std::vector<double> chi_grid(int chi_steps) {
  if (chi_steps < 2) throw std::invalid_argument("--chi-steps must be >= 2");
  std::vector<double> chi;
  chi.reserve(chi_steps + 1);
  for (int i = 1; i <= chi_steps; ++i) {
    chi.push_back(static_cast<double>(i) / (chi_steps + 1));
  }
  if (chi_steps % 2 == 0) {
    chi.push_back(0.5);
    std::sort(chi.begin(), chi.end());
  }
  return chi;
}

std::vector<DiagramRow> critical_curve_rows(Masses const& masses, int chi_steps) {
  std::vector<DiagramRow> rows;
  auto const chis = chi_grid(chi_steps);
  for (PairId const pair : PairId::all()) {
    for (double chi : chis) {
      CurvePoint const pt = curve_point(masses, pair, chi);
      rows.push_back({"infinity-curve", pair, pt.k, pt.h, pt.chi});
      if (chi < 0.5 && pt.k <= kSeriesMaxK) {
        HOfK const s = h_of_k(masses, pair, pt.k);
        rows.push_back({"series", pair, pt.k, s.series, s.chi});
      }
    }
  }
  sort_rows(rows);
  return rows;
}

std::vector<DiagramRow> minimal_branch_rows(std::vector<BranchPoint> const& branch) {
  std::vector<DiagramRow> rows;
  for (auto const& b : branch) {
    if (b.converged) rows.push_back({"minimal-branch", std::nullopt, b.k, b.h, b.l1});
  }
  sort_rows(rows);
  return rows;
}

void sort_rows(std::vector<DiagramRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](DiagramRow const& a, DiagramRow const& b) {
    return std::tie(a.source, a.pair, a.k) < std::tie(b.source, b.pair, b.k);
  });
}

std::string diagram_csv(std::vector<DiagramRow> const& rows, Masses const& masses,
                        std::uint64_t seed, std::string const& comments) {
  std::ostringstream os;
  os << "source,pair,k,h,chi\n";
  for (auto const& r : rows) {
    os << r.source << ',' << (r.pair ? r.pair->label() : "none") << ',' << format_real(r.k)
       << ',' << format_real(r.h) << ',' << format_real(r.chi) << '\n';
  }
  os << comments << metadata_block(masses, seed);
  return os.str();
}

std::string trajectory_csv(Trajectory const& traj, Masses const& masses,
                           std::uint64_t seed) {
  static constexpr char kAxes[] = "xyzw";
  static constexpr char const* kPlanes[] = {"12", "13", "14", "23", "24", "34"};
  std::ostringstream os;
  os << 't';
  for (char kind : {'q', 'v'}) {
    for (int b = 1; b <= 3; ++b) {
      for (int a = 0; a < 4; ++a) os << ',' << kind << b << kAxes[a];
    }
  }
  os << ",H";
  for (auto const* p : kPlanes) os << ",L" << p;
  os << '\n';
  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    State const& s = traj.states[n];
    os << format_real(traj.times[n]);
    for (auto const* block : {&s.positions(), &s.velocities()}) {
      for (auto const& v : *block) {
        for (int a = 0; a < 4; ++a) os << ',' << format_real(v[a]);
      }
    }
    os << ',' << format_real(energy(s));
    Bivector4 const l = angular_momentum_bodies(s);
    for (double c : l.c) os << ',' << format_real(c);
    os << '\n';
  }
  if (traj.aborted) os << "# aborted " << traj.abort_reason << '\n';
  os << metadata_block(masses, seed);
  return os.str();
}

MinimizeConfig MinimizerOptions::config(std::uint64_t seed) const {
  MinimizeConfig c;
  c.restarts = restarts;
  c.max_outer = max_outer;
  c.inner_tol = inner_tol;
  c.constraint_tol = constraint_tol;
  c.rng_seed = seed;
  c.validate();
  return c;
}

int cmd_critical_curves(CriticalCurvesOptions const& opt) {
  Masses const masses = parse_masses(opt.common.masses);
  auto const rows = critical_curve_rows(masses, opt.chi_steps);
  write_atomic(opt.common.out, diagram_csv(rows, masses, opt.common.seed));
  return 0;
}

int cmd_prop5(Prop5Options const& opt) {
  Masses const masses = parse_masses(opt.common.masses);
  EscapeFamily const family{masses, parse_pair(opt.pair), opt.k_index, opt.l1, opt.l2};
  auto const betas = geometric_ladder(opt.beta_start, opt.beta_factor, opt.beta_count);
  EscapeSweep const sweep = escape_sweep(family, betas);
  Bivector4 const target = family.target();

  std::ostringstream os;
  os << "beta,H,gap,L_residual\n";
  for (auto const& s : sweep.samples) {
    double const residual =
        norm(angular_momentum(escape_state({family, s.beta})) - target);
    os << format_real(s.beta) << ',' << format_real(s.energy) << ',' << format_real(s.gap)
       << ',' << format_real(residual) << '\n';
  }
  os << "# pair " << family.pair.label() << '\n'
     << "# k_index " << family.k_index << '\n'
     << "# l " << format_real(opt.l1) << ',' << format_real(opt.l2) << '\n'
     << "# limit " << format_real(family.limit()) << '\n'
     << "# beta0 " << (sweep.beta0 ? format_real(*sweep.beta0) : "none") << '\n'
     << "# tail_slope " << format_real(sweep.tail_slope) << '\n'
     << "# extrapolated_limit " << format_real(sweep.extrapolated_limit) << '\n'
     << metadata_block(masses, opt.common.seed);
  write_atomic(opt.common.out, os.str());
  return 0;
}

int cmd_minimize(MinimizeOptions const& opt) {
  Masses const masses = parse_masses(opt.common.masses);
  ConstraintTarget const target = ConstraintTarget::canonical(opt.l1, opt.l2);
  MinimizeConfig const config = opt.minimizer.config(opt.common.seed);
  MinResult const r = minimize_at_L(masses, target, config);

  nlohmann::json doc = state_to_json(r.state);
  nlohmann::json res;
  res["energy"] = r.energy;
  res["constraint_residual"] = r.constraint_residual;
  res["projected_gradient"] = r.projected_gradient;
  res["restarts_agreeing"] = r.restarts_agreeing;
  res["restarts_converged"] = r.restarts_converged;
  res["converged"] = r.converged;
  nlohmann::json energies = nlohmann::json::array();
  for (double e : r.restart_energies) {
    energies.push_back(std::isfinite(e) ? nlohmann::json(e) : nlohmann::json());
  }
  res["restart_energies"] = energies;
  double lowest = std::numeric_limits<double>::infinity();
  for (PairId const pair : PairId::all()) {
    double const h = h_infinity(masses, pair, target.spectral().l1);
    res["h_infinity"][pair.label()] = h;
    lowest = std::min(lowest, h);
  }
  res["margin"] = lowest - r.energy;
  res["l"] = {opt.l1, opt.l2};
  res["seed"] = opt.common.seed;
  res["version"] = kVersion;
  res["diagnostics"] = r.diagnostics;
  doc["result"] = res;
  write_atomic(opt.common.out, doc.dump(2) + "\n");

  if (!r.converged) {
    std::cerr << "minimize: not converged: " << r.diagnostics << '\n';
    return kNotConverged;
  }
  return 0;
}

int cmd_integrate(IntegrateOptions const& opt) {
  if (opt.state.empty()) throw std::invalid_argument("integrate: --state is required");
  std::ifstream f(opt.state);
  if (!f) throw std::runtime_error("cannot read " + opt.state.string());
  nlohmann::json doc;
  try {
    f >> doc;
  } catch (nlohmann::json::parse_error const& e) {
    throw std::invalid_argument("state JSON: " + std::string(e.what()));
  }
  ReadState const read = state_from_json(doc, opt.recenter);
  if (read.recentered) std::cerr << "integrate: state moved to the center-of-mass frame\n";
  State const& s = read.state;
  if (!opt.common.masses.empty() && !(parse_masses(opt.common.masses) == s.masses())) {
    throw std::invalid_argument("integrate: --masses differs from the masses in the state file");
  }

  IntegratorConfig const cfg{opt.dt, opt.t_end, scheme_from_string(opt.scheme),
                             opt.record_every};
  Trajectory const traj = integrate(s, cfg);
  write_atomic(opt.common.out, trajectory_csv(traj, s.masses(), opt.common.seed));
  if (traj.aborted) std::cerr << "integrate: " << traj.abort_reason << '\n';

  if (opt.probe_trials > 0) {
    StabilityConfig const probe{opt.probe_delta, opt.probe_trials, 10.0, opt.common.seed};
    StabilityReport const rep = stability_probe(s, probe, cfg);
    std::cout << rep.summary << '\n';
  }
  return traj.aborted ? 1 : 0;
}

int cmd_diagram(DiagramOptions const& opt) {
  Masses const masses = parse_masses(opt.common.masses);
  auto rows = critical_curve_rows(masses, opt.chi_steps);
  auto const ks = parse_k_grid(opt.k_grid);
  auto const branch = sweep_k(masses, ks, opt.minimizer.config(opt.common.seed));
  auto const solid = minimal_branch_rows(branch);
  rows.insert(rows.end(), solid.begin(), solid.end());
  sort_rows(rows);

  std::string comments;
  int failed = 0;
  for (auto const& b : branch) {
    if (!b.converged) {
      comments += "# unconverged k " + format_real(b.k) + "\n";
      ++failed;
    }
  }
  write_atomic(opt.common.out, diagram_csv(rows, masses, opt.common.seed, comments));
  if (failed > 0) {
    std::cerr << "diagram: " << failed << " minimal-branch points did not converge\n";
    return kNotConverged;
  }
  return 0;
}

}  // namespace fourbody::cli
