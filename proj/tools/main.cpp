#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli.hpp"
#include "fourbody/version.hpp"

namespace {

using namespace fourbody::cli;

void add_common(CLI::App* cmd, CommonOptions& c, bool out_required = true) {
  cmd->add_option("--masses", c.masses, "Masses m1,m2,m3 (fractions such as 1/3 allowed)")
      ->capture_default_str();
  auto* out = cmd->add_option("--out", c.out, "Output file");
  if (out_required) out->required();
  cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
}

void add_minimizer(CLI::App* cmd, MinimizerOptions& m) {
  cmd->add_option("--restarts", m.restarts, "Random restarts (besides the escape seed)")
      ->capture_default_str();
  cmd->add_option("--max-outer", m.max_outer, "Augmented-Lagrangian outer iterations")
      ->capture_default_str();
  cmd->add_option("--inner-tol", m.inner_tol, "Inner L-BFGS gradient tolerance")
      ->capture_default_str();
  cmd->add_option("--constraint-tol", m.constraint_tol,
                  "Constraint tolerance, relative to 1 + |L|")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy, angular momentum and relative equilibria of three bodies in R^4"};
  app.set_version_flag("--version", std::string(fourbody::kVersion));
  app.require_subcommand(1);

  CriticalCurvesOptions curves;
  auto* c_curves = app.add_subcommand("critical-curves",
                                      "Energy-momentum curves of the critical points at infinity");
  add_common(c_curves, curves.common);
  c_curves->add_option("--chi-steps", curves.chi_steps, "Interior chi samples per pair")
      ->capture_default_str();

  Prop5Options prop5;
  auto* c_prop5 = app.add_subcommand("prop5", "Escape sequence approaching a critical value");
  add_common(c_prop5, prop5.common);
  c_prop5->add_option("--pair", prop5.pair, "Binary pair i,j")->capture_default_str();
  c_prop5->add_option("--k-index", prop5.k_index, "Spectral value carried by the binary (1 or 2)")
      ->capture_default_str();
  c_prop5->add_option("--l1", prop5.l1)->capture_default_str();
  c_prop5->add_option("--l2", prop5.l2)->capture_default_str();
  c_prop5->add_option("--beta-start", prop5.beta_start)->capture_default_str();
  c_prop5->add_option("--beta-factor", prop5.beta_factor)->capture_default_str();
  c_prop5->add_option("--beta-count", prop5.beta_count)->capture_default_str();

  MinimizeOptions minimize;
  auto* c_min = app.add_subcommand("minimize", "Minimum of H at L = l1 e1^e2 + l2 e3^e4");
  add_common(c_min, minimize.common);
  add_minimizer(c_min, minimize.minimizer);
  c_min->add_option("--l1", minimize.l1)->capture_default_str();
  c_min->add_option("--l2", minimize.l2)->capture_default_str();

  IntegrateOptions integ;
  auto* c_int = app.add_subcommand("integrate", "Integrate a state file");
  add_common(c_int, integ.common);
  c_int->add_option("--state", integ.state, "State JSON")->required();
  c_int->add_flag("--recenter", integ.recenter,
                  "Move an off-center state into the center-of-mass frame");
  c_int->add_option("--dt", integ.dt)->capture_default_str();
  c_int->add_option("--t-end", integ.t_end)->capture_default_str();
  c_int->add_option("--scheme", integ.scheme, "leapfrog or composition4")
      ->capture_default_str();
  c_int->add_option("--record-every", integ.record_every)->capture_default_str();
  c_int->add_option("--probe-trials", integ.probe_trials,
                    "Also run a stability probe with this many perturbed copies")
      ->capture_default_str();
  c_int->add_option("--probe-delta", integ.probe_delta)->capture_default_str();

  DiagramOptions diagram;
  auto* c_diag = app.add_subcommand("diagram", "Critical curves merged with the minimal branch");
  add_common(c_diag, diagram.common);
  add_minimizer(c_diag, diagram.minimizer);
  c_diag->add_option("--chi-steps", diagram.chi_steps)->capture_default_str();
  c_diag->add_option("--k-grid", diagram.k_grid, "lo:hi:n")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_curves->parsed()) return cmd_critical_curves(curves);
    if (c_prop5->parsed()) return cmd_prop5(prop5);
    if (c_min->parsed()) return cmd_minimize(minimize);
    if (c_int->parsed()) return cmd_integrate(integ);
    if (c_diag->parsed()) return cmd_diagram(diagram);
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
