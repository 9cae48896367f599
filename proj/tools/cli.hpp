#pragma once

// Commands behind the fourbody executable. Each cmd_* validates its options,
// computes, and writes its output file once (temp file + rename).

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fourbody/dynamics.hpp"
#include "fourbody/kepler.hpp"
#include "fourbody/minimize.hpp"
#include "fourbody/phase.hpp"

namespace fourbody::cli {

// Exit status of a command that ran but did not converge.
inline constexpr int kNotConverged = 3;

// A real number or a quotient a/b of two; the quotient of two decimals is
// formed exactly and rounded once.
double parse_real(std::string_view text);
// Three comma-separated reals, e.g. "1/2,1/3,1/6".
Masses parse_masses(std::string_view text);
// "i,j" with 1 <= i < j <= 3 in either order.
PairId parse_pair(std::string_view text);
// "lo:hi:n", n >= 1 evenly spaced points including both ends.
std::vector<double> parse_k_grid(std::string_view text);

// %.17g
std::string format_real(double x);

// Writes through a sibling temp file renamed over path.
void write_atomic(std::filesystem::path const& path, std::string const& content);

// "# masses ...", "# seed ...", "# version ..." lines.
std::string metadata_block(Masses const& masses, std::uint64_t seed);

struct DiagramRow {
  std::string source;  // "infinity-curve", "minimal-branch" or "series"
  std::optional<PairId> pair;
  double k;
  double h;
  double chi;
};

// The chi grid i/(n+1), i = 1..n, with 1/2 added if missing.
std::vector<double> chi_grid(int chi_steps);
// Dashed curves of all three pairs plus series rows for k <= kSeriesMaxK.
std::vector<DiagramRow> critical_curve_rows(Masses const& masses, int chi_steps);
std::vector<DiagramRow> minimal_branch_rows(std::vector<BranchPoint> const& branch);
// Orders by (source, pair, k); rows without a pair sort first.
void sort_rows(std::vector<DiagramRow>& rows);
// Extra comment lines go just above the metadata block.
std::string diagram_csv(std::vector<DiagramRow> const& rows, Masses const& masses,
                        std::uint64_t seed, std::string const& comments = {});

std::string trajectory_csv(Trajectory const& traj, Masses const& masses,
                           std::uint64_t seed);

struct CommonOptions {
  std::string masses = "1/2,1/3,1/6";
  std::filesystem::path out;
  std::uint64_t seed = 1;
};

struct CriticalCurvesOptions {
  CommonOptions common;
  int chi_steps = 200;
};

struct Prop5Options {
  CommonOptions common;
  std::string pair = "1,2";
  int k_index = 1;
  double l1 = 1.0;
  double l2 = 1.0;
  double beta_start = 10.0;
  double beta_factor = 2.0;
  int beta_count = 20;
};

struct MinimizerOptions {
  int restarts = 16;
  int max_outer = 60;
  double inner_tol = 1e-9;
  double constraint_tol = 1e-10;

  MinimizeConfig config(std::uint64_t seed) const;
};

struct MinimizeOptions {
  CommonOptions common;
  MinimizerOptions minimizer;
  double l1 = 1.0;
  double l2 = 1.0;
};

struct IntegrateOptions {
  // Masses come from the state file; a non-empty common.masses must match.
  CommonOptions common{"", {}, 1};
  std::filesystem::path state;
  bool recenter = false;
  double dt = 1e-3;
  double t_end = 1.0;
  std::string scheme = "composition4";
  int record_every = 1;
  // Stability probe around the initial state when trials > 0.
  int probe_trials = 0;
  double probe_delta = 1e-4;
};

struct DiagramOptions {
  CommonOptions common;
  MinimizerOptions minimizer;
  int chi_steps = 200;
  std::string k_grid = "0.005:0.25:50";
};

// Each returns the process exit status; errors are thrown.
int cmd_critical_curves(CriticalCurvesOptions const& opt);
int cmd_prop5(Prop5Options const& opt);
int cmd_minimize(MinimizeOptions const& opt);
int cmd_integrate(IntegrateOptions const& opt);
int cmd_diagram(DiagramOptions const& opt);

}  // namespace fourbody::cli
