#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "fourbody/state_io.hpp"

using namespace fourbody;
using namespace fourbody::cli;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("fourbody-cli-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(std::string const& name) const { return path_ / name; }

 private:
  fs::path path_;
};

std::string slurp(fs::path const& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

std::vector<std::string> lines(std::string const& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

std::vector<std::string> fields(std::string const& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  for (std::string f; std::getline(is, f, ',');) out.push_back(f);
  return out;
}

void expect_metadata_tail(std::vector<std::string> const& l, std::uint64_t seed) {
  ASSERT_GE(l.size(), 3u);
  EXPECT_EQ(l[l.size() - 3].rfind("# masses ", 0), 0u);
  EXPECT_EQ(l[l.size() - 2], "# seed " + std::to_string(seed));
  EXPECT_EQ(l[l.size() - 1].rfind("# version ", 0), 0u);
}

}  // namespace

TEST(ParseReal, FractionsAreCorrectlyRounded) {
  EXPECT_EQ(parse_real("1/3"), 1.0 / 3.0);
  EXPECT_EQ(parse_real("1/6"), 1.0 / 6.0);
  EXPECT_EQ(parse_real(" 2 / 4 "), 0.5);
  EXPECT_EQ(parse_real("0.5/3"), 1.0 / 6.0);
  EXPECT_EQ(parse_real("-1/3"), -1.0 / 3.0);
  EXPECT_EQ(parse_real("0.1"), 0.1);
  EXPECT_EQ(parse_real("1e-12"), 1e-12);
  EXPECT_EQ(parse_real("3/1e2"), 0.03);
  EXPECT_THROW(parse_real("abc"), std::invalid_argument);
  EXPECT_THROW(parse_real("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_real("1/2/3"), std::invalid_argument);
  EXPECT_THROW(parse_real(""), std::invalid_argument);
}

TEST(ParseMasses, Values) {
  EXPECT_EQ(parse_masses("1/2,1/3,1/6"), Masses(0.5, 1.0 / 3.0, 1.0 / 6.0));
  EXPECT_EQ(parse_masses("1, 1, 1"), Masses(1, 1, 1));
  EXPECT_THROW(parse_masses("1,1"), std::invalid_argument);
  EXPECT_THROW(parse_masses("0,1,1"), std::invalid_argument);
  EXPECT_THROW(parse_masses("1,-1/2,1"), std::invalid_argument);
}

TEST(ParsePair, Values) {
  EXPECT_EQ(parse_pair("2,1").label(), "12");
  EXPECT_EQ(parse_pair("1,3").label(), "13");
  EXPECT_THROW(parse_pair("1,1"), std::invalid_argument);
  EXPECT_THROW(parse_pair("1"), std::invalid_argument);
  EXPECT_THROW(parse_pair("a,b"), std::invalid_argument);
}

TEST(ParseKGrid, Values) {
  auto const g = parse_k_grid("0.01:0.25:5");
  ASSERT_EQ(g.size(), 5u);
  EXPECT_EQ(g.front(), 0.01);
  EXPECT_EQ(g.back(), 0.25);
  EXPECT_NEAR(g[2], 0.13, 1e-16);
  EXPECT_EQ(parse_k_grid("1/4:1/4:1"), std::vector<double>{0.25});
  EXPECT_THROW(parse_k_grid("0:0.25:5"), std::invalid_argument);
  EXPECT_THROW(parse_k_grid("0.1:0.3:5"), std::invalid_argument);
  EXPECT_THROW(parse_k_grid("0.1:0.2:0"), std::invalid_argument);
  EXPECT_THROW(parse_k_grid("0.1:0.2"), std::invalid_argument);
}

TEST(Format, SeventeenDigits) {
  EXPECT_EQ(format_real(0.1), "0.10000000000000001");
  EXPECT_EQ(format_real(-0.25), "-0.25");
  EXPECT_EQ(std::stod(format_real(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(ChiGrid, ContainsHalf) {
  auto const even = chi_grid(4);
  EXPECT_EQ(even.size(), 5u);
  EXPECT_TRUE(std::is_sorted(even.begin(), even.end()));
  EXPECT_NE(std::find(even.begin(), even.end(), 0.5), even.end());
  auto const odd = chi_grid(5);
  EXPECT_EQ(odd.size(), 5u);
  EXPECT_NE(std::find(odd.begin(), odd.end(), 0.5), odd.end());
  EXPECT_THROW(chi_grid(1), std::invalid_argument);
}

TEST(CriticalRows, UnequalMasses) {
  Masses const m(0.5, 1.0 / 3.0, 1.0 / 6.0);
  auto const rows = critical_curve_rows(m, 40);
  std::set<std::string> pairs;
  bool quarter = false;
  for (auto const& r : rows) {
    ASSERT_TRUE(r.pair.has_value());
    EXPECT_GT(r.k, 0.0);
    EXPECT_LE(r.k, 0.25);
    if (r.source == "series") {
      EXPECT_LE(r.k, kSeriesMaxK);
    }
    if (r.source == "infinity-curve") {
      pairs.insert(r.pair->label());
      if (r.chi == 0.5) {
        EXPECT_EQ(r.k, 0.25);
        EXPECT_DOUBLE_EQ(r.h, 4 * h_ij(m, *r.pair));
        quarter = true;
      }
    }
  }
  EXPECT_TRUE(quarter);
  EXPECT_EQ(pairs.size(), 3u);
  auto sorted = rows;
  sort_rows(sorted);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].source, sorted[i].source);
    EXPECT_EQ(rows[i].k, sorted[i].k);
  }
}

TEST(CriticalRows, EqualMassCurvesCoincide) {
  auto const rows = critical_curve_rows(Masses(1, 1, 1), 10);
  std::map<std::string, std::vector<double>> by_pair;
  for (auto const& r : rows) {
    if (r.source == "infinity-curve") by_pair[r.pair->label()].push_back(r.h);
  }
  EXPECT_EQ(by_pair["12"], by_pair["13"]);
  EXPECT_EQ(by_pair["12"], by_pair["23"]);
}

TEST(Commands, CriticalCurvesFileIsByteStable) {
  TempDir dir;
  CriticalCurvesOptions opt;
  opt.chi_steps = 20;
  opt.common.out = dir / "a.csv";
  EXPECT_EQ(cmd_critical_curves(opt), 0);
  std::string const first = slurp(opt.common.out);
  opt.common.out = dir / "b.csv";
  cmd_critical_curves(opt);
  EXPECT_EQ(first, slurp(opt.common.out));
  auto const l = lines(first);
  EXPECT_EQ(l.front(), "source,pair,k,h,chi");
  expect_metadata_tail(l, 1);
  EXPECT_EQ(l[l.size() - 3], "# masses 0.5,0.33333333333333331,0.16666666666666666");
  // No temp file left behind.
  std::size_t count = 0;
  for ([[maybe_unused]] auto const& e : fs::directory_iterator(dir / "")) ++count;
  EXPECT_EQ(count, 2u);
}

TEST(Commands, EscapeLadderGapsNegativeBeyondThreshold) {
  TempDir dir;
  Prop5Options opt;
  opt.common.out = dir / "p.csv";
  EXPECT_EQ(cmd_prop5(opt), 0);
  auto const l = lines(slurp(opt.common.out));
  EXPECT_EQ(l.front(), "beta,H,gap,L_residual");
  double beta0 = 0.0;
  for (auto const& s : l) {
    if (s.rfind("# beta0 ", 0) == 0) beta0 = std::stod(s.substr(8));
  }
  ASSERT_GT(beta0, 0.0);
  int rows = 0;
  for (std::size_t i = 1; i < l.size() && l[i][0] != '#'; ++i) {
    auto const f = fields(l[i]);
    ASSERT_EQ(f.size(), 4u);
    if (std::stod(f[0]) >= beta0) {
      EXPECT_LT(std::stod(f[2]), 0.0);
    }
    EXPECT_LT(std::stod(f[3]), 1e-12);
    ++rows;
  }
  EXPECT_EQ(rows, 20);
  expect_metadata_tail(l, 1);
}

TEST(Commands, MinimizeRejectsRankTwo) {
  TempDir dir;
  MinimizeOptions opt;
  opt.common.out = dir / "m.json";
  opt.l1 = 0.0;
  try {
    cmd_minimize(opt);
    FAIL() << "accepted l1 = 0";
  } catch (std::invalid_argument const& e) {
    EXPECT_NE(std::string(e.what()).find("rank 4"), std::string::npos);
  }
  EXPECT_FALSE(fs::exists(opt.common.out));
}

TEST(Commands, MinimizeThenIntegrate) {
  TempDir dir;
  MinimizeOptions opt;
  opt.common.masses = "1,1,1";
  opt.common.out = dir / "m.json";
  opt.minimizer.restarts = 8;
  ASSERT_EQ(cmd_minimize(opt), 0);
  std::ifstream f(opt.common.out);
  nlohmann::json const doc = nlohmann::json::parse(f);
  ASSERT_TRUE(doc.contains("result"));
  EXPECT_TRUE(doc["result"]["converged"].get<bool>());
  EXPECT_LT(doc["result"]["energy"].get<double>(), -0.25);
  EXPECT_GT(doc["result"]["margin"].get<double>(), 0.0);
  EXPECT_NO_THROW(state_from_json(doc, false));

  IntegrateOptions in;
  in.state = opt.common.out;
  in.common.out = dir / "t.csv";
  in.dt = 0.01;
  in.t_end = 0.5;
  in.record_every = 10;
  ASSERT_EQ(cmd_integrate(in), 0);
  auto const l = lines(slurp(in.common.out));
  auto const header = fields(l.front());
  ASSERT_EQ(header.size(), 32u);
  EXPECT_EQ(header[0], "t");
  EXPECT_EQ(header[1], "q1x");
  EXPECT_EQ(header[12], "q3w");
  EXPECT_EQ(header[13], "v1x");
  EXPECT_EQ(header[25], "H");
  EXPECT_EQ(header[26], "L12");
  EXPECT_EQ(header[31], "L34");
  EXPECT_EQ(fields(l[1]).size(), 32u);
  EXPECT_EQ(l.size(), 1u + 6u + 3u);
  expect_metadata_tail(l, 1);

  in.common.masses = "1,1,2";
  EXPECT_THROW(cmd_integrate(in), std::invalid_argument);
}

TEST(Commands, DiagramMergesSources) {
  TempDir dir;
  DiagramOptions opt;
  opt.common.out = dir / "d.csv";
  opt.chi_steps = 40;
  opt.k_grid = "0.05:0.25:3";
  opt.minimizer.restarts = 8;
  ASSERT_EQ(cmd_diagram(opt), 0);
  auto const l = lines(slurp(opt.common.out));
  std::map<std::string, int> sources;
  std::vector<std::pair<std::string, std::string>> keys;
  for (std::size_t i = 1; i < l.size() && l[i][0] != '#'; ++i) {
    auto const f = fields(l[i]);
    ASSERT_EQ(f.size(), 5u);
    ++sources[f[0]];
    keys.emplace_back(f[0], f[1]);
    if (f[0] == "minimal-branch") {
      EXPECT_EQ(f[1], "none");
    }
  }
  EXPECT_EQ(sources["minimal-branch"], 3);
  EXPECT_GT(sources["infinity-curve"], 0);
  EXPECT_GT(sources["series"], 0);
  EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end(), [](auto const& a, auto const& b) {
    return a.first < b.first;
  }));
  expect_metadata_tail(l, 1);
}
