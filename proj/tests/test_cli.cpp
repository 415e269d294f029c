#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

// Integration tests driving the installed command-line binary; the build
// passes its path in DPQT_CLI_PATH.

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  std::string cmd = std::string(DPQT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path scratch_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("dpqt_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

// Parse one CSV file into rows of cells.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

double cell_value(const std::vector<std::vector<std::string>>& rows,
                  const std::string& quantity) {
  for (const auto& r : rows)
    if (r.size() == 3 && r[0] == quantity) return std::stod(r[2]);
  throw std::runtime_error("missing row: " + quantity);
}

}  // namespace

TEST_CASE("calibrate: output file and exact homogeneity") {
  fs::path out1 = scratch_dir("cal1"), out2 = scratch_dir("cal2");
  REQUIRE(run("calibrate --epsilon 1 --delta 1e-5 --sensitivity 1 --out " +
              out1.string()) == 0);
  REQUIRE(run("calibrate --epsilon 1 --delta 1e-5 --sensitivity 2 --out " +
              out2.string()) == 0);

  auto rows1 = parse_csv(slurp(out1 / "calibrate.csv"));
  auto rows2 = parse_csv(slurp(out2 / "calibrate.csv"));
  REQUIRE(rows1.size() == 2);
  REQUIRE(rows1[0] == std::vector<std::string>{"epsilon", "delta",
                                               "sensitivity", "sigma",
                                               "slack"});
  double s1 = std::stod(rows1[1][3]);
  double s2 = std::stod(rows2[1][3]);
  // the CSV carries 12 significant digits
  CHECK(s2 == doctest::Approx(2.0 * s1).epsilon(1e-10));
  // file uses LF endings only
  CHECK(slurp(out1 / "calibrate.csv").find('\r') == std::string::npos);
}

TEST_CASE("calibrate: invalid privacy level fails") {
  fs::path out = scratch_dir("cal_bad");
  CHECK(run("calibrate --epsilon 1 --delta 1 --sensitivity 1 --out " +
            out.string()) != 0);
  CHECK(run("calibrate --epsilon -1 --delta 1e-5 --sensitivity 1 --out " +
            out.string()) != 0);
}

TEST_CASE("fixed: box bounds reproduce the known volume ratio") {
  fs::path out = scratch_dir("fixed");
  write(out / "cfg.json",
        R"({"bounds": [[0, 10], [0, 2]], "n": 5, "eta": [1, 1],
            "epsilon": 1, "delta": 1e-5})");
  REQUIRE(run("fixed --config " + (out / "cfg.json").string() + " --out " +
              out.string()) == 0);
  auto rows = parse_csv(slurp(out / "fixed.csv"));
  // psi = (2, 0.4), psi^2 = (4, 0.16): ratio = GM/AM^(k/2) = 0.8 / 2.08
  CHECK(cell_value(rows, "psi") == doctest::Approx(2.0));
  CHECK(cell_value(rows, "volume_ratio") ==
        doctest::Approx(0.8 / 2.08).epsilon(1e-10));
  CHECK(cell_value(rows, "power_xi_star_test") >=
        cell_value(rows, "power_xi1") - 1e-12);
  CHECK(cell_value(rows, "vol_xi_star") <=
        cell_value(rows, "vol_xi1") * (1.0 + 1e-12));
}

TEST_CASE("fixed: unknown config key is rejected") {
  fs::path out = scratch_dir("fixed_bad");
  write(out / "cfg.json",
        R"({"psi": [1, 2], "eta": [1, 1], "epsilon": 1, "delta": 1e-5,
            "bogus": 3})");
  CHECK(run("fixed --config " + (out / "cfg.json").string() + " --out " +
            out.string()) == 2);
  write(out / "cfg2.json", "{not json");
  CHECK(run("fixed --config " + (out / "cfg2.json").string() + " --out " +
            out.string()) == 2);
}

TEST_CASE("rdp-curves: blood fixture orderings along the grid") {
  fs::path out = scratch_dir("curves");
  write(out / "cfg.json",
        R"({"covariance": "blood6", "n": 50,
            "eta": [10, 5, 10, 8.75, 12.5, 2.5],
            "delta": 0.02, "gamma": 1e-4})");
  REQUIRE(run("rdp-curves --config " + (out / "cfg.json").string() +
              " --out " + out.string() + " --grid 0.2:2:0.2") == 0);
  auto rows = parse_csv(slurp(out / "rdp_curves.csv"));
  REQUIRE(rows.size() == 11);  // header + 10 grid points
  double prev_g = 0.0;
  for (size_t i = 1; i < rows.size(); ++i) {
    double pi_g = std::stod(rows[i][1]);
    double pi_fg = std::stod(rows[i][2]);
    double pi_f = std::stod(rows[i][3]);
    double pi_naive = std::stod(rows[i][4]);
    double lvl_sn = std::stod(rows[i][5]);
    double vol_g = std::stod(rows[i][6]);
    double vol_fg = std::stod(rows[i][7]);
    double vol_f = std::stod(rows[i][8]);
    CHECK(pi_g > pi_f);
    CHECK(pi_f > pi_fg);
    CHECK(pi_naive <= pi_f + 1e-12);
    CHECK(lvl_sn > 0.05);
    CHECK(vol_g < vol_fg);
    CHECK(vol_g < vol_f);
    CHECK(pi_g >= prev_g);  // power grows with epsilon
    prev_g = pi_g;
  }
}

TEST_CASE("rdp-curves: identity covariance collapses the mechanisms") {
  fs::path out = scratch_dir("curves_id");
  write(out / "cfg.json",
        R"({"covariance": [[1, 0], [0, 1]], "n": 20, "eta": [1, 1],
            "delta": 1e-4, "gamma": 1e-4, "grid": "0.5:1.5:0.5"})");
  REQUIRE(run("rdp-curves --config " + (out / "cfg.json").string() +
              " --out " + out.string()) == 0);
  auto rows = parse_csv(slurp(out / "rdp_curves.csv"));
  REQUIRE(rows.size() == 4);
  for (size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][1]) ==
          doctest::Approx(std::stod(rows[i][2])).epsilon(1e-9));
    CHECK(std::stod(rows[i][6]) ==
          doctest::Approx(std::stod(rows[i][7])).epsilon(1e-9));
    CHECK(std::stod(rows[i][7]) ==
          doctest::Approx(std::stod(rows[i][8])).epsilon(1e-9));
  }
}

TEST_CASE("simulate: seeded run is byte-stable and passes") {
  fs::path out1 = scratch_dir("sim1"), out2 = scratch_dir("sim2");
  std::string cfg =
      R"({"scenario": "fixed-data", "replications": 5000,
          "psi": [2, 0.4], "mu": [1, -1], "eta": [2, 1],
          "epsilon": 1, "delta": 1e-4})";
  write(out1 / "cfg.json", cfg);
  REQUIRE(run("simulate --config " + (out1 / "cfg.json").string() +
              " --seed 31 --out " + out1.string()) == 0);
  REQUIRE(run("simulate --config " + (out1 / "cfg.json").string() +
              " --seed 31 --out " + out2.string()) == 0);
  std::string a = slurp(out1 / "simulate.csv");
  CHECK(a == slurp(out2 / "simulate.csv"));
  CHECK(a.find("FAIL") == std::string::npos);
  CHECK(a.find('\r') == std::string::npos);
}

TEST_CASE("fixtures: prints the bundled covariance") {
  fs::path out = scratch_dir("fixt");
  std::string cmd = std::string(DPQT_CLI_PATH) + " fixtures > " +
                    (out / "fixtures.txt").string();
  REQUIRE(std::system(cmd.c_str()) == 0);
  std::string text = slurp(out / "fixtures.txt");
  CHECK(text.find("Cholesterol") != std::string::npos);
  CHECK(text.find("Glucose") != std::string::npos);
  CHECK(text.find("example") != std::string::npos);
}
