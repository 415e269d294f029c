// Command-line front end: Gaussian-mechanism calibration, fixed-data and
// random-data query planning, and the seeded simulation lab. Subcommands
// write tidy CSV into --out; configs are JSON with strict key checking.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dpqt/calibration.hpp"
#include "dpqt/csv.hpp"
#include "dpqt/fixed_query.hpp"
#include "dpqt/fixtures.hpp"
#include "dpqt/rdp.hpp"
#include "dpqt/simulate.hpp"
#include "dpqt/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  uint64_t seed = 0;
  bool seed_set = false;
  std::string grid;
};

[[noreturn]] void die(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  std::exit(2);
}

json load_config(const std::string& path,
                 const std::set<std::string>& allowed) {
  std::ifstream in(path);
  if (!in) die("cannot open config: " + path);
  json cfg;
  try {
    in >> cfg;
  } catch (const std::exception& e) {
    die(std::string("config parse failure: ") + e.what());
  }
  if (!cfg.is_object()) die("config must be a JSON object");
  for (auto& [key, _] : cfg.items())
    if (!allowed.count(key)) die("unknown config key: " + key);
  return cfg;
}

std::vector<double> get_vector(const json& cfg, const std::string& key) {
  if (!cfg.contains(key) || !cfg[key].is_array())
    die("config needs array \"" + key + "\"");
  std::vector<double> v;
  for (auto& x : cfg[key]) {
    if (!x.is_number()) die("\"" + key + "\" must contain numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

double get_number(const json& cfg, const std::string& key) {
  if (!cfg.contains(key) || !cfg[key].is_number())
    die("config needs number \"" + key + "\"");
  return cfg[key].get<double>();
}

double get_number_or(const json& cfg, const std::string& key, double dflt) {
  if (!cfg.contains(key)) return dflt;
  if (!cfg[key].is_number()) die("\"" + key + "\" must be a number");
  return cfg[key].get<double>();
}

dpqt::SymMatrix get_covariance(const json& cfg) {
  if (!cfg.contains("covariance")) die("config needs \"covariance\"");
  const json& c = cfg["covariance"];
  if (c.is_string()) {
    if (c.get<std::string>() == "blood6") return dpqt::fixtures::blood6_sigma();
    die("unknown covariance fixture: " + c.get<std::string>());
  }
  if (!c.is_array()) die("\"covariance\" must be a fixture name or a matrix");
  int k = static_cast<int>(c.size());
  dpqt::SymMatrix m(k);
  for (int i = 0; i < k; ++i) {
    if (!c[i].is_array() || static_cast<int>(c[i].size()) != k)
      die("\"covariance\" must be a square matrix");
    for (int j = 0; j < k; ++j) m.at(i, j) = c[i][j].get<double>();
  }
  return m;
}

void write_file(const CommonOpts& opts, const std::string& name,
                const std::string& contents) {
  fs::create_directories(opts.out_dir);
  fs::path p = fs::path(opts.out_dir) / name;
  std::ofstream out(p, std::ios::binary);
  if (!out) die("cannot write " + p.string());
  out << contents;
}

// start:stop:step, inclusive of stop up to rounding.
std::vector<double> parse_grid(const std::string& spec) {
  double start, stop, step;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 ||
      step <= 0.0 || stop < start)
    die("bad grid spec (want start:stop:step): " + spec);
  std::vector<double> grid;
  for (int i = 0;; ++i) {
    double x = start + i * step;
    if (x > stop + 0.5 * step) break;
    grid.push_back(x);
  }
  return grid;
}

int cmd_calibrate(double epsilon, double delta, double sensitivity,
                  const CommonOpts& opts) {
  dpqt::PrivacyLevel level{epsilon, delta};
  double sigma = dpqt::min_sigma(level, sensitivity);
  double slack = dpqt::dp_slack(level, sensitivity, sigma);

  dpqt::CsvWriter csv;
  csv.header({"epsilon", "delta", "sensitivity", "sigma", "slack"});
  csv.row({epsilon, delta, sensitivity, sigma, slack});
  write_file(opts, "calibrate.csv", csv.str());
  std::cout << "sigma=" << dpqt::CsvWriter::format(sigma)
            << " slack=" << dpqt::CsvWriter::format(slack) << "\n";
  return 0;
}

int cmd_fixed(const CommonOpts& opts) {
  json cfg = load_config(opts.config_path,
                         {"psi", "bounds", "n", "eta", "epsilon", "delta",
                          "alpha", "t"});
  std::vector<double> psi;
  if (cfg.contains("psi")) {
    psi = get_vector(cfg, "psi");
  } else {
    dpqt::BoxUniverse u;
    u.n = static_cast<int>(get_number(cfg, "n"));
    if (!cfg.contains("bounds") || !cfg["bounds"].is_array())
      die("config needs \"psi\" or \"bounds\"");
    for (auto& b : cfg["bounds"]) {
      if (!b.is_array() || b.size() != 2) die("bounds entries must be pairs");
      u.bounds.emplace_back(b[0].get<double>(), b[1].get<double>());
    }
    psi = dpqt::sensitivity_psi(u);
  }
  std::vector<double> eta = get_vector(cfg, "eta");
  double epsilon = get_number(cfg, "epsilon");
  double delta = get_number(cfg, "delta");
  double alpha = get_number_or(cfg, "alpha", 0.05);
  int k = static_cast<int>(psi.size());
  double t = get_number_or(cfg, "t", dpqt::chi_sq_quantile(k, 1.0 - alpha));

  double sigma = dpqt::min_sigma({epsilon, delta}, dpqt::norm2(psi));
  std::vector<double> xi1(psi.size(), 1.0);
  std::vector<double> xis = dpqt::xi_star_cr(psi);
  std::vector<double> xit = dpqt::xi_star_test(psi, eta);

  dpqt::CsvWriter csv;
  csv.header({"quantity", "index", "value"});
  auto emit_vec = [&](const std::string& name, const std::vector<double>& v) {
    for (size_t i = 0; i < v.size(); ++i)
      csv.row_strings({name, std::to_string(i), dpqt::CsvWriter::format(v[i])});
  };
  auto emit_scalar = [&](const std::string& name, double v) {
    csv.row_strings({name, "", dpqt::CsvWriter::format(v)});
  };
  emit_vec("psi", psi);
  emit_vec("xi_star_cr", xis);
  emit_vec("xi_star_test", xit);
  emit_scalar("sigma", sigma);
  emit_scalar("t", t);
  emit_scalar("volume_ratio", dpqt::volume_ratio(psi));
  emit_scalar("vol_xi1", dpqt::cr_volume(xi1, sigma, t, k));
  emit_scalar("vol_xi_star", dpqt::cr_volume(xis, sigma, t, k));
  emit_scalar("power_xi1", dpqt::test_power_fixed(xi1, eta, sigma, alpha));
  emit_scalar("power_xi_star_test",
              dpqt::test_power_fixed(xit, eta, sigma, alpha));
  write_file(opts, "fixed.csv", csv.str());
  std::cout << "wrote fixed.csv (volume_ratio="
            << dpqt::CsvWriter::format(dpqt::volume_ratio(psi)) << ")\n";
  return 0;
}

int cmd_rdp_curves(const CommonOpts& opts) {
  json cfg = load_config(opts.config_path,
                         {"covariance", "n", "eta", "delta", "gamma", "alpha",
                          "t", "grid"});
  dpqt::SymMatrix sigma = get_covariance(cfg);
  int n = static_cast<int>(get_number(cfg, "n"));
  std::vector<double> eta = get_vector(cfg, "eta");
  double delta = get_number(cfg, "delta");
  double gamma = get_number(cfg, "gamma");
  double alpha = get_number_or(cfg, "alpha", 0.05);
  dpqt::CovarianceModel model = dpqt::CovarianceModel::make(sigma, n);
  double t = get_number_or(cfg, "t",
                           dpqt::chi_sq_quantile(sigma.dim, 1.0 - alpha));

  std::string grid_spec = opts.grid;
  if (grid_spec.empty() && cfg.contains("grid"))
    grid_spec = cfg["grid"].get<std::string>();
  if (grid_spec.empty()) grid_spec = "0.1:3:0.1";
  std::vector<double> grid = parse_grid(grid_spec);

  dpqt::CsvWriter csv;
  csv.header({"epsilon", "pi_g", "pi_fg", "pi_f", "pi_naive",
              "level_super_naive", "vol_g", "vol_fg", "vol_f"});
  for (double eps : grid) {
    dpqt::RdpLevel level{eps, delta, gamma};
    dpqt::MechanismSuite suite = dpqt::mechanism_suite(model, level);
    dpqt::PowerSummary p = dpqt::power_suite(model, suite, eta, alpha);
    dpqt::VolumeTriple v = dpqt::cr_volumes(model, suite, t);
    csv.row({eps, p.pi_g, p.pi_fg, p.pi_f, p.pi_naive, p.level_super_naive,
             v.vol_g, v.vol_fg, v.vol_f});
  }
  write_file(opts, "rdp_curves.csv", csv.str());
  std::cout << "wrote rdp_curves.csv (" << grid.size() << " rows)\n";
  return 0;
}

int cmd_simulate(const CommonOpts& opts) {
  json cfg = load_config(opts.config_path,
                         {"scenario", "seed", "replications", "psi", "bounds",
                          "covariance", "n", "mu", "eta", "epsilon", "delta",
                          "gamma", "alpha", "t"});
  dpqt::SimPlan plan;
  std::string scenario = cfg.value("scenario", std::string("fixed-data"));
  if (scenario == "fixed-data")
    plan.scenario = dpqt::Scenario::fixed_data;
  else if (scenario == "random-data")
    plan.scenario = dpqt::Scenario::random_data;
  else
    die("scenario must be \"fixed-data\" or \"random-data\"");

  plan.seed = opts.seed_set ? opts.seed
                            : static_cast<uint64_t>(
                                  get_number_or(cfg, "seed", 1));
  plan.replications =
      static_cast<long>(get_number_or(cfg, "replications", 100000));
  plan.n = static_cast<int>(get_number_or(cfg, "n", 50));
  plan.mu = get_vector(cfg, "mu");
  plan.eta = get_vector(cfg, "eta");
  plan.epsilon = get_number(cfg, "epsilon");
  plan.delta = get_number(cfg, "delta");
  plan.alpha = get_number_or(cfg, "alpha", 0.05);
  plan.t = get_number_or(cfg, "t", 0.0);

  if (plan.scenario == dpqt::Scenario::fixed_data) {
    if (cfg.contains("psi")) {
      plan.psi = get_vector(cfg, "psi");
    } else {
      dpqt::BoxUniverse u;
      u.n = plan.n;
      for (auto& b : cfg["bounds"])
        u.bounds.emplace_back(b[0].get<double>(), b[1].get<double>());
      plan.psi = dpqt::sensitivity_psi(u);
    }
  } else {
    plan.sigma = get_covariance(cfg);
    plan.gamma = get_number(cfg, "gamma");
  }

  dpqt::SimReport report = dpqt::run_plan(plan);

  dpqt::CsvWriter csv;
  csv.header({"estimand", "estimate", "std_error", "expected", "discrepancy",
              "replications", "status"});
  json failures = json::array();
  for (const auto& e : report.estimands) {
    csv.row_strings({e.name, dpqt::CsvWriter::format(e.estimate),
                     dpqt::CsvWriter::format(e.std_error),
                     dpqt::CsvWriter::format(e.expected),
                     dpqt::CsvWriter::format(e.estimate - e.expected),
                     std::to_string(e.replications),
                     e.pass ? "PASS" : "FAIL"});
    if (!e.pass) failures.push_back(e.name);
  }
  write_file(opts, "simulate.csv", csv.str());
  std::cout << "wrote simulate.csv ("
            << (report.all_pass() ? "all checks PASS" : "checks FAILED")
            << ")\n";
  if (!report.all_pass()) {
    std::cerr << json({{"failed", failures}}).dump() << "\n";
    return 1;
  }
  return 0;
}

int cmd_fixtures() {
  dpqt::CsvWriter csv;
  const auto& names = dpqt::fixtures::blood6_names();
  const auto& sigma = dpqt::fixtures::blood6_sigma();
  std::vector<std::string> hdr = {"variable"};
  hdr.insert(hdr.end(), names.begin(), names.end());
  csv.header(hdr);
  for (int i = 0; i < sigma.dim; ++i) {
    std::vector<std::string> row = {names[i]};
    for (int j = 0; j < sigma.dim; ++j)
      row.push_back(dpqt::CsvWriter::format(sigma.at(i, j)));
    csv.row_strings(row);
  }
  std::cout << csv.str() << "\n";

  dpqt::CsvWriter ex;
  ex.header({"example", "eta", "n", "delta", "gamma"});
  for (const auto& c : dpqt::fixtures::blood6_examples()) {
    std::string eta;
    for (size_t i = 0; i < c.eta.size(); ++i) {
      if (i) eta += ' ';
      eta += dpqt::CsvWriter::format(c.eta[i]);
    }
    ex.row_strings({std::to_string(c.id), eta, std::to_string(c.n),
                    dpqt::CsvWriter::format(c.delta),
                    dpqt::CsvWriter::format(c.gamma)});
  }
  std::cout << ex.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian-mechanism calibration and query planning toolkit"};
  app.require_subcommand(1);
  CommonOpts opts;

  double epsilon = 0, delta = 0, sensitivity = 0;
  auto* cal = app.add_subcommand("calibrate", "calibrate the noise scale");
  cal->add_option("--epsilon", epsilon)->required();
  cal->add_option("--delta", delta)->required();
  cal->add_option("--sensitivity", sensitivity)->required();
  cal->add_option("--out", opts.out_dir);

  auto* fixed = app.add_subcommand("fixed", "fixed-dataset planning");
  fixed->add_option("--config", opts.config_path)->required();
  fixed->add_option("--out", opts.out_dir);

  auto* curves = app.add_subcommand("rdp-curves",
                                    "power/volume curves over an epsilon grid");
  curves->add_option("--config", opts.config_path)->required();
  curves->add_option("--out", opts.out_dir);
  curves->add_option("--grid", opts.grid);

  auto* sim = app.add_subcommand("simulate", "seeded Monte Carlo checks");
  sim->add_option("--config", opts.config_path)->required();
  sim->add_option("--out", opts.out_dir);
  auto* seed_opt = sim->add_option("--seed", opts.seed);

  auto* fixt = app.add_subcommand("fixtures", "print bundled data");

  CLI11_PARSE(app, argc, argv);
  opts.seed_set = seed_opt->count() > 0;

  try {
    if (cal->parsed()) return cmd_calibrate(epsilon, delta, sensitivity, opts);
    if (fixed->parsed()) return cmd_fixed(opts);
    if (curves->parsed()) return cmd_rdp_curves(opts);
    if (sim->parsed()) return cmd_simulate(opts);
    if (fixt->parsed()) return cmd_fixtures();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
