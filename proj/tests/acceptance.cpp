// Acceptance gate: one pass/fail line per criterion, exit 0 iff all pass.
//
//  1  calibration solves the slack equation exactly and is homogeneous
//  2  chi-square constant behind the k = 6 volume-ordering threshold
//  3  optimal confidence-region scaling (constraint, ratio formula,
//     optimality against random scalings)
//  4  optimal test scaling (optimality, flat equality cases)
//  5  noise-scale relations of the three random-data mechanisms
//  6  volume orderings of the three confidence regions
//  7  power orderings across the epsilon grid for the bundled examples
//  8  Monte Carlo agreement of every claimed coverage/level/power
//  9  weighted chi-square CDF domination and Monte Carlo accuracy
// 10  byte-identical simulation CSV under 1, 4, and 8 workers

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dpqt/calibration.hpp"
#include "dpqt/fixed_query.hpp"
#include "dpqt/fixtures.hpp"
#include "dpqt/rdp.hpp"
#include "dpqt/rng.hpp"
#include "dpqt/simulate.hpp"
#include "dpqt/stats.hpp"

using namespace dpqt;
namespace fs = std::filesystem;

namespace {

bool all_ok = true;

void report(int n, bool ok) {
  std::printf("criterion %d: %s\n", n, ok ? "PASS" : "FAIL");
  if (!ok) all_ok = false;
}

std::vector<double> random_psi(Rng& rng, int k, double lo = 0.1,
                               double hi = 3.0) {
  std::vector<double> v(k);
  for (double& x : v) x = lo + (hi - lo) * rng.uniform();
  return v;
}

SymMatrix random_pd(Rng& rng, int k) {
  SymMatrix m(k);
  std::vector<std::vector<double>> a(k, std::vector<double>(k));
  for (auto& row : a)
    for (double& x : row) x = rng.normal();
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      double s = 0.0;
      for (int l = 0; l < k; ++l) s += a[l][i] * a[l][j];
      m.at(i, j) = s / k + (i == j ? 0.5 : 0.0);
    }
  return m;
}

// Random positive scaling on the constraint surface psi^T Diag(xi) psi
// = ||psi||^2, via exponential shares.
std::vector<double> random_scaling(Rng& rng, const std::vector<double>& psi) {
  int k = static_cast<int>(psi.size());
  std::vector<double> share(k);
  double total = 0.0;
  for (double& s : share) {
    s = -std::log(rng.uniform());
    total += s;
  }
  double n2 = 0.0;
  for (double p : psi) n2 += p * p;
  std::vector<double> xi(k);
  for (int i = 0; i < k; ++i)
    xi[i] = share[i] / total * n2 / (psi[i] * psi[i]);
  return xi;
}

void criterion1() {
  Rng rng(1001);
  bool ok = true;
  for (int i = 0; i < 100; ++i) {
    double eps = 0.05 + 4.95 * rng.uniform();
    double delta = std::pow(10.0, -8.0 + 6.3 * rng.uniform());  // up to .05
    if (delta > 0.05) delta = 0.05;
    double d = 0.01 + 99.99 * rng.uniform();
    PrivacyLevel lv{eps, delta};
    double s = min_sigma(lv, d);
    if (std::fabs(dp_slack(lv, d, s) - delta) > 1e-9) ok = false;
    if (!(dp_slack(lv, d, s * (1.0 - 1e-6)) > delta)) ok = false;
    double c = 0.1 + 9.9 * rng.uniform();
    if (std::fabs(min_sigma(lv, c * d) - c * s) > 1e-9 * c * s) ok = false;
  }
  report(1, ok);
}

void criterion2() {
  report(2, std::fabs(chi_sq_cdf(6, 12.0) - (1.0 - 0.062)) < 5e-4);
}

void criterion3() {
  Rng rng(1003);
  bool ok = true;
  for (int trial = 0; trial < 200; ++trial) {
    int k = 2 + static_cast<int>(rng.uniform() * 9);
    std::vector<double> psi = random_psi(rng, k);
    std::vector<double> xi = xi_star_cr(psi);
    double n2 = 0.0, lhs = 0.0;
    for (int i = 0; i < k; ++i) {
      n2 += psi[i] * psi[i];
      lhs += xi[i] * psi[i] * psi[i];
    }
    if (std::fabs(lhs - n2) > 1e-12 * n2) ok = false;

    double ratio = volume_ratio(psi);
    if (ratio > 1.0 + 1e-12) ok = false;
    double gm = 0.0, am = 0.0;
    for (double p : psi) {
      gm += std::log(p * p);
      am += p * p;
    }
    gm = std::exp(gm / k);
    am /= k;
    if (std::fabs(ratio - std::pow(gm / am, k / 2.0)) > 1e-12) ok = false;

    bool equal_components = true;
    for (double p : psi)
      if (std::fabs(p - psi[0]) > 1e-13) equal_components = false;
    if (equal_components != (std::fabs(ratio - 1.0) < 1e-12)) ok = false;

    double v_best = cr_volume(xi, 1.0, 1.0, k);
    for (int j = 0; j < 1000; ++j) {
      std::vector<double> alt = random_scaling(rng, psi);
      if (v_best > cr_volume(alt, 1.0, 1.0, k) * (1.0 + 1e-12)) ok = false;
    }
  }
  // an explicit equal-components vector exercises the equality branch
  if (std::fabs(volume_ratio({1.7, 1.7, 1.7}) - 1.0) > 1e-12) ok = false;
  report(3, ok);
}

void criterion4() {
  Rng rng(1004);
  bool ok = true;
  for (int trial = 0; trial < 200; ++trial) {
    int k = 2 + static_cast<int>(rng.uniform() * 9);
    std::vector<double> psi = random_psi(rng, k);
    std::vector<double> eta = random_psi(rng, k, -2.0, 2.0);
    std::vector<double> best = xi_star_test(psi, eta);
    double p_best = test_power_fixed(best, eta, 1.0, 0.05);
    for (int j = 0; j < 1000; ++j) {
      std::vector<double> alt = random_scaling(rng, psi);
      if (p_best < test_power_fixed(alt, eta, 1.0, 0.05) - 1e-12) ok = false;
    }

    // eta proportional to psi: every one-hot candidate ties
    std::vector<double> prop(psi);
    for (double& x : prop) x *= 1.3;
    double n2 = 0.0;
    for (double p : psi) n2 += p * p;
    double p0 = test_power_fixed(xi_star_test(psi, prop), prop, 1.0, 0.05);
    for (int j = 0; j < k; ++j) {
      std::vector<double> onehot(k, 0.0);
      onehot[j] = n2 / (psi[j] * psi[j]);
      if (std::fabs(test_power_fixed(onehot, prop, 1.0, 0.05) - p0) > 1e-12)
        ok = false;
    }
  }
  report(4, ok);
}

void criterion5() {
  Rng rng(1005);
  bool ok = true;
  RdpLevel level{1.0, 1e-4, 1e-4};
  auto check = [&](const CovarianceModel& model) {
    MechanismSuite s = mechanism_suite(model, level);
    double lmax = model.eigen.values.front();
    double sfg2 = s.fg.sigma * s.fg.sigma;
    if (std::fabs(sfg2 - lmax * s.g.sigma * s.g.sigma) > 1e-9 * sfg2)
      ok = false;
    double r = s.g.sensitivity / s.g.sigma;
    if (std::fabs(s.fg.sensitivity / s.fg.sigma - r) > 1e-9 * r) ok = false;
    if (std::fabs(s.f.sensitivity / s.f.sigma - r) > 1e-9 * r) ok = false;
  };
  check(CovarianceModel::make(fixtures::blood6_sigma(), 50));
  for (int i = 0; i < 50; ++i) {
    int k = 2 + static_cast<int>(rng.uniform() * 7);
    check(CovarianceModel::make(random_pd(rng, k), 25));
  }
  report(5, ok);
}

void criterion6() {
  Rng rng(1006);
  bool ok = true;
  double t = 5.0;
  RdpLevel level{1.0, 1e-4, 1e-5};
  auto check = [&](const CovarianceModel& model) {
    MechanismSuite s = mechanism_suite(model, level);
    VolumeTriple v = cr_volumes(model, s, t);
    if (v.vol_g > v.vol_fg * (1.0 + 1e-12)) ok = false;
    if (level.gamma <= vol_ordering_gamma_threshold(model) &&
        v.vol_g > v.vol_f * (1.0 + 1e-12))
      ok = false;
  };
  check(CovarianceModel::make(fixtures::blood6_sigma(), 50));
  for (int i = 0; i < 30; ++i) {
    int k = 2 + static_cast<int>(rng.uniform() * 7);
    check(CovarianceModel::make(random_pd(rng, k), 25));
  }
  // Sigma proportional to the identity: all three volumes coincide
  CovarianceModel iso =
      CovarianceModel::make(SymMatrix::identity(6).scaled(3.0), 50);
  MechanismSuite s = mechanism_suite(iso, level);
  VolumeTriple v = cr_volumes(iso, s, t);
  if (std::fabs(v.vol_g - v.vol_fg) > 1e-12 * v.vol_g) ok = false;
  if (std::fabs(v.vol_g - v.vol_f) > 1e-12 * v.vol_g) ok = false;
  report(6, ok);
}

void criterion7() {
  bool ok = true;
  double alpha = 0.05;
  for (const auto& ex : fixtures::blood6_examples()) {
    CovarianceModel model =
        CovarianceModel::make(fixtures::blood6_sigma(), ex.n);
    for (double eps = 0.1; eps <= 3.0 + 1e-9; eps += 0.1) {
      MechanismSuite suite =
          mechanism_suite(model, {eps, ex.delta, ex.gamma});
      PowerSummary p = power_suite(model, suite, ex.eta, alpha);
      if (!(p.pi_g > p.pi_fg)) ok = false;   // eigenvalues unequal
      if (!(p.pi_f >= p.pi_fg)) ok = false;
      if (!(p.pi_g > p.pi_f)) ok = false;
    }
  }
  report(7, ok);
}

void criterion8() {
  bool ok = true;

  SimPlan fixed;
  fixed.scenario = Scenario::fixed_data;
  fixed.seed = 801;
  fixed.replications = 100000;
  fixed.psi = {2.0, 0.4, 1.0};
  fixed.mu = {1.0, -0.5, 0.25};
  fixed.eta = {3.0, 1.0, -2.0};
  fixed.epsilon = 1.0;
  fixed.delta = 1e-4;
  SimReport fr = run_plan(fixed);
  if (!fr.all_pass()) ok = false;

  SimPlan random;
  random.scenario = Scenario::random_data;
  random.seed = 802;
  random.replications = 100000;
  random.sigma = fixtures::blood6_sigma();
  random.gamma = 0.01;  // large enough for an informative binomial SE
  random.n = 50;
  random.mu = std::vector<double>(6, 0.0);
  random.eta = {10, 5, 10, 8.75, 12.5, 2.5};
  random.epsilon = 1.0;
  random.delta = 0.02;
  SimReport rr = run_plan(random);
  if (!rr.all_pass()) ok = false;

  // the super-naive analysis must visibly exceed the nominal level
  const Estimand& sn = rr.find("level_super_naive");
  if (!(sn.estimate - random.alpha > 3.0 * sn.std_error)) ok = false;

  report(8, ok);
}

void criterion9() {
  // Mean-1 weights at k = 6: F_lambda(x) <= F(x) for x >= 12, and the
  // CDF agrees with a seeded Monte Carlo oracle. The Monte Carlo sample
  // cannot certify 1e-6 by itself, so accuracy is judged within three
  // binomial standard errors plus the 1e-6 budget.
  Rng rng(1009);
  bool ok = true;
  const int k = 6;

  // common random numbers: one pool of squared normals for every vector
  const long m = 2000000;
  std::vector<double> sq(m * k);
  {
    Rng draw(90001);
    for (double& x : sq) {
      double z = draw.normal();
      x = z * z;
    }
  }

  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> w = random_psi(rng, k, 0.05, 1.0);
    double mean = 0.0;
    for (double wi : w) mean += wi;
    mean /= k;
    for (double& wi : w) wi /= mean;

    for (double x = 12.0; x <= 40.0; x += 4.0) {
      double fw = weighted_chi_sq_cdf(w, x);
      if (fw > chi_sq_cdf(k, x) + 1e-6) ok = false;
    }

    if (trial % 10 == 0) {  // Monte Carlo spot checks
      for (double x : {12.0, 20.0}) {
        long hit = 0;
        for (long i = 0; i < m; ++i) {
          double s = 0.0;
          for (int j = 0; j < k; ++j) s += w[j] * sq[i * k + j];
          if (s <= x) ++hit;
        }
        double p = static_cast<double>(hit) / m;
        double se = std::sqrt(p * (1.0 - p) / m);
        if (std::fabs(weighted_chi_sq_cdf(w, x) - p) > 3.0 * se + 1e-6)
          ok = false;
      }
    }
  }
  report(9, ok);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion10() {
  bool ok = true;
  fs::path dir = fs::temp_directory_path() / "dpqt_acceptance_c10";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << R"({"scenario": "random-data", "replications": 50000,
               "covariance": "blood6", "gamma": 0.01, "n": 50,
               "mu": [0, 0, 0, 0, 0, 0],
               "eta": [10, 5, 10, 8.75, 12.5, 2.5],
               "epsilon": 1, "delta": 0.02})";
  }
  std::vector<std::string> outputs;
  for (int workers : {1, 4, 8}) {
    fs::path out = dir / ("w" + std::to_string(workers));
    std::string cmd = "env DPQT_THREADS=" + std::to_string(workers) + " " +
                      DPQT_CLI_PATH + " simulate --config " +
                      (dir / "cfg.json").string() + " --seed 55 --out " +
                      out.string() + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    if (rc != 0) ok = false;
    outputs.push_back(slurp(out / "simulate.csv"));
  }
  if (outputs[0].empty()) ok = false;
  if (outputs[0] != outputs[1] || outputs[0] != outputs[2]) ok = false;
  report(10, ok);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  return all_ok ? 0 : 1;
}
