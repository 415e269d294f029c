#include "dpqt/simulate.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "dpqt/calibration.hpp"
#include "dpqt/fixed_query.hpp"
#include "dpqt/rdp.hpp"
#include "dpqt/stats.hpp"

namespace dpqt {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

std::vector<double> Rng::normal_vec(int k) {
  std::vector<double> v(k);
  for (double& x : v) x = normal();
  return v;
}

std::vector<std::vector<double>> draw_normal_rows(
    uint64_t seed, int n, const std::vector<double>& mu,
    const SymMatrix& sqrt_sigma) {
  int k = sqrt_sigma.dim;
  if (static_cast<int>(mu.size()) != k)
    throw std::invalid_argument("draw_normal_rows: dimension mismatch");
  Rng rng(seed);
  std::vector<std::vector<double>> rows(n);
  for (auto& row : rows) {
    std::vector<double> z = rng.normal_vec(k);
    row = mat_vec(sqrt_sigma, z);
    for (int i = 0; i < k; ++i) row[i] += mu[i];
  }
  return rows;
}

NeighborPair neighbor_pair(const std::vector<std::vector<double>>& rows) {
  if (rows.size() < 2)
    throw std::invalid_argument("neighbor_pair: need at least 2 rows");
  NeighborPair p;
  p.s.assign(rows.begin(), rows.end() - 1);
  p.s_prime.assign(rows.begin(), rows.end() - 2);
  p.s_prime.push_back(rows.back());
  return p;
}

bool SimReport::all_pass() const {
  for (const auto& e : estimands)
    if (!e.pass) return false;
  return true;
}

const Estimand& SimReport::find(const std::string& name) const {
  for (const auto& e : estimands)
    if (e.name == name) return e;
  throw std::out_of_range("no such estimand: " + name);
}

namespace {

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DPQT_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Per-replication kernel: sets one bit per estimand. The kernel must
// draw from the rng in a fixed order so results are replication-local.
template <typename Kernel>
std::vector<long> parallel_counts(const SimPlan& plan, int n_estimands,
                                  const Kernel& kernel) {
  int workers = resolve_workers(plan.workers);
  long n = plan.replications;
  std::vector<std::vector<long>> partial(
      workers, std::vector<long>(n_estimands, 0));

  auto work = [&](int w) {
    std::vector<char> hits(n_estimands);
    for (long r = w; r < n; r += workers) {
      Rng rng(sub_seed(plan.seed, static_cast<uint64_t>(r)));
      kernel(rng, hits);
      for (int e = 0; e < n_estimands; ++e) partial[w][e] += hits[e];
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& th : threads) th.join();
  }

  std::vector<long> counts(n_estimands, 0);
  for (int w = 0; w < workers; ++w)
    for (int e = 0; e < n_estimands; ++e) counts[e] += partial[w][e];
  return counts;
}

Estimand make_estimand(const std::string& name, long successes, long n,
                       double expected) {
  Estimand e;
  e.name = name;
  e.successes = successes;
  e.replications = n;
  e.estimate = static_cast<double>(successes) / n;
  e.std_error = std::sqrt(e.estimate * (1.0 - e.estimate) / n);
  e.expected = expected;
  e.pass = std::fabs(e.estimate - expected) <= 3.0 * e.std_error;
  return e;
}

SimReport run_fixed(const SimPlan& plan) {
  const std::vector<double>& psi = plan.psi;
  int k = static_cast<int>(psi.size());
  if (k == 0) throw std::invalid_argument("fixed-data plan needs psi");
  if (plan.mu.size() != psi.size() || plan.eta.size() != psi.size())
    throw std::invalid_argument("fixed-data plan: dimension mismatch");

  double sigma = min_sigma({plan.epsilon, plan.delta}, norm2(psi));
  double t = plan.t > 0.0 ? plan.t : chi_sq_quantile(k, 0.95);
  std::vector<double> xi1(k, 1.0);
  std::vector<double> xis = xi_star_cr(psi);
  std::vector<double> xit = xi_star_test(psi, plan.eta);
  double z_alpha = normal_quantile(1.0 - plan.alpha);

  auto sqrt_scale = [](const std::vector<double>& xi,
                       const std::vector<double>& v) {
    std::vector<double> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = std::sqrt(xi[i]) * v[i];
    return out;
  };
  std::vector<double> mu_xi1 = plan.mu;
  std::vector<double> mu_xis = sqrt_scale(xis, plan.mu);
  std::vector<double> eta_xi1 = plan.eta;
  std::vector<double> eta_xit = sqrt_scale(xit, plan.eta);

  auto lr_threshold = [&](const std::vector<double>& xi) {
    double q = 0.0;
    for (int i = 0; i < k; ++i) q += xi[i] * plan.eta[i] * plan.eta[i];
    return z_alpha * std::sqrt(q) / sigma;
  };
  double thr1 = lr_threshold(xi1);
  double thrt = lr_threshold(xit);

  auto lr_stat = [&](const std::vector<double>& xi,
                     const std::vector<double>& m) {
    double s = 0.0;
    for (int i = 0; i < k; ++i)
      s += m[i] * std::sqrt(xi[i]) * plan.eta[i];
    return s / (sigma * sigma);
  };

  auto kernel = [&](Rng& rng, std::vector<char>& hits) {
    // coverage, xi = 1 and xi = xi*
    for (int which = 0; which < 2; ++which) {
      const std::vector<double>& xi = which ? xis : xi1;
      const std::vector<double>& mean = which ? mu_xis : mu_xi1;
      std::vector<double> resp(k);
      for (int i = 0; i < k; ++i) resp[i] = mean[i] + sigma * rng.normal();
      hits[which] = cr_contains(resp, xi, sigma, t, plan.mu);
    }
    // level and power, xi = 1 and xi = xi*_test
    for (int which = 0; which < 2; ++which) {
      const std::vector<double>& xi = which ? xit : xi1;
      double thr = which ? thrt : thr1;
      std::vector<double> m0(k), m1(k);
      const std::vector<double>& mean1 = which ? eta_xit : eta_xi1;
      for (int i = 0; i < k; ++i) {
        m0[i] = sigma * rng.normal();
        m1[i] = mean1[i] + sigma * rng.normal();
      }
      hits[2 + which] = lr_stat(xi, m0) > thr;
      hits[4 + which] = lr_stat(xi, m1) > thr;
    }
  };

  std::vector<long> counts = parallel_counts(plan, 6, kernel);
  double cov = chi_sq_cdf(k, t);
  long n = plan.replications;

  SimReport report;
  report.plan = plan;
  report.estimands = {
      make_estimand("coverage_xi1", counts[0], n, cov),
      make_estimand("coverage_xi_star", counts[1], n, cov),
      make_estimand("level_xi1", counts[2], n, plan.alpha),
      make_estimand("level_xi_star_test", counts[3], n, plan.alpha),
      make_estimand("power_xi1", counts[4], n,
                    test_power_fixed(xi1, plan.eta, sigma, plan.alpha)),
      make_estimand("power_xi_star_test", counts[5], n,
                    test_power_fixed(xit, plan.eta, sigma, plan.alpha)),
  };
  return report;
}

SimReport run_random(const SimPlan& plan) {
  if (plan.sigma.dim == 0)
    throw std::invalid_argument("random-data plan needs a covariance");
  int k = plan.sigma.dim;
  if (static_cast<int>(plan.mu.size()) != k ||
      static_cast<int>(plan.eta.size()) != k)
    throw std::invalid_argument("random-data plan: dimension mismatch");

  CovarianceModel model = CovarianceModel::make(plan.sigma, plan.n);
  RdpLevel level{plan.epsilon, plan.delta, plan.gamma};
  MechanismSuite suite = mechanism_suite(model, level);
  PrivacyRadii radii = privacy_radii(model, level);
  double t = plan.t > 0.0 ? plan.t : chi_sq_quantile(k, 0.95);
  double z_alpha = normal_quantile(1.0 - plan.alpha);

  SymMatrix an = sym_power(model.sigma_n, 0.5);    // Sigma_n^{1/2}
  SymMatrix wn = sym_power(model.sigma_n, -0.5);   // Sigma_n^{-1/2}
  SymMatrix inv_n = sym_power(model.sigma_n, -1.0);
  SymMatrix b = sym_power(model.sigma, 0.5);       // population sqrt

  double sg = suite.g.sigma, sfg = suite.fg.sigma, sf = suite.f.sigma;
  auto shifted_inverse = [&](double s) {
    SymMatrix m = model.sigma_n;
    for (int i = 0; i < k; ++i) m.at(i, i) += s * s;
    return sym_power(m, -1.0);
  };
  SymMatrix inv_fg = shifted_inverse(sfg);
  SymMatrix inv_f = shifted_inverse(sf);

  std::vector<double> v_fg = mat_vec(inv_fg, plan.eta);
  std::vector<double> v_f = mat_vec(inv_f, plan.eta);
  std::vector<double> v_n = mat_vec(inv_n, plan.eta);
  std::vector<double> w_g = mat_vec(wn, plan.eta);  // Sigma_n^{-1/2} eta

  auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };

  double q_inv = quad_form(inv_n, plan.eta);
  double naive_sd = 0.0;
  {
    // eta^T Sn^{-1} (Sn + sigma_f^2 I) Sn^{-1} eta
    naive_sd = std::sqrt(q_inv + sf * sf * dot(v_n, v_n));
  }
  double thr_g = z_alpha * std::sqrt(q_inv / (sg * sg + 1.0));
  double thr_fg = z_alpha * std::sqrt(dot(plan.eta, v_fg));
  double thr_f = z_alpha * std::sqrt(dot(plan.eta, v_f));
  double thr_naive = z_alpha * naive_sd;
  double thr_sn = z_alpha * std::sqrt(q_inv);

  std::vector<double> g_eta = mat_vec(wn, plan.eta);  // alternative for g

  PowerSummary analytic = power_suite(model, suite, plan.eta, plan.alpha);

  auto kernel = [&](Rng& rng, std::vector<char>& hits) {
    // coverage of CR_g, CR_fg, CR_f at the true mean
    {
      std::vector<double> z = rng.normal_vec(k), u = rng.normal_vec(k);
      // d = Sigma_n^{1/2} (z + sigma_g u) = Sigma_n^{1/2} M_g - mu
      std::vector<double> s(k);
      for (int i = 0; i < k; ++i) s[i] = z[i] + sg * u[i];
      std::vector<double> d = mat_vec(an, s);
      hits[0] = quad_form(inv_n, d) / (1.0 + sg * sg) <= t;
    }
    for (int which = 0; which < 2; ++which) {
      double s = which ? sf : sfg;
      const SymMatrix& inv = which ? inv_f : inv_fg;
      std::vector<double> z = rng.normal_vec(k), u = rng.normal_vec(k);
      std::vector<double> d = mat_vec(an, z);
      for (int i = 0; i < k; ++i) d[i] += s * u[i];
      hits[1 + which] = quad_form(inv, d) <= t;
    }
    // level and power of R_g
    {
      std::vector<double> z = rng.normal_vec(k), u = rng.normal_vec(k);
      std::vector<double> m0(k);
      for (int i = 0; i < k; ++i) m0[i] = z[i] + sg * u[i];
      hits[3] = dot(m0, w_g) / (1.0 + sg * sg) > thr_g;
      std::vector<double> z1 = rng.normal_vec(k), u1 = rng.normal_vec(k);
      std::vector<double> m1(k);
      for (int i = 0; i < k; ++i) m1[i] = g_eta[i] + z1[i] + sg * u1[i];
      hits[6] = dot(m1, w_g) / (1.0 + sg * sg) > thr_g;
    }
    // level and power of R_fg and R_f
    for (int which = 0; which < 2; ++which) {
      double s = which ? sf : sfg;
      const std::vector<double>& v = which ? v_f : v_fg;
      double thr = which ? thr_f : thr_fg;
      std::vector<double> z = rng.normal_vec(k), u = rng.normal_vec(k);
      std::vector<double> m0 = mat_vec(an, z);
      for (int i = 0; i < k; ++i) m0[i] += s * u[i];
      hits[4 + which] = dot(m0, v) > thr;
      std::vector<double> z1 = rng.normal_vec(k), u1 = rng.normal_vec(k);
      std::vector<double> m1 = mat_vec(an, z1);
      for (int i = 0; i < k; ++i) m1[i] += plan.eta[i] + s * u1[i];
      hits[7 + which] = dot(m1, v) > thr;
    }
    // naive and super-naive analyses of the H_f mechanism's output
    {
      std::vector<double> z = rng.normal_vec(k), u = rng.normal_vec(k);
      std::vector<double> m0 = mat_vec(an, z);
      for (int i = 0; i < k; ++i) m0[i] += sf * u[i];
      double t0 = dot(m0, v_n);
      hits[9] = t0 > thr_naive;
      hits[11] = t0 > thr_sn;
      std::vector<double> z1 = rng.normal_vec(k), u1 = rng.normal_vec(k);
      std::vector<double> m1 = mat_vec(an, z1);
      for (int i = 0; i < k; ++i) m1[i] += plan.eta[i] + sf * u1[i];
      hits[10] = dot(m1, v_n) > thr_naive;
    }
    // privacy sets: displacement of a random neighbor pair
    for (int which = 0; which < 2; ++which) {
      std::vector<double> z1 = rng.normal_vec(k), z2 = rng.normal_vec(k);
      for (int i = 0; i < k; ++i) z1[i] -= z2[i];
      std::vector<double> fdiff = mat_vec(b, z1);
      for (int i = 0; i < k; ++i) fdiff[i] /= plan.n;
      if (which == 0) {
        std::vector<double> gdiff = mat_vec(wn, fdiff);
        hits[12] = dot(gdiff, gdiff) <= radii.d_g * radii.d_g;
      } else {
        hits[13] = dot(fdiff, fdiff) <= radii.d_f * radii.d_f;
      }
    }
  };

  std::vector<long> counts = parallel_counts(plan, 14, kernel);
  double cov = chi_sq_cdf(k, t);
  long n = plan.replications;

  SimReport report;
  report.plan = plan;
  report.estimands = {
      make_estimand("coverage_g", counts[0], n, cov),
      make_estimand("coverage_fg", counts[1], n, cov),
      make_estimand("coverage_f", counts[2], n, cov),
      make_estimand("level_g", counts[3], n, plan.alpha),
      make_estimand("level_fg", counts[4], n, plan.alpha),
      make_estimand("level_f", counts[5], n, plan.alpha),
      make_estimand("power_g", counts[6], n, analytic.pi_g),
      make_estimand("power_fg", counts[7], n, analytic.pi_fg),
      make_estimand("power_f", counts[8], n, analytic.pi_f),
      make_estimand("level_naive", counts[9], n, plan.alpha),
      make_estimand("power_naive", counts[10], n, analytic.pi_naive),
      make_estimand("level_super_naive", counts[11], n,
                    analytic.level_super_naive),
      make_estimand("privacy_set_g", counts[12], n, 1.0 - plan.gamma),
      make_estimand("privacy_set_f", counts[13], n, 1.0 - plan.gamma),
  };
  return report;
}

}  // namespace

SimReport run_plan(const SimPlan& plan) {
  if (plan.replications < 1)
    throw std::invalid_argument("replications must be >= 1");
  return plan.scenario == Scenario::fixed_data ? run_fixed(plan)
                                               : run_random(plan);
}

}  // namespace dpqt
