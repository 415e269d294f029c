#include "dpqt/fixed_query.hpp"

#include <cmath>
#include <stdexcept>

#include "dpqt/stats.hpp"

namespace dpqt {
namespace {

void check_psi(const std::vector<double>& psi) {
  if (psi.empty()) throw std::invalid_argument("psi must be non-empty");
  for (double p : psi)
    if (p * p <= 0.0)
      throw std::invalid_argument("all psi_i^2 must be positive");
}

}  // namespace

std::vector<double> sensitivity_psi(const BoxUniverse& universe) {
  if (universe.n < 1) throw std::invalid_argument("sample size must be >= 1");
  if (universe.bounds.empty())
    throw std::invalid_argument("universe needs at least one coordinate");
  std::vector<double> psi;
  psi.reserve(universe.bounds.size());
  for (auto [a, b] : universe.bounds) {
    if (!(b > a))
      throw std::invalid_argument(
          "degenerate bound: zero-sensitivity coordinate");
    psi.push_back((b - a) / universe.n);
  }
  return psi;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double lambda_xi(const std::vector<double>& xi, const std::vector<double>& psi,
                 double sigma) {
  if (xi.size() != psi.size())
    throw std::invalid_argument("lambda_xi: dimension mismatch");
  double s = 0.0;
  for (size_t i = 0; i < psi.size(); ++i) s += xi[i] * psi[i] * psi[i];
  return std::sqrt(s) / sigma;
}

std::vector<double> xi_star_cr(const std::vector<double>& psi) {
  check_psi(psi);
  double n2 = 0.0;
  for (double p : psi) n2 += p * p;
  double c = n2 / psi.size();
  std::vector<double> xi(psi.size());
  for (size_t i = 0; i < psi.size(); ++i) xi[i] = c / (psi[i] * psi[i]);
  return xi;
}

std::vector<double> xi_star_test(const std::vector<double>& psi,
                                 const std::vector<double>& eta) {
  check_psi(psi);
  if (eta.size() != psi.size())
    throw std::invalid_argument("xi_star_test: dimension mismatch");
  bool all_zero = true;
  for (double e : eta)
    if (e != 0.0) all_zero = false;
  if (all_zero)
    throw std::invalid_argument("xi_star_test: eta must be nonzero");

  size_t j = 0;
  double best = -1.0;
  for (size_t i = 0; i < psi.size(); ++i) {
    double ratio = eta[i] * eta[i] / (psi[i] * psi[i]);
    if (ratio > best) {  // ties keep the lowest index
      best = ratio;
      j = i;
    }
  }
  double n2 = 0.0;
  for (double p : psi) n2 += p * p;
  std::vector<double> xi(psi.size(), 0.0);
  xi[j] = n2 / (psi[j] * psi[j]);
  return xi;
}

double unit_ball_volume(int k) {
  return std::pow(M_PI, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

double cr_volume(const std::vector<double>& xi, double sigma, double t,
                 int k) {
  if (static_cast<int>(xi.size()) != k)
    throw std::invalid_argument("cr_volume: dimension mismatch");
  if (!(t > 0.0)) throw std::invalid_argument("cr_volume: t must be > 0");
  double log_det_xi = 0.0;
  for (double x : xi) {
    if (!(x > 1e-12))
      throw std::invalid_argument("cr_volume: xi entries must be positive");
    log_det_xi += std::log(x);
  }
  return unit_ball_volume(k) * std::pow(sigma * sigma * t, 0.5 * k) *
         std::exp(-0.5 * log_det_xi);
}

double volume_ratio(const std::vector<double>& psi) {
  check_psi(psi);
  size_t k = psi.size();
  double log_gm = 0.0, am = 0.0;
  for (double p : psi) {
    log_gm += std::log(p * p) / k;
    am += p * p / k;
  }
  return std::pow(std::exp(log_gm) / am, 0.5 * k);
}

double test_power_fixed(const std::vector<double>& xi,
                        const std::vector<double>& eta, double sigma,
                        double alpha) {
  if (xi.size() != eta.size())
    throw std::invalid_argument("test_power_fixed: dimension mismatch");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must be in (0, 1)");
  double q = 0.0;
  for (size_t i = 0; i < xi.size(); ++i) q += xi[i] * eta[i] * eta[i];
  return 1.0 - normal_cdf(normal_quantile(1.0 - alpha) - std::sqrt(q) / sigma);
}

bool cr_contains(const std::vector<double>& response,
                 const std::vector<double>& xi, double sigma, double t,
                 const std::vector<double>& mu) {
  size_t k = xi.size();
  if (response.size() != k || mu.size() != k)
    throw std::invalid_argument("cr_contains: dimension mismatch");
  double stat = 0.0;
  for (size_t i = 0; i < k; ++i) {
    if (!(xi[i] > 0.0))
      throw std::invalid_argument("cr_contains: xi entries must be positive");
    double d = response[i] / std::sqrt(xi[i]) - mu[i];
    stat += d * xi[i] * d / (sigma * sigma);
  }
  return stat <= t;
}

}  // namespace dpqt
