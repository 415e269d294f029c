#include "dpqt/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dpqt {
namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244008443621048490;

// Regularized lower incomplete gamma P(a, x) via series (x < a+1) or
// continued fraction (x >= a+1). Standard Numerical-Recipes-style split.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_contfrac(a, x);
}

struct ImhofIntegrand {
  const std::vector<double>& w;
  double x;

  // theta(u) = 0.5 * sum atan(w_i u) - 0.5 * x u
  // rho(u)   = prod (1 + w_i^2 u^2)^{1/4}
  double operator()(double u) const {
    if (u == 0.0) {
      double s = 0.0;
      for (double wi : w) s += wi;
      return 0.5 * (s - x);
    }
    double theta = -0.5 * x * u;
    double log_rho = 0.0;
    for (double wi : w) {
      double wu = wi * u;
      theta += 0.5 * std::atan(wu);
      log_rho += 0.25 * std::log1p(wu * wu);
    }
    return std::sin(theta) / (u * std::exp(log_rho));
  }
};

// Composite Simpson on [0, upper] with n panels (n even).
double simpson(const ImhofIntegrand& f, double upper, int n) {
  double h = upper / n;
  double acc = f(0.0) + f(upper);
  for (int i = 1; i < n; ++i) acc += f(i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

void check_weights(const std::vector<double>& w) {
  if (w.empty()) throw std::invalid_argument("weight vector must be non-empty");
  for (double wi : w) {
    if (!(wi > 0.0))
      throw std::invalid_argument("weights must all be positive");
  }
}

}  // namespace

double normal_cdf(double x) {
  if (!std::isfinite(x))
    throw std::invalid_argument("normal_cdf: non-finite input");
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("normal_quantile: p must be in (0,1)");
  // Guarded bisection on the CDF; bracket grows until it straddles p.
  double lo = -1.0, hi = 1.0;
  while (normal_cdf(lo) > p) lo *= 2.0;
  while (normal_cdf(hi) < p) hi *= 2.0;
  return bisect([p](double x) { return normal_cdf(x) - p; }, lo, hi, 1e-13);
}

double chi_sq_cdf(int k, double x) {
  if (k < 1) throw std::invalid_argument("chi_sq_cdf: k must be >= 1");
  if (x < 0.0) throw std::invalid_argument("chi_sq_cdf: x must be >= 0");
  return gamma_p(0.5 * k, 0.5 * x);
}

double chi_sq_quantile(int k, double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("chi_sq_quantile: p must be in (0,1)");
  double hi = 2.0 * k;
  while (chi_sq_cdf(k, hi) < p) hi *= 2.0;
  return bisect([k, p](double x) { return chi_sq_cdf(k, x) - p; }, 0.0, hi,
                1e-10);
}

double weighted_chi_sq_cdf(const std::vector<double>& weights, double x) {
  check_weights(weights);
  if (x < 0.0)
    throw std::invalid_argument("weighted_chi_sq_cdf: x must be >= 0");
  if (x == 0.0) return 0.0;

  // The distribution is scale-equivariant; normalize to mean weight 1 so
  // the quadrature grid works at a fixed scale.
  double scale = 0.0;
  for (double wi : weights) scale += wi;
  scale /= weights.size();
  std::vector<double> w(weights);
  for (double& wi : w) wi /= scale;
  x /= scale;

  // Equal weights reduce to a plain chi-square; this also covers k = 1,
  // where the Imhof integrand decays too slowly for the grid below.
  bool equal = true;
  for (double wi : w)
    if (std::fabs(wi - 1.0) > 1e-14) equal = false;
  if (equal) return chi_sq_cdf(static_cast<int>(w.size()), x);

  ImhofIntegrand f{w, x};

  // Truncation point: past U the integrand is an oscillation with
  // frequency x/2 under a u^{-(1+k/2)} envelope, so the tail integral is
  // bounded by (4/x) * U^{-(1+k/2)} / prod w_i^{1/2} (integration by
  // parts over whole periods).
  const double k_half = 0.5 * w.size();
  double log_prod_sqrt_w = 0.0;
  for (double wi : w) log_prod_sqrt_w += 0.5 * std::log(wi);
  const double tol = 1e-8;
  double log_u =
      (std::log(4.0 / (M_PI * tol * x)) - log_prod_sqrt_w) / (1.0 + k_half);
  double upper = std::exp(std::min(log_u, 25.0));
  upper = std::max(upper, 1.0);

  // Refine until two successive grids agree to 1e-7.
  int n = 256;
  double prev = simpson(f, upper, n);
  for (int iter = 0; iter < 12; ++iter) {
    n *= 2;
    double cur = simpson(f, upper, n);
    if (std::fabs(cur - prev) < 1e-7 && iter >= 1) {
      prev = cur;
      break;
    }
    prev = cur;
  }
  double p = 0.5 - prev / M_PI;
  if (p < 0.0) p = 0.0;
  if (p > 1.0) p = 1.0;
  return p;
}

double weighted_chi_sq_quantile(const std::vector<double>& weights, double p) {
  check_weights(weights);
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument(
        "weighted_chi_sq_quantile: p must be in (0,1)");
  // Equal weights: the quantile is exactly the scaled chi-square one,
  // and computing it that way keeps degenerate spectra (e.g. isotropic
  // covariances) bit-consistent with the plain chi-square path.
  double mean = 0.0;
  for (double wi : weights) mean += wi;
  mean /= weights.size();
  bool equal = true;
  for (double wi : weights)
    if (std::fabs(wi / mean - 1.0) > 1e-14) equal = false;
  if (equal)
    return mean * chi_sq_quantile(static_cast<int>(weights.size()), p);

  double hi = 2.0 * mean * weights.size();
  while (weighted_chi_sq_cdf(weights, hi) < p) hi *= 2.0;
  return bisect(
      [&weights, p](double x) { return weighted_chi_sq_cdf(weights, x) - p; },
      0.0, hi, 1e-8);
}

double bisect(const std::function<double(double)>& fn, double lo, double hi,
              double tol) {
  if (!(lo < hi)) throw std::invalid_argument("bisect: need lo < hi");
  double flo = fn(lo);
  double fhi = fn(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw std::invalid_argument("bisect: no sign change on [lo, hi]");
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = fn(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace dpqt
