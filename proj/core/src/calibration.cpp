#include "dpqt/calibration.hpp"

#include <cmath>
#include <stdexcept>

#include "dpqt/stats.hpp"

namespace dpqt {
namespace {

void validate(const PrivacyLevel& level) {
  if (!(level.epsilon > 0.0))
    throw std::invalid_argument("epsilon must be > 0");
  if (!(level.delta > 0.0 && level.delta < 1.0))
    throw std::invalid_argument("delta must be in (0, 1)");
}

// Slack as a function of the ratio rho = D / sigma; strictly increasing
// in rho.
double slack_of_ratio(double epsilon, double rho) {
  return normal_cdf(0.5 * rho - epsilon / rho) -
         std::exp(epsilon) * normal_cdf(-0.5 * rho - epsilon / rho);
}

}  // namespace

double dp_slack(const PrivacyLevel& level, double sensitivity, double sigma) {
  validate(level);
  if (!(sensitivity > 0.0))
    throw std::invalid_argument("dp_slack: zero sensitivity");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
  return slack_of_ratio(level.epsilon, sensitivity / sigma);
}

double delta_of(double epsilon, double sensitivity, double sigma) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (!(sensitivity > 0.0))
    throw std::invalid_argument("delta_of: zero sensitivity");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
  return slack_of_ratio(epsilon, sensitivity / sigma);
}

double classical_sigma(const PrivacyLevel& level, double sensitivity) {
  validate(level);
  return std::sqrt(2.0 * std::log(1.25 / level.delta)) * sensitivity /
         level.epsilon;
}

double min_sigma(const PrivacyLevel& level, double sensitivity) {
  validate(level);
  if (!(sensitivity > 0.0))
    throw std::invalid_argument("min_sigma: zero sensitivity");

  // Solve for the ratio rho = D / sigma so the result scales exactly
  // with the sensitivity. Small rho means large sigma and small slack.
  double eps = level.epsilon;
  double lo = 1e-8, hi = 1.0;
  while (slack_of_ratio(eps, lo) > level.delta) lo *= 0.5;
  while (slack_of_ratio(eps, hi) < level.delta) hi *= 2.0;
  // Bisect to near machine precision; these calls are not hot.
  for (int i = 0; i < 200 && (hi - lo) > 1e-16 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    if (slack_of_ratio(eps, mid) < level.delta)
      lo = mid;
    else
      hi = mid;
  }
  double rho = 0.5 * (lo + hi);
  return sensitivity / rho;
}

}  // namespace dpqt
