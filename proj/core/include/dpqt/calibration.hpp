#pragma once

// Gaussian mechanism calibration: the analytic (epsilon, delta)
// condition and the minimal noise scale meeting it for a given L2
// sensitivity.

namespace dpqt {

struct PrivacyLevel {
  double epsilon;  // > 0
  double delta;    // in (0, 1)
};

/// Left-hand side of the analytic Gaussian condition
///   Phi(D/2s - eps*s/D) - e^eps * Phi(-D/2s - eps*s/D),
/// which depends on (D, sigma) only through D/sigma. The mechanism is
/// (eps, delta)-DP iff this value is <= delta.
double dp_slack(const PrivacyLevel& level, double sensitivity, double sigma);

/// Smallest delta for which (epsilon, delta)-DP holds at this sigma.
double delta_of(double epsilon, double sensitivity, double sigma);

/// Minimal sigma with dp_slack == delta. Exactly homogeneous in the
/// sensitivity: min_sigma(eps, delta, c*D) == c * min_sigma(eps, delta, D).
/// Rejects zero sensitivity.
double min_sigma(const PrivacyLevel& level, double sensitivity);

/// Classical sufficient calibration sqrt(2 ln(1.25/delta)) * D / eps,
/// valid for eps <= 1; used as a bracketing aid and cross-check.
double classical_sigma(const PrivacyLevel& level, double sensitivity);

}  // namespace dpqt
