#pragma once

#include <functional>
#include <vector>

// Scalar distribution functions and root finding used throughout the
// toolkit: standard normal, chi-square, and weighted chi-square
// (linear combinations of independent chi-square(1) variables).

namespace dpqt {

/// Standard normal CDF Phi(x). Absolute error below 1e-14.
double normal_cdf(double x);

/// Inverse of normal_cdf on (0, 1).
double normal_quantile(double p);

/// Chi-square CDF with k degrees of freedom, x >= 0.
double chi_sq_cdf(int k, double x);

/// Inverse of chi_sq_cdf in x for fixed k, p in (0, 1).
double chi_sq_quantile(int k, double p);

/// CDF of sum_i w_i X_i with X_i iid chi-square(1) and all w_i > 0,
/// computed by numerical inversion of the characteristic function
/// (Imhof quadrature). Absolute error below 1e-6.
double weighted_chi_sq_cdf(const std::vector<double>& weights, double x);

/// Inverse of weighted_chi_sq_cdf in x, p in (0, 1).
double weighted_chi_sq_quantile(const std::vector<double>& weights, double p);

/// Guarded bisection for a monotone function with a sign change on
/// [lo, hi]. Throws std::invalid_argument if fn(lo) and fn(hi) do not
/// bracket a root. At most 200 iterations.
double bisect(const std::function<double(double)>& fn, double lo, double hi,
              double tol);

}  // namespace dpqt
