#pragma once

#include <vector>

// Fixed-dataset planning for coordinate-wise monotone mean queries over
// box universes: worst-case displacement vector psi, optimal diagonal
// query scalings for confidence regions and likelihood-ratio tests, and
// the corresponding volumes and powers.

namespace dpqt {

struct BoxUniverse {
  int n;                                          // sample size, >= 1
  std::vector<std::pair<double, double>> bounds;  // (a_i, b_i), a_i < b_i
};

/// psi_i = (b_i - a_i) / n for the per-coordinate mean query; its L2
/// norm is the query sensitivity over the box universe.
std::vector<double> sensitivity_psi(const BoxUniverse& universe);

double norm2(const std::vector<double>& v);

/// DP level parameter Delta(f_xi)/sigma = sqrt(psi^T Diag(xi) psi) / sigma.
double lambda_xi(const std::vector<double>& xi, const std::vector<double>& psi,
                 double sigma);

/// Volume-minimizing scaling xi* = c * (1/psi_i^2) with c = |psi|^2 / k;
/// preserves psi^T Diag(xi) psi = |psi|^2.
std::vector<double> xi_star_cr(const std::vector<double>& psi);

/// Power-maximizing scaling: one-hot on j* = argmax eta_i^2 / psi_i^2
/// (lowest index on ties), with xi_{j*} = |psi|^2 / psi_{j*}^2.
std::vector<double> xi_star_test(const std::vector<double>& psi,
                                 const std::vector<double>& eta);

/// Ellipsoid volume V_k * (sigma^2 t)^{k/2} * det[Diag(xi)]^{-1/2}.
double cr_volume(const std::vector<double>& xi, double sigma, double t, int k);

/// Vol(CR_{xi*}) / Vol(CR_{xi=1}) = (GM(psi^2) / AM(psi^2))^{k/2}.
double volume_ratio(const std::vector<double>& psi);

/// Power of the level-alpha likelihood-ratio test:
/// 1 - Phi(Phi^{-1}(1-alpha) - sqrt(eta^T Diag(xi) eta) / sigma).
double test_power_fixed(const std::vector<double>& xi,
                        const std::vector<double>& eta, double sigma,
                        double alpha);

/// Membership test for the confidence region CR^t_xi given the raw
/// mechanism response (already scaled by Diag(xi)^{1/2}).
bool cr_contains(const std::vector<double>& response,
                 const std::vector<double>& xi, double sigma, double t,
                 const std::vector<double>& mu);

/// Volume of the k-dimensional unit ball.
double unit_ball_volume(int k);

}  // namespace dpqt
