#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dpqt/matrix.hpp"
#include "dpqt/rng.hpp"

// Seeded Monte Carlo engine verifying the planners' analytic claims:
// empirical coverage, test level and power, and privacy-set
// probabilities, with binomial standard errors.

namespace dpqt {

enum class Scenario { fixed_data, random_data };

struct SimPlan {
  uint64_t seed = 1;
  long replications = 100000;
  Scenario scenario = Scenario::fixed_data;

  // fixed-data: psi and the noise calibrated for the unscaled query.
  std::vector<double> psi;

  // random-data
  SymMatrix sigma;  // population covariance
  double gamma = 1e-4;

  // shared
  int n = 50;
  std::vector<double> mu;   // true query value / model mean
  std::vector<double> eta;  // simple alternative
  double epsilon = 1.0;
  double delta = 1e-5;
  double alpha = 0.05;
  double t = 0.0;  // confidence threshold; 0 means chi-square 95% default

  int workers = 0;  // 0: DPQT_THREADS env or hardware concurrency
};

struct Estimand {
  std::string name;
  long successes = 0;
  long replications = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  double expected = 0.0;  // analytic reference
  bool pass = false;      // |estimate - expected| <= 3 std errors
};

struct SimReport {
  SimPlan plan;
  std::vector<Estimand> estimands;

  bool all_pass() const;
  const Estimand& find(const std::string& name) const;
};

/// n rows of N(mu, sigma), deterministic in the seed. sqrt_sigma is the
/// symmetric square root of the row covariance.
std::vector<std::vector<double>> draw_normal_rows(uint64_t seed, int n,
                                                  const std::vector<double>& mu,
                                                  const SymMatrix& sqrt_sigma);

/// Neighboring datasets built from n+1 rows: S takes rows 0..n-1, S'
/// replaces the last row with row n.
struct NeighborPair {
  std::vector<std::vector<double>> s;
  std::vector<std::vector<double>> s_prime;
};
NeighborPair neighbor_pair(const std::vector<std::vector<double>>& rows);

SimReport run_plan(const SimPlan& plan);

}  // namespace dpqt
