#pragma once

#include <array>
#include <vector>

#include "dpqt/calibration.hpp"
#include "dpqt/matrix.hpp"

// Random-data planning: privacy sets for normally generated datasets,
// the sensitivity radii and noise scales of the three mechanisms
// (whitened query on H_g, raw query on H_g, raw query on H_f), analytic
// confidence-region volumes and likelihood-ratio test powers, and the
// naive / super-naive analyses.

namespace dpqt {

struct RdpLevel {
  double epsilon;
  double delta;
  double gamma;  // privacy-set exception probability, in (0, 1)
};

struct CovarianceModel {
  SymMatrix sigma;        // population covariance, positive definite
  int n;                  // sample size
  SymMatrix sigma_n;      // sigma / n
  EigenDecomposition eigen;  // of sigma_n, descending

  static CovarianceModel make(const SymMatrix& sigma, int n);
};

enum class QueryKind { whitened, raw };
enum class PrivacySetKind { hg, hf };

struct MechanismSpec {
  QueryKind query;
  PrivacySetKind privacy_set;
  double sensitivity;  // D(g), D(fg), or D(f)
  double sigma;        // calibrated noise scale
};

struct MechanismSuite {
  MechanismSpec g;   // whitened query, privacy set H_g
  MechanismSpec fg;  // raw query, privacy set H_g
  MechanismSpec f;   // raw query, privacy set H_f
};

struct PrivacyRadii {
  double d_g;   // sqrt(2) r / sqrt(n), P(chi^2_k <= r^2) = 1 - gamma
  double d_fg;  // sqrt(lambda_max(Sigma_n)) * d_g
  double d_f;   // C with P((2/n) sum lambda_i X_i <= C^2) = 1 - gamma
};

PrivacyRadii privacy_radii(const CovarianceModel& model, const RdpLevel& level);

MechanismSuite mechanism_suite(const CovarianceModel& model,
                               const RdpLevel& level);

struct VolumeTriple {
  double vol_g;
  double vol_fg;
  double vol_f;
};

/// Confidence-region volumes at threshold t:
/// Vol_g = b_k sqrt(det(Sigma_n (1+sigma_g^2))),
/// Vol_fg = b_k sqrt(det(Sigma_n + sigma_fg^2 I)), Vol_f analogous,
/// with b_k = t^{k/2} V_k.
VolumeTriple cr_volumes(const CovarianceModel& model,
                        const MechanismSuite& suite, double t);

struct PowerSummary {
  double pi_g;
  double pi_fg;
  double pi_f;
  double pi_naive;
  double pi_super_naive;
  double level_super_naive;  // true level of the super-naive test
};

/// Analytic powers of the level-alpha likelihood-ratio tests for the
/// three mechanisms, plus the naive and super-naive analyses (both
/// applied to the H_f mechanism's output).
PowerSummary power_suite(const CovarianceModel& model,
                         const MechanismSuite& suite,
                         const std::vector<double>& eta, double alpha);

struct TestStatistic {
  double statistic;
  double threshold;
};

/// Likelihood-ratio statistic and critical value for one mechanism's
/// observed output. For the whitened mechanism the output is in
/// whitened coordinates.
TestStatistic rejection_region_stat(const std::vector<double>& output,
                                    const CovarianceModel& model,
                                    const MechanismSpec& spec,
                                    const std::vector<double>& eta,
                                    double alpha);

/// Largest gamma for which the Vol_g <= Vol_f ordering is guaranteed by
/// the weighted chi-square CDF domination (tabulated thresholds for
/// k in {6, 10, 20, 30}; 1 - chi_sq_cdf(k, 2k) otherwise, after a
/// numeric check of the domination at x = 2k for the given weights).
double vol_ordering_gamma_threshold(const CovarianceModel& model);

}  // namespace dpqt
