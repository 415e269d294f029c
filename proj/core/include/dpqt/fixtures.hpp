#pragma once

#include <string>
#include <vector>

#include "dpqt/matrix.hpp"

// Bundled blood-test example: a 6x6 covariance matrix over common
// blood-panel measurements (all in MG/DL) and the four study
// configurations used by the power comparison.

namespace dpqt::fixtures {

/// Variable names, in the order of the covariance rows.
const std::vector<std::string>& blood6_names();

/// The 6x6 covariance matrix; symmetry and positive definiteness are
/// asserted at load time.
const SymMatrix& blood6_sigma();

struct StudyConfig {
  int id;
  std::vector<double> eta;
  int n;
  double delta;
  double gamma;
};

/// The four (eta, n, delta, gamma) configurations of the numerical study.
const std::vector<StudyConfig>& blood6_examples();

}  // namespace dpqt::fixtures
