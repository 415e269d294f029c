#include "dpqt/fixtures.hpp"

#include <stdexcept>

namespace dpqt::fixtures {

const std::vector<std::string>& blood6_names() {
  static const std::vector<std::string> names = {
      "Cholesterol", "HDL", "ApoA1", "LDL", "TotalLipid", "Glucose"};
  return names;
}

const SymMatrix& blood6_sigma() {
  static const SymMatrix sigma = [] {
    // Upper triangle as published; mirrored below and checked PD.
    const double upper[6][6] = {
        {1600, -160, -400, 840, 800, -40},
        {0, 400, 160, -175, -200, 0},
        {0, 0, 1600, 280, 600, 0},
        {0, 0, 0, 1225, 700, -35},
        {0, 0, 0, 0, 2500, -50},
        {0, 0, 0, 0, 0, 100}};
    SymMatrix m(6);
    for (int i = 0; i < 6; ++i) {
      for (int j = i; j < 6; ++j) {
        m.at(i, j) = upper[i][j];
        m.at(j, i) = upper[i][j];
      }
    }
    EigenDecomposition ed = sym_eigen(m);
    if (!(ed.values.back() > 0.0))
      throw std::logic_error("blood6 covariance must be positive definite");
    return m;
  }();
  return sigma;
}

const std::vector<StudyConfig>& blood6_examples() {
  static const std::vector<StudyConfig> configs = {
      {1, {10, 5, 10, 8.75, 12.5, 2.5}, 50, 0.02, 1e-4},
      {2, {10, 5, 10, 8.75, 12.5, 2.5}, 50, 0.0004, 1e-6},
      {3, {0, 0, 20, 0, 25, 5}, 50, 0.0004, 1e-6},
      {4, {0, 0, 20, 0, 25, 5}, 100, 0.0001, 1e-6}};
  return configs;
}

}  // namespace dpqt::fixtures
