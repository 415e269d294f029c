#pragma once

#include <vector>

// Dense symmetric-matrix utilities for the small covariance problems
// handled here (k up to a few hundred): Jacobi eigendecomposition,
// matrix power functions, determinants, quadratic forms.

namespace dpqt {

struct SymMatrix {
  int dim = 0;
  std::vector<double> a;  // row-major, dim*dim, symmetric as stored

  SymMatrix() = default;
  explicit SymMatrix(int k) : dim(k), a(static_cast<size_t>(k) * k, 0.0) {}

  double& at(int i, int j) { return a[static_cast<size_t>(i) * dim + j]; }
  double at(int i, int j) const { return a[static_cast<size_t>(i) * dim + j]; }

  static SymMatrix identity(int k);
  static SymMatrix diagonal(const std::vector<double>& d);

  SymMatrix scaled(double c) const;
};

struct EigenDecomposition {
  std::vector<double> values;        // descending
  std::vector<double> vectors;       // row-major, column j = eigenvector j
  int dim = 0;

  double vec(int i, int j) const {
    return vectors[static_cast<size_t>(i) * dim + j];
  }
};

/// Cyclic Jacobi eigendecomposition. Deterministic sweep order; throws
/// std::invalid_argument on non-symmetric or non-finite input.
EigenDecomposition sym_eigen(const SymMatrix& m);

/// m^e for e in {-1, -1/2, 1/2}. Requires positive definite input
/// (eigenvalues above 1e-12 * lambda_max), else std::domain_error.
SymMatrix sym_power(const SymMatrix& m, double exponent);

/// log det of a positive definite matrix (sum of log eigenvalues).
double log_det(const SymMatrix& m);

/// v^T m v.
double quad_form(const SymMatrix& m, const std::vector<double>& v);

/// m v.
std::vector<double> mat_vec(const SymMatrix& m, const std::vector<double>& v);

}  // namespace dpqt
