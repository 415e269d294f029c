#include "dpqt/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dpqt {

SymMatrix SymMatrix::identity(int k) {
  SymMatrix m(k);
  for (int i = 0; i < k; ++i) m.at(i, i) = 1.0;
  return m;
}

SymMatrix SymMatrix::diagonal(const std::vector<double>& d) {
  SymMatrix m(static_cast<int>(d.size()));
  for (int i = 0; i < m.dim; ++i) m.at(i, i) = d[i];
  return m;
}

SymMatrix SymMatrix::scaled(double c) const {
  SymMatrix m(*this);
  for (double& x : m.a) x *= c;
  return m;
}

namespace {

double frobenius(const SymMatrix& m) {
  double s = 0.0;
  for (double x : m.a) s += x * x;
  return std::sqrt(s);
}

double off_diag_norm(const SymMatrix& m) {
  double s = 0.0;
  for (int i = 0; i < m.dim; ++i)
    for (int j = i + 1; j < m.dim; ++j) s += 2.0 * m.at(i, j) * m.at(i, j);
  return std::sqrt(s);
}

void validate_symmetric(const SymMatrix& m) {
  if (m.dim < 1 || m.a.size() != static_cast<size_t>(m.dim) * m.dim)
    throw std::invalid_argument("matrix dimensions inconsistent");
  for (double x : m.a)
    if (!std::isfinite(x))
      throw std::invalid_argument("matrix entries must be finite");
  for (int i = 0; i < m.dim; ++i)
    for (int j = i + 1; j < m.dim; ++j)
      if (m.at(i, j) != m.at(j, i))
        throw std::invalid_argument("matrix is not symmetric");
}

// Apply m^e through the eigendecomposition; e arbitrary but callers
// restrict to {-1, -1/2, 1/2}.
SymMatrix from_eigen(const EigenDecomposition& ed,
                     const std::vector<double>& new_values) {
  int k = ed.dim;
  SymMatrix out(k);
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) {
      double s = 0.0;
      for (int l = 0; l < k; ++l)
        s += ed.vec(i, l) * new_values[l] * ed.vec(j, l);
      out.at(i, j) = s;
      out.at(j, i) = s;
    }
  }
  return out;
}

void require_pd(const EigenDecomposition& ed) {
  double lmax = ed.values.front();
  if (!(lmax > 0.0) || ed.values.back() <= 1e-12 * lmax)
    throw std::domain_error("matrix is not positive definite");
}

}  // namespace

EigenDecomposition sym_eigen(const SymMatrix& m) {
  validate_symmetric(m);
  int k = m.dim;
  SymMatrix a(m);
  std::vector<double> v(static_cast<size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) v[static_cast<size_t>(i) * k + i] = 1.0;

  const double tol = 1e-12 * std::max(frobenius(m), 1e-300);
  for (int sweep = 0; sweep < 100 && off_diag_norm(a) > tol; ++sweep) {
    for (int p = 0; p < k - 1; ++p) {
      for (int q = p + 1; q < k; ++q) {
        double apq = a.at(p, q);
        if (apq == 0.0) continue;
        double app = a.at(p, p), aqq = a.at(q, q);
        double theta = (aqq - app) / (2.0 * apq);
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;

        for (int i = 0; i < k; ++i) {
          double aip = a.at(i, p), aiq = a.at(i, q);
          a.at(i, p) = c * aip - s * aiq;
          a.at(i, q) = s * aip + c * aiq;
        }
        for (int j = 0; j < k; ++j) {
          double apj = a.at(p, j), aqj = a.at(q, j);
          a.at(p, j) = c * apj - s * aqj;
          a.at(q, j) = s * apj + c * aqj;
        }
        for (int i = 0; i < k; ++i) {
          double vip = v[static_cast<size_t>(i) * k + p];
          double viq = v[static_cast<size_t>(i) * k + q];
          v[static_cast<size_t>(i) * k + p] = c * vip - s * viq;
          v[static_cast<size_t>(i) * k + q] = s * vip + c * viq;
        }
      }
    }
  }

  // Sort descending, carrying columns along.
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&a](int i, int j) { return a.at(i, i) > a.at(j, j); });

  EigenDecomposition ed;
  ed.dim = k;
  ed.values.resize(k);
  ed.vectors.resize(static_cast<size_t>(k) * k);
  for (int j = 0; j < k; ++j) {
    ed.values[j] = a.at(order[j], order[j]);
    for (int i = 0; i < k; ++i)
      ed.vectors[static_cast<size_t>(i) * k + j] =
          v[static_cast<size_t>(i) * k + order[j]];
  }
  return ed;
}

SymMatrix sym_power(const SymMatrix& m, double exponent) {
  EigenDecomposition ed = sym_eigen(m);
  require_pd(ed);
  std::vector<double> powered(ed.values.size());
  for (size_t i = 0; i < ed.values.size(); ++i)
    powered[i] = std::pow(ed.values[i], exponent);
  return from_eigen(ed, powered);
}

double log_det(const SymMatrix& m) {
  EigenDecomposition ed = sym_eigen(m);
  require_pd(ed);
  double s = 0.0;
  for (double l : ed.values) s += std::log(l);
  return s;
}

double quad_form(const SymMatrix& m, const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != m.dim)
    throw std::invalid_argument("quad_form: dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < m.dim; ++i)
    for (int j = 0; j < m.dim; ++j) s += v[i] * m.at(i, j) * v[j];
  return s;
}

std::vector<double> mat_vec(const SymMatrix& m, const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != m.dim)
    throw std::invalid_argument("mat_vec: dimension mismatch");
  std::vector<double> out(m.dim, 0.0);
  for (int i = 0; i < m.dim; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.dim; ++j) s += m.at(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

}  // namespace dpqt
