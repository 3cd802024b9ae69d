#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "matconvex/double_double.hpp"

namespace matconvex {

/// Small dense row-major square matrix over an arbitrary scalar (double or DoubleDouble).
template <class T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n) : n_(n), data_(n * n, T(0.0)) {}

  std::size_t size() const { return n_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  SquareMatrix leading_block(std::size_t r) const {
    SquareMatrix out(r);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) out(i, j) = (*this)(i, j);
    return out;
  }

  Eigen::MatrixXd to_eigen() const {
    Eigen::MatrixXd m(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) m(i, j) = to_double((*this)(i, j));
    return m;
  }

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

template <class T>
struct DeterminantResult {
  T value{0.0};
  /// A pivot fell below the rounding-noise level of the working precision; value is set to 0.
  bool numerically_singular = false;
};

/// Determinant by LU with partial pivoting on a copy.
template <class T>
DeterminantResult<T> determinant(SquareMatrix<T> a) {
  using std::fabs;
  const std::size_t n = a.size();
  DeterminantResult<T> out;
  if (n == 0) {
    out.value = T(1.0);
    return out;
  }
  double max_entry = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) max_entry = std::max(max_entry, std::fabs(to_double(a(i, j))));
  const double noise = 256.0 * static_cast<double>(n) * ScalarTraits<T>::unit_roundoff * max_entry;

  T det(1.0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::fabs(to_double(a(k, k)));
    for (std::size_t i = k + 1; i < n; ++i) {
      double v = std::fabs(to_double(a(i, k)));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best <= noise) {
      out.value = T(0.0);
      out.numerically_singular = true;
      return out;
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      det = -det;
    }
    det = det * a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      T factor = a(i, k) / a(k, k);
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) = a(i, j) - factor * a(k, j);
    }
  }
  out.value = det;
  return out;
}

/// Product of row norms, an upper bound for |det A|.
template <class T>
double hadamard_bound(const SquareMatrix<T>& a) {
  double prod = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += std::pow(to_double(a(i, j)), 2);
    prod *= std::sqrt(s);
  }
  return prod;
}

inline double determinant_of(const Eigen::MatrixXd& m) {
  SquareMatrix<double> a(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) a(i, j) = m(i, j);
  return determinant(a).value;
}

enum class Definiteness { positive_definite, positive_semidefinite, indefinite, indeterminate };

inline std::string_view definiteness_name(Definiteness d) {
  switch (d) {
    case Definiteness::positive_definite: return "positive_definite";
    case Definiteness::positive_semidefinite: return "positive_semidefinite";
    case Definiteness::indefinite: return "indefinite";
    case Definiteness::indeterminate: return "indeterminate";
  }
  return "unknown";
}

inline bool is_psd(Definiteness d) {
  return d == Definiteness::positive_definite || d == Definiteness::positive_semidefinite;
}

inline constexpr double kDefaultTolerance = 1e-9;

/// Symmetric matrix with its spectrum and a tolerance-qualified definiteness verdict.
struct SymmetricMatrixReport {
  Eigen::MatrixXd matrix;
  std::vector<double> eigenvalues;  // ascending
  double min_eigenvalue = 0.0;
  double frobenius_norm = 0.0;
  Definiteness verdict = Definiteness::indeterminate;
  double tolerance = kDefaultTolerance;

  /// Absolute threshold tolerance * max(1, ||A||_F) used for the verdict.
  double threshold() const { return tolerance * std::max(1.0, frobenius_norm); }
};

inline void require_symmetric(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix is not square");
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m.cols(); ++j)
      if (m(i, j) != m(j, i)) throw std::invalid_argument("matrix is not symmetric");
}

inline std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("symmetric eigensolver did not converge");
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

/// Verdict rule with tau = tolerance * max(1, ||A||_F): positive definite if
/// lambda_min > tau; positive semidefinite if lambda_min >= -tau; indefinite otherwise.
/// In strict mode |lambda_min| <= tau is reported as indeterminate.
inline Definiteness classify_spectrum(double min_eigenvalue, double frobenius_norm, double tolerance,
                                      bool strict = false) {
  const double tau = tolerance * std::max(1.0, frobenius_norm);
  if (min_eigenvalue > tau) return Definiteness::positive_definite;
  if (min_eigenvalue >= -tau) return strict ? Definiteness::indeterminate : Definiteness::positive_semidefinite;
  return Definiteness::indefinite;
}

inline SymmetricMatrixReport analyze_symmetric(Eigen::MatrixXd m, double tolerance = kDefaultTolerance,
                                               bool strict = false) {
  require_symmetric(m);
  SymmetricMatrixReport r;
  r.eigenvalues = symmetric_eigenvalues(m);
  r.min_eigenvalue = r.eigenvalues.empty() ? 0.0 : r.eigenvalues.front();
  r.frobenius_norm = m.norm();
  r.tolerance = tolerance;
  r.verdict = classify_spectrum(r.min_eigenvalue, r.frobenius_norm, tolerance, strict);
  r.matrix = std::move(m);
  return r;
}

inline Definiteness psd_verdict(const Eigen::MatrixXd& m, double tolerance = kDefaultTolerance, bool strict = false) {
  return analyze_symmetric(m, tolerance, strict).verdict;
}

}  // namespace matconvex
