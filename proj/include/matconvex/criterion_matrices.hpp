#pragma once

// Criterion matrices for matrix monotonicity and convexity:
//   Pick (Loewner) matrix   ([t_i, t_j]_f)
//   Kraus matrix H(s)       ([t_i, s, t_j]_f)
//   leading determinants D_r(s) of H(s)
//   confluent matrices M_r  ([t_1..t_i, s, t_1..t_j]_f) and the factorization
//                           D_r = det M_r * prod_{i<j<=r} (t_j - t_i)^2
//   derivative matrices K_n(f;t) = (f^(i+j)(t)/(i+j)!), M_n(f;t) = (f^(i+j-1)(t)/(i+j-1)!)

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "matconvex/divided_difference.hpp"
#include "matconvex/function_model.hpp"
#include "matconvex/linalg.hpp"

namespace matconvex {

namespace detail {

/// Drops nodes that coalesce with an earlier one, keeping first-occurrence order.
inline std::vector<double> distinct_nodes(std::span<const double> nodes) {
  std::vector<double> out;
  for (double x : nodes) {
    bool dup = std::any_of(out.begin(), out.end(), [&](double y) {
      return std::fabs(x - y) < kMergeThreshold * std::max(1.0, std::fabs(y));
    });
    if (!dup) out.push_back(x);
  }
  return out;
}

template <class T, Differentiable F>
SquareMatrix<T> kraus_entries(const F& f, std::span<const double> nodes, double s, const DividedDifferenceOptions& opt) {
  const std::size_t n = nodes.size();
  SquareMatrix<T> h(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      std::array<double, 3> triple{nodes[i], s, nodes[j]};
      h(i, j) = h(j, i) = divided_difference_as<T>(f, triple, opt);
    }
  }
  return h;
}

}  // namespace detail

// Entries are formed in double-double: at node gaps near min_gap the double recurrence
// would lose most digits to cancellation and blur the definiteness verdict.

/// Pick matrix ([t_i, t_j]_f) over the distinct nodes; the diagonal holds f'(t_i).
template <Differentiable F>
SymmetricMatrixReport pick_matrix(const F& f, std::span<const double> nodes, double tolerance = kDefaultTolerance,
                                  bool strict = false) {
  std::vector<double> t = detail::distinct_nodes(nodes);
  DividedDifferenceOptions opt;
  opt.precision = Precision::extended;
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      m(i, j) = m(j, i) = divided_difference(f, {t[i], t[j]}, opt);
    }
  }
  return analyze_symmetric(std::move(m), tolerance, strict);
}

/// Kraus matrix H(s) = ([t_i, s, t_j]_f) over the distinct nodes.
template <Differentiable F>
SymmetricMatrixReport kraus_matrix(const F& f, std::span<const double> nodes, double s,
                                   double tolerance = kDefaultTolerance, bool strict = false) {
  if (!f.contains(s)) throw DomainError("anchor s=" + format_real(s) + " outside the function's domain");
  std::vector<double> t = detail::distinct_nodes(nodes);
  DividedDifferenceOptions opt;
  opt.precision = Precision::extended;
  auto h = detail::kraus_entries<DoubleDouble>(f, t, s, opt);
  return analyze_symmetric(h.to_eigen(), tolerance, strict);
}

/// D_1(s), ..., D_n(s): leading principal minors of the Kraus matrix in the given node order.
template <Differentiable F>
std::vector<double> leading_determinants(const F& f, std::span<const double> nodes, double s,
                                         Precision precision = Precision::extended) {
  if (!f.contains(s)) throw DomainError("anchor s=" + format_real(s) + " outside the function's domain");
  std::vector<double> out;
  auto run = [&]<class T>(T) {
    DividedDifferenceOptions opt;
    opt.precision = precision;
    auto h = detail::kraus_entries<T>(f, nodes, s, opt);
    for (std::size_t r = 1; r <= nodes.size(); ++r) out.push_back(to_double(determinant(h.leading_block(r)).value));
  };
  if (precision == Precision::extended) {
    run(DoubleDouble{});
  } else {
    run(0.0);
  }
  return out;
}

struct FactorizationRow {
  int r = 0;
  double leading_determinant = 0.0;   ///< D_r(s)
  double confluent_determinant = 0.0; ///< det M_r
  double product_of_squares = 0.0;    ///< prod_{i<j<=r} (t_j - t_i)^2
  double residual = 0.0;              ///< |D_r - det M_r * prod| relative to the larger side
  bool leading_singular = false;
  bool confluent_singular = false;
};

/// Smallest node gap accepted by confluent_factorization_check, relative to max(1, max|t|).
inline constexpr double kMinFactorizationGap = 1e-6;

namespace detail {

template <class T>
double relative_residual(const DeterminantResult<T>& lhs, const T& rhs, bool rhs_singular) {
  using std::fabs;
  if (lhs.numerically_singular && rhs_singular) return 0.0;
  T diff = lhs.value - rhs;
  double scale = std::max(std::fabs(to_double(lhs.value)), std::fabs(to_double(rhs)));
  if (scale == 0.0) return 0.0;
  return std::fabs(to_double(diff)) / scale;
}

template <class T, Differentiable F>
SquareMatrix<T> confluent_matrix(const F& f, std::span<const double> t, double s, std::size_t r,
                                 const DividedDifferenceOptions& opt) {
  SquareMatrix<T> m(r);
  std::vector<double> buf;
  for (std::size_t i = 1; i <= r; ++i) {
    for (std::size_t j = i; j <= r; ++j) {
      buf.assign(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(i));
      buf.push_back(s);
      buf.insert(buf.end(), t.begin(), t.begin() + static_cast<std::ptrdiff_t>(j));
      m(i - 1, j - 1) = m(j - 1, i - 1) = divided_difference_as<T>(f, buf, opt);
    }
  }
  return m;
}

}  // namespace detail

/// Evaluates both sides of D_r(s) = det M_r * prod_{k=1}^{r-1} prod_{l=1}^{r-k} (t_{k+l} - t_l)^2
/// for r = 1..n, each side independently.
template <Differentiable F>
std::vector<FactorizationRow> confluent_factorization_check(const F& f, std::span<const double> nodes, double s,
                                                            Precision precision = Precision::extended) {
  if (!f.contains(s)) throw DomainError("anchor s=" + format_real(s) + " outside the function's domain");
  double scale = 1.0;
  for (double x : nodes) scale = std::max(scale, std::fabs(x));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      if (std::fabs(nodes[i] - nodes[j]) < kMinFactorizationGap * scale) {
        throw std::invalid_argument("factorization check needs distinct nodes with gaps >= 1e-6 * scale");
      }
    }
  }
  std::vector<FactorizationRow> rows;
  auto run = [&]<class T>(T) {
    DividedDifferenceOptions opt;
    opt.precision = precision;
    auto h = detail::kraus_entries<T>(f, nodes, s, opt);
    for (std::size_t r = 1; r <= nodes.size(); ++r) {
      FactorizationRow row;
      row.r = static_cast<int>(r);
      auto lhs = determinant(h.leading_block(r));
      auto mdet = determinant(detail::confluent_matrix<T>(f, nodes, s, r, opt));
      T prod(1.0);
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j) {
          T gap = T(nodes[j]) - T(nodes[i]);
          prod = prod * gap * gap;
        }
      T rhs = mdet.value * prod;
      row.leading_determinant = to_double(lhs.value);
      row.confluent_determinant = to_double(mdet.value);
      row.product_of_squares = to_double(prod);
      row.leading_singular = lhs.numerically_singular;
      row.confluent_singular = mdet.numerically_singular;
      row.residual = detail::relative_residual(lhs, rhs, mdet.numerically_singular);
      rows.push_back(row);
    }
  };
  if (precision == Precision::extended) {
    run(DoubleDouble{});
  } else {
    run(0.0);
  }
  return rows;
}

/// The confluent matrix M_r itself (r = number of nodes), in double precision.
template <Differentiable F>
Eigen::MatrixXd confluent_matrix(const F& f, std::span<const double> nodes, double s) {
  DividedDifferenceOptions opt;
  opt.precision = Precision::extended;
  return detail::confluent_matrix<DoubleDouble>(f, nodes, s, nodes.size(), opt).to_eigen();
}

/// K_n(f;t) = (f^(i+j)(t) / (i+j)!)_{i,j=1..n}.
template <Differentiable F>
SymmetricMatrixReport derivative_matrix_K(const F& f, double t, int n, double tolerance = kDefaultTolerance,
                                          bool strict = false) {
  if (n < 1) throw std::invalid_argument("matrix order must be at least 1");
  std::vector<double> scaled(2 * n + 1);
  for (int k = 2; k <= 2 * n; ++k) scaled[k] = f.template derivative<double>(t, k) / detail::factorial(k);
  Eigen::MatrixXd m(n, n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) m(i - 1, j - 1) = scaled[i + j];
  return analyze_symmetric(std::move(m), tolerance, strict);
}

/// M_n(f;t) = (f^(i+j-1)(t) / (i+j-1)!)_{i,j=1..n}.
template <Differentiable F>
SymmetricMatrixReport derivative_matrix_M(const F& f, double t, int n, double tolerance = kDefaultTolerance,
                                          bool strict = false) {
  if (n < 1) throw std::invalid_argument("matrix order must be at least 1");
  std::vector<double> scaled(2 * n);
  for (int k = 1; k <= 2 * n - 1; ++k) scaled[k] = f.template derivative<double>(t, k) / detail::factorial(k);
  Eigen::MatrixXd m(n, n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) m(i - 1, j - 1) = scaled[i + j - 1];
  return analyze_symmetric(std::move(m), tolerance, strict);
}

}  // namespace matconvex
