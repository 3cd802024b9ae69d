#pragma once

// Gap polynomials: p_m(t) = sum_{k=1}^m b_k t^k with b_k = (-1)^(k-1)/k (concave kind) or
// b_k = 1/k (convex kind), rescaled as f(t) = p_m(alpha/c * (t - t0)) so that M_n stays
// positive definite and K_n keeps a fixed sign on (t0 - c, t0 + c). For m = 2n the result
// is n-monotone and n-concave (convex) there but not (n+1)-concave (convex) anywhere.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "matconvex/criterion_matrices.hpp"
#include "matconvex/function_model.hpp"

namespace matconvex {

using Rational = boost::rational<long long>;

enum class GapKind { concave, convex };

inline std::string_view gap_kind_name(GapKind k) { return k == GapKind::concave ? "concave" : "convex"; }

inline GapKind parse_gap_kind(std::string_view s) {
  if (s == "concave") return GapKind::concave;
  if (s == "convex") return GapKind::convex;
  throw ParseError("unknown gap kind '" + std::string(s) + "'");
}

inline std::string rational_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

/// b_0 = 0, b_k = (+-1)^(k-1) / k for k = 1..m.
inline std::vector<Rational> gap_coefficients(int m, GapKind kind) {
  if (m < 1) throw std::invalid_argument("degree must be at least 1");
  std::vector<Rational> b(static_cast<std::size_t>(m) + 1, Rational(0));
  for (int k = 1; k <= m; ++k) {
    long long sign = (kind == GapKind::concave && k % 2 == 0) ? -1 : 1;
    b[k] = Rational(sign, k);
  }
  return b;
}

inline FunctionModel polynomial_from(const std::vector<Rational>& b) {
  std::vector<double> c;
  for (const auto& r : b) c.push_back(to_double(r));
  return FunctionModel::polynomial(std::move(c));
}

struct GapPolynomial {
  std::vector<Rational> coefficients;  ///< b_0 = 0, b_1..b_m
  int degree = 0;
  int target_order = 0;
  GapKind kind = GapKind::concave;
  double raw_alpha = 0.0;  ///< largest grid-certified alpha
  double alpha = 0.0;      ///< raw_alpha shrunk by kAlphaSafety
  double center = 0.0;
  double half_width = 0.0;
  Interval certified_interval = Interval::open(-1.0, 1.0);
  FunctionModel model = FunctionModel::polynomial({0.0});  ///< the rescaled f_m
};

struct AlphaSearchConfig {
  int grid = 256;
  double initial = 0.125;
  double relative_resolution = 1e-3;
  double cap = 1024.0;
  double tolerance = kDefaultTolerance;
};

inline constexpr double kAlphaSafety = 0.9;

namespace detail {

/// M_n positive definite and K_n negative (concave) or positive (convex) definite at t.
inline bool gap_definite_at(const FunctionModel& p, double t, int n, GapKind kind, double tol) {
  if (derivative_matrix_M(p, t, n, tol).verdict != Definiteness::positive_definite) return false;
  auto k = derivative_matrix_K(p, t, n, tol);
  if (kind == GapKind::convex) return k.verdict == Definiteness::positive_definite;
  return analyze_symmetric(-k.matrix, tol).verdict == Definiteness::positive_definite;
}

}  // namespace detail

/// Largest alpha (doubling, then bisection to a relative resolution) such that the gap
/// definiteness conditions hold at every grid point of (-alpha, alpha).
inline double find_alpha(const FunctionModel& p, int n, GapKind kind, const AlphaSearchConfig& cfg = {}) {
  if (!detail::gap_definite_at(p, 0.0, n, kind, cfg.tolerance)) {
    throw HypothesisError("M_n(p;0) / K_n(p;0) do not have the required definiteness");
  }
  auto ok = [&](double a) {
    for (double t : Interval::open(-a, a).grid(static_cast<std::size_t>(cfg.grid)))
      if (!detail::gap_definite_at(p, t, n, kind, cfg.tolerance)) return false;
    return true;
  };
  double good = 0.0, bad = cfg.initial;
  while (ok(bad)) {
    good = bad;
    if (bad >= cfg.cap) return cfg.cap;
    bad *= 2.0;
  }
  if (good == 0.0) {
    // Shrink until something passes; the condition holds at 0 so this terminates.
    while (!ok(bad)) {
      bad *= 0.5;
      if (bad < 1e-12) throw HypothesisError("no positive alpha certified");
    }
    good = bad;
    bad *= 2.0;
  }
  while (bad - good > cfg.relative_resolution * good) {
    double mid = 0.5 * (good + bad);
    if (ok(mid)) {
      good = mid;
    } else {
      bad = mid;
    }
  }
  return good;
}

/// Builds the order-n gap polynomial of degree m on a finite interval.
inline GapPolynomial build_gap_polynomial(int n, int m, const Interval& interval, GapKind kind,
                                          const AlphaSearchConfig& cfg = {}) {
  if (!interval.is_finite()) throw std::invalid_argument("gap construction needs a finite interval");
  if (n < 1) throw std::invalid_argument("order must be at least 1");
  if (m < 2 * n) throw std::invalid_argument("degree m must be at least 2n");
  GapPolynomial g;
  g.coefficients = gap_coefficients(m, kind);
  g.degree = m;
  g.target_order = n;
  g.kind = kind;
  FunctionModel p = polynomial_from(g.coefficients);
  g.raw_alpha = find_alpha(p, n, kind, cfg);
  g.alpha = kAlphaSafety * g.raw_alpha;
  g.center = interval.midpoint();
  g.half_width = 0.5 * interval.width();
  g.certified_interval = interval.interior();
  const double s = g.alpha / g.half_width;
  g.model = p.compose_mobius(Mobius{s, -s * g.center, 0.0, 1.0}, interval);
  return g;
}

/// The gap polynomial on its own window (-alpha, alpha), so the model is p_m itself and
/// the criterion matrices are not shrunk by the rescaling.
inline GapPolynomial build_natural_gap_polynomial(int n, int m, GapKind kind, const AlphaSearchConfig& cfg = {}) {
  if (m < 2 * n) throw std::invalid_argument("degree m must be at least 2n");
  const double a = kAlphaSafety * find_alpha(polynomial_from(gap_coefficients(m, kind)), n, kind, cfg);
  return build_gap_polynomial(n, m, Interval::open(-a, a), kind, cfg);
}

struct ExclusionMinor {
  std::array<int, 2> rows{};  ///< 1-based rows/columns of K_n
  std::array<std::array<Rational, 2>, 2> matrix{};
  Rational determinant;
};

/// The 2x2 principal minor of K_n(p;0) = (b_{i+j}) showing that a polynomial of exact
/// degree m, 3 <= m <= 2n-1, is not n-convex: its determinant is -b_m^2 < 0.
inline ExclusionMinor degree_exclusion_minor(int m, int n, const std::vector<Rational>& b) {
  if (n < 2) throw std::invalid_argument("order must be at least 2");
  if (m < 3 || m > 2 * n - 1) throw std::invalid_argument("degree must lie in 3..2n-1");
  if (static_cast<int>(b.size()) <= m || b[m] == Rational(0)) throw std::invalid_argument("b_m must be nonzero");
  const int l = m / 2;
  ExclusionMinor out;
  out.rows = m % 2 == 0 ? std::array<int, 2>{l - 1, l + 1} : std::array<int, 2>{l, l + 1};
  auto coeff = [&](int k) { return k < static_cast<int>(b.size()) ? b[k] : Rational(0); };
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.matrix[i][j] = coeff(out.rows[i] + out.rows[j]);
  out.determinant = out.matrix[0][0] * out.matrix[1][1] - out.matrix[0][1] * out.matrix[1][0];
  return out;
}

/// Floating-point determinant of the rows (n-1, n+1) minor of K_{n+1}(f;t) for a degree-2n
/// model; equals -(b_2n * s^2n)^2 with s the pre-map slope.
inline double exclusion_minor_at(const FunctionModel& f, double t, int n) {
  auto k = derivative_matrix_K(f, t, n + 1, kDefaultTolerance).matrix;
  const int r0 = n - 2, r1 = n;  // 0-based rows n-1, n+1
  return k(r0, r0) * k(r1, r1) - k(r0, r1) * k(r1, r0);
}

inline constexpr double kHalflineShiftMargin = 1e-6;

struct HalflineGap {
  GapPolynomial base;  ///< degree-2n concave-kind gap polynomial on [0, 1)
  double shift = 0.0;  ///< constant added to make the base non-negative on [0, 1)
  FunctionModel model = FunctionModel::polynomial({0.0});  ///< g_n(t) = f_n(t/(1+t)) + shift on [0, inf)
};

/// g_n on [0, inf): the shifted concave-kind gap polynomial composed with t/(1+t).
inline HalflineGap build_halfline_gap(int n, int grid = 1024) {
  HalflineGap h;
  const Interval unit(0.0, 1.0, true, false);
  h.base = build_gap_polynomial(n, 2 * n, unit, GapKind::concave);
  double lowest = h.base.model.eval(0.0);
  for (double t : unit.grid(static_cast<std::size_t>(grid))) lowest = std::min(lowest, h.base.model.eval(t));
  h.shift = -lowest + kHalflineShiftMargin;
  h.model = h.base.model.with_affine(1.0, h.shift).compose_mobius(Mobius{1.0, 0.0, 1.0, 1.0},
                                                                   Interval(0.0, Interval::inf, true, false));
  return h;
}

}  // namespace matconvex
