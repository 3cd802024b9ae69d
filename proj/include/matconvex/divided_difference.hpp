#pragma once

// Divided differences [x0, ..., xn]_f with repeated (confluent) nodes.
//
// Three independent routes are provided:
//   * the Newton recurrence, seeded with f^(k)(x)/k! on runs of equal nodes;
//   * for polynomial models, the exact expansion  sum_k b_k h_{k-n}(x0..xn)  in complete
//     homogeneous symmetric polynomials (no division, exact zeros above the degree);
//   * Hermite's representation as an n-fold integral of f^(n) over the standard simplex,
//     evaluated with nested Gauss-Legendre rules.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "matconvex/double_double.hpp"
#include "matconvex/function_model.hpp"
#include "matconvex/interval.hpp"

namespace matconvex {

/// Anything with exact derivatives of every order: FunctionModel, and derived evaluators
/// such as t -> [t0, t]_f.
template <class F>
concept Differentiable = requires(const F& f, double x, DoubleDouble y, int k) {
  { f.template derivative<double>(x, k) } -> std::convertible_to<double>;
  { f.template derivative<DoubleDouble>(y, k) } -> std::convertible_to<DoubleDouble>;
  { f.contains(x) } -> std::convertible_to<bool>;
};

/// Relative distance below which two nodes are treated as one confluent node.
inline constexpr double kMergeThreshold = 1e-7;

/// Ordered multiset of evaluation points inside an interval.
class NodeSet {
 public:
  explicit NodeSet(std::vector<double> values, Interval interval = Interval::real_line())
      : values_(std::move(values)), interval_(interval) {
    if (values_.empty()) throw std::invalid_argument("a node set needs at least one node");
    for (double x : values_) {
      if (!interval_.contains(x)) {
        throw DomainError("node " + format_real(x) + " outside " + interval_.to_string());
      }
    }
  }

  const std::vector<double>& values() const { return values_; }
  const Interval& interval() const { return interval_; }
  std::size_t size() const { return values_.size(); }
  int order() const { return static_cast<int>(values_.size()) - 1; }

  /// Sorted copy with near-coincident nodes replaced by their cluster mean.
  std::vector<double> canonical(double merge_threshold = kMergeThreshold) const {
    return coalesce(values_, merge_threshold);
  }

  /// Sorts and merges clusters of nodes closer than merge_threshold * max(1, |x|).
  /// Multiplicities are kept: a cluster of m nodes becomes m copies of its mean.
  static std::vector<double> coalesce(std::span<const double> nodes, double merge_threshold = kMergeThreshold) {
    std::vector<double> s(nodes.begin(), nodes.end());
    std::sort(s.begin(), s.end());
    std::size_t i = 0;
    while (i < s.size()) {
      std::size_t j = i + 1;
      double sum = s[i];
      while (j < s.size() && s[j] - s[j - 1] < merge_threshold * std::max(1.0, std::fabs(s[j - 1]))) {
        sum += s[j];
        ++j;
      }
      if (j - i > 1) {
        double mean = s[i] == s[j - 1] ? s[i] : sum / static_cast<double>(j - i);
        std::fill(s.begin() + static_cast<std::ptrdiff_t>(i), s.begin() + static_cast<std::ptrdiff_t>(j), mean);
      }
      i = j;
    }
    return s;
  }

 private:
  std::vector<double> values_;
  Interval interval_;
};

struct DividedDifferenceOptions {
  /// Unset: extended (double-double) from order 5 on or when two unmerged nodes are
  /// closer than kNearNodeGap * max(1, |x|); standard otherwise.
  std::optional<Precision> precision;
  double merge_threshold = kMergeThreshold;
  /// Allow the exact symmetric-polynomial route for polynomial models.
  bool polynomial_expansion = true;
};

inline constexpr double kNearNodeGap = 1e-2;

inline Precision resolve_precision(const DividedDifferenceOptions& opt, int order) {
  if (opt.precision) return *opt.precision;
  return order >= 5 ? Precision::extended : Precision::standard;
}

inline Precision resolve_precision(const DividedDifferenceOptions& opt, std::span<const double> nodes) {
  if (opt.precision || nodes.size() >= 6) return resolve_precision(opt, static_cast<int>(nodes.size()) - 1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      double gap = std::fabs(nodes[i] - nodes[j]);
      double scale = std::max({1.0, std::fabs(nodes[i]), std::fabs(nodes[j])});
      if (gap > opt.merge_threshold * scale && gap < kNearNodeGap * scale) return Precision::extended;
    }
  }
  return Precision::standard;
}

namespace detail {

inline double factorial(int k) {
  double v = 1.0;
  for (int i = 2; i <= k; ++i) v *= i;
  return v;
}

template <Differentiable F>
void require_nodes_in_domain(const F& f, std::span<const double> nodes) {
  if (nodes.empty()) throw std::invalid_argument("divided difference needs at least one node");
  for (double x : nodes) {
    if (!f.contains(x)) throw DomainError("node " + format_real(x) + " outside the function's domain");
  }
}

/// Full Newton table over sorted nodes: table[j][i] = [z_i, ..., z_{i+j}].
template <class T, Differentiable F>
std::vector<std::vector<T>> newton_table(const F& f, std::span<const double> sorted) {
  const std::size_t n = sorted.size();
  std::vector<std::vector<T>> table(n);
  table[0].resize(n);
  for (std::size_t i = 0; i < n; ++i) table[0][i] = f.template derivative<T>(T(sorted[i]), 0);
  for (std::size_t j = 1; j < n; ++j) {
    table[j].resize(n - j);
    for (std::size_t i = 0; i + j < n; ++i) {
      if (sorted[i + j] == sorted[i]) {
        table[j][i] = f.template derivative<T>(T(sorted[i]), static_cast<int>(j)) / factorial(static_cast<int>(j));
      } else {
        table[j][i] = (table[j - 1][i + 1] - table[j - 1][i]) / (T(sorted[i + j]) - T(sorted[i]));
      }
    }
  }
  return table;
}

/// Top entry of the Newton table using O(n) storage.
template <class T, Differentiable F>
T newton_top(const F& f, std::span<const double> sorted) {
  const std::size_t n = sorted.size();
  std::vector<T> col(n);
  for (std::size_t i = 0; i < n; ++i) col[i] = f.template derivative<T>(T(sorted[i]), 0);
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t i = 0; i + j < n; ++i) {
      if (sorted[i + j] == sorted[i]) {
        col[i] = f.template derivative<T>(T(sorted[i]), static_cast<int>(j)) / factorial(static_cast<int>(j));
      } else {
        col[i] = (col[i + 1] - col[i]) / (T(sorted[i + j]) - T(sorted[i]));
      }
    }
  }
  return col[0];
}

/// sum_{k>=n} b_k h_{k-n}(y_0..y_n) with y_i = beta x_i + gamma, scaled by beta^n and the
/// post-affine scale.
template <class T>
T polynomial_expansion(const FunctionModel& f, std::span<const double> nodes) {
  const int n = static_cast<int>(nodes.size()) - 1;
  std::vector<double> b = f.base_coefficients();
  const int m = static_cast<int>(b.size()) - 1;
  double beta = 1.0, gamma = 0.0;
  if (f.pre_map()) {
    beta = f.pre_map()->a / f.pre_map()->d;
    gamma = f.pre_map()->b / f.pre_map()->d;
  }
  if (n == 0) return f.template derivative<T>(T(nodes[0]), 0);
  if (m < n) return T(0.0);
  const int depth = m - n;
  std::vector<T> h(static_cast<std::size_t>(depth) + 1, T(0.0));
  h[0] = T(1.0);
  for (double x : nodes) {
    T y = T(beta) * x + gamma;
    for (int j = 1; j <= depth; ++j) h[j] = h[j] + y * h[j - 1];
  }
  T acc(0.0);
  for (int k = n; k <= m; ++k) acc = acc + b[k] * h[k - n];
  T scale = detail::integer_power(T(beta), n);
  if (f.post_affine()) scale = scale * f.post_affine()->scale;
  return acc * scale;
}

template <class T, Differentiable F>
T divided_difference_impl(const F& f, std::span<const double> nodes, const DividedDifferenceOptions& opt) {
  if constexpr (std::same_as<F, FunctionModel>) {
    if (opt.polynomial_expansion && f.is_polynomial_like()) return polynomial_expansion<T>(f, nodes);
  }
  std::vector<double> canon = NodeSet::coalesce(nodes, opt.merge_threshold);
  return newton_top<T>(f, canon);
}

}  // namespace detail

/// [x0, ..., xn]_f in the requested scalar type. Symmetric in the nodes.
template <class T, Differentiable F>
T divided_difference_as(const F& f, std::span<const double> nodes, const DividedDifferenceOptions& opt = {}) {
  detail::require_nodes_in_domain(f, nodes);
  return detail::divided_difference_impl<T>(f, nodes, opt);
}

template <Differentiable F>
double divided_difference(const F& f, std::span<const double> nodes, const DividedDifferenceOptions& opt = {}) {
  detail::require_nodes_in_domain(f, nodes);
  if (resolve_precision(opt, nodes) == Precision::extended) {
    return to_double(detail::divided_difference_impl<DoubleDouble>(f, nodes, opt));
  }
  return detail::divided_difference_impl<double>(f, nodes, opt);
}

template <Differentiable F>
double divided_difference(const F& f, std::initializer_list<double> nodes, const DividedDifferenceOptions& opt = {}) {
  return divided_difference(f, std::span<const double>(nodes.begin(), nodes.size()), opt);
}

template <Differentiable F>
double divided_difference(const F& f, const NodeSet& nodes, const DividedDifferenceOptions& opt = {}) {
  return divided_difference(f, std::span<const double>(nodes.values()), opt);
}

/// Plain Newton recurrence, bypassing the polynomial expansion.
template <Differentiable F>
double newton_divided_difference(const F& f, std::span<const double> nodes, const DividedDifferenceOptions& opt = {}) {
  DividedDifferenceOptions o = opt;
  o.polynomial_expansion = false;
  return divided_difference(f, nodes, o);
}

/// Triangular table of divided differences over the canonical (sorted, coalesced) nodes.
struct DDTable {
  std::vector<double> nodes;
  /// columns[j][i] = [z_i, ..., z_{i+j}]
  std::vector<std::vector<double>> columns;
  double top() const { return columns.back().front(); }
};

template <Differentiable F>
DDTable divided_difference_table(const F& f, std::span<const double> nodes, const DividedDifferenceOptions& opt = {}) {
  detail::require_nodes_in_domain(f, nodes);
  DDTable out;
  out.nodes = NodeSet::coalesce(nodes, opt.merge_threshold);
  auto convert = [&](const auto& table) {
    for (const auto& col : table) {
      std::vector<double> c;
      for (const auto& v : col) c.push_back(to_double(v));
      out.columns.push_back(std::move(c));
    }
  };
  if (resolve_precision(opt, nodes) == Precision::extended) {
    convert(detail::newton_table<DoubleDouble>(f, out.nodes));
  } else {
    convert(detail::newton_table<double>(f, out.nodes));
  }
  return out;
}

/// Gauss-Legendre nodes and weights mapped to [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussRule gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("Gauss rule order must be positive");
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= order; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = order * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = 0.5 * (1.0 - z);
    rule.nodes[order - 1 - i] = 0.5 * (1.0 + z);
    rule.weights[i] = rule.weights[order - 1 - i] = 0.5 * w;
  }
  return rule;
}

/// Deepest simplex handled by the nested quadrature (cost grows like rule_order^n).
inline constexpr int kMaxHermiteOrder = 6;

/// Hermite's representation: [x0..xn]_f = integral over 0 <= t_n <= ... <= t_1 <= 1 of
/// f^(n)((1-t1) x0 + (t1-t2) x1 + ... + t_n x_n), with one Gauss rule per simplex level.
template <Differentiable F>
double hermite_simplex_quadrature(const F& f, std::span<const double> nodes, int rule_order = 16) {
  if (rule_order < 2) throw std::invalid_argument("rule_order must be at least 2");
  detail::require_nodes_in_domain(f, nodes);
  const int n = static_cast<int>(nodes.size()) - 1;
  if (n > kMaxHermiteOrder) {
    throw std::invalid_argument("Hermite quadrature depth " + std::to_string(n) + " exceeds bound " +
                                std::to_string(kMaxHermiteOrder));
  }
  if (n == 0) return f.template derivative<double>(nodes[0], 0);
  const GaussRule rule = gauss_legendre(rule_order);

  // level l integrates t_l over [0, t_{l-1}]; `point` accumulates sum_{i<l} (t_i - t_{i+1}) x_i
  // with the last term completed as t_{l-1} x_{l-1} once the level terminates.
  auto recurse = [&](auto&& self, int level, double upper, double point) -> double {
    double sum = 0.0, comp = 0.0;
    for (int q = 0; q < rule_order; ++q) {
      double t = upper * rule.nodes[q];
      double w = upper * rule.weights[q];
      // (t_{l-1} - t_l) x_{l-1} added at this level
      double p = point + (upper - t) * nodes[level - 1];
      double v = level == n ? f.template derivative<double>(p + t * nodes[n], n) : self(self, level + 1, t, p);
      // Kahan summation
      double y = w * v - comp;
      double s = sum + y;
      comp = (s - sum) - y;
      sum = s;
    }
    return sum;
  };
  return recurse(recurse, 1, 1.0, 0.0);
}

template <Differentiable F>
double hermite_simplex_quadrature(const F& f, std::initializer_list<double> nodes, int rule_order = 16) {
  return hermite_simplex_quadrature(f, std::span<const double>(nodes.begin(), nodes.size()), rule_order);
}

/// (-1)^n / (x0 x1 ... xn), the divided differences of 1/t.
inline double reciprocal_closed_form(std::span<const double> nodes) {
  if (nodes.empty()) throw std::invalid_argument("need at least one node");
  double v = 1.0;
  for (double x : nodes) {
    if (!(x > 0.0)) throw DomainError("reciprocal closed form needs positive nodes, got " + format_real(x));
    v /= x;
  }
  return (nodes.size() % 2 == 1) ? v : -v;
}

inline double reciprocal_closed_form(std::initializer_list<double> nodes) {
  return reciprocal_closed_form(std::span<const double>(nodes.begin(), nodes.size()));
}

enum class Curvature { convex, concave, affine };

inline std::string_view curvature_name(Curvature c) {
  switch (c) {
    case Curvature::convex: return "convex";
    case Curvature::concave: return "concave";
    case Curvature::affine: return "affine";
  }
  return "unknown";
}

struct GeometricMeanBound {
  double lhs = 0.0;  ///< [x0..xn]_f
  double rhs = 0.0;  ///< prod [xi..xi]_f^(1/(n+1))
  double margin = 0.0;  ///< signed so that a satisfied inequality has margin >= -tolerance
  bool satisfied = false;
  Curvature direction = Curvature::convex;
};

/// Curvature of c(x) = f^(n)(x)^(-1/(n+1)) on [lo, hi] from the sign of
/// g g'' - (1 + 1/(n+1)) g'^2 with g = f^(n) (negative means c convex).
template <Differentiable F>
Curvature sample_reciprocal_root_curvature(const F& f, int n, double lo, double hi, int samples = 64) {
  const double p = 1.0 / (n + 1);
  bool pos = false, neg = false;
  for (int i = 0; i < samples; ++i) {
    double x = samples == 1 || lo == hi ? lo : lo + (hi - lo) * i / (samples - 1);
    double g = f.template derivative<double>(x, n);
    if (!(g > 0.0)) {
      throw HypothesisError("f^(" + std::to_string(n) + ") is not strictly positive at " + format_real(x));
    }
    double g1 = f.template derivative<double>(x, n + 1);
    double g2 = f.template derivative<double>(x, n + 2);
    double a = g * g2, b = (1.0 + p) * g1 * g1;
    double q = a - b;
    double tol = 1e-9 * std::max(std::fabs(a), std::fabs(b));
    if (q > tol) pos = true;
    if (q < -tol) neg = true;
    if (lo == hi) break;
  }
  if (pos && neg) throw HypothesisError("curvature of f^(n)^(-1/(n+1)) changes sign; direction indeterminate");
  if (neg) return Curvature::convex;
  if (pos) return Curvature::concave;
  return Curvature::affine;
}

/// Checks [x0..xn]_f >= prod_i [xi..xi]_f^(1/(n+1)) when c = f^(n)^(-1/(n+1)) is convex
/// (reversed when c is concave, equality when affine).
template <Differentiable F>
GeometricMeanBound geometric_mean_bound_check(const F& f, std::span<const double> nodes,
                                              std::optional<Curvature> direction = std::nullopt,
                                              double tolerance = 1e-12) {
  detail::require_nodes_in_domain(f, nodes);
  const int n = static_cast<int>(nodes.size()) - 1;
  auto [lo_it, hi_it] = std::minmax_element(nodes.begin(), nodes.end());
  GeometricMeanBound out;
  out.direction = direction ? *direction : sample_reciprocal_root_curvature(f, n, *lo_it, *hi_it);
  DividedDifferenceOptions opt;
  opt.precision = Precision::extended;
  out.lhs = divided_difference(f, nodes, opt);
  const double nfact = detail::factorial(n);
  double log_sum = 0.0;
  for (double x : nodes) {
    double g = f.template derivative<double>(x, n);
    if (!(g > 0.0)) throw HypothesisError("f^(n) is not strictly positive at " + format_real(x));
    log_sum += std::log(g / nfact);
  }
  out.rhs = std::exp(log_sum / (n + 1));
  switch (out.direction) {
    case Curvature::convex: out.margin = out.lhs - out.rhs; break;
    case Curvature::concave: out.margin = out.rhs - out.lhs; break;
    case Curvature::affine: out.margin = -std::fabs(out.lhs - out.rhs); break;
  }
  out.satisfied = out.margin >= -tolerance * std::max(1.0, std::fabs(out.rhs));
  return out;
}

template <Differentiable F>
GeometricMeanBound geometric_mean_bound_check(const F& f, std::initializer_list<double> nodes,
                                              std::optional<Curvature> direction = std::nullopt,
                                              double tolerance = 1e-12) {
  return geometric_mean_bound_check(f, std::span<const double>(nodes.begin(), nodes.size()), direction, tolerance);
}

}  // namespace matconvex
