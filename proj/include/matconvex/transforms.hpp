#pragma once

// Fractional transforms anchored at t0:
//   T(t0,f)(t) = [t0,t0,t]_f / ([t0,t0]_f [t0,t]_f)
//   S(t0,f)(t) = [t0,t0,t0,t]_f / ([t0,t0,t0]_f [t0,t0,t]_f)
// Both are quotients of functions of the form t -> [P, t]_f, whose derivatives are again
// divided differences, so every derivative order is available and t = t0 is regular.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "matconvex/classify.hpp"
#include "matconvex/criterion_matrices.hpp"
#include "matconvex/divided_difference.hpp"
#include "matconvex/function_model.hpp"

namespace matconvex {

namespace detail {

template <class T>
T from_extended(const DoubleDouble& v) {
  if constexpr (std::same_as<T, DoubleDouble>) {
    return v;
  } else {
    return static_cast<T>(to_double(v));
  }
}

inline DividedDifferenceOptions extended_options() {
  DividedDifferenceOptions opt;
  opt.precision = Precision::extended;
  return opt;
}

}  // namespace detail

/// t -> [P, t]_f for a fixed anchor multiset P. The k-th derivative is k! [P, t, ..., t]_f
/// with t repeated k + 1 times.
template <Differentiable F>
class AnchoredDifference {
 public:
  AnchoredDifference(F source, std::vector<double> anchors) : source_(std::move(source)), anchors_(std::move(anchors)) {
    for (double a : anchors_)
      if (!source_.contains(a)) throw DomainError("anchor " + format_real(a) + " outside the domain");
  }

  const F& source() const { return source_; }
  const std::vector<double>& anchors() const { return anchors_; }
  bool contains(double t) const { return source_.contains(t); }

  template <class T>
  T derivative(const T& t, int k) const {
    return detail::from_extended<T>(extended(to_double(t), k));
  }

  DoubleDouble extended(double t, int k) const {
    std::vector<double> nodes = anchors_;
    nodes.insert(nodes.end(), static_cast<std::size_t>(k) + 1, t);
    return divided_difference_as<DoubleDouble>(source_, nodes, detail::extended_options()) * detail::factorial(k);
  }

 private:
  F source_;
  std::vector<double> anchors_;
};

enum class TransformKind { T, S };

inline std::string_view transform_kind_name(TransformKind k) { return k == TransformKind::T ? "T" : "S"; }

inline TransformKind parse_transform_kind(std::string_view s) {
  if (s == "T" || s == "t") return TransformKind::T;
  if (s == "S" || s == "s") return TransformKind::S;
  throw ParseError("unknown transform kind '" + std::string(s) + "'");
}

inline constexpr int kHypothesisGrid = 64;

/// Quotient N(t) / (c D(t)) with N = [t0,t0,t]_f, D = [t0,t]_f, c = f'(t0) for T and
/// N = [t0,t0,t0,t]_f, D = [t0,t0,t]_f, c = [t0,t0,t0]_f for S.
template <Differentiable F>
class TransformModel {
 public:
  TransformModel(TransformKind kind, F source, double t0, Interval interval)
      : kind_(kind),
        t0_(t0),
        interval_(interval),
        numerator_(source, kind == TransformKind::T ? std::vector<double>{t0, t0} : std::vector<double>{t0, t0, t0}),
        denominator_(source, kind == TransformKind::T ? std::vector<double>{t0} : std::vector<double>{t0, t0}) {
    if (!interval_.interior_contains(t0)) throw DomainError("anchor t0=" + format_real(t0) + " is not interior");
    const F& f = numerator_.source();
    const int order = kind == TransformKind::T ? 1 : 2;
    for (double t : interval_.grid(kHypothesisGrid)) {
      double v = f.template derivative<double>(t, order);
      if (!(v > 0.0)) {
        throw HypothesisError(std::string(kind == TransformKind::T ? "f'" : "f''") + "(" + format_real(t) +
                              ") = " + format_real(v) + " is not positive");
      }
    }
    value_t0_ = f.template derivative<DoubleDouble>(DoubleDouble(t0), 0);
    slope_t0_ = f.template derivative<DoubleDouble>(DoubleDouble(t0), 1);
    half_curvature_t0_ = f.template derivative<DoubleDouble>(DoubleDouble(t0), 2) * 0.5;
    constant_ = kind == TransformKind::T ? slope_t0_ : half_curvature_t0_;
  }

  TransformKind kind() const { return kind_; }
  double anchor() const { return t0_; }
  const Interval& interval() const { return interval_; }
  const F& source() const { return numerator_.source(); }
  double f_t0() const { return to_double(value_t0_); }
  double fprime_t0() const { return to_double(slope_t0_); }
  /// [t0,t0,t0]_f = f''(t0)/2.
  double half_fsecond_t0() const { return to_double(half_curvature_t0_); }

  bool contains(double t) const { return interval_.contains(t) && numerator_.contains(t); }

  template <class T>
  T derivative(const T& t, int k) const {
    const double td = to_double(t);
    if (!contains(td)) throw DomainError("point t=" + format_real(td) + " outside " + interval_.to_string());
    if (k < 0) throw std::invalid_argument("negative derivative order");
    // q = N / D' with D' = c D: q^(k) = (N^(k) - sum_{j<k} C(k,j) q^(j) D'^(k-j)) / D'
    std::vector<DoubleDouble> n(k + 1), d(k + 1), q(k + 1);
    for (int j = 0; j <= k; ++j) {
      n[j] = numerator_.extended(td, j);
      d[j] = constant_ * denominator_.extended(td, j);
    }
    if (d[0] == DoubleDouble(0.0)) throw std::domain_error("transform denominator vanishes at t=" + format_real(td));
    for (int m = 0; m <= k; ++m) {
      DoubleDouble acc = n[m];
      double binom = 1.0;
      for (int j = 0; j < m; ++j) {
        acc -= binom * q[j] * d[m - j];
        binom = binom * (m - j) / (j + 1);
      }
      q[m] = acc / d[0];
    }
    return detail::from_extended<T>(q[k]);
  }

  double operator()(double t) const { return derivative<double>(t, 0); }

 private:
  TransformKind kind_;
  double t0_;
  Interval interval_;
  AnchoredDifference<F> numerator_;
  AnchoredDifference<F> denominator_;
  DoubleDouble value_t0_, slope_t0_, half_curvature_t0_, constant_;
};

template <Differentiable F>
TransformModel<F> transform_T(const F& f, double t0, const Interval& interval) {
  return TransformModel<F>(TransformKind::T, f, t0, interval);
}

inline TransformModel<FunctionModel> transform_T(const FunctionModel& f, double t0) {
  return transform_T(f, t0, f.domain().interior());
}

template <Differentiable F>
TransformModel<F> transform_S(const F& f, double t0, const Interval& interval) {
  return TransformModel<F>(TransformKind::S, f, t0, interval);
}

inline TransformModel<FunctionModel> transform_S(const FunctionModel& f, double t0) {
  return transform_S(f, t0, f.domain().interior());
}

/// f(t) = f(t0) - 1/(g(t) - 1/(f'(t0)(t - t0))), evaluated as f(t0) + f'Δ/(1 - g f'Δ).
inline double inverse_T(double g_t, double t0, double f_t0, double fprime_t0, double t) {
  if (t == t0) throw std::invalid_argument("inverse transform is undefined at t = t0");
  const double delta = t - t0;
  const double fd = fprime_t0 * delta;
  const double denom = std::fma(-g_t, fd, 1.0);
  if (denom == 0.0 || !std::isfinite(denom)) throw std::domain_error("inverse T denominator vanishes");
  return f_t0 + fd / denom;
}

/// f(t) = f(t0) + f'(t0)Δ - Δ/(S(t) - 1/(aΔ)) with a = [t0,t0,t0]_f, evaluated as
/// f(t0) + f'Δ - aΔ²/(S a Δ - 1) with the denominator fused.
inline double inverse_S(double s_t, double t0, double f_t0, double fprime_t0, double half_fsecond_t0, double t) {
  if (t == t0) throw std::invalid_argument("inverse transform is undefined at t = t0");
  const double delta = t - t0;
  const double denom = std::fma(s_t * half_fsecond_t0, delta, -1.0);
  if (denom == 0.0 || !std::isfinite(denom)) throw std::domain_error("inverse S denominator vanishes");
  return f_t0 + fprime_t0 * delta - half_fsecond_t0 * delta * delta / denom;
}

template <Differentiable F>
double inverse_of(const TransformModel<F>& g, double t) {
  if (g.kind() == TransformKind::T) return inverse_T(g(t), g.anchor(), g.f_t0(), g.fprime_t0(), t);
  return inverse_S(g(t), g.anchor(), g.f_t0(), g.fprime_t0(), g.half_fsecond_t0(), t);
}

struct RoundTripReport {
  std::vector<double> grid;
  std::vector<double> transformed;
  std::vector<double> reconstructed;
  std::vector<double> original;
  double max_relative_error = 0.0;
};

inline constexpr double kRoundTripExclusion = 1e-4;

/// inverse(transform(f)) against f on a grid, skipping a neighbourhood of the anchor.
inline RoundTripReport round_trip(const FunctionModel& f, TransformKind kind, double t0, const Interval& interval,
                                  int grid = 64) {
  auto g = TransformModel<FunctionModel>(kind, f, t0, interval);
  RoundTripReport rep;
  for (double t : interval.grid(static_cast<std::size_t>(grid))) {
    if (std::fabs(t - t0) < kRoundTripExclusion) continue;
    double gt = g(t);
    double back = inverse_of(g, t);
    double orig = f.eval(t);
    rep.grid.push_back(t);
    rep.transformed.push_back(gt);
    rep.reconstructed.push_back(back);
    rep.original.push_back(orig);
    rep.max_relative_error = std::max(rep.max_relative_error, std::fabs(back - orig) / std::max(1.0, std::fabs(orig)));
  }
  return rep;
}

/// d_{t0}(t) = [t0, t]_f.
template <Differentiable F>
AnchoredDifference<F> anchored_slope(const F& f, double t0) {
  return AnchoredDifference<F>(f, {t0});
}

struct ConnectionReport {
  std::vector<double> grid;
  std::vector<double> s_values;
  std::vector<double> t_of_d_values;
  double max_deviation = 0.0;
};

/// max |S(t0,f) - T(t0,d_{t0})| on a grid of the interval.
inline ConnectionReport connection_check(const FunctionModel& f, double t0, const Interval& interval, int grid = 64) {
  auto s = transform_S(f, t0, interval);
  auto d = anchored_slope(f, t0);
  auto t = transform_T(d, t0, interval);  // checks d' = [t0,t,t]_f > 0
  ConnectionReport rep;
  for (double x : interval.grid(static_cast<std::size_t>(grid))) {
    double a = s(x), b = t(x);
    rep.grid.push_back(x);
    rep.s_values.push_back(a);
    rep.t_of_d_values.push_back(b);
    rep.max_deviation = std::max(rep.max_deviation, std::fabs(a - b));
  }
  return rep;
}

struct SylvesterReport {
  Eigen::MatrixXd b;
  double det_a = 0.0;
  double det_b = 0.0;
  double rhs = 0.0;  ///< a00^(k-1) det A
  double residual = 0.0;
};

/// b_ij = a00 a_ij - a_i0 a_0j (i, j = 1..k) and the check det B = a00^(k-1) det A.
inline SylvesterReport sylvester_reduce(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() < 2) throw std::invalid_argument("need a square matrix of size at least 2");
  const Eigen::Index k = a.rows() - 1;
  SylvesterReport rep;
  rep.b.resize(k, k);
  for (Eigen::Index i = 1; i <= k; ++i)
    for (Eigen::Index j = 1; j <= k; ++j) rep.b(i - 1, j - 1) = a(0, 0) * a(i, j) - a(i, 0) * a(0, j);
  SquareMatrix<double> sa(static_cast<std::size_t>(k + 1)), sb(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i <= k; ++i)
    for (Eigen::Index j = 0; j <= k; ++j) sa(i, j) = a(i, j);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) sb(i, j) = rep.b(i, j);
  rep.det_a = determinant(sa).value;
  rep.det_b = determinant(sb).value;
  const double pw = std::pow(a(0, 0), static_cast<double>(k - 1));
  rep.rhs = pw * rep.det_a;
  const double scale = std::max({std::fabs(rep.det_b), std::fabs(rep.rhs), hadamard_bound(sb),
                                 std::fabs(pw) * hadamard_bound(sa)});
  rep.residual = scale == 0.0 ? 0.0 : std::fabs(rep.det_b - rep.rhs) / scale;
  return rep;
}

struct SPickReport {
  double lhs = 0.0;         ///< det of the Pick matrix of S built from the d_{t0} formula
  double lhs_direct = 0.0;  ///< det of the Pick matrix of the evaluated S model
  double rhs = 0.0;         ///< det([t0,t_i,t_j]_f)_{0..k} / ([t0,t0,t0]_f prod (d(t_j) - d(t0))^2)
  double residual = 0.0;
};

/// det([t_i,t_j]_S)_{1..k} = det([t0,t_i,t_j]_f)_{0..k} / ([t0,t0]_d prod_j (d(t_j) - d(t0))^2).
inline SPickReport s_pick_determinant_identity_check(const FunctionModel& f, double t0, std::span<const double> nodes,
                                                     std::optional<Interval> interval = std::nullopt) {
  const std::size_t k = nodes.size();
  if (k == 0) throw std::invalid_argument("need at least one node");
  const double scale = std::max(1.0, std::fabs(t0));
  for (std::size_t i = 0; i < k; ++i) {
    if (std::fabs(nodes[i] - t0) < kMinFactorizationGap * scale) throw std::invalid_argument("node coincides with t0");
    for (std::size_t j = i + 1; j < k; ++j)
      if (std::fabs(nodes[i] - nodes[j]) < kMinFactorizationGap * scale)
        throw std::invalid_argument("coincident nodes");
  }
  const auto opt = detail::extended_options();
  auto dd = [&](std::initializer_list<double> z) { return divided_difference_as<DoubleDouble>(f, std::span<const double>(z.begin(), z.size()), opt); };
  // d-differences: [t_i,t_j]_d = [t0,t_i,t_j]_f, d(t_j) - d(t0) = [t0,t_j]_f - [t0,t0]_f.
  const DoubleDouble a00 = dd({t0, t0, t0});
  std::vector<DoubleDouble> a0(k), rise(k);
  for (std::size_t i = 0; i < k; ++i) {
    a0[i] = dd({t0, t0, nodes[i]});
    rise[i] = dd({t0, nodes[i]}) - dd({t0, t0});
  }
  SquareMatrix<DoubleDouble> pick(k);
  SquareMatrix<double> uncancelled(k);  // entry sizes before the subtraction
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      DoubleDouble prod = a00 * dd({t0, nodes[i], nodes[j]}), outer = a0[i] * a0[j], den = a00 * rise[i] * rise[j];
      pick(i, j) = (prod - outer) / den;
      uncancelled(i, j) = (std::fabs(to_double(prod)) + std::fabs(to_double(outer))) / std::fabs(to_double(den));
    }
  SquareMatrix<DoubleDouble> kraus(k + 1);
  std::vector<double> all{t0};
  all.insert(all.end(), nodes.begin(), nodes.end());
  for (std::size_t i = 0; i <= k; ++i)
    for (std::size_t j = 0; j <= k; ++j) kraus(i, j) = dd({t0, all[i], all[j]});
  DoubleDouble denom = a00;
  for (std::size_t j = 0; j < k; ++j) denom = denom * rise[j] * rise[j];
  if (!(fabs(denom) > DoubleDouble(std::numeric_limits<double>::min()))) {
    throw std::domain_error("denominator underflow in the S Pick identity");
  }
  SPickReport rep;
  DoubleDouble lhs = determinant(pick).value;
  DoubleDouble rhs = determinant(kraus).value / denom;
  rep.lhs = to_double(lhs);
  rep.rhs = to_double(rhs);
  // Noise floor: determinant magnitudes that rounding of the entries can produce.
  const double floor = 1e-20 * hadamard_bound(uncancelled);
  const double mag = std::max({std::fabs(rep.lhs), std::fabs(rep.rhs), floor});
  rep.residual = mag == 0.0 ? 0.0 : std::fabs(to_double(lhs - rhs)) / mag;

  auto s = transform_S(f, t0, interval.value_or(f.domain().interior()));
  Eigen::MatrixXd direct(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) direct(i, j) = divided_difference(s, {nodes[i], nodes[j]});
  rep.lhs_direct = determinant_of(direct);
  return rep;
}

struct AnchorOutcome {
  double t0 = 0.0;
  ClassificationReport report;
};

struct TheoremAudit {
  ClassificationReport f_in_K_next;          ///< order n + 1 convexity of f
  Verdict s_in_P_n_for_all_t0 = Verdict::pass;
  int anchors_checked = 0;
  std::optional<AnchorOutcome> failing_anchor;
  double worst_anchor_margin = std::numeric_limits<double>::infinity();
  bool consistent = false;
};

inline constexpr int kAuditAnchors = 50;

/// 47 uniform anchors, the midpoint, and two anchors 1% of the width inside the endpoints.
inline std::vector<double> audit_anchors(const Interval& interval, std::uint64_t seed, int count = kAuditAnchors) {
  if (!interval.is_finite()) throw std::invalid_argument("anchor sampling needs a finite interval");
  const double w = interval.width();
  std::vector<double> out{interval.midpoint(), interval.lower() + 0.01 * w, interval.upper() - 0.01 * w};
  Rng rng = trial_rng(seed, 0xA4C0ull);
  while (static_cast<int>(out.size()) < count) {
    double t = interval.lower() + w * unit_uniform(rng);
    if (interval.interior_contains(t)) out.push_back(t);
  }
  return out;
}

/// f in K_{n+1}(I) against S(t0,f) in P_n(I) for sampled anchors t0.
inline TheoremAudit theorem_roundtrip_audit(const FunctionModel& f, const Interval& interval, int n,
                                            const SamplerConfig& cfg = {}) {
  for (double t : interval.grid(kHypothesisGrid))
    if (!(f.eval_derivative(t, 2) > 0.0)) throw HypothesisError("f'' > 0 fails at t=" + format_real(t));
  TheoremAudit audit;
  audit.f_in_K_next = test_n_convex(f, interval, n + 1, cfg);
  const auto anchors = audit_anchors(interval, cfg.seed);
  bool any_indeterminate = false;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    SamplerConfig c = cfg;
    c.seed = mix_seed(cfg.seed, 0x5000 + i);
    auto s = transform_S(f, anchors[i], interval);
    auto rep = test_n_monotone(s, interval, n, c);
    ++audit.anchors_checked;
    audit.worst_anchor_margin = std::min(audit.worst_anchor_margin, rep.worst_margin);
    if (rep.verdict == Verdict::indeterminate) any_indeterminate = true;
    if (rep.verdict == Verdict::fail) {
      audit.s_in_P_n_for_all_t0 = Verdict::fail;
      audit.failing_anchor = AnchorOutcome{anchors[i], std::move(rep)};
      break;
    }
  }
  if (audit.s_in_P_n_for_all_t0 != Verdict::fail && any_indeterminate)
    audit.s_in_P_n_for_all_t0 = Verdict::indeterminate;
  const bool k_pass = audit.f_in_K_next.verdict != Verdict::fail;
  const bool s_pass = audit.s_in_P_n_for_all_t0 != Verdict::fail;
  audit.consistent = k_pass == s_pass;
  return audit;
}

}  // namespace matconvex
