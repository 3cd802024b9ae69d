#pragma once

// Sampled order-n verdicts from the criterion matrices.
//
// Sampling cannot prove a universally quantified criterion, so a "pass" here is a
// sampled pass: no violation among cfg.trials node sets. A "fail" always carries the
// violating node set and the offending eigenvalue.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "matconvex/criterion_matrices.hpp"
#include "matconvex/function_model.hpp"
#include "matconvex/sampler.hpp"

namespace matconvex {

enum class Property { convex, concave, monotone };
enum class Verdict { pass, fail, indeterminate };

inline std::string_view property_name(Property p) {
  switch (p) {
    case Property::convex: return "convex";
    case Property::concave: return "concave";
    case Property::monotone: return "monotone";
  }
  return "unknown";
}

inline Property parse_property(std::string_view s) {
  if (s == "convex") return Property::convex;
  if (s == "concave") return Property::concave;
  if (s == "monotone") return Property::monotone;
  throw ParseError("unknown property '" + std::string(s) + "'");
}

inline std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "sampled-pass";
    case Verdict::fail: return "fail";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "unknown";
}

struct Counterexample {
  int trial = 0;
  std::vector<double> nodes;
  std::optional<double> s;  ///< Kraus anchor; absent for Pick matrices
  double min_eigenvalue = 0.0;
  double threshold = 0.0;  ///< tolerance * max(1, ||A||_F) that min_eigenvalue fell below
  Eigen::MatrixXd matrix;
};

struct ClassificationReport {
  std::string function;
  Interval interval = Interval::real_line();
  int order = 1;
  Property property = Property::convex;
  Verdict verdict = Verdict::pass;
  SamplerConfig config;
  int trials_run = 0;
  int matrices_checked = 0;
  int indeterminate_matrices = 0;
  /// min over checked matrices of lambda_min / max(1, ||A||_F)
  double worst_margin = std::numeric_limits<double>::infinity();
  std::optional<Counterexample> counterexample;
};

namespace detail {

template <Differentiable F, class MatrixFor>
ClassificationReport run_sampled_test(const F& f, const Interval& interval, int n, Property property,
                                      const SamplerConfig& cfg, std::string name, MatrixFor&& matrices_for) {
  if (n < 1) throw std::invalid_argument("order must be at least 1");
  if (!f.contains(interval.midpoint())) throw DomainError("interval " + interval.to_string() + " outside the domain");
  NodeSampler sampler(interval, cfg);
  ClassificationReport rep;
  rep.function = std::move(name);
  rep.interval = interval;
  rep.order = n;
  rep.property = property;
  rep.config = cfg;
  for (int trial = 0; trial < cfg.trials; ++trial) {
    std::vector<double> nodes = sampler.draw(trial, n);
    ++rep.trials_run;
    bool failed = false;
    matrices_for(nodes, [&](const SymmetricMatrixReport& m, std::optional<double> s) {
      if (failed) return;
      ++rep.matrices_checked;
      rep.worst_margin = std::min(rep.worst_margin, m.min_eigenvalue / std::max(1.0, m.frobenius_norm));
      if (m.verdict == Definiteness::indeterminate) ++rep.indeterminate_matrices;
      if (m.verdict == Definiteness::indefinite) {
        failed = true;
        rep.counterexample = Counterexample{trial, nodes, s, m.min_eigenvalue, m.threshold(), m.matrix};
      }
    });
    if (failed) {
      rep.verdict = Verdict::fail;
      return rep;
    }
  }
  rep.verdict = rep.indeterminate_matrices > 0 ? Verdict::indeterminate : Verdict::pass;
  return rep;
}

template <Differentiable F>
std::string describe(const F& f) {
  if constexpr (requires { f.spec(); }) {
    return f.spec();
  } else {
    return "<derived>";
  }
}

}  // namespace detail

/// Samples Kraus matrices H(s) = ([t_i, s, t_j]_f) for s = t_1..t_n and requires each to be
/// positive semidefinite. Concavity is convexity of -f.
template <Differentiable F>
ClassificationReport test_n_convex(const F& f, const Interval& interval, int n, const SamplerConfig& cfg = {},
                                   Property property = Property::convex) {
  if (property == Property::monotone) throw std::invalid_argument("use test_n_monotone for monotonicity");
  const double sign = property == Property::concave ? -1.0 : 1.0;
  return detail::run_sampled_test(
      f, interval, n, property, cfg, detail::describe(f), [&](const std::vector<double>& nodes, auto&& sink) {
        for (double s : nodes) {
          auto h = kraus_matrix(f, nodes, s, cfg.tolerance, cfg.strict);
          if (sign < 0) h = analyze_symmetric(-h.matrix, cfg.tolerance, cfg.strict);
          sink(h, s);
        }
      });
}

template <Differentiable F>
ClassificationReport test_n_concave(const F& f, const Interval& interval, int n, const SamplerConfig& cfg = {}) {
  return test_n_convex(f, interval, n, cfg, Property::concave);
}

/// Samples Pick matrices ([t_i, t_j]_f) and requires each to be positive semidefinite.
template <Differentiable F>
ClassificationReport test_n_monotone(const F& f, const Interval& interval, int n, const SamplerConfig& cfg = {}) {
  return detail::run_sampled_test(f, interval, n, Property::monotone, cfg, detail::describe(f),
                                  [&](const std::vector<double>& nodes, auto&& sink) {
                                    sink(pick_matrix(f, nodes, cfg.tolerance, cfg.strict), std::nullopt);
                                  });
}

/// Dispatches on the property.
template <Differentiable F>
ClassificationReport classify(const F& f, const Interval& interval, int n, Property property,
                              const SamplerConfig& cfg = {}) {
  if (property == Property::monotone) return test_n_monotone(f, interval, n, cfg);
  return test_n_convex(f, interval, n, cfg, property);
}

struct WindowSearchConfig {
  int grid = 64;
  double initial_radius = 1e-3;
  int max_doublings = 60;
  int bisections = 40;
  double tolerance = kDefaultTolerance;
};

/// If K_n(f;t0) is positive definite, the largest symmetric window around t0 (clipped to
/// the domain) on which K_n(f;t) stays positive definite at every grid point; otherwise none.
inline std::optional<Interval> local_convexity_window(const FunctionModel& f, double t0, int n,
                                                      const WindowSearchConfig& cfg = {}) {
  const Interval& dom = f.domain();
  if (!dom.interior_contains(t0)) throw DomainError("anchor t0=" + format_real(t0) + " is not interior");
  auto pd_at = [&](double t) {
    return derivative_matrix_K(f, t, n, cfg.tolerance).verdict == Definiteness::positive_definite;
  };
  if (!pd_at(t0)) return std::nullopt;
  auto window = [&](double r) {
    double lo = std::max(t0 - r, dom.lower()), hi = std::min(t0 + r, dom.upper());
    return Interval(lo, hi);
  };
  auto covers_domain = [&](double r) { return t0 - r <= dom.lower() && t0 + r >= dom.upper(); };
  auto ok = [&](double r) {
    for (double t : window(r).grid(static_cast<std::size_t>(cfg.grid)))
      if (!pd_at(t)) return false;
    return true;
  };
  const double scale = std::max(1.0, std::fabs(t0));
  double good = 0.0, bad = cfg.initial_radius * scale;
  for (int i = 0; i < cfg.max_doublings && ok(bad); ++i) {
    good = bad;
    if (covers_domain(good)) return dom.interior();
    bad *= 2.0;
  }
  if (good > 0.0 && ok(bad)) return window(bad);  // doubling budget exhausted
  for (int i = 0; i < cfg.bisections; ++i) {
    double mid = 0.5 * (good + bad);
    if (ok(mid)) {
      good = mid;
    } else {
      bad = mid;
    }
  }
  if (good == 0.0) return std::nullopt;
  return window(good);
}

struct ConditionVerdict {
  bool pass = true;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::vector<double> worst_at;  ///< grid point or pair achieving the worst margin
  int evaluated = 0;
};

struct TwoConvexAuditConfig {
  int grid = 1000;
  int pairs = 1000;
  std::uint64_t seed = 0;
  double tolerance = kDefaultTolerance;
  SamplerConfig kraus;  ///< sampler for the Kraus condition
};

struct TwoConvexAudit {
  std::string function;
  Interval interval = Interval::real_line();
  ConditionVerdict kraus_sampling;       ///< sampled 2-convexity
  ConditionVerdict derivative_matrix;    ///< [[f''/2, f'''/6], [f'''/6, f''''/24]] PSD
  ConditionVerdict concave_root;         ///< c = f''^(-1/3) concave
  ConditionVerdict product_inequality;   ///< [t0,t0,t0][t1,t1,t1] >= [t0,t1,t1][t0,t0,t1]
  ConditionVerdict kraus_determinant;    ///< [t0,t0,t0][t0,t1,t1] >= [t0,t0,t1]^2
  int pointwise_agreements = 0;          ///< grid points where derivative_matrix and concave_root agree
  int pointwise_total = 0;
  bool interval_verdicts_coincide = false;  ///< all but concave_root agree on the interval
  std::optional<Counterexample> counterexample;
};

namespace detail {

inline void record(ConditionVerdict& c, double margin, double tolerance, std::vector<double> at) {
  ++c.evaluated;
  if (margin < c.worst_margin) {
    c.worst_margin = margin;
    c.worst_at = std::move(at);
  }
  if (margin < -tolerance) c.pass = false;
}

/// Signed value divided by the magnitude of its two competing terms.
inline double balanced_margin(double plus, double minus) {
  double scale = std::fabs(plus) + std::fabs(minus);
  return scale == 0.0 ? 0.0 : (plus - minus) / scale;
}

}  // namespace detail

/// Evaluates the five equivalent conditions for 2-convexity of a C^4 function with f'' > 0.
inline TwoConvexAudit two_convex_audit(const FunctionModel& f, const Interval& interval,
                                       const TwoConvexAuditConfig& cfg = {}) {
  if (!interval.is_finite()) throw std::invalid_argument("audit needs a finite interval");
  TwoConvexAudit out;
  out.function = f.spec();
  out.interval = interval;
  const auto grid = interval.grid(static_cast<std::size_t>(cfg.grid));
  for (double t : grid) {
    if (!(f.eval_derivative(t, 2) > 0.0)) {
      throw HypothesisError("two-convex audit needs f'' > 0; f''(" + format_real(t) + ") <= 0");
    }
  }
  const double tol = cfg.tolerance;
  for (double t : grid) {
    double d2 = f.eval_derivative(t, 2), d3 = f.eval_derivative(t, 3), d4 = f.eval_derivative(t, 4);
    Eigen::MatrixXd m(2, 2);
    m << d2 / 2.0, d3 / 6.0, d3 / 6.0, d4 / 24.0;
    auto rep = analyze_symmetric(m, tol);
    detail::record(out.derivative_matrix, rep.min_eigenvalue / std::max(1.0, rep.frobenius_norm), tol, {t});
    if (!is_psd(rep.verdict)) out.derivative_matrix.pass = false;

    double q = detail::balanced_margin(d2 * d4, (4.0 / 3.0) * d3 * d3);
    detail::record(out.concave_root, q, tol, {t});
    double det = detail::balanced_margin((d2 / 2.0) * (d4 / 24.0), (d3 / 6.0) * (d3 / 6.0));
    ++out.pointwise_total;
    if ((det >= -tol) == (q >= -tol)) ++out.pointwise_agreements;
  }

  Rng rng = trial_rng(cfg.seed, 0x2C0);
  for (int k = 0; k < cfg.pairs; ++k) {
    double t0 = interval.from_unit(0.001 + 0.998 * unit_uniform(rng));
    double t1 = interval.from_unit(0.001 + 0.998 * unit_uniform(rng));
    double a = divided_difference(f, {t0, t0, t0});
    double b = divided_difference(f, {t1, t1, t1});
    double c = divided_difference(f, {t0, t1, t1});
    double d = divided_difference(f, {t0, t0, t1});
    detail::record(out.product_inequality, detail::balanced_margin(a * b, c * d), tol, {t0, t1});
    detail::record(out.kraus_determinant, detail::balanced_margin(a * c, d * d), tol, {t0, t1});
  }

  auto kraus = test_n_convex(f, interval, 2, cfg.kraus);
  out.kraus_sampling.pass = kraus.verdict != Verdict::fail;
  out.kraus_sampling.worst_margin = kraus.worst_margin;
  out.kraus_sampling.evaluated = kraus.matrices_checked;
  if (kraus.counterexample) {
    out.kraus_sampling.worst_at = kraus.counterexample->nodes;
    out.counterexample = kraus.counterexample;
  }
  bool v1 = out.kraus_sampling.pass;
  out.interval_verdicts_coincide = v1 == out.derivative_matrix.pass && v1 == out.product_inequality.pass &&
                                   v1 == out.kraus_determinant.pass;
  return out;
}

struct PropagationReport {
  double t0 = 0.0, t1 = 0.0;
  double determinant_at_t1 = 0.0;
  bool vanishes_at_t1 = false;
  std::vector<double> grid;
  std::vector<double> determinants;
  bool all_vanish = false;
  bool pass = false;
};

/// [t0,t0,t0][t0,t,t] - [t0,t0,t]^2 together with its natural magnitude.
inline std::pair<double, double> kraus_pair_determinant(const FunctionModel& f, double t0, double t) {
  DividedDifferenceOptions opt;
  opt.precision = Precision::extended;
  double a = divided_difference(f, {t0, t0, t0}, opt);
  double b = divided_difference(f, {t0, t, t}, opt);
  double c = divided_difference(f, {t0, t0, t}, opt);
  return {a * b - c * c, std::fabs(a * b) + c * c};
}

/// If the pair determinant vanishes at t1 != t0 it must vanish at every grid point between.
inline PropagationReport vanishing_determinant_propagation_check(const FunctionModel& f, double t0, double t1,
                                                                 int grid = 64,
                                                                 double tolerance = kDefaultTolerance) {
  if (t0 == t1) throw std::invalid_argument("t1 must differ from t0");
  PropagationReport rep;
  rep.t0 = t0;
  rep.t1 = t1;
  auto [d1, s1] = kraus_pair_determinant(f, t0, t1);
  rep.determinant_at_t1 = d1;
  rep.vanishes_at_t1 = std::fabs(d1) <= tolerance * s1;
  Interval between(std::min(t0, t1), std::max(t0, t1));
  rep.all_vanish = true;
  for (double t : between.grid(static_cast<std::size_t>(grid))) {
    auto [d, s] = kraus_pair_determinant(f, t0, t);
    if (d < -tolerance * s) {
      throw HypothesisError("pair determinant is negative at t=" + format_real(t) + " (" + format_real(d) + ")");
    }
    rep.grid.push_back(t);
    rep.determinants.push_back(d);
    if (std::fabs(d) > tolerance * s) rep.all_vanish = false;
  }
  rep.pass = !rep.vanishes_at_t1 || rep.all_vanish;
  return rep;
}

enum class AuditOutcome { exempt, pass, fail, not_applicable };

inline std::string_view audit_outcome_name(AuditOutcome a) {
  switch (a) {
    case AuditOutcome::exempt: return "exempt";
    case AuditOutcome::pass: return "pass";
    case AuditOutcome::fail: return "fail";
    case AuditOutcome::not_applicable: return "not_applicable";
  }
  return "unknown";
}

struct DegeneracyReport {
  bool constant = false;
  bool affine = false;
  AuditOutcome monotone_audit = AuditOutcome::not_applicable;  ///< 2-monotone, non-constant => f' > 0
  AuditOutcome convex_audit = AuditOutcome::not_applicable;    ///< 2-convex, non-affine => f'' > 0
  bool pass() const { return monotone_audit != AuditOutcome::fail && convex_audit != AuditOutcome::fail; }
};

/// Contrapositive audits of the order-2 degeneracy facts (2-monotone => f' > 0 or affine,
/// 2-convex => f'' > 0 or affine), given order-2 verdicts.
inline DegeneracyReport degeneracy_checks(const FunctionModel& f, const Interval& interval, bool passed_2_monotone,
                                          bool passed_2_convex, int grid = 64, double tolerance = kDefaultTolerance) {
  DegeneracyReport rep;
  auto pts = interval.grid(static_cast<std::size_t>(grid));
  rep.constant = std::all_of(pts.begin(), pts.end(), [&](double t) { return std::fabs(f.eval_derivative(t, 1)) <= tolerance; });
  rep.affine = std::all_of(pts.begin(), pts.end(), [&](double t) { return std::fabs(f.eval_derivative(t, 2)) <= tolerance; });
  if (passed_2_monotone) {
    if (rep.constant) {
      rep.monotone_audit = AuditOutcome::exempt;
    } else {
      bool ok = std::all_of(pts.begin(), pts.end(), [&](double t) { return f.eval_derivative(t, 1) > 0.0; });
      rep.monotone_audit = ok ? AuditOutcome::pass : AuditOutcome::fail;
    }
  }
  if (passed_2_convex) {
    if (rep.affine) {
      rep.convex_audit = AuditOutcome::exempt;
    } else {
      bool ok = std::all_of(pts.begin(), pts.end(), [&](double t) { return f.eval_derivative(t, 2) > 0.0; });
      rep.convex_audit = ok ? AuditOutcome::pass : AuditOutcome::fail;
    }
  }
  return rep;
}

/// Runs the order-2 classifications and then the degeneracy audits.
inline DegeneracyReport degeneracy_checks(const FunctionModel& f, const Interval& interval,
                                          const SamplerConfig& cfg = {}) {
  bool mono = test_n_monotone(f, interval, 2, cfg).verdict != Verdict::fail;
  bool conv = test_n_convex(f, interval, 2, cfg).verdict != Verdict::fail;
  return degeneracy_checks(f, interval, mono, conv);
}

}  // namespace matconvex
