#pragma once

// Seeded acceptance suites. Each criterion is a list of named checks with the observed
// worst value and the bound it is held to.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "matconvex/classify.hpp"
#include "matconvex/gaps.hpp"
#include "matconvex/oracle.hpp"
#include "matconvex/report.hpp"
#include "matconvex/transforms.hpp"

namespace matconvex {

struct Check {
  std::string name;
  bool pass = false;
  double observed = 0.0;
  double bound = 0.0;
  std::string note;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::string suite;
  std::vector<Check> checks;
  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
};

namespace verify_detail {

inline Check at_most(std::string name, double observed, double bound, std::string note = {}) {
  return {std::move(name), observed <= bound, observed, bound, std::move(note)};
}

inline Check at_least(std::string name, double observed, double bound, std::string note = {}) {
  return {std::move(name), observed >= bound, observed, bound, std::move(note)};
}

inline Check holds(std::string name, bool ok, std::string note = {}) {
  return {std::move(name), ok, ok ? 1.0 : 0.0, 1.0, std::move(note)};
}

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * unit_uniform(rng); }

/// n + 1 nodes in (lo, hi) with pairwise gaps >= gap.
inline std::vector<double> spaced_nodes(Rng& rng, int count, double lo, double hi, double gap) {
  std::vector<double> out;
  while (static_cast<int>(out.size()) < count) {
    double x = uniform(rng, lo, hi);
    if (std::all_of(out.begin(), out.end(), [&](double y) { return std::fabs(x - y) >= gap; })) out.push_back(x);
  }
  return out;
}

inline FunctionModel random_polynomial(Rng& rng, int max_degree) {
  int deg = static_cast<int>(unit_uniform(rng) * (max_degree + 1));
  std::vector<double> c(static_cast<std::size_t>(deg) + 1);
  for (double& x : c) x = uniform(rng, -1.0, 1.0);
  return FunctionModel::polynomial(std::move(c));
}

inline double relative(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::max(std::fabs(a), std::fabs(b))); }

inline std::string verdict_pair(bool a, bool b) {
  return std::string(a ? "pass" : "fail") + "/" + (b ? "pass" : "fail");
}

}  // namespace verify_detail

/// 1. D_r(s) = det M_r * prod (t_j - t_i)^2 for random polynomials (degree <= 10) and exp.
inline CriterionResult verify_factorization(std::uint64_t seed, int trials = 1000) {
  using namespace verify_detail;
  CriterionResult r{1, "factorization identity", "identities", {}};
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = trial_rng(mix_seed(seed, 1), trial);
    FunctionModel f = trial % 2 == 0 ? random_polynomial(rng, 10) : catalog::exp();
    auto nodes = spaced_nodes(rng, 5, -1.0, 1.0, 1e-2);
    double s = nodes[static_cast<std::size_t>(unit_uniform(rng) * 5)];
    for (const auto& row : confluent_factorization_check(f, nodes, s)) worst = std::max(worst, row.residual);
  }
  r.checks.push_back(at_most("max relative residual over " + std::to_string(trials) + " trials, r <= 5", worst, 1e-8));
  return r;
}

/// 2. Recurrence against Hermite quadrature, the reciprocal closed form, and permutations.
inline CriterionResult verify_divided_differences(std::uint64_t seed) {
  using namespace verify_detail;
  CriterionResult r{2, "divided-difference engine", "identities", {}};
  const std::vector<FunctionModel> fs{catalog::exp(), catalog::reciprocal(), catalog::neg_log(), FunctionModel::power(1.5)};
  Rng rng = trial_rng(mix_seed(seed, 2), 0);
  double quad = 0.0;
  for (const auto& f : fs) {
    for (int n = 1; n <= 4; ++n) {
      for (int k = 0; k < 50; ++k) {
        std::vector<double> x(n + 1);
        for (double& v : x) v = uniform(rng, 0.5, 2.0);
        if (unit_uniform(rng) < 0.3) x[n] = x[0];  // a confluent pair
        quad = std::max(quad, relative(divided_difference(f, x), hermite_simplex_quadrature(f, x)));
      }
    }
  }
  r.checks.push_back(at_most("recurrence vs Hermite quadrature, n <= 4", quad, 1e-6));
  double recip = 0.0;
  for (int n = 0; n <= 6; ++n) {
    for (int k = 0; k < 100; ++k) {
      std::vector<double> x(n + 1);
      for (double& v : x) v = uniform(rng, 0.5, 2.0);
      double a = divided_difference(catalog::reciprocal(), x), b = reciprocal_closed_form(x);
      recip = std::max(recip, std::fabs(a - b) / std::fabs(b));
    }
  }
  r.checks.push_back(at_most("recurrence vs (-1)^n / prod x_i, n <= 6", recip, 1e-10));
  double perm = 0.0;
  for (int k = 0; k < 300; ++k) {
    const auto& f = fs[k % fs.size()];
    int n = 1 + k % 6;
    std::vector<double> x(n + 1);
    for (double& v : x) v = uniform(rng, 0.5, 2.0);
    double base = divided_difference(f, x);
    for (int p = 0; p < 3; ++p) {
      std::shuffle(x.begin(), x.end(), rng);
      perm = std::max(perm, relative(base, divided_difference(f, x)));
    }
  }
  r.checks.push_back(at_most("permutation invariance, n <= 6", perm, 1e-10));
  return r;
}

/// 3. Operator convex functions have PSD Kraus matrices and PSD K_n.
inline CriterionResult verify_kraus_necessity(std::uint64_t seed) {
  using namespace verify_detail;
  CriterionResult r{3, "Kraus necessity", "identities", {}};
  struct Case {
    FunctionModel f;
    Interval i;
    std::string name;
  };
  const std::vector<Case> cases{{catalog::reciprocal(), Interval::open(0.1, 10.0), "1/t on (0.1,10)"},
                                {catalog::neg_log(), Interval::open(0.1, 10.0), "-log on (0.1,10)"},
                                {catalog::square(), Interval::open(-5.0, 5.0), "t^2 on (-5,5)"}};
  for (const auto& c : cases) {
    SamplerConfig cfg;
    cfg.seed = mix_seed(seed, 3);
    double worst = std::numeric_limits<double>::infinity();
    bool ok = true;
    for (int n = 1; n <= 4; ++n) {
      auto rep = test_n_convex(c.f, c.i, n, cfg);
      ok = ok && rep.verdict != Verdict::fail;
      worst = std::min(worst, rep.worst_margin);
    }
    r.checks.push_back({"Kraus matrices PSD, 200 node sets, n <= 4: " + c.name, ok, worst, -cfg.tolerance, "worst margin"});
    bool kok = true;
    double kworst = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= 4; ++n) {
      for (double t : c.i.grid(64)) {
        auto k = derivative_matrix_K(c.f, t, n);
        kok = kok && is_psd(k.verdict);
        kworst = std::min(kworst, k.min_eigenvalue / std::max(1.0, k.frobenius_norm));
      }
    }
    r.checks.push_back({"K_n PSD at 64 grid points, n <= 4: " + c.name, kok, kworst, -kDefaultTolerance, "worst margin"});
  }
  return r;
}

namespace verify_detail {

/// Taylor coefficients p^(k)(0)/k! of a rational polynomial, by exact differentiation.
inline Rational taylor_at_zero(std::vector<Rational> b, int k) {
  Rational fact(1);
  for (int d = 0; d < k; ++d) {
    std::vector<Rational> next;
    for (std::size_t i = 1; i < b.size(); ++i) next.push_back(b[i] * Rational(static_cast<long long>(i)));
    b = next.empty() ? std::vector<Rational>{Rational(0)} : next;
    fact *= Rational(d + 1);
  }
  return b[0] / fact;
}

}  // namespace verify_detail

/// 4. Gap polynomials: certification, exact derivative matrices, exclusion minors, oracle.
inline CriterionResult verify_gaps(std::uint64_t seed) {
  using namespace verify_detail;
  CriterionResult r{4, "gap construction", "gaps", {}};
  SamplerConfig cfg;
  cfg.seed = mix_seed(seed, 4);
  for (int n : {2, 3}) {
    for (GapKind kind : {GapKind::concave, GapKind::convex}) {
      for (bool natural : {false, true}) {
        GapPolynomial g = natural ? build_natural_gap_polynomial(n, 2 * n, kind)
                                  : build_gap_polynomial(n, 2 * n, Interval::open(-1.0, 1.0), kind);
        auto mono = test_n_monotone(g.model, g.certified_interval, n, cfg);
        auto curv = kind == GapKind::concave ? test_n_concave(g.model, g.certified_interval, n, cfg)
                                             : test_n_convex(g.model, g.certified_interval, n, cfg);
        bool ok = mono.verdict != Verdict::fail && curv.verdict != Verdict::fail;
        r.checks.push_back({"n=" + std::to_string(n) + " " + std::string(gap_kind_name(kind)) + " kind on " +
                                g.certified_interval.to_string() + ": order-n monotone + " +
                                std::string(gap_kind_name(kind)),
                            ok, std::min(mono.worst_margin, curv.worst_margin), -cfg.tolerance, "worst margin"});
      }
    }
  }
  {
    auto b = gap_coefficients(4, GapKind::concave);
    const Rational k_expected[2][2] = {{Rational(-1, 2), Rational(1, 3)}, {Rational(1, 3), Rational(-1, 4)}};
    const Rational m_expected[2][2] = {{Rational(1), Rational(-1, 2)}, {Rational(-1, 2), Rational(1, 3)}};
    bool kexact = true, mexact = true;
    for (int i = 1; i <= 2; ++i) {
      for (int j = 1; j <= 2; ++j) {
        kexact = kexact && taylor_at_zero(b, i + j) == k_expected[i - 1][j - 1];
        mexact = mexact && taylor_at_zero(b, i + j - 1) == m_expected[i - 1][j - 1];
      }
    }
    r.checks.push_back(holds("K_2(p_4;0) = [[-1/2,1/3],[1/3,-1/4]] exactly", kexact));
    r.checks.push_back(holds("M_2(p_4;0) = [[1,-1/2],[-1/2,1/3]] exactly", mexact));
  }
  for (auto [m, n] : {std::pair{3, 2}, std::pair{4, 3}, std::pair{5, 3}}) {
    bool ok = true;
    for (GapKind kind : {GapKind::concave, GapKind::convex}) {
      auto b = gap_coefficients(m, kind);
      auto minor = degree_exclusion_minor(m, n, b);
      ok = ok && minor.determinant == -(b[m] * b[m]);
    }
    r.checks.push_back(holds("exclusion minor det = -b_m^2 exactly, (m,n)=(" + std::to_string(m) + "," +
                                 std::to_string(n) + ")",
                             ok));
  }
  for (int n : {2, 3}) {
    auto g = build_gap_polynomial(n, 2 * n, Interval::open(-1.0, 1.0), GapKind::concave);
    double worst = -std::numeric_limits<double>::infinity();
    for (double t : g.certified_interval.grid(64)) worst = std::max(worst, exclusion_minor_at(g.model, t, n));
    r.checks.push_back({"K_" + std::to_string(n + 1) + " rows (n-1,n+1) minor < 0 on 64 grid points, n=" +
                            std::to_string(n),
                        worst < 0.0, worst, 0.0, "largest determinant"});
  }
  {
    auto g = build_natural_gap_polynomial(2, 4, GapKind::concave);
    auto w = witness_search(g.model, g.certified_interval, 3, Property::concave, 10000, mix_seed(seed, 40));
    double observed = w.witness ? w.witness->deficit_min_eigenvalue : w.worst_deficit;
    r.checks.push_back({"oracle 3-concavity witness for n=2 gap polynomial, dim 3, 1e4 trials", observed <= -1e-6,
                        observed, -1e-6, w.witness ? "witness found" : "no witness; value is the lowest deficit seen"});
  }
  return r;
}

/// Catalog members with f'' > 0 on the stated interval for the 2-convexity audit.
struct AuditCase {
  std::string name;
  FunctionModel f;
  Interval interval;
};

inline std::vector<AuditCase> two_convex_catalog() {
  auto p4 = build_natural_gap_polynomial(2, 4, GapKind::concave);
  auto g4 = build_natural_gap_polynomial(2, 4, GapKind::convex);
  return {{"1/t", catalog::reciprocal(), Interval::open(0.5, 2.0)},
          {"-log", catalog::neg_log(), Interval::open(0.5, 2.0)},
          {"exp", catalog::exp(), Interval::open(-1.0, 1.0)},
          {"t^2", catalog::square(), Interval::open(-1.0, 1.0)},
          {"t^3", catalog::cube(), Interval::open(0.5, 2.0)},
          {"t^4", catalog::quartic(), Interval::open(0.5, 2.0)},
          {"-p4", p4.model.negated(), p4.certified_interval},
          {"g4", g4.model, g4.certified_interval}};
}

inline bool audit_passes(const TwoConvexAudit& a) {
  return a.kraus_sampling.pass && a.derivative_matrix.pass && a.product_inequality.pass && a.kraus_determinant.pass;
}

/// 5. The equivalent conditions for 2-convexity and locality.
inline CriterionResult verify_two_convex(std::uint64_t seed) {
  using namespace verify_detail;
  CriterionResult r{5, "2-convexity equivalence", "two-convex", {}};
  TwoConvexAuditConfig cfg;
  cfg.seed = mix_seed(seed, 5);
  cfg.kraus.seed = mix_seed(seed, 50);
  for (const auto& c : two_convex_catalog()) {
    auto a = two_convex_audit(c.f, c.interval, cfg);
    r.checks.push_back({"K_2 >= 0 and concavity of (f'')^(-1/3) agree at 1000 grid points: " + c.name,
                        a.pointwise_agreements == a.pointwise_total, static_cast<double>(a.pointwise_agreements),
                        static_cast<double>(a.pointwise_total), "agreements"});
    r.checks.push_back(holds("Kraus sampling, K_2, product inequality and Kraus determinant verdicts coincide: " + c.name + " (" +
                                 (audit_passes(a) ? "2-convex" : "not 2-convex") + ")",
                             a.interval_verdicts_coincide));
  }
  const Interval i1 = Interval::open(0.2, 1.0), i2 = Interval::open(0.8, 2.0), both = Interval::open(0.2, 2.0);
  const std::vector<AuditCase> local{{"1/t", catalog::reciprocal(), both}, {"-log", catalog::neg_log(), both},
                                     {"exp", catalog::exp(), both},       {"t^2", catalog::square(), both},
                                     {"t^3", catalog::cube(), both},      {"t^4", catalog::quartic(), both}};
  for (const auto& c : local) {
    bool p1 = audit_passes(two_convex_audit(c.f, i1, cfg));
    bool p2 = audit_passes(two_convex_audit(c.f, i2, cfg));
    if (!(p1 && p2)) continue;
    bool pu = audit_passes(two_convex_audit(c.f, both, cfg));
    r.checks.push_back(holds("locality: passes on (0.2,1) and (0.8,2) => passes on (0.2,2): " + c.name, pu));
  }
  return r;
}

/// 6. [x0..xn]_exp >= exp(mean x) / n!.
inline CriterionResult verify_exp_inequality(std::uint64_t seed, int tuples = 1000) {
  using namespace verify_detail;
  CriterionResult r{6, "divided-difference inequality", "identities", {}};
  double worst = std::numeric_limits<double>::infinity();
  Rng rng = trial_rng(mix_seed(seed, 6), 0);
  for (int k = 0; k < tuples; ++k) {
    int n = 1 + k % 5;
    std::vector<double> x(n + 1);
    for (double& v : x) v = uniform(rng, -3.0, 3.0);
    auto g = geometric_mean_bound_check(catalog::exp(), x, Curvature::convex);
    worst = std::min(worst, g.margin);
  }
  r.checks.push_back(at_least("min [x0..xn]_exp - exp(mean)/n!, n <= 5", worst, -1e-12));
  return r;
}

/// 7. Transforms: round trips, connection, Sylvester, S-Pick identity, theorem audit.
inline CriterionResult verify_transforms(std::uint64_t seed) {
  using namespace verify_detail;
  CriterionResult r{7, "fractional transforms", "transforms", {}};
  struct Case {
    std::string name;
    FunctionModel f;
    Interval interval;
    double t0;
  };
  const std::vector<Case> t_cases{{"exp", catalog::exp(), Interval::open(-1.0, 1.0), 0.0},
                                  {"t^2", catalog::square(), Interval::open(0.1, 5.0), 1.0},
                                  {"log", FunctionModel::logarithm(), Interval::open(0.1, 10.0), 2.0},
                                  {"sqrt", FunctionModel::power(0.5), Interval::open(0.1, 10.0), 1.0},
                                  {"affine", FunctionModel::affine(2.0, 1.0), Interval::open(-3.0, 3.0), 0.5}};
  const std::vector<Case> s_cases{{"exp", catalog::exp(), Interval::open(-1.0, 1.0), 0.0},
                                  {"1/t", catalog::reciprocal(), Interval::open(0.1, 10.0), 1.0},
                                  {"-log", catalog::neg_log(), Interval::open(0.1, 10.0), 2.0},
                                  {"t^2", catalog::square(), Interval::open(-1.0, 1.0), 0.0},
                                  {"t^3", catalog::cube(), Interval::open(0.1, 5.0), 1.0},
                                  {"t^4", catalog::quartic(), Interval::open(0.5, 2.0), 1.0},
                                  {"t^2+t", FunctionModel::polynomial({0, 1, 1}), Interval::open(-1.0, 4.0), 0.0}};
  double rt_t = 0.0, rt_s = 0.0, conn = 0.0;
  for (const auto& c : t_cases) rt_t = std::max(rt_t, round_trip(c.f, TransformKind::T, c.t0, c.interval).max_relative_error);
  for (const auto& c : s_cases) {
    rt_s = std::max(rt_s, round_trip(c.f, TransformKind::S, c.t0, c.interval).max_relative_error);
    conn = std::max(conn, connection_check(c.f, c.t0, c.interval).max_deviation);
  }
  r.checks.push_back(at_most("T round trip, 64-point grids", rt_t, 1e-8));
  r.checks.push_back(at_most("S round trip, 64-point grids", rt_s, 1e-8));
  r.checks.push_back(at_most("connection S(t0,f) = T(t0,d_t0)", conn, 1e-9));

  double syl = 0.0;
  Rng rng = trial_rng(mix_seed(seed, 7), 0);
  for (int k = 0; k < 1000; ++k) {
    int size = 2 + k % 6;  // k = size - 1 in 1..6
    Eigen::MatrixXd a(size, size);
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j) a(i, j) = uniform(rng, -1.0, 1.0);
    syl = std::max(syl, sylvester_reduce(a).residual);
  }
  r.checks.push_back(at_most("Sylvester residual, 1000 random matrices, k <= 6", syl, 1e-10));

  double spick = 0.0;
  const std::vector<Case> p_cases{{"exp", catalog::exp(), Interval::open(-1.0, 1.0), 0.0},
                                  {"1/t", catalog::reciprocal(), Interval::open(0.5, 4.0), 1.0},
                                  {"-log", catalog::neg_log(), Interval::open(0.5, 4.0), 1.0},
                                  {"t^2+t^4/100", FunctionModel::polynomial({0, 0, 1, 0, 0.01}), Interval::open(0.0, 1.0), 0.5}};
  for (const auto& c : p_cases) {
    for (int trial = 0; trial < 50; ++trial) {
      int k = 1 + trial % 4;
      const double lo = c.interval.lower(), hi = c.interval.upper();
      auto pts = spaced_nodes(rng, k + 1, lo + 0.01 * (hi - lo), hi - 0.01 * (hi - lo), 1e-2);
      double t0 = pts.back();
      pts.pop_back();
      spick = std::max(spick, s_pick_determinant_identity_check(c.f, t0, pts, c.interval).residual);
    }
  }
  r.checks.push_back(at_most("S Pick determinant identity, k <= 4", spick, 1e-7));

  SamplerConfig cfg;
  cfg.seed = mix_seed(seed, 70);
  auto g4 = build_natural_gap_polynomial(2, 4, GapKind::convex);
  struct AuditCaseT {
    std::string name;
    FunctionModel f;
    Interval interval;
    bool expect_pass;
  };
  for (const auto& c : {AuditCaseT{"1/t on (0.1,10)", catalog::reciprocal(), Interval::open(0.1, 10.0), true},
                        AuditCaseT{"convex-kind gap polynomial on " + g4.certified_interval.to_string(), g4.model,
                                   g4.certified_interval, false},
                        AuditCaseT{"exp on (-1,1)", catalog::exp(), Interval::open(-1.0, 1.0), false}}) {
    auto a = theorem_roundtrip_audit(c.f, c.interval, 2, cfg);
    bool kp = a.f_in_K_next.verdict != Verdict::fail, sp = a.s_in_P_n_for_all_t0 != Verdict::fail;
    bool certified = c.expect_pass || (a.f_in_K_next.counterexample && a.failing_anchor);
    r.checks.push_back(holds("round-trip audit n=2, " + c.name + ": " + verdict_pair(kp, sp) + " expected " +
                                 verdict_pair(c.expect_pass, c.expect_pass),
                             a.consistent && kp == c.expect_pass && certified));
  }
  return r;
}

struct Scenario {
  std::string function;
  Interval interval;
  int order;
  Property property;
};

inline std::vector<Scenario> cross_validation_scenarios() {
  const Interval wide = Interval::open(0.1, 10.0);
  return {{"recip", wide, 2, Property::convex},
          {"recip", wide, 3, Property::convex},
          {"recip", wide, 4, Property::convex},
          {"affine(-1,0)@log", wide, 3, Property::convex},
          {"affine(-1,0)@log", wide, 4, Property::convex},
          {"poly:0,0,1", Interval::open(-5.0, 5.0), 3, Property::convex},
          {"poly:0,0,1", Interval::open(-5.0, 5.0), 4, Property::convex},
          {"poly:0,0,0,1", wide, 2, Property::convex},
          {"poly:0,0,0,1", Interval::open(0.1, 3.0), 3, Property::convex},
          {"poly:0,0,0,0,1", Interval::open(0.5, 2.0), 2, Property::convex},
          {"exp", Interval::open(-1.0, 1.0), 2, Property::convex},
          {"pow:1.5", wide, 3, Property::convex},
          {"pow:0.5", wide, 3, Property::concave},
          {"log", wide, 4, Property::concave},
          {"log", wide, 3, Property::monotone},
          {"pow:0.5", wide, 4, Property::monotone},
          {"poly:0,0,1", Interval::open(-2.0, 2.0), 2, Property::monotone},
          {"exp", Interval::open(0.0, 2.0), 2, Property::monotone},
          {"affine:2,1", Interval::open(-3.0, 3.0), 4, Property::monotone},
          {"recip", wide, 2, Property::monotone}};
}

/// 8. Criterion sampling against the matrix-level definition.
inline CriterionResult verify_cross_validation(std::uint64_t seed) {
  CriterionResult r{8, "criterion-definition cross-validation", "oracle", {}};
  int agree = 0, total = 0;
  std::string disagreements;
  for (const auto& s : cross_validation_scenarios()) {
    CrossValidationConfig cfg;
    cfg.criterion.seed = mix_seed(seed, 8);
    auto cv = cross_validate(parse_function(s.function), s.interval, s.order, s.property, cfg);
    ++total;
    if (cv.agree) {
      ++agree;
    } else {
      disagreements += s.function + " " + s.interval.to_string() + " n=" + std::to_string(s.order) + "; ";
    }
  }
  r.checks.push_back({std::to_string(total) + " scenarios agree (dimension <= 4)", agree == total,
                      static_cast<double>(agree), static_cast<double>(total), disagreements});
  return r;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"identities", "gaps", "two-convex", "transforms", "oracle", "all"};
  return names;
}

struct CriterionTask {
  int id = 0;
  std::function<CriterionResult(std::uint64_t)> run;
};

/// The criteria of a suite, in id order.
inline std::vector<CriterionTask> suite_tasks(std::string_view suite) {
  if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end()) {
    throw std::invalid_argument("unknown suite '" + std::string(suite) + "'");
  }
  const bool all = suite == "all";
  std::vector<CriterionTask> out;
  auto add = [&](int id, std::string_view owner, CriterionResult (*fn)(std::uint64_t)) {
    if (all || suite == owner) out.push_back({id, fn});
  };
  add(1, "identities", [](std::uint64_t s) { return verify_factorization(s); });
  add(2, "identities", verify_divided_differences);
  add(3, "identities", verify_kraus_necessity);
  add(4, "gaps", verify_gaps);
  add(5, "two-convex", verify_two_convex);
  add(6, "identities", [](std::uint64_t s) { return verify_exp_inequality(s); });
  add(7, "transforms", verify_transforms);
  add(8, "oracle", verify_cross_validation);
  return out;
}

inline std::vector<CriterionResult> run_suite(std::string_view suite, std::uint64_t seed) {
  std::vector<CriterionResult> out;
  for (const auto& task : suite_tasks(suite)) out.push_back(task.run(seed));
  return out;
}

namespace json {

inline Json criterion(const CriterionResult& c) {
  Json checks = Json::array();
  for (const auto& k : c.checks) {
    checks.push_back({{"name", k.name}, {"pass", k.pass}, {"observed", real(k.observed)}, {"bound", real(k.bound)},
                      {"note", k.note}});
  }
  return {{"id", c.id}, {"title", c.title}, {"suite", c.suite}, {"pass", c.pass()}, {"checks", checks}};
}

}  // namespace json

}  // namespace matconvex
