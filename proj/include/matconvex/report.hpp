#pragma once

// JSON encodings of the result records. Non-finite reals become null.

#include <string>
#include <vector>

#include <json.hpp>

#include "matconvex/classify.hpp"
#include "matconvex/gaps.hpp"
#include "matconvex/oracle.hpp"
#include "matconvex/transforms.hpp"

#ifndef MATCONVEX_VERSION
#define MATCONVEX_VERSION "0.1.0"
#endif

namespace matconvex {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "matconvex-report/1";
inline constexpr const char* kVersion = MATCONVEX_VERSION;

namespace json {

inline Json real(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline Json reals(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(real(x));
  return a;
}

inline Json matrix(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(real(m(i, j)));
    rows.push_back(std::move(r));
  }
  return rows;
}

/// Row-major [re, im] pairs.
inline Json complex_matrix(const HermitianMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(Json::array({real(m(i, j).real()), real(m(i, j).imag())}));
  return out;
}

inline Json interval(const Interval& i) {
  return {{"text", i.to_string()},
          {"lower", real(i.lower())},
          {"upper", real(i.upper())},
          {"lower_closed", i.lower_closed()},
          {"upper_closed", i.upper_closed()}};
}

inline Json function(const FunctionModel& f) {
  Json j{{"spec", f.spec()}, {"family", family_name(f.family())}, {"parameters", reals(f.parameters())}};
  if (f.pre_map()) {
    const auto& m = *f.pre_map();
    j["pre_map"] = {{"a", m.a}, {"b", m.b}, {"c", m.c}, {"d", m.d}};
  } else {
    j["pre_map"] = nullptr;
  }
  if (f.post_affine()) {
    j["post_affine"] = {{"scale", f.post_affine()->scale}, {"shift", f.post_affine()->shift}};
  } else {
    j["post_affine"] = nullptr;
  }
  j["domain"] = interval(f.domain());
  return j;
}

inline Json symmetric(const SymmetricMatrixReport& r, const std::string& kind) {
  return {{"kind", kind},
          {"entries", matrix(r.matrix)},
          {"eigenvalues", reals(r.eigenvalues)},
          {"min_eigenvalue", real(r.min_eigenvalue)},
          {"frobenius_norm", real(r.frobenius_norm)},
          {"verdict", definiteness_name(r.verdict)},
          {"tolerance", r.tolerance},
          {"threshold", real(r.threshold())}};
}

inline Json sampler(const SamplerConfig& c) {
  return {{"trials", c.trials},
          {"seed", c.seed},
          {"node_strategy", strategy_name(c.node_strategy)},
          {"min_gap", c.min_gap},
          {"tolerance", c.tolerance},
          {"strict", c.strict}};
}

inline Json counterexample(const Counterexample& c) {
  return {{"trial", c.trial},
          {"nodes", reals(c.nodes)},
          {"s", c.s ? real(*c.s) : Json(nullptr)},
          {"min_eigenvalue", real(c.min_eigenvalue)},
          {"threshold", real(c.threshold)},
          {"matrix", matrix(c.matrix)}};
}

inline Json classification(const ClassificationReport& r) {
  return {{"function", r.function},
          {"interval", interval(r.interval)},
          {"order", r.order},
          {"property", property_name(r.property)},
          {"verdict", verdict_name(r.verdict)},
          {"sampler", sampler(r.config)},
          {"evidence",
           {{"trials_run", r.trials_run},
            {"matrices_checked", r.matrices_checked},
            {"indeterminate_matrices", r.indeterminate_matrices},
            {"worst_margin", real(r.worst_margin)}}},
          {"counterexample", r.counterexample ? counterexample(*r.counterexample) : Json(nullptr)}};
}

inline Json gap(const GapPolynomial& g) {
  Json coeffs = Json::array();
  for (std::size_t k = 1; k < g.coefficients.size(); ++k) coeffs.push_back(rational_string(g.coefficients[k]));
  return {{"kind", gap_kind_name(g.kind)},
          {"target_order", g.target_order},
          {"degree", g.degree},
          {"coefficients", coeffs},
          {"raw_alpha", g.raw_alpha},
          {"alpha", g.alpha},
          {"center", g.center},
          {"half_width", g.half_width},
          {"certified_interval", interval(g.certified_interval)},
          {"model", function(g.model)}};
}

inline Json hermitian(const HermitianSample& s) {
  return {{"dimension", s.dimension}, {"spectrum", reals(s.spectrum)}, {"matrix", complex_matrix(s.matrix)}};
}

inline Json witness(const WitnessPair& w) {
  return {{"property", property_name(w.property)},
          {"a", hermitian(w.a)},
          {w.property == Property::monotone ? "a_plus_p" : "b", hermitian(w.b)},
          {"lambda", w.lambda},
          {"deficit_min_eigenvalue", real(w.deficit_min_eigenvalue)},
          {"scale", w.scale},
          {"seed_trace", {{"seed", w.seed_trace.seed}, {"trial", w.seed_trace.trial}}}};
}

inline Json witness_search(const WitnessSearchResult& r) {
  return {{"trials_run", r.trials_run},
          {"worst_deficit", real(r.worst_deficit)},
          {"worst_relative_deficit", real(r.worst_relative)},
          {"witness", r.witness ? witness(*r.witness) : Json(nullptr)}};
}

inline Json condition(const ConditionVerdict& c) {
  return {{"pass", c.pass}, {"worst_margin", real(c.worst_margin)}, {"worst_at", reals(c.worst_at)}, {"evaluated", c.evaluated}};
}

inline Json two_convex(const TwoConvexAudit& a) {
  return {{"function", a.function},
          {"interval", interval(a.interval)},
          {"kraus_sampling", condition(a.kraus_sampling)},
          {"derivative_matrix", condition(a.derivative_matrix)},
          {"concave_root", condition(a.concave_root)},
          {"product_inequality", condition(a.product_inequality)},
          {"kraus_determinant", condition(a.kraus_determinant)},
          {"pointwise_agreements", a.pointwise_agreements},
          {"pointwise_total", a.pointwise_total},
          {"interval_verdicts_coincide", a.interval_verdicts_coincide}};
}

inline Json theorem_audit(const TheoremAudit& a) {
  Json j{{"f_in_K_next", classification(a.f_in_K_next)},
         {"S_in_P_n_for_all_t0", verdict_name(a.s_in_P_n_for_all_t0)},
         {"anchors_checked", a.anchors_checked},
         {"worst_anchor_margin", real(a.worst_anchor_margin)},
         {"consistent", a.consistent}};
  if (a.failing_anchor) {
    j["failing_anchor"] = {{"t0", a.failing_anchor->t0}, {"report", classification(a.failing_anchor->report)}};
  } else {
    j["failing_anchor"] = nullptr;
  }
  return j;
}

}  // namespace json

}  // namespace matconvex
