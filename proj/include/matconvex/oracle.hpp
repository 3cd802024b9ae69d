#pragma once

// Definition-level checks on random Hermitian matrices:
//   convexity    lambda f(A) + (1-lambda) f(B) - f(lambda A + (1-lambda) B) >= 0
//   monotonicity f(A + P) - f(A) >= 0 for P >= 0
// A negative minimum eigenvalue of the difference is a witness against the property.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "matconvex/classify.hpp"
#include "matconvex/function_model.hpp"
#include "matconvex/sampler.hpp"

namespace matconvex {

using HermitianMatrix = Eigen::MatrixXcd;

struct HermitianSample {
  int dimension = 0;
  HermitianMatrix matrix;
  std::vector<double> spectrum;
  Interval interval = Interval::open(0.0, 1.0);
};

/// Fraction of the interval width trimmed from each side before drawing eigenvalues.
inline constexpr double kSpectrumMargin = 0.01;
inline constexpr double kWitnessThreshold = 1e-6;
inline constexpr int kMaxOracleDimension = 6;

namespace detail {

inline double standard_normal(Rng& rng) {
  // Box-Muller from our own uniforms keeps streams identical across standard libraries.
  double u1 = 1.0 - unit_uniform(rng);
  double u2 = unit_uniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases of R's
/// diagonal moved into Q.
inline HermitianMatrix haar_unitary(int n, Rng& rng) {
  HermitianMatrix z(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) z(i, j) = {standard_normal(rng) / std::numbers::sqrt2, standard_normal(rng) / std::numbers::sqrt2};
  Eigen::HouseholderQR<HermitianMatrix> qr(z);
  HermitianMatrix q = qr.householderQ() * HermitianMatrix::Identity(n, n);
  HermitianMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    std::complex<double> d = r(j, j);
    double a = std::abs(d);
    q.col(j) *= a == 0.0 ? 1.0 : d / a;
  }
  return q;
}

inline HermitianMatrix hermitian_part(const HermitianMatrix& m) { return 0.5 * (m + m.adjoint()); }

inline std::pair<double, double> shrunk_bounds(const Interval& interval) {
  if (!interval.is_finite()) throw std::invalid_argument("matrix sampling needs a finite interval");
  double pad = kSpectrumMargin * interval.width();
  return {interval.lower() + pad, interval.upper() - pad};
}

inline HermitianSample sample_with_spectrum(std::vector<double> spectrum, const Interval& interval, Rng& rng) {
  const int n = static_cast<int>(spectrum.size());
  HermitianMatrix u = haar_unitary(n, rng);
  Eigen::VectorXcd d(n);
  for (int i = 0; i < n; ++i) d(i) = spectrum[i];
  HermitianSample s;
  s.dimension = n;
  s.matrix = hermitian_part(u * d.asDiagonal() * u.adjoint());
  std::sort(spectrum.begin(), spectrum.end());
  s.spectrum = std::move(spectrum);
  s.interval = interval;
  return s;
}

inline void require_dimension(int n) {
  if (n < 1 || n > kMaxOracleDimension) throw std::invalid_argument("matrix dimension must be in 1..6");
}

}  // namespace detail

/// Draws a Hermitian matrix with eigenvalues uniform in the 1%-shrunk interval.
inline HermitianSample sample_hermitian(int n, const Interval& interval, Rng& rng) {
  detail::require_dimension(n);
  auto [lo, hi] = detail::shrunk_bounds(interval);
  std::vector<double> spectrum(n);
  for (double& x : spectrum) x = lo + (hi - lo) * unit_uniform(rng);
  return detail::sample_with_spectrum(std::move(spectrum), interval, rng);
}

inline HermitianSample sample_hermitian(int n, const Interval& interval, std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0));
  return sample_hermitian(n, interval, rng);
}

inline std::vector<double> hermitian_eigenvalues(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<HermitianMatrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolver did not converge");
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

/// f(A) = U f(Lambda) U*.
template <Differentiable F>
HermitianMatrix matrix_apply(const F& f, const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<HermitianMatrix> es(a);
  if (es.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolver did not converge");
  const auto& ev = es.eigenvalues();
  Eigen::VectorXcd fv(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (!f.contains(ev(i))) throw DomainError("eigenvalue " + format_real(ev(i)) + " outside the domain");
    fv(i) = f.template derivative<double>(ev(i), 0);
  }
  const auto& u = es.eigenvectors();
  return detail::hermitian_part(u * fv.asDiagonal() * u.adjoint());
}

template <Differentiable F>
HermitianMatrix matrix_apply(const F& f, const HermitianSample& a) {
  return matrix_apply(f, a.matrix);
}

/// lambda_min(lambda f(A) + (1 - lambda) f(B) - f(lambda A + (1 - lambda) B)).
template <Differentiable F>
double convexity_deficit(const F& f, const HermitianMatrix& a, const HermitianMatrix& b, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
  HermitianMatrix mix = detail::hermitian_part(lambda * a + (1.0 - lambda) * b);
  HermitianMatrix d = lambda * matrix_apply(f, a) + (1.0 - lambda) * matrix_apply(f, b) - matrix_apply(f, mix);
  return hermitian_eigenvalues(detail::hermitian_part(d)).front();
}

/// lambda_min(f(A + P) - f(A)).
template <Differentiable F>
double monotonicity_deficit(const F& f, const HermitianMatrix& a, const HermitianMatrix& p) {
  HermitianMatrix d = matrix_apply(f, detail::hermitian_part(a + p)) - matrix_apply(f, a);
  return hermitian_eigenvalues(detail::hermitian_part(d)).front();
}

struct SeedTrace {
  std::uint64_t seed = 0;
  int trial = 0;
};

struct WitnessPair {
  HermitianSample a;
  HermitianSample b;  ///< B for convexity, A + P for monotonicity
  double lambda = 0.0;
  double deficit_min_eigenvalue = 0.0;
  double scale = 1.0;
  Property property = Property::convex;
  SeedTrace seed_trace;
};

struct WitnessSearchResult {
  std::optional<WitnessPair> witness;
  int trials_run = 0;
  double worst_deficit = std::numeric_limits<double>::infinity();
  double worst_relative = std::numeric_limits<double>::infinity();  ///< deficit / scale
};

namespace detail {

template <Differentiable F>
double oscillation_scale(const F& f, const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (const auto* v : {&a, &b})
    for (double x : *v) s = std::max(s, std::fabs(f.template derivative<double>(x, 0)));
  return std::max(1.0, s);
}

/// One seeded trial. Concavity is convexity of -f, evaluated via the sign of the deficit.
template <Differentiable F>
WitnessPair oracle_trial(const F& f, const Interval& interval, int n, Property property, SeedTrace trace) {
  Rng rng = trial_rng(trace.seed ^ 0x0A7C1Eull, static_cast<std::uint64_t>(trace.trial));
  WitnessPair w;
  w.property = property;
  w.seed_trace = trace;
  w.a = sample_hermitian(n, interval, rng);
  if (property == Property::monotone) {
    auto [lo, hi] = shrunk_bounds(interval);
    std::vector<double> ps(n);
    for (double& x : ps) x = unit_uniform(rng);
    HermitianSample p = sample_with_spectrum(ps, interval, rng);
    double pmax = *std::max_element(ps.begin(), ps.end());
    double room = hi - w.a.spectrum.back();
    double kappa = pmax > 0.0 ? (1.0 - unit_uniform(rng)) * room / pmax : 0.0;
    HermitianMatrix sum = hermitian_part(w.a.matrix + kappa * p.matrix);
    w.b.dimension = n;
    w.b.matrix = sum;
    w.b.spectrum = hermitian_eigenvalues(sum);
    w.b.interval = interval;
    w.lambda = 1.0;
    w.deficit_min_eigenvalue = monotonicity_deficit(f, w.a.matrix, HermitianMatrix(sum - w.a.matrix));
  } else {
    w.b = sample_hermitian(n, interval, rng);
    w.lambda = unit_uniform(rng);
    if (property == Property::convex) {
      w.deficit_min_eigenvalue = convexity_deficit(f, w.a.matrix, w.b.matrix, w.lambda);
    } else {
      HermitianMatrix mix = hermitian_part(w.lambda * w.a.matrix + (1.0 - w.lambda) * w.b.matrix);
      HermitianMatrix d = matrix_apply(f, mix) - w.lambda * matrix_apply(f, w.a.matrix) -
                          (1.0 - w.lambda) * matrix_apply(f, w.b.matrix);
      w.deficit_min_eigenvalue = hermitian_eigenvalues(hermitian_part(d)).front();
    }
  }
  w.scale = oscillation_scale(f, w.a.spectrum, w.b.spectrum);
  return w;
}

}  // namespace detail

/// Pure random search; returns the lowest-index trial with deficit <= -1e-6 * scale, where
/// scale = max(1, max |f| over the sampled spectra).
template <Differentiable F>
WitnessSearchResult witness_search(const F& f, const Interval& interval, int n, Property property, int trials,
                                   std::uint64_t seed, double threshold = kWitnessThreshold) {
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  detail::require_dimension(n);
  WitnessSearchResult out;
  for (int trial = 0; trial < trials; ++trial) {
    WitnessPair w = detail::oracle_trial(f, interval, n, property, {seed, trial});
    ++out.trials_run;
    out.worst_deficit = std::min(out.worst_deficit, w.deficit_min_eigenvalue);
    out.worst_relative = std::min(out.worst_relative, w.deficit_min_eigenvalue / w.scale);
    if (w.deficit_min_eigenvalue <= -threshold * w.scale) {
      out.witness = std::move(w);
      break;
    }
  }
  return out;
}

/// Recomputes a witness from its seed trace.
template <Differentiable F>
WitnessPair replay_witness(const F& f, const Interval& interval, int n, Property property, SeedTrace trace) {
  return detail::oracle_trial(f, interval, n, property, trace);
}

struct CrossValidation {
  ClassificationReport criterion;
  WitnessSearchResult oracle;
  bool criterion_pass = false;
  bool oracle_pass = false;
  bool agree = false;
};

struct CrossValidationConfig {
  SamplerConfig criterion;
  int oracle_trials = 2000;
};

/// Kraus/Pick criterion sampling against witness search at dimension n.
template <Differentiable F>
CrossValidation cross_validate(const F& f, const Interval& interval, int n, Property property,
                               const CrossValidationConfig& cfg = {}) {
  CrossValidation cv;
  cv.criterion = classify(f, interval, n, property, cfg.criterion);
  cv.oracle = witness_search(f, interval, n, property, cfg.oracle_trials, cfg.criterion.seed);
  cv.criterion_pass = cv.criterion.verdict != Verdict::fail;
  cv.oracle_pass = !cv.oracle.witness.has_value();
  cv.agree = cv.criterion_pass == cv.oracle_pass;
  return cv;
}

}  // namespace matconvex
