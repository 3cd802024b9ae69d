// Builds the order-2 gap polynomial and shows that it sits strictly between the
// 2-concave and 3-concave classes: both order-2 tests pass, the order-3 test fails.

#include <iostream>

#include "matconvex/classify.hpp"
#include "matconvex/gaps.hpp"

int main() {
  using namespace matconvex;
  auto g = build_natural_gap_polynomial(2, 4, GapKind::concave);

  std::cout << "p(t) =";
  for (std::size_t k = 1; k < g.coefficients.size(); ++k) std::cout << " + (" << rational_string(g.coefficients[k]) << ") t^" << k;
  std::cout << "\ncertified on " << g.certified_interval.to_string() << "  (raw alpha " << g.raw_alpha << ")\n\n";

  SamplerConfig cfg;
  cfg.seed = 2024;
  auto show = [&](const char* what, const ClassificationReport& r) {
    std::cout << what << ": " << verdict_name(r.verdict) << "  worst margin " << r.worst_margin << "\n";
    if (r.counterexample) {
      std::cout << "  nodes";
      for (double x : r.counterexample->nodes) std::cout << ' ' << x;
      std::cout << "\n  min eigenvalue " << r.counterexample->min_eigenvalue << " below -" << r.counterexample->threshold
                << "\n";
    }
  };
  show("2-monotone", test_n_monotone(g.model, g.certified_interval, 2, cfg));
  show("2-concave ", test_n_concave(g.model, g.certified_interval, 2, cfg));
  show("3-concave ", test_n_concave(g.model, g.certified_interval, 3, cfg));
}
