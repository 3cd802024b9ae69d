#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "matconvex/interval.hpp"
#include "matconvex/linalg.hpp"

namespace matconvex {

enum class NodeStrategy { uniform, clustered, endpoint_biased, mixed };

inline std::string_view strategy_name(NodeStrategy s) {
  switch (s) {
    case NodeStrategy::uniform: return "uniform";
    case NodeStrategy::clustered: return "clustered";
    case NodeStrategy::endpoint_biased: return "endpoint_biased";
    case NodeStrategy::mixed: return "mixed";
  }
  return "unknown";
}

inline NodeStrategy parse_strategy(std::string_view s) {
  if (s == "uniform") return NodeStrategy::uniform;
  if (s == "clustered") return NodeStrategy::clustered;
  if (s == "endpoint_biased" || s == "endpoint") return NodeStrategy::endpoint_biased;
  if (s == "mixed") return NodeStrategy::mixed;
  throw ParseError("unknown node strategy '" + std::string(s) + "'");
}

struct SamplerConfig {
  int trials = 200;
  std::uint64_t seed = 0;
  NodeStrategy node_strategy = NodeStrategy::mixed;
  double min_gap = 1e-4;
  double tolerance = kDefaultTolerance;
  /// Report matrices inside the tolerance band as indeterminate instead of passing them.
  bool strict = false;
};

/// Cluster half-width as a fraction of the interval width.
inline constexpr double kClusterRadius = 1e-2;

/// splitmix64 finalizer; decorrelates per-trial seeds derived from (seed, index).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

inline Rng trial_rng(std::uint64_t seed, std::uint64_t trial) { return Rng(mix_seed(seed, trial)); }

/// Uniform double in [0, 1) from the top 53 bits.
inline double unit_uniform(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Draws nodes one at a time, rejecting any closer than min_gap to an earlier node. The
/// first k nodes of a draw of size n + 1 coincide with a draw of size k for the same trial,
/// so verdicts at order n + 1 dominate those at order n.
class NodeSampler {
 public:
  NodeSampler(const Interval& interval, const SamplerConfig& cfg) : interval_(interval), cfg_(cfg) {
    if (!interval.is_finite()) throw std::invalid_argument("node sampling needs a finite interval");
    if (cfg.trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (!(cfg.min_gap > 0.0)) throw std::invalid_argument("min_gap must be positive");
  }

  NodeStrategy strategy_for(int trial) const {
    if (cfg_.node_strategy != NodeStrategy::mixed) return cfg_.node_strategy;
    static constexpr NodeStrategy cycle[] = {NodeStrategy::uniform, NodeStrategy::clustered,
                                             NodeStrategy::endpoint_biased};
    return cycle[trial % 3];
  }

  std::vector<double> draw(int trial, int n) const {
    const double w = interval_.width();
    if (w < 4.0 * n * cfg_.min_gap) {
      throw std::invalid_argument("interval " + interval_.to_string() + " too small for " + std::to_string(n) +
                                  " nodes with min_gap " + format_real(cfg_.min_gap));
    }
    Rng rng = trial_rng(cfg_.seed, static_cast<std::uint64_t>(trial));
    const NodeStrategy strategy = strategy_for(trial);
    double lo = interval_.lower(), hi = interval_.upper();
    if (strategy == NodeStrategy::clustered) {
      double radius = std::max(kClusterRadius * w, 2.0 * n * cfg_.min_gap);
      radius = std::min(radius, 0.5 * w);
      double center = lo + radius + unit_uniform(rng) * (w - 2.0 * radius);
      lo = center - radius;
      hi = center + radius;
    }
    std::vector<double> nodes;
    int attempts = 0;
    while (static_cast<int>(nodes.size()) < n) {
      if (++attempts > 100000) throw std::runtime_error("node rejection sampling did not terminate");
      double u = unit_uniform(rng);
      double x = strategy == NodeStrategy::endpoint_biased ? lo + (hi - lo) * 0.5 * (1.0 - std::cos(std::numbers::pi * u))
                                                           : lo + (hi - lo) * u;
      if (!interval_.interior_contains(x)) continue;
      bool ok = true;
      for (double y : nodes) ok = ok && std::fabs(x - y) >= cfg_.min_gap;
      if (ok) nodes.push_back(x);
    }
    return nodes;
  }

 private:
  Interval interval_;
  SamplerConfig cfg_;
};

}  // namespace matconvex
