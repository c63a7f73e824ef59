#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "polarize/errors.hpp"
#include "polarize/model.hpp"
#include "polarize/rng.hpp"

namespace polarize {

/// Random-instance configuration. alpha in (0, 1] steers instances from
/// near-neutral to highly polarized; alpha = 0 would make every bipartition
/// score zero, so it is excluded.
struct GenConfig {
  int m = 0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
};

/// Smallest d >= 1 with 10^d >= m: the out-degree cap. Integer arithmetic,
/// so no roundoff at powers of ten.
inline int max_out_degree(int m) {
  int d = 1;
  long long pow10 = 10;
  while (pow10 < m) {
    pow10 *= 10;
    ++d;
  }
  return d;
}

/// Standard deviation of both side-weight mixture components.
inline double side_sigma(double alpha) { return 1.0 / (1.0 + 20.0 * alpha); }

/// s = 0 belongs to the non-positive side, matching how the objective
/// scores it.
inline bool same_side(double si, double sj) { return (si > 0.0) == (sj > 0.0); }

/// Mean of the sentiment distribution for a directed edge i -> j.
inline double edge_mu(double si, double sj) {
  if (same_side(si, sj)) return 2.0 * std::fabs(si) - std::fabs(si - sj);
  return -std::fabs(si) * std::fabs(si - sj);
}

inline double edge_sigma(double mu) { return 2.0 / (3.0 + 10.0 * std::fabs(mu)); }

/// Generates a random user debate graph whose expected polarization grows
/// with cfg.alpha. Deterministic given cfg; node i's draws come from the
/// substreams (kStreamNodeSide, i) and (kStreamNodeEdges, i) of cfg.seed, so
/// the result does not depend on generation order.
///
/// Frozen draw order. Pass 1, per node: one unit draw picks the mixture
/// component (< 0.5 means the negative one), then one truncated-normal draw.
/// Pass 2, per node: one draw for k, then k distinct targets by rejection,
/// then the k edge weights in target order.
inline UDebG generate(const GenConfig& cfg) {
  if (cfg.m < 2)
    throw ConfigError("m=" + std::to_string(cfg.m) + ": need at least 2 nodes");
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0))
    throw ConfigError("alpha=" + std::to_string(cfg.alpha) +
                      " outside (0,1]");

  const int m = cfg.m;
  const double alpha = cfg.alpha;
  const double sigma = side_sigma(alpha);

  std::vector<UserNode> nodes(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    Rng rng(derive_seed(cfg.seed, kStreamNodeSide, static_cast<std::uint64_t>(i)));
    const bool negative = rng.next_unit() < 0.5;
    const double s = negative
                         ? sample_truncnorm(rng, -alpha, 0.0, -alpha, sigma)
                         : sample_truncnorm(rng, 0.0, alpha, alpha, sigma);
    nodes[static_cast<size_t>(i)] = {"u" + std::to_string(i), s};
  }

  const int k_cap = std::min(max_out_degree(m), m - 1);
  std::vector<SentimentEdge> edges;
  edges.reserve(static_cast<size_t>(m) * static_cast<size_t>(k_cap));
  std::vector<int> targets;
  for (int i = 0; i < m; ++i) {
    Rng rng(derive_seed(cfg.seed, kStreamNodeEdges, static_cast<std::uint64_t>(i)));
    const int k = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k_cap)));
    targets.clear();
    while (static_cast<int>(targets.size()) < k) {
      const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(m)));
      if (j == i) continue;
      if (std::find(targets.begin(), targets.end(), j) != targets.end()) continue;
      targets.push_back(j);
    }
    const double si = nodes[static_cast<size_t>(i)].s;
    for (const int j : targets) {
      const double mu = edge_mu(si, nodes[static_cast<size_t>(j)].s);
      const double w = sample_truncnorm(rng, -2.0, 2.0, mu, edge_sigma(mu));
      edges.push_back({i, j, w});
    }
  }

  return UDebG(std::move(nodes), std::move(edges));
}

}  // namespace polarize
