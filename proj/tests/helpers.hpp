#pragma once

#include <set>
#include <utility>
#include <vector>

#include "polarize/model.hpp"
#include "polarize/rng.hpp"

namespace testutil {

// Random instance with arbitrary (not generator-shaped) weights, for
// objective/solver property tests.
inline polarize::UDebG random_instance(polarize::Rng& rng, int m, int max_edges) {
  std::vector<polarize::UserNode> nodes;
  nodes.reserve(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i)
    nodes.push_back({"n" + std::to_string(i), rng.next_unit() * 2.0 - 1.0});
  std::vector<polarize::SentimentEdge> edges;
  std::set<std::pair<int, int>> used;
  const int want = max_edges > 0 ? static_cast<int>(rng.next_below(
                                       static_cast<std::uint64_t>(max_edges) + 1))
                                 : 0;
  int guard = 0;
  while (static_cast<int>(edges.size()) < want && guard++ < 20 * want) {
    const int src = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(m)));
    const int dst = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(m)));
    if (src == dst || !used.insert({src, dst}).second) continue;
    edges.push_back({src, dst, rng.next_unit() * 4.0 - 2.0});
  }
  return polarize::UDebG(std::move(nodes), std::move(edges));
}

inline polarize::Bipartition random_partition(polarize::Rng& rng, int m) {
  polarize::Bipartition p(static_cast<size_t>(m));
  for (auto& side : p)
    side = rng.next_bool() ? polarize::Side::R : polarize::Side::L;
  return p;
}

}  // namespace testutil
