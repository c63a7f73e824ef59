#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "polarize/errors.hpp"

namespace polarize {

enum class Side : std::uint8_t { L = 0, R = 1 };

inline Side flipped(Side s) { return s == Side::L ? Side::R : Side::L; }

/// Total assignment of users to side L or side R, indexed like the nodes of
/// the graph it belongs to. The two sides are not interchangeable: L is
/// scored on disagreeing users, R on agreeing ones.
using Bipartition = std::vector<Side>;

struct UserNode {
  std::string id;
  double s = 0.0;  // side weight in [-1, 1]
};

struct SentimentEdge {
  int src = 0;
  int dst = 0;
  double w = 0.0;  // sentiment in [-2, 2]
};

/// Directed user debate graph. Immutable after construction and safe to
/// share across threads. Node indices are dense; ids are opaque strings.
class UDebG {
 public:
  UDebG() = default;

  UDebG(std::vector<UserNode> nodes, std::vector<SentimentEdge> edges)
      : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    validate_and_index();
  }

  int size() const { return static_cast<int>(nodes_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<UserNode>& nodes() const { return nodes_; }
  const std::vector<SentimentEdge>& edges() const { return edges_; }
  const UserNode& node(int i) const { return nodes_[static_cast<size_t>(i)]; }
  const SentimentEdge& edge(int e) const { return edges_[static_cast<size_t>(e)]; }

  /// Indices of edges touching v, as source or destination.
  const std::vector<int>& incident(int v) const {
    return incident_[static_cast<size_t>(v)];
  }

 private:
  void validate_and_index() {
    const int m = size();
    for (int i = 0; i < m; ++i) {
      const double s = nodes_[static_cast<size_t>(i)].s;
      if (!(s >= -1.0 && s <= 1.0))
        throw ValidationError("node " + std::to_string(i) + " (id '" +
                              nodes_[static_cast<size_t>(i)].id + "'): s=" +
                              std::to_string(s) + " outside [-1,1]");
    }
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(edges_.size() * 2);
    incident_.assign(static_cast<size_t>(m), {});
    for (int e = 0; e < num_edges(); ++e) {
      const SentimentEdge& ed = edges_[static_cast<size_t>(e)];
      if (ed.src < 0 || ed.src >= m || ed.dst < 0 || ed.dst >= m)
        throw ValidationError("edge " + std::to_string(e) + ": endpoint (" +
                              std::to_string(ed.src) + "," + std::to_string(ed.dst) +
                              ") out of range for " + std::to_string(m) + " nodes");
      if (ed.src == ed.dst)
        throw ValidationError("edge " + std::to_string(e) + ": self-loop at node " +
                              std::to_string(ed.src));
      if (!(ed.w >= -2.0 && ed.w <= 2.0))
        throw ValidationError("edge " + std::to_string(e) + ": w=" +
                              std::to_string(ed.w) + " outside [-2,2]");
      const std::uint64_t key = (static_cast<std::uint64_t>(ed.src) << 32) |
                                static_cast<std::uint32_t>(ed.dst);
      if (!seen.insert(key).second)
        throw ValidationError("duplicate edge (" + std::to_string(ed.src) + "," +
                              std::to_string(ed.dst) + ")");
      incident_[static_cast<size_t>(ed.src)].push_back(e);
      incident_[static_cast<size_t>(ed.dst)].push_back(e);
    }
  }

  std::vector<UserNode> nodes_;
  std::vector<SentimentEdge> edges_;
  std::vector<std::vector<int>> incident_;
};

struct PolarizationBreakdown {
  double lc = 0.0;       // in [0, 1]
  double rc = 0.0;       // in [0, 1]
  double sc = 0.0;       // lc * rc, in [0, 0.25]
  double sweight = 2.0;  // in [0, 4]; 2 when the graph has no edges
  double bippol = 0.0;   // sc * sweight, in [0, 1]
};

namespace detail {

// Combines the raw accumulators into a breakdown. Sums are clamped at the
// exact interval ends to absorb last-ulp roundoff.
inline PolarizationBreakdown breakdown_from_sums(double lc_num, double rc_num,
                                                 double cross_num, int m, int e) {
  PolarizationBreakdown out;
  if (m > 0) {
    out.lc = std::clamp(lc_num / m, 0.0, 1.0);
    out.rc = std::clamp(rc_num / m, 0.0, 1.0);
  }
  out.sc = std::clamp(out.lc * out.rc, 0.0, 0.25);
  out.sweight = e > 0 ? std::clamp(cross_num / e + 2.0, 0.0, 4.0) : 2.0;
  out.bippol = std::clamp(out.sc * out.sweight, 0.0, 1.0);
  return out;
}

}  // namespace detail

/// Evaluates the bipartite polarization objective of p on g.
///
/// lc sums -s over L-side nodes with s <= 0, rc sums s over R-side nodes
/// with s > 0, both divided by the node count; sweight averages -w over
/// edges whose endpoints sit on different sides, shifted by +2 (and is 2 for
/// an edgeless graph); bippol = lc * rc * sweight.
inline PolarizationBreakdown evaluate(const UDebG& g, const Bipartition& p) {
  if (static_cast<int>(p.size()) != g.size())
    throw ValidationError("assignment length " + std::to_string(p.size()) +
                          " does not match node count " + std::to_string(g.size()));
  double lc_num = 0.0, rc_num = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    const double s = g.node(i).s;
    if (s <= 0.0) {
      if (p[static_cast<size_t>(i)] == Side::L) lc_num += -s;
    } else {
      if (p[static_cast<size_t>(i)] == Side::R) rc_num += s;
    }
  }
  double cross_num = 0.0;
  for (const SentimentEdge& e : g.edges())
    if (p[static_cast<size_t>(e.src)] != p[static_cast<size_t>(e.dst)])
      cross_num += -e.w;
  return detail::breakdown_from_sums(lc_num, rc_num, cross_num, g.size(),
                                     g.num_edges());
}

/// Raw objective accumulators for one (g, p) pair, enabling O(degree)
/// re-evaluation under single-node flips. Single-owner mutable state; build
/// with from(), keep in sync through apply_move().
struct EvalCache {
  double lc_num = 0.0;     // sum of -s over L-side nodes with s <= 0
  double rc_num = 0.0;     // sum of s over R-side nodes with s > 0
  double cross_num = 0.0;  // sum of -w over cross-side edges
  int m = 0;
  int e = 0;

  static EvalCache from(const UDebG& g, const Bipartition& p) {
    if (static_cast<int>(p.size()) != g.size())
      throw ValidationError("assignment length " + std::to_string(p.size()) +
                            " does not match node count " +
                            std::to_string(g.size()));
    EvalCache c;
    c.m = g.size();
    c.e = g.num_edges();
    for (int i = 0; i < g.size(); ++i) {
      const double s = g.node(i).s;
      if (s <= 0.0 && p[static_cast<size_t>(i)] == Side::L) c.lc_num += -s;
      if (s > 0.0 && p[static_cast<size_t>(i)] == Side::R) c.rc_num += s;
    }
    for (const SentimentEdge& ed : g.edges())
      if (p[static_cast<size_t>(ed.src)] != p[static_cast<size_t>(ed.dst)])
        c.cross_num += -ed.w;
    return c;
  }

  double bippol() const {
    return detail::breakdown_from_sums(lc_num, rc_num, cross_num, m, e).bippol;
  }

  /// Recompute-and-compare check for tests and debug builds.
  bool matches(const UDebG& g, const Bipartition& p, double tol = 1e-9) const {
    const EvalCache fresh = from(g, p);
    return std::fabs(fresh.lc_num - lc_num) <= tol &&
           std::fabs(fresh.rc_num - rc_num) <= tol &&
           std::fabs(fresh.cross_num - cross_num) <= tol;
  }
};

namespace detail {

// Accumulator changes caused by flipping v, touching only v's incidence.
struct FlipEffect {
  double lc_num, rc_num, cross_num;
};

inline FlipEffect flip_effect(const UDebG& g, const Bipartition& p,
                              const EvalCache& cache, int v) {
  assert(cache.m == g.size() && cache.e == g.num_edges());
  assert(v >= 0 && v < g.size());
  FlipEffect out{cache.lc_num, cache.rc_num, cache.cross_num};
  const double s = g.node(v).s;
  const Side side = p[static_cast<size_t>(v)];
  if (s <= 0.0)
    out.lc_num += (side == Side::L) ? s : -s;  // leaves or joins L
  else
    out.rc_num += (side == Side::R) ? -s : s;  // leaves or joins R
  for (const int ei : g.incident(v)) {
    const SentimentEdge& ed = g.edge(ei);
    const bool was_cross =
        p[static_cast<size_t>(ed.src)] != p[static_cast<size_t>(ed.dst)];
    out.cross_num += was_cross ? ed.w : -ed.w;  // flipping v toggles this edge
  }
  return out;
}

}  // namespace detail

/// BipPol(p with v flipped) - BipPol(p), computed in O(degree of v).
/// cache must be consistent with (g, p).
inline double move_delta(const UDebG& g, const Bipartition& p,
                         const EvalCache& cache, int v) {
  const detail::FlipEffect f = detail::flip_effect(g, p, cache, v);
  return detail::breakdown_from_sums(f.lc_num, f.rc_num, f.cross_num, cache.m,
                                     cache.e).bippol -
         cache.bippol();
}

/// Flips v in p and updates cache accordingly.
inline void apply_move(const UDebG& g, Bipartition& p, EvalCache& cache, int v) {
  const detail::FlipEffect f = detail::flip_effect(g, p, cache, v);
  cache.lc_num = f.lc_num;
  cache.rc_num = f.rc_num;
  cache.cross_num = f.cross_num;
  p[static_cast<size_t>(v)] = flipped(p[static_cast<size_t>(v)]);
}

}  // namespace polarize
