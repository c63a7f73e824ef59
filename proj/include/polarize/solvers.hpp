#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "polarize/errors.hpp"
#include "polarize/model.hpp"
#include "polarize/rng.hpp"

namespace polarize {

// Strict-improvement threshold for local search and the tie window used by
// the enumeration solvers.
inline constexpr double kImprovementEps = 1e-12;

struct SolveStats {
  long long search_nodes = 0;  // exhaustive: assignments visited; b&b: expansions
  long long steps = 0;         // ls: improving flips summed over restarts
  int restarts = 0;            // ls only
  std::int64_t time_ms = 0;    // monotonic wall time, truncated to ms
  bool optimal = false;        // exact solvers run to completion only
  bool timeout = false;        // b&b stopped by its time budget
  bool step_cap_hit = false;   // ls: best restart ended by the step cap
};

struct SolveResult {
  Bipartition assignment;
  double bippol = 0.0;
  SolveStats stats;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline std::int64_t ms_since(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0)
      .count();
}

inline bool lex_less(const Bipartition& a, const Bipartition& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace detail

inline constexpr int kExhaustiveDefaultCap = 24;

/// Enumerates all 2^m assignments (the objective is side-asymmetric, so no
/// halving by symmetry) and returns a maximizer; among ties, the
/// lexicographically smallest assignment with L ordered before R.
inline SolveResult solve_exhaustive(const UDebG& g,
                                    int cap = kExhaustiveDefaultCap) {
  const int m = g.size();
  if (m > cap)
    throw ConfigError("instance has " + std::to_string(m) +
                      " nodes, above the exhaustive cap of " + std::to_string(cap) +
                      "; use branch-and-bound (solve_bnb) instead");
  const auto t0 = detail::Clock::now();
  SolveResult out;
  if (m == 0) {
    out.stats.optimal = true;
    out.stats.search_nodes = 1;
    out.stats.time_ms = detail::ms_since(t0);
    return out;
  }

  Bipartition p(static_cast<size_t>(m), Side::L);
  EvalCache cache = EvalCache::from(g, p);
  Bipartition best = p;
  double best_val = cache.bippol();

  // Gray-code walk: step t flips exactly one node, so the cache update is
  // O(degree).
  const unsigned long long total = 1ull << m;
  for (unsigned long long t = 1; t < total; ++t) {
    const int v = std::countr_zero(t);
    apply_move(g, p, cache, v);
    const double val = cache.bippol();
    if (val > best_val + kImprovementEps) {
      best_val = val;
      best = p;
    } else if (val > best_val - kImprovementEps && detail::lex_less(p, best)) {
      best_val = std::max(best_val, val);
      best = p;
    }
  }

  out.assignment = std::move(best);
  out.bippol = evaluate(g, out.assignment).bippol;
  out.stats.search_nodes = static_cast<long long>(total);
  out.stats.optimal = true;
  out.stats.time_ms = detail::ms_since(t0);
  return out;
}

inline constexpr int kLsDefaultRestarts = 10;

/// Steepest-ascent hill climbing with restarts. Each restart begins at a
/// uniformly random assignment and applies at most m strictly improving
/// single-node flips (best delta first, lowest index on ties), stopping
/// early at a local optimum. Returns the best assignment across restarts.
/// Deterministic given seed: restart r draws from substream
/// (kStreamRestart, r).
inline SolveResult solve_ls(const UDebG& g, std::uint64_t seed,
                            int restarts = kLsDefaultRestarts) {
  const int m = g.size();
  const auto t0 = detail::Clock::now();
  SolveResult out;
  if (m == 0) {
    out.stats.restarts = restarts;
    out.stats.time_ms = detail::ms_since(t0);
    return out;
  }

  double best_val = -1.0;
  Bipartition best;
  bool best_cap_hit = false;
  long long total_steps = 0;

  for (int r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(seed, kStreamRestart, static_cast<std::uint64_t>(r)));
    Bipartition p(static_cast<size_t>(m));
    for (int v = 0; v < m; ++v)
      p[static_cast<size_t>(v)] = rng.next_bool() ? Side::R : Side::L;
    EvalCache cache = EvalCache::from(g, p);

    bool local_opt = false;
    for (int step = 0; step < m; ++step) {
      double best_delta = kImprovementEps;
      int best_v = -1;
      for (int v = 0; v < m; ++v) {
        const double d = move_delta(g, p, cache, v);
        if (d > best_delta) {
          best_delta = d;
          best_v = v;
        }
      }
      if (best_v < 0) {
        local_opt = true;
        break;
      }
      apply_move(g, p, cache, best_v);
      ++total_steps;
    }

    const double val = evaluate(g, p).bippol;
    if (val > best_val) {
      best_val = val;
      best = std::move(p);
      best_cap_hit = !local_opt;
    }
  }

  out.assignment = std::move(best);
  out.bippol = best_val;
  out.stats.steps = total_steps;
  out.stats.restarts = restarts;
  out.stats.step_cap_hit = best_cap_hit;
  out.stats.time_ms = detail::ms_since(t0);
  return out;
}

/// Test instrumentation for the branch-and-bound search. assigned[v] is
/// -1 while v is unassigned, otherwise the Side value.
struct BnbHooks {
  std::function<void(const std::vector<std::int8_t>& assigned, double bound)>
      on_node;
  std::function<void(double value)> on_incumbent;
};

struct BnbOptions {
  std::int64_t timeout_ms = 0;  // 0 means no budget
  std::uint64_t warm_seed = 0xB1A5EDB45Eull;
  int warm_restarts = kLsDefaultRestarts;
  BnbHooks hooks;
};

namespace detail {

struct BnbSearch {
  const UDebG& g;
  const BnbOptions& opts;
  int m;
  int e;
  std::vector<int> order;      // nodes in branching order (|s| descending)
  std::vector<double> lc_rem;  // suffix sums of -s over unassigned s <= 0
  std::vector<double> rc_rem;  // suffix sums of s over unassigned s > 0
  struct Resolved {
    int other;
    double neg_part;  // max(-w, 0)
    double w;
  };
  std::vector<std::vector<Resolved>> resolve;  // edges closing at each depth

  Bipartition cur;
  std::vector<std::int8_t> assigned;
  double lc_fix = 0.0, rc_fix = 0.0, fixed_cross = 0.0, pot = 0.0;

  double incumbent_val;
  Bipartition incumbent;
  long long expanded = 0;
  bool timed_out = false;
  Clock::time_point deadline;
  bool has_deadline = false;

  BnbSearch(const UDebG& graph, const BnbOptions& options, SolveResult warm)
      : g(graph), opts(options), m(graph.size()), e(graph.num_edges()),
        incumbent_val(warm.bippol), incumbent(std::move(warm.assignment)) {
    order.resize(static_cast<size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double fa = std::fabs(g.node(a).s), fb = std::fabs(g.node(b).s);
      if (fa != fb) return fa > fb;
      return a < b;
    });
    std::vector<int> pos(static_cast<size_t>(m));
    for (int d = 0; d < m; ++d) pos[static_cast<size_t>(order[static_cast<size_t>(d)])] = d;

    lc_rem.assign(static_cast<size_t>(m) + 1, 0.0);
    rc_rem.assign(static_cast<size_t>(m) + 1, 0.0);
    for (int d = m - 1; d >= 0; --d) {
      const double s = g.node(order[static_cast<size_t>(d)]).s;
      lc_rem[static_cast<size_t>(d)] = lc_rem[static_cast<size_t>(d) + 1] + (s <= 0.0 ? -s : 0.0);
      rc_rem[static_cast<size_t>(d)] = rc_rem[static_cast<size_t>(d) + 1] + (s > 0.0 ? s : 0.0);
    }

    resolve.assign(static_cast<size_t>(m), {});
    for (const SentimentEdge& ed : g.edges()) {
      const int ds = pos[static_cast<size_t>(ed.src)];
      const int dd = pos[static_cast<size_t>(ed.dst)];
      const double neg = std::max(-ed.w, 0.0);
      pot += neg;
      if (ds > dd)
        resolve[static_cast<size_t>(ds)].push_back({ed.dst, neg, ed.w});
      else
        resolve[static_cast<size_t>(dd)].push_back({ed.src, neg, ed.w});
    }

    cur.assign(static_cast<size_t>(m), Side::L);
    assigned.assign(static_cast<size_t>(m), -1);
    if (opts.timeout_ms > 0) {
      deadline = Clock::now() + std::chrono::milliseconds(opts.timeout_ms);
      has_deadline = true;
    }
  }

  double bound_at(int next_depth) const {
    const double lc_star = (lc_fix + lc_rem[static_cast<size_t>(next_depth)]) / m;
    const double rc_star = (rc_fix + rc_rem[static_cast<size_t>(next_depth)]) / m;
    const double sw_star = e > 0 ? (fixed_cross + pot) / e + 2.0 : 2.0;
    return lc_star * rc_star * sw_star;
  }

  void dfs(int d) {
    const int u = order[static_cast<size_t>(d)];
    const double s = g.node(u).s;
    const Side natural = s <= 0.0 ? Side::L : Side::R;
    for (int trial = 0; trial < 2 && !timed_out; ++trial) {
      const Side side = trial == 0 ? natural : flipped(natural);

      cur[static_cast<size_t>(u)] = side;
      assigned[static_cast<size_t>(u)] = static_cast<std::int8_t>(side);
      const double save_lc = lc_fix, save_rc = rc_fix;
      if (s <= 0.0 && side == Side::L) lc_fix += -s;
      if (s > 0.0 && side == Side::R) rc_fix += s;
      double d_pot = 0.0, d_fixed = 0.0;
      for (const Resolved& r : resolve[static_cast<size_t>(d)]) {
        d_pot += r.neg_part;
        if (cur[static_cast<size_t>(r.other)] != side) d_fixed += -r.w;
      }
      pot -= d_pot;
      fixed_cross += d_fixed;

      ++expanded;
      if (has_deadline && (expanded & 4095) == 0 && Clock::now() > deadline)
        timed_out = true;

      const double bound = bound_at(d + 1);
      if (opts.hooks.on_node) opts.hooks.on_node(assigned, bound);

      if (!timed_out && bound > incumbent_val) {
        if (d + 1 == m) {
          const double val = evaluate(g, cur).bippol;
          if (val > incumbent_val) {
            incumbent_val = val;
            incumbent = cur;
            if (opts.hooks.on_incumbent) opts.hooks.on_incumbent(val);
          }
        } else {
          dfs(d + 1);
        }
      }

      pot += d_pot;
      fixed_cross -= d_fixed;
      lc_fix = save_lc;
      rc_fix = save_rc;
      assigned[static_cast<size_t>(u)] = -1;
    }
  }
};

}  // namespace detail

/// Exact depth-first branch and bound. Branches on nodes in descending |s|
/// (strong opinions first), natural side first, pruning with the admissible
/// bound LC* x RC* x SWeight*, where the unassigned remainder of LC/RC is
/// added in full and every unresolved edge contributes max(-w, 0). The
/// incumbent is warm-started from local search.
///
/// Returns the optimal value (the argmax may differ from solve_exhaustive
/// under ties). With a time budget set, a timeout returns the incumbent with
/// stats.timeout = true.
inline SolveResult solve_bnb(const UDebG& g, const BnbOptions& opts = {}) {
  const auto t0 = detail::Clock::now();
  const int m = g.size();
  SolveResult out;
  if (m == 0) {
    out.stats.optimal = true;
    out.stats.time_ms = detail::ms_since(t0);
    return out;
  }

  SolveResult warm = solve_ls(g, opts.warm_seed, opts.warm_restarts);
  if (opts.hooks.on_incumbent) opts.hooks.on_incumbent(warm.bippol);

  detail::BnbSearch search(g, opts, std::move(warm));
  search.dfs(0);

  out.assignment = std::move(search.incumbent);
  out.bippol = evaluate(g, out.assignment).bippol;
  out.stats.search_nodes = search.expanded;
  out.stats.optimal = !search.timed_out;
  out.stats.timeout = search.timed_out;
  out.stats.time_ms = detail::ms_since(t0);
  return out;
}

}  // namespace polarize
