#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "polarize/errors.hpp"
#include "polarize/model.hpp"
#include "polarize/solvers.hpp"

namespace polarize {

/// Simple undirected graph for the maxcut side of the reduction.
struct MaxcutGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
};

inline void validate_maxcut(const MaxcutGraph& g) {
  if (g.n < 0) throw ValidationError("negative vertex count");
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : g.edges) {
    if (u < 0 || u >= g.n || v < 0 || v >= g.n)
      throw ValidationError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                            ") out of range for n=" + std::to_string(g.n));
    if (u == v) throw ValidationError("self-loop at vertex " + std::to_string(u));
    const std::pair<int, int> key = std::minmax(u, v);
    if (!seen.insert(key).second)
      throw ValidationError("duplicate undirected edge {" + std::to_string(key.first) +
                            "," + std::to_string(key.second) + "}");
  }
}

// Text format: first line "n m", then one "u v" pair per line, 0-indexed.
inline MaxcutGraph load_maxcut(std::istream& in) {
  MaxcutGraph g;
  int m = 0;
  if (!(in >> g.n >> m)) throw ParseError("maxcut header must be two integers: n m");
  if (m < 0) throw ParseError("negative edge count in maxcut header");
  g.edges.reserve(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    int u = 0, v = 0;
    if (!(in >> u >> v))
      throw ParseError("expected " + std::to_string(m) + " edge lines, got " +
                       std::to_string(i));
    g.edges.emplace_back(u, v);
  }
  validate_maxcut(g);
  return g;
}

inline MaxcutGraph load_maxcut(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open maxcut file: " + path);
  return load_maxcut(in);
}

/// Embeds a maxcut instance as a polarization instance: every original
/// vertex becomes a neutral node (s = 0, ids "v0".."v{n-1}"), two isolated
/// anchors "u-" (s = -1) and "u+" (s = +1) are appended, and each undirected
/// edge becomes the directed pair with weight -1/2 both ways. Maximizing
/// polarization then forces the anchors apart and rewards cutting as many
/// original edges as possible.
inline UDebG reduce(const MaxcutGraph& gc) {
  validate_maxcut(gc);
  std::vector<UserNode> nodes;
  nodes.reserve(static_cast<size_t>(gc.n) + 2);
  for (int v = 0; v < gc.n; ++v) nodes.push_back({"v" + std::to_string(v), 0.0});
  nodes.push_back({"u-", -1.0});
  nodes.push_back({"u+", 1.0});
  std::vector<SentimentEdge> edges;
  edges.reserve(gc.edges.size() * 2);
  for (auto [a, b] : gc.edges) {
    edges.push_back({a, b, -0.5});
    edges.push_back({b, a, -0.5});
  }
  return UDebG(std::move(nodes), std::move(edges));
}

inline int anchor_minus(const MaxcutGraph& gc) { return gc.n; }
inline int anchor_plus(const MaxcutGraph& gc) { return gc.n + 1; }

struct MaxcutResult {
  int cut = 0;
  std::vector<std::int8_t> side;  // 0 / 1 per vertex
};

inline int cut_value(const MaxcutGraph& gc, const std::vector<std::int8_t>& side) {
  int cut = 0;
  for (auto [u, v] : gc.edges)
    cut += side[static_cast<size_t>(u)] != side[static_cast<size_t>(v)];
  return cut;
}

inline constexpr int kMaxcutBruteforceCap = 20;

/// Exact maxcut by enumeration (first maximizer in mask order).
inline MaxcutResult maxcut_bruteforce(const MaxcutGraph& gc,
                                      int cap = kMaxcutBruteforceCap) {
  validate_maxcut(gc);
  if (gc.n > cap)
    throw ConfigError("maxcut_bruteforce supports at most " + std::to_string(cap) +
                      " vertices, got " + std::to_string(gc.n));
  MaxcutResult best;
  best.side.assign(static_cast<size_t>(gc.n), 0);
  best.cut = 0;
  std::vector<std::int8_t> side(static_cast<size_t>(gc.n), 0);
  const std::uint32_t total = gc.n == 0 ? 1u : 1u << gc.n;
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    for (int v = 0; v < gc.n; ++v)
      side[static_cast<size_t>(v)] = static_cast<std::int8_t>((mask >> v) & 1u);
    const int cut = cut_value(gc, side);
    if (cut > best.cut) {
      best.cut = cut;
      best.side = side;
    }
  }
  return best;
}

/// Reads a maxcut bipartition back out of a solved reduced instance. The
/// anchors are first normalized to their forced sides (u- left, u+ right),
/// which never lowers the objective; original vertices then keep the sides
/// the solver gave them.
inline int recover_cut(const MaxcutGraph& gc, const SolveResult& solved) {
  if (static_cast<int>(solved.assignment.size()) != gc.n + 2)
    throw ValidationError("solved assignment does not match the reduced instance size");
  std::vector<std::int8_t> side(static_cast<size_t>(gc.n), 0);
  for (int v = 0; v < gc.n; ++v)
    side[static_cast<size_t>(v)] =
        solved.assignment[static_cast<size_t>(v)] == Side::R ? 1 : 0;
  return cut_value(gc, side);
}

}  // namespace polarize
