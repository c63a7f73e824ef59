#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "polarize/errors.hpp"
#include "polarize/io.hpp"
#include "polarize/model.hpp"

namespace polarize {

/// One non-root comment. The root is held separately (id only): it has no
/// parent, no sentiment, and its side is +1 by definition.
struct Comment {
  std::string id;
  std::string author;
  std::string parent;  // comment id or the root id
  double w = 0.0;      // sentiment toward the parent, in [-2,2]
};

/// Two-sided debate tree. sides is parallel to comments and empty until
/// propagate_sides has run; +1 marks agreement with the root.
struct DebateTree {
  std::string root;
  std::vector<Comment> comments;
  std::vector<std::int8_t> sides;

  bool propagated() const { return sides.size() == comments.size(); }
};

namespace detail {

// Index comments by id, rejecting duplicates and ids equal to the root.
inline std::unordered_map<std::string, int> comment_index(const DebateTree& t) {
  std::unordered_map<std::string, int> by_id;
  by_id.reserve(t.comments.size());
  for (int i = 0; i < static_cast<int>(t.comments.size()); ++i) {
    const Comment& c = t.comments[static_cast<size_t>(i)];
    if (c.id == t.root)
      throw ValidationError("comment id '" + c.id + "' duplicates the root id");
    if (!by_id.emplace(c.id, i).second)
      throw ValidationError("duplicate comment id '" + c.id + "'");
  }
  return by_id;
}

}  // namespace detail

/// Checks tree structure: unique ids, every parent known, no cycles.
inline void validate_tree(const DebateTree& t) {
  const auto by_id = detail::comment_index(t);
  // state: 0 unvisited, 1 on the current walk, 2 known good
  std::vector<std::int8_t> state(t.comments.size(), 0);
  std::vector<int> walk;
  for (int i = 0; i < static_cast<int>(t.comments.size()); ++i) {
    int cur = i;
    walk.clear();
    while (state[static_cast<size_t>(cur)] == 0) {
      state[static_cast<size_t>(cur)] = 1;
      walk.push_back(cur);
      const std::string& parent = t.comments[static_cast<size_t>(cur)].parent;
      if (parent == t.root) break;
      auto it = by_id.find(parent);
      if (it == by_id.end())
        throw ValidationError("comment '" + t.comments[static_cast<size_t>(cur)].id +
                              "' replies to unknown comment '" + parent + "'");
      cur = it->second;
      if (state[static_cast<size_t>(cur)] == 1)
        throw ValidationError("parent links contain a cycle through comment '" +
                              t.comments[static_cast<size_t>(cur)].id + "'");
    }
    for (int c : walk) state[static_cast<size_t>(c)] = 2;
  }
}

/// Labels every comment +1/-1 top-down: a reply sides with its parent when
/// the sentiment is positive toward a +1 parent or nonpositive toward a -1
/// parent; otherwise it takes the opposite side. The root counts as +1.
inline DebateTree propagate_sides(DebateTree tree) {
  validate_tree(tree);
  const auto by_id = detail::comment_index(tree);
  tree.sides.assign(tree.comments.size(), 0);
  std::vector<int> walk;
  for (int i = 0; i < static_cast<int>(tree.comments.size()); ++i) {
    if (tree.sides[static_cast<size_t>(i)] != 0) continue;
    // climb to the first resolved ancestor (or the root), then unwind
    int cur = i;
    walk.clear();
    std::int8_t side = 1;
    for (;;) {
      walk.push_back(cur);
      const std::string& parent = tree.comments[static_cast<size_t>(cur)].parent;
      if (parent == tree.root) break;
      const int up = by_id.at(parent);
      if (tree.sides[static_cast<size_t>(up)] != 0) {
        side = tree.sides[static_cast<size_t>(up)];
        break;
      }
      cur = up;
    }
    for (auto it = walk.rbegin(); it != walk.rend(); ++it) {
      const double w = tree.comments[static_cast<size_t>(*it)].w;
      const bool agree = (side == 1 && w > 0.0) || (side == -1 && w <= 0.0);
      side = agree ? std::int8_t{1} : std::int8_t{-1};
      tree.sides[static_cast<size_t>(*it)] = side;
    }
  }
  return tree;
}

/// Collapses a propagated tree into a user debate graph: one node per author
/// of at least one comment, s = mean side of their comments; one directed
/// edge per ordered author pair with at least one reply between distinct
/// authors, w = mean sentiment over exactly those replies. Replies to the
/// root and self-replies contribute no edge. Output is independent of the
/// comment input order: nodes are sorted by author id and per-edge means are
/// accumulated in comment-id order.
inline UDebG aggregate(const DebateTree& tree) {
  if (!tree.propagated())
    throw ValidationError("aggregate requires propagated sides; call propagate_sides first");
  const auto by_id = detail::comment_index(tree);

  std::map<std::string, std::pair<int, int>> author_acc;  // sum of sides, count
  for (int i = 0; i < static_cast<int>(tree.comments.size()); ++i) {
    auto& acc = author_acc[tree.comments[static_cast<size_t>(i)].author];
    acc.first += tree.sides[static_cast<size_t>(i)];
    acc.second += 1;
  }

  std::vector<int> order(tree.comments.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return tree.comments[static_cast<size_t>(a)].id < tree.comments[static_cast<size_t>(b)].id;
  });

  std::map<std::pair<std::string, std::string>, std::pair<double, int>> edge_acc;
  for (int i : order) {
    const Comment& c = tree.comments[static_cast<size_t>(i)];
    if (c.parent == tree.root) continue;
    const Comment& p = tree.comments[static_cast<size_t>(by_id.at(c.parent))];
    if (c.author == p.author) continue;
    auto& acc = edge_acc[{c.author, p.author}];
    acc.first += c.w;
    acc.second += 1;
  }

  std::vector<UserNode> nodes;
  nodes.reserve(author_acc.size());
  std::unordered_map<std::string, int> node_of;
  for (const auto& [author, acc] : author_acc) {
    node_of.emplace(author, static_cast<int>(nodes.size()));
    nodes.push_back({author, static_cast<double>(acc.first) / acc.second});
  }

  std::vector<SentimentEdge> edges;
  edges.reserve(edge_acc.size());
  for (const auto& [pair, acc] : edge_acc)
    edges.push_back({node_of.at(pair.first), node_of.at(pair.second),
                     acc.first / acc.second});

  return UDebG(std::move(nodes), std::move(edges));
}

// Debate-tree JSON:
// {"root":"c0","comments":[{"id":"c1","author":"u7","parent":"c0","w":-1.5},...]}
inline DebateTree debate_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("root") || !j.contains("comments") ||
      !j.at("root").is_string() || !j.at("comments").is_array())
    throw ParseError("debate JSON must be an object with a string \"root\" and a \"comments\" array");
  DebateTree t;
  t.root = j.at("root").get<std::string>();
  for (const auto& rec : j.at("comments")) {
    if (!rec.is_object() || !rec.contains("id") || !rec.contains("author") ||
        !rec.contains("parent") || !rec.contains("w") || !rec.at("id").is_string() ||
        !rec.at("author").is_string() || !rec.at("parent").is_string() ||
        !rec.at("w").is_number())
      throw ParseError("comment records need string \"id\"/\"author\"/\"parent\" and numeric \"w\"");
    Comment c{rec.at("id").get<std::string>(), rec.at("author").get<std::string>(),
              rec.at("parent").get<std::string>(), rec.at("w").get<double>()};
    if (c.w < -2.0 || c.w > 2.0)
      throw ValidationError("comment '" + c.id + "' has sentiment " +
                            std::to_string(c.w) + " outside [-2,2]");
    t.comments.push_back(std::move(c));
  }
  validate_tree(t);
  return t;
}

inline DebateTree load_debate(std::istream& in) {
  return debate_from_json(detail::parse_json(in, "debate tree"));
}

inline DebateTree load_debate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open debate file: " + path);
  return load_debate(in);
}

}  // namespace polarize
