#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "polarize/debate.hpp"
#include "polarize/io.hpp"
#include "polarize/rng.hpp"

using namespace polarize;

namespace {

DebateTree tree_from(const std::string& text) {
  std::istringstream in(text);
  return load_debate(in);
}

int side_of(const DebateTree& t, const std::string& id) {
  for (size_t i = 0; i < t.comments.size(); ++i)
    if (t.comments[i].id == id) return t.sides[i];
  FAIL("no comment " << id);
  return 0;
}

}  // namespace

TEST_CASE("side propagation follows the agreement rule") {
  const DebateTree t = propagate_sides(tree_from(R"({
    "root": "c0",
    "comments": [
      {"id":"c1","author":"u1","parent":"c0","w":-1.5},
      {"id":"c2","author":"u2","parent":"c1","w":-0.5},
      {"id":"c3","author":"u3","parent":"c1","w":0},
      {"id":"c4","author":"u4","parent":"c0","w":0.5},
      {"id":"c5","author":"u5","parent":"c2","w":-2}
    ]})"));
  CHECK(side_of(t, "c1") == -1);  // disagrees with the +1 root
  CHECK(side_of(t, "c2") == 1);   // disagrees with a -1 parent
  CHECK(side_of(t, "c3") == 1);   // w = 0 counts as nonpositive
  CHECK(side_of(t, "c4") == 1);   // agrees with the root
  CHECK(side_of(t, "c5") == -1);
}

TEST_CASE("propagation is independent of comment list order") {
  // children listed before their parents
  const DebateTree t = propagate_sides(tree_from(R"({
    "root": "r",
    "comments": [
      {"id":"b","author":"u2","parent":"a","w":1.0},
      {"id":"c","author":"u3","parent":"b","w":-1.0},
      {"id":"a","author":"u1","parent":"r","w":-1.0}
    ]})"));
  CHECK(side_of(t, "a") == -1);
  CHECK(side_of(t, "b") == -1);  // positive sentiment toward a -1 parent
  CHECK(side_of(t, "c") == 1);
}

TEST_CASE("structural validation rejects broken trees") {
  CHECK_THROWS_AS(tree_from(R"({"root":"r","comments":[
    {"id":"a","author":"u","parent":"zzz","w":1}]})"),
                  ValidationError);
  CHECK_THROWS_AS(tree_from(R"({"root":"r","comments":[
    {"id":"a","author":"u","parent":"b","w":1},
    {"id":"b","author":"u","parent":"a","w":1}]})"),
                  ValidationError);
  CHECK_THROWS_AS(tree_from(R"({"root":"r","comments":[
    {"id":"a","author":"u","parent":"r","w":1},
    {"id":"a","author":"u","parent":"r","w":-1}]})"),
                  ValidationError);
  CHECK_THROWS_AS(tree_from(R"({"root":"r","comments":[
    {"id":"r","author":"u","parent":"r","w":1}]})"),
                  ValidationError);
  CHECK_THROWS_AS(tree_from(R"({"root":"r","comments":[
    {"id":"a","author":"u","parent":"r","w":3.0}]})"),
                  ValidationError);
  CHECK_THROWS_AS(tree_from(R"({"root":"r","comments":[{"id":"a"}]})"), ParseError);
  CHECK_THROWS_AS(tree_from("nonsense"), ParseError);
}

TEST_CASE("aggregate requires propagated sides") {
  DebateTree t = tree_from(
      R"({"root":"r","comments":[{"id":"a","author":"u","parent":"r","w":1}]})");
  CHECK_THROWS_AS(aggregate(t), ValidationError);
}

TEST_CASE("aggregation means sides and reply sentiments") {
  const DebateTree t = propagate_sides(tree_from(R"({
    "root": "c0",
    "comments": [
      {"id":"c1","author":"u2","parent":"c0","w":1.0},
      {"id":"c2","author":"u1","parent":"c1","w":-2},
      {"id":"c3","author":"u1","parent":"c1","w":-1},
      {"id":"c4","author":"u1","parent":"c0","w":1.0},
      {"id":"c5","author":"u3","parent":"c4","w":2.0}
    ]})"));
  const UDebG g = aggregate(t);
  REQUIRE(g.size() == 3);  // authors sorted: u1, u2, u3
  CHECK(g.node(0).id == "u1");
  // u1 comments: c2 (-1), c3 (-1), c4 (+1) -> mean 1/3 of -1
  CHECK(g.node(0).s == Catch::Approx(-1.0 / 3));
  CHECK(g.node(1).s == Catch::Approx(1.0));

  // u1 replied twice to u2 (w -2 and -1) and u3 once to u1
  REQUIRE(g.num_edges() == 2);
  CHECK(g.edge(0).src == 0);
  CHECK(g.edge(0).dst == 1);
  CHECK(g.edge(0).w == Catch::Approx(-1.5));
  CHECK(g.edge(1).src == 2);
  CHECK(g.edge(1).dst == 0);
  CHECK(g.edge(1).w == Catch::Approx(2.0));
}

TEST_CASE("mixed-side authors average to zero") {
  const DebateTree t = propagate_sides(tree_from(R"({
    "root": "c0",
    "comments": [
      {"id":"c1","author":"u1","parent":"c0","w":1.0},
      {"id":"c2","author":"u1","parent":"c0","w":-1.0}
    ]})"));
  const UDebG g = aggregate(t);
  REQUIRE(g.size() == 1);
  CHECK(g.node(0).s == 0.0);
  CHECK(g.num_edges() == 0);  // root replies make no edges
}

TEST_CASE("self-replies count toward s but never form edges") {
  const DebateTree t = propagate_sides(tree_from(R"({
    "root": "c0",
    "comments": [
      {"id":"c1","author":"u1","parent":"c0","w":1.0},
      {"id":"c2","author":"u1","parent":"c1","w":-2.0}
    ]})"));
  const UDebG g = aggregate(t);
  REQUIRE(g.size() == 1);
  CHECK(g.node(0).s == 0.0);  // sides +1 and -1
  CHECK(g.num_edges() == 0);
}

TEST_CASE("root-only repliers become isolated nodes") {
  const DebateTree t = propagate_sides(tree_from(R"({
    "root": "c0",
    "comments": [
      {"id":"c1","author":"u1","parent":"c0","w":1.0},
      {"id":"c2","author":"u2","parent":"c1","w":1.0}
    ]})"));
  const UDebG g = aggregate(t);
  REQUIRE(g.size() == 2);
  int u1_out = 0;
  for (const SentimentEdge& e : g.edges()) u1_out += e.src == 0;
  CHECK(u1_out == 0);
  CHECK(g.num_edges() == 1);  // only u2 -> u1
}

TEST_CASE("aggregation ignores comment input order") {
  const std::string base = R"({"id":"c1","author":"ua","parent":"c0","w":1.0},
      {"id":"c2","author":"ub","parent":"c1","w":-1.0},
      {"id":"c3","author":"uc","parent":"c2","w":0.5},
      {"id":"c4","author":"ub","parent":"c3","w":-0.25},
      {"id":"c5","author":"ua","parent":"c2","w":1.5})";
  std::vector<std::string> records;
  {
    std::string rest = base;
    size_t pos = 0;
    while ((pos = rest.find("},")) != std::string::npos) {
      records.push_back(rest.substr(0, pos + 1));
      rest = rest.substr(pos + 2);
    }
    records.push_back(rest);
  }
  REQUIRE(records.size() == 5);

  std::string first;
  std::sort(records.begin(), records.end());
  do {
    std::string doc = R"({"root":"c0","comments":[)";
    for (size_t i = 0; i < records.size(); ++i) {
      if (i) doc += ',';
      doc += records[i];
    }
    doc += "]}";
    const UDebG g = aggregate(propagate_sides(tree_from(doc)));
    const std::string bytes = canonical_dump(instance_to_json(g));
    if (first.empty())
      first = bytes;
    else
      REQUIRE(bytes == first);
  } while (std::next_permutation(records.begin(), records.end()));
}

TEST_CASE("node and edge weights stay in their ranges") {
  Rng rng(60);
  for (int it = 0; it < 50; ++it) {
    // random tree: each comment replies to the root or an earlier comment
    const int n = 2 + static_cast<int>(rng.next_below(20));
    DebateTree t;
    t.root = "c0";
    for (int i = 0; i < n; ++i) {
      Comment c;
      c.id = "k" + std::to_string(i);
      c.author = "u" + std::to_string(rng.next_below(6));
      c.parent = i == 0 || rng.next_bool()
                     ? t.root
                     : "k" + std::to_string(rng.next_below(static_cast<std::uint64_t>(i)));
      c.w = rng.next_unit() * 4.0 - 2.0;
      t.comments.push_back(std::move(c));
    }
    const UDebG g = aggregate(propagate_sides(std::move(t)));
    for (const UserNode& node : g.nodes()) {
      CHECK(node.s >= -1.0);
      CHECK(node.s <= 1.0);
    }
    for (const SentimentEdge& e : g.edges()) {
      CHECK(e.w >= -2.0);
      CHECK(e.w <= 2.0);
    }
  }
}
