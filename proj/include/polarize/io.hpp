#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "polarize/errors.hpp"
#include "polarize/model.hpp"

namespace polarize {

// Instance JSON: {"nodes":[{"id":"u1","s":-0.75},...],
//                 "edges":[{"src":0,"dst":3,"w":-1.25},...]}
// src/dst are node-array indices. Unknown top-level keys (e.g. "meta") are
// ignored on load. Numbers round-trip exactly: the writer emits the shortest
// decimal that parses back to the same double.

namespace detail {

inline nlohmann::json parse_json(std::istream& in, const char* what) {
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON in ") + what + ": " + e.what());
  }
}

}  // namespace detail

inline UDebG instance_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("nodes") || !j.contains("edges"))
    throw ParseError("instance JSON must be an object with \"nodes\" and \"edges\" arrays");
  const auto& jn = j.at("nodes");
  const auto& je = j.at("edges");
  if (!jn.is_array() || !je.is_array())
    throw ParseError("instance \"nodes\" and \"edges\" must be arrays");

  std::vector<UserNode> nodes;
  nodes.reserve(jn.size());
  for (const auto& rec : jn) {
    if (!rec.is_object() || !rec.contains("id") || !rec.contains("s") ||
        !rec.at("id").is_string() || !rec.at("s").is_number())
      throw ParseError("node records need a string \"id\" and numeric \"s\"");
    nodes.push_back({rec.at("id").get<std::string>(), rec.at("s").get<double>()});
  }

  std::vector<SentimentEdge> edges;
  edges.reserve(je.size());
  for (const auto& rec : je) {
    if (!rec.is_object() || !rec.contains("src") || !rec.contains("dst") ||
        !rec.contains("w") || !rec.at("src").is_number_integer() ||
        !rec.at("dst").is_number_integer() || !rec.at("w").is_number())
      throw ParseError("edge records need integer \"src\"/\"dst\" and numeric \"w\"");
    edges.push_back({rec.at("src").get<int>(), rec.at("dst").get<int>(),
                     rec.at("w").get<double>()});
  }

  return UDebG(std::move(nodes), std::move(edges));
}

inline nlohmann::ordered_json instance_to_json(const UDebG& g) {
  nlohmann::ordered_json j;
  j["nodes"] = nlohmann::ordered_json::array();
  for (const UserNode& n : g.nodes())
    j["nodes"].push_back({{"id", n.id}, {"s", n.s}});
  j["edges"] = nlohmann::ordered_json::array();
  for (const SentimentEdge& e : g.edges())
    j["edges"].push_back({{"src", e.src}, {"dst", e.dst}, {"w", e.w}});
  return j;
}

/// Compact single-line serialization with a trailing newline; the canonical
/// byte form used by the CLI and the golden files.
inline std::string canonical_dump(const nlohmann::ordered_json& j) {
  return j.dump() + "\n";
}

inline UDebG load_instance(std::istream& in) {
  return instance_from_json(detail::parse_json(in, "instance"));
}

inline UDebG load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file: " + path);
  return load_instance(in);
}

inline void write_instance(const UDebG& g, std::ostream& out) {
  out << canonical_dump(instance_to_json(g));
}

inline void save_instance(const UDebG& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  write_instance(g, out);
}

inline nlohmann::ordered_json assignment_to_json(const Bipartition& p) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (Side s : p) arr.push_back(s == Side::L ? "L" : "R");
  return arr;
}

/// Assignment file: JSON array of "L"/"R" tags in node order.
inline Bipartition assignment_from_json(const nlohmann::json& j, int expected_m) {
  if (!j.is_array()) throw ParseError("assignment must be a JSON array of \"L\"/\"R\" tags");
  Bipartition p;
  p.reserve(j.size());
  for (const auto& tag : j) {
    if (!tag.is_string())
      throw ParseError("assignment entries must be the strings \"L\" or \"R\"");
    const std::string s = tag.get<std::string>();
    if (s == "L")
      p.push_back(Side::L);
    else if (s == "R")
      p.push_back(Side::R);
    else
      throw ParseError("assignment entries must be the strings \"L\" or \"R\", got \"" + s + "\"");
  }
  if (static_cast<int>(p.size()) != expected_m)
    throw ValidationError("assignment has " + std::to_string(p.size()) +
                          " entries but the instance has " + std::to_string(expected_m) +
                          " nodes");
  return p;
}

inline Bipartition load_assignment(std::istream& in, int expected_m) {
  return assignment_from_json(detail::parse_json(in, "assignment"), expected_m);
}

inline Bipartition load_assignment(const std::string& path, int expected_m) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open assignment file: " + path);
  return load_assignment(in, expected_m);
}

}  // namespace polarize
