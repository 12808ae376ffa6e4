#pragma once

// Hypergraph file formats.
//
//   JSON:  {"k":3,"parts":[2,2,2],"edges":[[0,0,0],[0,0,1]]}
//   text:  first line "k n_1 ... n_k", then one edge per line.
//
// Writers emit edges in canonical (lexicographic) order, so
// write(read(write(g))) is byte-identical to write(g).

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "errors.hpp"
#include "hypergraph.hpp"

namespace tensorrig {

using ordered_json = nlohmann::ordered_json;

inline ordered_json to_json(const PartiteHypergraph& g) {
  ordered_json j;
  j["k"] = g.k();
  j["parts"] = g.part_sizes();
  j["edges"] = ordered_json::array();
  for (const auto& e : g.edges()) j["edges"].push_back(e);
  return j;
}

inline PartiteHypergraph hypergraph_from_json(const nlohmann::ordered_json& j) {
  try {
    const auto k = j.at("k").get<std::size_t>();
    auto parts = j.at("parts").get<std::vector<std::uint32_t>>();
    if (parts.size() != k) throw FormatError("hypergraph JSON: k does not match parts");
    auto edges = j.at("edges").get<std::vector<Edge>>();
    return PartiteHypergraph(std::move(parts), std::move(edges));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("hypergraph JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("hypergraph JSON: ") + e.what());
  }
}

inline std::string write_json(const PartiteHypergraph& g) { return to_json(g).dump(); }

inline std::string write_text(const PartiteHypergraph& g) {
  std::ostringstream os;
  os << g.k();
  for (auto s : g.part_sizes()) os << ' ' << s;
  os << '\n';
  for (const auto& e : g.edges()) {
    for (std::size_t j = 0; j < e.size(); ++j) os << (j ? " " : "") << e[j];
    os << '\n';
  }
  return os.str();
}

inline PartiteHypergraph read_text(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw FormatError("hypergraph text: empty input");
  std::istringstream head(line);
  std::size_t k = 0;
  if (!(head >> k) || k < 2) throw FormatError("hypergraph text: bad header");
  std::vector<std::uint32_t> parts(k);
  for (auto& s : parts)
    if (!(head >> s)) throw FormatError("hypergraph text: header needs k part sizes");
  std::vector<Edge> edges;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    Edge e(k);
    for (auto& x : e)
      if (!(row >> x)) throw FormatError("hypergraph text: edge needs k indices");
    std::string extra;
    if (row >> extra) throw FormatError("hypergraph text: trailing data on edge line");
    edges.push_back(std::move(e));
  }
  try {
    return PartiteHypergraph(std::move(parts), std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("hypergraph text: ") + e.what());
  }
}

/// Parses either format; JSON is recognized by a leading '{'.
inline PartiteHypergraph parse_hypergraph(const std::string& content) {
  const auto first = content.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && content[first] == '{') {
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(content);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("hypergraph JSON: ") + e.what());
    }
    return hypergraph_from_json(j);
  }
  std::istringstream is(content);
  return read_text(is);
}

inline PartiteHypergraph load_hypergraph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_hypergraph(buf.str());
}

}  // namespace tensorrig
