#pragma once

// k-partite k-uniform hypergraphs (observation patterns of partial tensors),
// their incidence matrices, degree-d extensions, and random models.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "matrix.hpp"
#include "random.hpp"

namespace tensorrig {

/// A transversal: one within-part index per part.
using Edge = std::vector<std::uint32_t>;

struct VertexId {
  std::uint32_t part = 0;
  std::uint32_t index = 0;
  friend auto operator<=>(const VertexId&, const VertexId&) = default;
};

/// Immutable k-partite k-graph. Edges are kept sorted lexicographically and
/// indexed by their mixed-radix rank for O(1) membership.
class PartiteHypergraph {
 public:
  PartiteHypergraph() = default;

  PartiteHypergraph(std::vector<std::uint32_t> part_sizes, std::vector<Edge> edges)
      : sizes_(std::move(part_sizes)), edges_(std::move(edges)) {
    if (sizes_.size() < 2) throw std::invalid_argument("PartiteHypergraph: need k >= 2 parts");
    offsets_.resize(sizes_.size());
    std::uint64_t total = 1;
    std::size_t n = 0;
    for (std::size_t j = 0; j < sizes_.size(); ++j) {
      offsets_[j] = n;
      n += sizes_[j];
      if (sizes_[j] != 0 && total > std::numeric_limits<std::uint64_t>::max() / sizes_[j])
        throw std::invalid_argument("PartiteHypergraph: too many potential edges");
      total *= sizes_[j];
    }
    vertex_count_ = n;
    total_edges_ = total;
    for (const auto& e : edges_) {
      if (e.size() != sizes_.size())
        throw std::invalid_argument("PartiteHypergraph: edge is not a transversal");
      for (std::size_t j = 0; j < e.size(); ++j)
        if (e[j] >= sizes_[j]) throw std::invalid_argument("PartiteHypergraph: vertex index out of range");
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
      throw std::invalid_argument("PartiteHypergraph: duplicate edge");
    index_.reserve(edges_.size());
    for (const auto& e : edges_) index_.insert(rank_of(e));
  }

  /// Complete k-partite k-graph on the given part sizes.
  static PartiteHypergraph complete(std::vector<std::uint32_t> part_sizes) {
    PartiteHypergraph shell(part_sizes, {});
    std::vector<Edge> all;
    all.reserve(shell.total_edges_);
    for (std::uint64_t r = 0; r < shell.total_edges_; ++r) all.push_back(shell.unrank(r));
    return PartiteHypergraph(std::move(part_sizes), std::move(all));
  }

  static PartiteHypergraph complete_balanced(std::uint32_t n, std::size_t k) {
    return complete(std::vector<std::uint32_t>(k, n));
  }

  std::size_t k() const { return sizes_.size(); }
  const std::vector<std::uint32_t>& part_sizes() const { return sizes_; }
  std::uint32_t part_size(std::size_t j) const { return sizes_[j]; }
  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  /// Number of edges of the complete graph on the same parts.
  std::uint64_t total_edges() const { return total_edges_; }
  const std::vector<Edge>& edges() const { return edges_; }
  bool balanced() const {
    return std::all_of(sizes_.begin(), sizes_.end(), [&](auto s) { return s == sizes_[0]; });
  }

  bool contains(const Edge& e) const {
    if (e.size() != k()) return false;
    for (std::size_t j = 0; j < e.size(); ++j)
      if (e[j] >= sizes_[j]) return false;
    return index_.count(rank_of(e)) != 0;
  }

  /// Position of e in edges(), if present.
  std::optional<std::size_t> edge_position(const Edge& e) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e) return std::nullopt;
    return static_cast<std::size_t>(it - edges_.begin());
  }

  std::size_t part_offset(std::size_t j) const { return offsets_[j]; }
  std::size_t flat(VertexId v) const { return offsets_[v.part] + v.index; }
  std::size_t flat(std::size_t part, std::uint32_t index) const { return offsets_[part] + index; }
  VertexId vertex(std::size_t flat_index) const {
    std::size_t j = sizes_.size() - 1;
    while (offsets_[j] > flat_index) --j;
    return {static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(flat_index - offsets_[j])};
  }

  /// Mixed-radix rank; part 0 is most significant, so rank order is
  /// lexicographic order.
  std::uint64_t rank_of(const Edge& e) const {
    std::uint64_t r = 0;
    for (std::size_t j = 0; j < e.size(); ++j) r = r * sizes_[j] + e[j];
    return r;
  }

  Edge unrank(std::uint64_t r) const {
    Edge e(sizes_.size());
    for (std::size_t j = sizes_.size(); j-- > 0;) {
      e[j] = static_cast<std::uint32_t>(r % sizes_[j]);
      r /= sizes_[j];
    }
    return e;
  }

  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> deg(vertex_count_, 0);
    for (const auto& e : edges_)
      for (std::size_t j = 0; j < e.size(); ++j) ++deg[offsets_[j] + e[j]];
    return deg;
  }

  /// Same parts, different edge set.
  PartiteHypergraph with_edges(std::vector<Edge> edges) const {
    return PartiteHypergraph(sizes_, std::move(edges));
  }

  friend bool operator==(const PartiteHypergraph& a, const PartiteHypergraph& b) {
    return a.sizes_ == b.sizes_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<std::uint32_t> sizes_;
  std::vector<std::size_t> offsets_;
  std::vector<Edge> edges_;
  std::unordered_set<std::uint64_t> index_;
  std::size_t vertex_count_ = 0;
  std::uint64_t total_edges_ = 0;
};

/// N x |E| 0/1 incidence matrix in the requested domain; rows follow the
/// flat vertex order, columns the edge order.
template <class Field = IntegerRing>
FieldMatrix<Field> incidence_matrix(const PartiteHypergraph& g, Field field = {}) {
  FieldMatrix<Field> m(field, g.vertex_count(), g.edge_count());
  for (std::size_t c = 0; c < g.edge_count(); ++c) {
    const auto& e = g.edges()[c];
    for (std::size_t j = 0; j < e.size(); ++j) m.set(g.flat(j, e[j]), c, field.one());
  }
  return m;
}

inline std::size_t min_degree(const PartiteHypergraph& g) {
  const auto deg = g.degrees();
  if (deg.empty()) throw std::invalid_argument("min_degree: graph has no vertices");
  return *std::min_element(deg.begin(), deg.end());
}

/// Indices on every part except the new vertex's part, in part order.
using Attachment = std::vector<std::uint32_t>;

/// Adds one vertex to `part` and one edge per attachment joining it to the
/// attachment's k-1 existing vertices.
inline PartiteHypergraph degree_d_extension(const PartiteHypergraph& g, std::size_t part,
                                            std::span<const Attachment> attachments) {
  if (part >= g.k()) throw std::invalid_argument("degree_d_extension: part out of range");
  std::set<Attachment> seen;
  auto sizes = g.part_sizes();
  const std::uint32_t fresh = sizes[part]++;
  std::vector<Edge> edges = g.edges();
  for (const auto& a : attachments) {
    if (a.size() + 1 != g.k())
      throw std::invalid_argument("degree_d_extension: attachment must cover k-1 parts");
    if (!seen.insert(a).second) throw std::invalid_argument("degree_d_extension: duplicate attachment");
    Edge e;
    e.reserve(g.k());
    for (std::size_t j = 0, at = 0; j < g.k(); ++j) {
      if (j == part) {
        e.push_back(fresh);
        continue;
      }
      if (a[at] >= g.part_size(j))
        throw std::invalid_argument("degree_d_extension: attachment touches a nonexistent vertex");
      e.push_back(a[at++]);
    }
    edges.push_back(std::move(e));
  }
  return PartiteHypergraph(std::move(sizes), std::move(edges));
}

/// Random k-partite d-tree: K^k_d followed by uniformly random degree-d
/// extensions until every part reaches its target size.
inline PartiteHypergraph random_dtree(std::size_t k, std::uint32_t d,
                                      std::span<const std::uint32_t> n_target,
                                      std::uint64_t seed) {
  if (n_target.size() != k) throw std::invalid_argument("random_dtree: need one target per part");
  for (auto t : n_target)
    if (t < d) throw std::invalid_argument("random_dtree: targets must be >= d");
  Rng rng(seed);
  auto g = PartiteHypergraph::complete(std::vector<std::uint32_t>(k, d));
  for (;;) {
    std::vector<std::size_t> open;
    for (std::size_t j = 0; j < k; ++j)
      if (g.part_size(j) < n_target[j]) open.push_back(j);
    if (open.empty()) return g;
    const std::size_t part = open[rng.below(open.size())];
    std::set<Attachment> chosen;
    while (chosen.size() < d) {
      Attachment a;
      for (std::size_t j = 0; j < k; ++j)
        if (j != part) a.push_back(static_cast<std::uint32_t>(rng.below(g.part_size(j))));
      chosen.insert(std::move(a));
    }
    // Random order among the chosen attachments does not matter for the graph.
    std::vector<Attachment> list(chosen.begin(), chosen.end());
    g = degree_d_extension(g, part, list);
  }
}

inline std::uint64_t balanced_total(std::uint32_t n, std::size_t k) {
  std::uint64_t t = 1;
  for (std::size_t j = 0; j < k; ++j) t *= n;
  return t;
}

/// Uniform m-edge subgraph of K^k_n via sparse partial Fisher-Yates over
/// edge ranks.
inline PartiteHypergraph gnm(std::uint32_t n, std::size_t k, std::uint64_t m, std::uint64_t seed) {
  const PartiteHypergraph shell(std::vector<std::uint32_t>(k, n), {});
  const std::uint64_t total = shell.total_edges();
  if (m > total) throw std::invalid_argument("gnm: m exceeds n^k");
  Rng rng(seed);
  std::unordered_map<std::uint64_t, std::uint64_t> swapped;
  auto at = [&](std::uint64_t i) {
    auto it = swapped.find(i);
    return it == swapped.end() ? i : it->second;
  };
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) {
    const std::uint64_t j = i + rng.below(total - i);
    const std::uint64_t vi = at(i), vj = at(j);
    swapped[j] = vi;
    swapped[i] = vj;
    edges.push_back(shell.unrank(vj));
  }
  return shell.with_edges(std::move(edges));
}

/// Keeps each edge of K^k_n independently with probability p.
inline PartiteHypergraph gnp(std::uint32_t n, std::size_t k, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("gnp: p must lie in [0,1]");
  const PartiteHypergraph shell(std::vector<std::uint32_t>(k, n), {});
  Rng rng(seed);
  std::vector<Edge> edges;
  for (std::uint64_t r = 0; r < shell.total_edges(); ++r)
    if (rng.bernoulli(p)) edges.push_back(shell.unrank(r));
  return shell.with_edges(std::move(edges));
}

/// Prefix of a uniformly random insertion order of E(K^k_n), long enough
/// for the minimum degree to reach `d`.
struct MdTrace {
  std::uint32_t n = 0;
  std::size_t k = 0;
  std::vector<Edge> edge_order;
  /// stop[i] = first prefix length with minimum degree >= i+1.
  std::vector<std::uint64_t> stop;

  std::uint64_t m_d(std::uint32_t d) const { return stop.at(d - 1); }

  PartiteHypergraph prefix(std::uint64_t m) const {
    if (m > edge_order.size()) throw std::out_of_range("MdTrace::prefix beyond trace");
    return PartiteHypergraph(std::vector<std::uint32_t>(k, n),
                             {edge_order.begin(), edge_order.begin() + static_cast<std::ptrdiff_t>(m)});
  }
};

/// Random edge process on K^k_n run until minimum degree d. The insertion
/// order depends only on (n, k, seed), so traces for different d under the
/// same seed are prefixes of one another.
inline MdTrace md_process(std::uint32_t n, std::size_t k, std::uint32_t d, std::uint64_t seed) {
  if (n == 0 || d == 0) throw std::invalid_argument("md_process: need n >= 1 and d >= 1");
  const PartiteHypergraph shell(std::vector<std::uint32_t>(k, n), {});
  if (d > shell.total_edges() / n) throw std::invalid_argument("md_process: d exceeds n^(k-1)");
  const std::uint64_t total = shell.total_edges();
  Rng rng(seed);
  std::unordered_map<std::uint64_t, std::uint64_t> swapped;
  auto at = [&](std::uint64_t i) {
    auto it = swapped.find(i);
    return it == swapped.end() ? i : it->second;
  };

  MdTrace trace{n, k, {}, {}};
  std::vector<std::uint32_t> deg(shell.vertex_count(), 0);
  // below[t] = number of vertices of degree exactly t, for t < d.
  std::vector<std::size_t> count_at(d + 1, 0);
  count_at[0] = shell.vertex_count();
  std::uint32_t level = 0;  // current minimum degree (capped at d)
  for (std::uint64_t i = 0; level < d; ++i) {
    const std::uint64_t j = i + rng.below(total - i);
    const std::uint64_t vi = at(i), vj = at(j);
    swapped[j] = vi;
    swapped[i] = vj;
    Edge e = shell.unrank(vj);
    for (std::size_t p = 0; p < k; ++p) {
      auto& dv = deg[shell.flat(p, e[p])];
      if (dv < d) {
        --count_at[dv];
        ++dv;
        ++count_at[dv];
      }
    }
    trace.edge_order.push_back(std::move(e));
    while (level < d && count_at[level] == 0) {
      ++level;
      trace.stop.push_back(trace.edge_order.size());
    }
  }
  return trace;
}

/// Some vertex of B with at least d edges whose other vertices avoid B.
inline std::optional<VertexId> is_d_extendable(const PartiteHypergraph& g,
                                               std::span<const VertexId> b, std::size_t d) {
  std::vector<bool> in_b(g.vertex_count(), false);
  for (const auto& v : b) in_b[g.flat(v)] = true;
  std::vector<std::size_t> good(g.vertex_count(), 0);
  for (const auto& e : g.edges()) {
    std::size_t inside = 0, which = 0;
    for (std::size_t j = 0; j < e.size(); ++j)
      if (in_b[g.flat(j, e[j])]) {
        ++inside;
        which = g.flat(j, e[j]);
      }
    if (inside == 1) ++good[which];
  }
  for (const auto& v : b)
    if (good[g.flat(v)] >= d) return v;
  return std::nullopt;
}

}  // namespace tensorrig
