#pragma once

// The rigidity map of a k-partite k-graph, its Jacobian, and the
// randomized local-rigidity tests built on them.
//
// A d-dimensional configuration assigns a point p_v in F^d to every vertex;
// edge e = (i_1..i_k) maps to sum_j prod_{v in e} p_{v,j}. The Jacobian has
// one row per edge and dN columns ordered vertex-major, coordinate-minor.

#include <algorithm>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "errors.hpp"
#include "hypergraph.hpp"
#include "matrix.hpp"
#include "random.hpp"

namespace tensorrig {

template <class Field>
class PointConfiguration {
 public:
  using value_type = typename Field::value_type;

  PointConfiguration() = default;
  PointConfiguration(Field field, std::size_t vertices, std::size_t dim)
      : field_(std::move(field)), vertices_(vertices), dim_(dim),
        values_(vertices * dim, field_.zero()) {}

  const Field& field() const { return field_; }
  std::size_t vertices() const { return vertices_; }
  std::size_t dim() const { return dim_; }

  const value_type& at(std::size_t v, std::size_t j) const { return values_[v * dim_ + j]; }
  void set(std::size_t v, std::size_t j, value_type x) {
    values_[v * dim_ + j] = field_.normalize(std::move(x));
  }

  /// Flat parameter vector, vertex-major.
  const std::vector<value_type>& values() const { return values_; }
  std::vector<value_type>& values() { return values_; }

 private:
  Field field_{};
  std::size_t vertices_ = 0;
  std::size_t dim_ = 0;
  std::vector<value_type> values_;
};

/// Uniform nonzero residues; zero is excluded so every edge product is a
/// unit.
inline PointConfiguration<PrimeField> sample_generic(const PrimeField& f, std::size_t vertices,
                                                     std::size_t dim, Rng& rng) {
  PointConfiguration<PrimeField> p(f, vertices, dim);
  for (auto& x : p.values()) x = 1 + rng.below(f.modulus() - 1);
  return p;
}

/// Small nonzero integers in [-bound, bound], for exact rational audits.
inline PointConfiguration<RationalField> sample_integer_points(std::size_t vertices, std::size_t dim,
                                                               Rng& rng, std::int64_t bound) {
  PointConfiguration<RationalField> p(RationalField{}, vertices, dim);
  for (auto& x : p.values()) {
    std::int64_t v = 0;
    while (v == 0) v = rng.between(-bound, bound);
    x = v;
  }
  return p;
}

template <class Field>
void check_dimensions(const PartiteHypergraph& g, const PointConfiguration<Field>& p) {
  if (p.vertices() != g.vertex_count())
    throw std::invalid_argument("configuration does not match the graph's vertex count");
}

/// prod_{v in e} p_{v,j}, optionally skipping the vertices in positions
/// `skip_a` and `skip_b` of the edge (pass k() to skip nothing).
template <class Field>
typename Field::value_type edge_product(const PartiteHypergraph& g, const Edge& e,
                                        const PointConfiguration<Field>& p, std::size_t j,
                                        std::size_t skip_a, std::size_t skip_b) {
  const auto& f = p.field();
  auto prod = f.one();
  for (std::size_t pos = 0; pos < e.size(); ++pos)
    if (pos != skip_a && pos != skip_b) prod = f.mul(prod, p.at(g.flat(pos, e[pos]), j));
  return prod;
}

/// f^d_G(p): one value per edge of g, in edge order.
template <class Field>
std::vector<typename Field::value_type> rigidity_map(const PartiteHypergraph& g,
                                                     const PointConfiguration<Field>& p) {
  check_dimensions(g, p);
  const auto& f = p.field();
  std::vector<typename Field::value_type> out;
  out.reserve(g.edge_count());
  for (const auto& e : g.edges()) {
    auto s = f.zero();
    for (std::size_t j = 0; j < p.dim(); ++j) s = f.add(s, edge_product(g, e, p, j, g.k(), g.k()));
    out.push_back(std::move(s));
  }
  return out;
}

/// Writes the Jacobian row of edge e into row `r` of m.
template <class Field>
void fill_jacobian_row(const PartiteHypergraph& g, const Edge& e, const PointConfiguration<Field>& p,
                       FieldMatrix<Field>& m, std::size_t r) {
  const std::size_t d = p.dim();
  for (std::size_t pos = 0; pos < e.size(); ++pos) {
    const std::size_t u = g.flat(pos, e[pos]);
    for (std::size_t j = 0; j < d; ++j) m.set(r, u * d + j, edge_product(g, e, p, j, pos, g.k()));
  }
}

/// Jacobian rows for an arbitrary list of edges of K^k on g's parts.
template <class Field>
FieldMatrix<Field> jacobian_rows(const PartiteHypergraph& g, std::span<const Edge> edges,
                                 const PointConfiguration<Field>& p) {
  check_dimensions(g, p);
  FieldMatrix<Field> m(p.field(), edges.size(), g.vertex_count() * p.dim());
  for (std::size_t r = 0; r < edges.size(); ++r) fill_jacobian_row(g, edges[r], p, m, r);
  return m;
}

/// |E| x dN Jacobian of the rigidity map at p.
template <class Field>
FieldMatrix<Field> jacobian(const PartiteHypergraph& g, const PointConfiguration<Field>& p) {
  return jacobian_rows(g, std::span<const Edge>(g.edges()), p);
}

/// dN - d(k-1): the rank of a locally rigid framework.
inline std::size_t required_rank(const PartiteHypergraph& g, std::size_t d) {
  return d * g.vertex_count() - d * (g.k() - 1);
}

struct RandomizedOptions {
  /// Independent pseudo-generic evaluations; the maximum rank is kept.
  unsigned trials = 3;
  std::uint64_t seed = 0;
  /// Use small integer points and exact rational rank instead of GF(P).
  bool rational_points = false;
  std::int64_t rational_bound = 1000;
};

struct LocalRigidityVerdict {
  std::size_t rank_observed = 0;
  std::size_t rank_required = 0;
  bool rigid = false;
  /// Evaluations performed (stops early once the bound is reached).
  unsigned trials = 0;
  /// Prime of the evaluation field; 0 in rational mode.
  std::uint64_t prime = 0;
};

/// Thrown when an observed rank exceeds a proven upper bound.
class RankBoundViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

/// Rank of the Jacobian rows of `edges` under trial t's configuration.
inline std::size_t trial_rank(const PartiteHypergraph& g, std::span<const Edge> edges, std::size_t d,
                              const RandomizedOptions& opts, unsigned t) {
  Rng rng = Rng::stream(opts.seed, t);
  if (opts.rational_points) {
    const auto p = sample_integer_points(g.vertex_count(), d, rng, opts.rational_bound);
    return rank(jacobian_rows(g, edges, p));
  }
  const auto p = sample_generic(PrimeField(kLargePrime), g.vertex_count(), d, rng);
  return rank(jacobian_rows(g, edges, p));
}

}  // namespace detail

/// Randomized test of local rigidity in dimension d. A "rigid" verdict is
/// certain up to the Schwartz-Zippel failure of a single evaluation;
/// "not rigid" is probabilistic in the number of trials.
inline LocalRigidityVerdict local_rigid(const PartiteHypergraph& g, std::size_t d,
                                        const RandomizedOptions& opts = {}) {
  LocalRigidityVerdict v;
  v.rank_required = required_rank(g, d);
  v.prime = opts.rational_points ? 0 : kLargePrime;
  for (unsigned t = 0; t < std::max(1u, opts.trials); ++t) {
    const std::size_t r = detail::trial_rank(g, g.edges(), d, opts, t);
    if (r > v.rank_required) throw RankBoundViolation("jacobian rank exceeds dN - d(k-1)");
    v.rank_observed = std::max(v.rank_observed, r);
    v.trials = t + 1;
    if (v.rank_observed == v.rank_required) break;
  }
  v.rigid = v.rank_observed == v.rank_required;
  return v;
}

/// Exact one-dimensional test: rank of the incidence matrix is N-(k-1).
inline bool local_rigid_1d_exact(const PartiteHypergraph& g) {
  return rank(incidence_matrix(g)) == g.vertex_count() - (g.k() - 1);
}

/// Rank of `subset` in the generic rigidity matroid on the edges of the
/// complete graph over `ambient`'s parts.
inline std::size_t matroid_rank(const PartiteHypergraph& ambient, std::span<const Edge> subset,
                                std::size_t d, const RandomizedOptions& opts = {}) {
  std::size_t best = 0;
  for (unsigned t = 0; t < std::max(1u, opts.trials); ++t)
    best = std::max(best, detail::trial_rank(ambient, subset, d, opts, t));
  return best;
}

/// All edges e of the complete graph with rank(X + e) = rank(X). One shared
/// configuration (the first trial attaining the maximum rank of X) decides
/// every candidate.
inline std::vector<Edge> closure(const PartiteHypergraph& ambient, std::span<const Edge> subset,
                                 std::size_t d, const RandomizedOptions& opts = {}) {
  const PrimeField f(kLargePrime);
  std::optional<PointConfiguration<PrimeField>> best_p;
  std::size_t best = 0;
  for (unsigned t = 0; t < std::max(1u, opts.trials); ++t) {
    Rng rng = Rng::stream(opts.seed, t);
    auto p = sample_generic(f, ambient.vertex_count(), d, rng);
    const std::size_t r = rank(jacobian_rows(ambient, subset, p));
    if (!best_p || r > best) {
      best = r;
      best_p = std::move(p);
    }
  }
  RowSpace<PrimeField> span(f, ambient.vertex_count() * d);
  span.insert_rows(jacobian_rows(ambient, subset, *best_p));
  std::vector<Edge> out;
  FieldMatrix<PrimeField> row(f, 1, ambient.vertex_count() * d);
  for (std::uint64_t r = 0; r < ambient.total_edges(); ++r) {
    Edge e = ambient.unrank(r);
    row = FieldMatrix<PrimeField>(f, 1, ambient.vertex_count() * d);
    fill_jacobian_row(ambient, e, *best_p, row, 0);
    if (span.contains(row.row(0))) out.push_back(std::move(e));
  }
  return out;
}

/// Largest complete graph on which the closure-based search runs.
inline constexpr std::uint64_t kClosureSearchEdgeLimit = 4096;

namespace detail {

inline bool next_combination(std::vector<std::uint32_t>& c, std::uint32_t n) {
  const std::size_t r = c.size();
  for (std::size_t i = r; i-- > 0;) {
    if (c[i] < n - r + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < r; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

/// Greedy growth of a d-tree from a seed clique inside `pool`.
inline std::optional<std::vector<Edge>> grow_dtree(const PartiteHypergraph& pool,
                                                   const std::vector<std::vector<std::uint32_t>>& seed,
                                                   std::size_t d) {
  std::vector<bool> covered(pool.vertex_count(), false);
  std::vector<Edge> tree;
  for (std::size_t j = 0; j < seed.size(); ++j)
    for (auto i : seed[j]) covered[pool.flat(j, i)] = true;
  for (const auto& e : pool.edges()) {
    bool inside = true;
    for (std::size_t j = 0; j < e.size() && inside; ++j) inside = covered[pool.flat(j, e[j])];
    if (inside) tree.push_back(e);
  }
  std::size_t remaining = static_cast<std::size_t>(std::count(covered.begin(), covered.end(), false));
  bool progress = true;
  while (remaining > 0 && progress) {
    progress = false;
    for (std::size_t v = 0; v < pool.vertex_count(); ++v) {
      if (covered[v]) continue;
      const VertexId id = pool.vertex(v);
      std::vector<const Edge*> usable;
      for (const auto& e : pool.edges()) {
        if (e[id.part] != id.index) continue;
        bool ok = true;
        for (std::size_t j = 0; j < e.size() && ok; ++j)
          if (j != id.part) ok = covered[pool.flat(j, e[j])];
        if (ok) usable.push_back(&e);
        if (usable.size() == d) break;
      }
      if (usable.size() < d) continue;
      for (const auto* e : usable) tree.push_back(*e);
      covered[v] = true;
      --remaining;
      progress = true;
    }
  }
  if (remaining > 0) return std::nullopt;
  return tree;
}

}  // namespace detail

/// Searches the closure of E(G) in the d-dimensional rigidity matroid for a
/// spanning k-partite d-tree: a K^k_d seed followed by greedy degree-d
/// extensions. Absence is not a proof that none exists.
inline std::optional<PartiteHypergraph> find_spanning_dtree_in_closure(
    const PartiteHypergraph& g, std::size_t d, const RandomizedOptions& opts = {},
    std::size_t max_seeds = 2000) {
  if (!g.balanced()) throw std::invalid_argument("spanning d-tree search needs balanced parts");
  if (g.total_edges() > kClosureSearchEdgeLimit)
    throw GuardViolation("spanning d-tree search is limited to n^k <= 4096");
  const std::uint32_t n = g.part_size(0);
  if (d == 0 || d > n) return std::nullopt;
  const PartiteHypergraph pool = g.with_edges(closure(g, g.edges(), d, opts));
  if (pool.edge_count() == 0) return std::nullopt;

  const std::size_t k = g.k();
  std::vector<std::vector<std::uint32_t>> seed(k, std::vector<std::uint32_t>(d));
  for (auto& s : seed) std::iota(s.begin(), s.end(), 0u);
  std::size_t tried = 0;
  for (;;) {
    bool clique = true;
    Edge e(k, 0);
    std::vector<std::size_t> pos(k, 0);
    while (clique) {
      for (std::size_t j = 0; j < k; ++j) e[j] = seed[j][pos[j]];
      clique = pool.contains(e);
      std::size_t j = k;
      while (j-- > 0) {
        if (++pos[j] < d) break;
        pos[j] = 0;
      }
      if (j == static_cast<std::size_t>(-1)) break;
    }
    if (clique) {
      if (auto tree = detail::grow_dtree(pool, seed, d)) return g.with_edges(std::move(*tree));
      if (++tried >= max_seeds) return std::nullopt;
    }
    std::size_t j = k;
    bool advanced = false;
    while (j-- > 0) {
      if (detail::next_combination(seed[j], n)) {
        advanced = true;
        break;
      }
      std::iota(seed[j].begin(), seed[j].end(), 0u);
    }
    if (!advanced) return std::nullopt;
  }
}

}  // namespace tensorrig
