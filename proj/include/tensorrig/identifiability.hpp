#pragma once

// Global rigidity and identifiability certificates.
//
// One-dimensional global rigidity is decided exactly from incidence ranks
// (over Q and GF(2) for the reals; over every prime, via the Smith normal
// form, for the complex numbers). Higher dimensions combine it with one of
// two sufficient identifiability tests, both phrased as "the common kernel
// of a family of weighted adjacency matrices has its forced dimension k":
//
//   cycle test   weights range over ker I_G, matrices A_w (exact, over Q)
//   stress test  weights range over the left kernel of the Jacobian at a
//                pseudo-generic point, matrices A^1_w (over GF(P))

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "errors.hpp"
#include "hypergraph.hpp"
#include "matrix.hpp"
#include "rigidity.hpp"
#include "smith.hpp"

namespace tensorrig {

// ---------------------------------------------------------------------------
// Adjacency matrices

namespace detail {

/// A[u][v] = sum over edges e containing u,v of w(e) * prod of coordinate-1
/// values of the other vertices of e (the product is omitted when p is null).
template <class Field>
FieldMatrix<Field> weighted_adjacency(const PartiteHypergraph& g, std::span<const Edge> edges,
                                      std::span<const typename Field::value_type> weights,
                                      const Field& f, const PointConfiguration<Field>* p) {
  if (weights.size() != edges.size()) throw std::invalid_argument("edge weight has the wrong length");
  const std::size_t n = g.vertex_count();
  FieldMatrix<Field> a(f, n, n);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (f.is_zero(weights[i])) continue;
    const Edge& e = edges[i];
    for (std::size_t x = 0; x < e.size(); ++x)
      for (std::size_t y = x + 1; y < e.size(); ++y) {
        auto w = weights[i];
        if (p) w = f.mul(w, edge_product(g, e, *p, 0, x, y));
        const std::size_t u = g.flat(x, e[x]), v = g.flat(y, e[y]);
        a.add_to(u, v, w);
        a.add_to(v, u, w);
      }
  }
  return a;
}

}  // namespace detail

/// A_w: off-diagonal entry (i,j) sums w(e) over edges containing i and j.
template <class Field>
FieldMatrix<Field> adjacency_matrix(const PartiteHypergraph& g,
                                    std::span<const typename Field::value_type> omega,
                                    const Field& f = {}) {
  return detail::weighted_adjacency<Field>(g, g.edges(), omega, f, nullptr);
}

/// True iff omega^T * Jf^d_G(p) = 0.
template <class Field>
bool in_left_kernel_of_jacobian(const PartiteHypergraph& g, const PointConfiguration<Field>& p,
                                std::span<const typename Field::value_type> omega) {
  if (omega.size() != g.edge_count()) return false;
  return tensorrig::apply(jacobian(g, p).transpose(), omega) ==
         std::vector<typename Field::value_type>(g.vertex_count() * p.dim(), p.field().zero());
}

/// A^1_w: like A_w, with each edge term scaled by the first coordinates of
/// its remaining vertices. omega must be a stress (left-kernel vector of the
/// Jacobian at p).
template <class Field>
FieldMatrix<Field> coordinated_adjacency_matrix(const PartiteHypergraph& g,
                                                const PointConfiguration<Field>& p,
                                                std::span<const typename Field::value_type> omega) {
  check_dimensions(g, p);
  if (!in_left_kernel_of_jacobian(g, p, omega))
    throw std::invalid_argument("coordinated_adjacency_matrix: weight is not in the left kernel of the Jacobian");
  return detail::weighted_adjacency<Field>(g, g.edges(), omega, p.field(), &p);
}

/// The trivial left-kernel vectors of I_G: +1 on part 0, -1 on part i.
inline std::vector<std::vector<BigInt>> trivial_kernel_vectors(const PartiteHypergraph& g) {
  std::vector<std::vector<BigInt>> out;
  for (std::size_t i = 1; i < g.k(); ++i) {
    std::vector<BigInt> x(g.vertex_count(), 0);
    for (std::uint32_t v = 0; v < g.part_size(0); ++v) x[g.flat(0, v)] = 1;
    for (std::uint32_t v = 0; v < g.part_size(i); ++v) x[g.flat(i, v)] = -1;
    out.push_back(std::move(x));
  }
  return out;
}

/// The k vectors y_j (first coordinates on part j, zero elsewhere), which
/// annihilate every A^1_w built from a stress w.
template <class Field>
std::vector<std::vector<typename Field::value_type>> first_coordinate_part_vectors(
    const PartiteHypergraph& g, const PointConfiguration<Field>& p) {
  std::vector<std::vector<typename Field::value_type>> out;
  for (std::size_t j = 0; j < g.k(); ++j) {
    std::vector<typename Field::value_type> y(g.vertex_count(), p.field().zero());
    for (std::uint32_t v = 0; v < g.part_size(j); ++v) y[g.flat(j, v)] = p.at(g.flat(j, v), 0);
    out.push_back(std::move(y));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Canonical cycle basis

/// Raised when rank I_G < N-(k-1), so no base subgraph exists inside G.
class DeficientIncidence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A cycle-space weight with explicit support.
struct SparseWeight {
  std::vector<Edge> edges;
  std::vector<Rational> values;
};

/// Cycle basis relative to a base subgraph G_0 with
/// rank I_{G_0} = |E(G_0)| = N-(k-1). For each edge e outside G_0, w_e spans
/// ker I_{G_0+e} and is normalized by w_e(e) = 1; w_e = 0 on base edges.
class CanonicalCycleBasis {
 public:
  CanonicalCycleBasis(PartiteHypergraph graph, std::vector<Edge> base_edges)
      : graph_(std::move(graph)), base_(graph_.with_edges(std::move(base_edges))) {
    const std::size_t n = graph_.vertex_count();
    const std::size_t r = n - (graph_.k() - 1);
    if (base_.edge_count() != r) throw std::invalid_argument("canonical base must have N-(k-1) edges");
    for (const auto& e : base_.edges())
      if (!graph_.contains(e)) throw std::invalid_argument("canonical base must be a subgraph of G");

    // Reduce [I_{G_0} | Id_N]; the right block restricted to the first r
    // rows is a left inverse of I_{G_0}.
    const auto inc = incidence_matrix(base_, RationalField{});
    RationalMatrix aug(RationalField{}, n, r + n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < r; ++c) aug.set(i, c, inc(i, c));
      aug.set(i, r + i, 1);
    }
    const auto ech = reduced_row_echelon(aug);
    if (ech.pivots.size() < r || ech.pivots[r - 1] != r - 1)
      throw std::invalid_argument("canonical base columns are not independent");
    left_inverse_ = RationalMatrix(RationalField{}, r, n);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t c = 0; c < n; ++c) left_inverse_.set(i, c, ech.reduced(i, r + c));

    for (const auto& e : graph_.edges()) {
      if (base_.contains(e)) continue;
      non_base_.push_back(e);
      vectors_.push_back(dense(weight(e)));
    }
  }

  const PartiteHypergraph& graph() const { return graph_; }
  const PartiteHypergraph& base() const { return base_; }
  const std::vector<Edge>& non_base_edges() const { return non_base_; }
  /// w_e over E(G), one per non-base edge of G.
  const std::vector<std::vector<Rational>>& vectors() const { return vectors_; }

  /// w_e for any edge e of the complete graph on G's parts.
  SparseWeight weight(const Edge& e) const {
    SparseWeight w;
    if (base_.contains(e)) return w;
    const std::size_t r = base_.edge_count();
    for (std::size_t i = 0; i < r; ++i) {
      Rational x = 0;
      for (std::size_t pos = 0; pos < e.size(); ++pos) x -= left_inverse_(i, graph_.flat(pos, e[pos]));
      if (x != 0) {
        w.edges.push_back(base_.edges()[i]);
        w.values.push_back(x);
      }
    }
    w.edges.push_back(e);
    w.values.push_back(1);
    return w;
  }

  /// A_{w_e} for any edge e of the complete graph.
  RationalMatrix adjacency(const Edge& e) const {
    const auto w = weight(e);
    return detail::weighted_adjacency<RationalField>(graph_, w.edges, w.values, RationalField{}, nullptr);
  }

 private:
  std::vector<Rational> dense(const SparseWeight& w) const {
    std::vector<Rational> v(graph_.edge_count(), 0);
    for (std::size_t i = 0; i < w.edges.size(); ++i) v[*graph_.edge_position(w.edges[i])] = w.values[i];
    return v;
  }

  PartiteHypergraph graph_;
  PartiteHypergraph base_;
  RationalMatrix left_inverse_;
  std::vector<Edge> non_base_;
  std::vector<std::vector<Rational>> vectors_;
};

/// Greedy base: scan edges in order, keep those that raise the incidence
/// rank. Throws DeficientIncidence if the rank stays below N-(k-1).
inline std::vector<Edge> greedy_incidence_base(const PartiteHypergraph& g) {
  const std::size_t n = g.vertex_count();
  const std::size_t target = n - (g.k() - 1);
  RowSpace<RationalField> span(RationalField{}, n);
  std::vector<Edge> base;
  std::vector<Rational> col(n);
  for (const auto& e : g.edges()) {
    if (base.size() == target) break;
    std::fill(col.begin(), col.end(), Rational(0));
    for (std::size_t j = 0; j < e.size(); ++j) col[g.flat(j, e[j])] = 1;
    if (span.insert(col)) base.push_back(e);
  }
  if (base.size() < target)
    throw DeficientIncidence("incidence rank " + std::to_string(base.size()) + " < N-(k-1) = " +
                             std::to_string(target));
  return base;
}

inline CanonicalCycleBasis canonical_cycle_basis(const PartiteHypergraph& g,
                                                 std::optional<std::vector<Edge>> base_hint = std::nullopt) {
  return CanonicalCycleBasis(g, base_hint ? std::move(*base_hint) : greedy_incidence_base(g));
}

// ---------------------------------------------------------------------------
// Cycle test (condition iii)

struct KernelConditionReport {
  bool satisfied = false;
  /// Rank of the stacked adjacency matrices (= N - dim of common kernel).
  std::size_t stack_rank = 0;
  /// Dimension of the weight space that was stacked.
  std::size_t kernel_dim = 0;
  /// N - k.
  std::size_t target = 0;
};

/// Basis of ker I_G over Q: the canonical cycle basis when the incidence
/// rank is full, a plain kernel basis otherwise.
inline std::vector<std::vector<Rational>> cycle_space_basis(const PartiteHypergraph& g) {
  if (local_rigid_1d_exact(g)) return canonical_cycle_basis(g).vectors();
  return kernel_basis(incidence_matrix(g, RationalField{})).vectors;
}

/// Stacks A_w over a basis of ker I_G. An empty kernel stacks nothing, so the
/// common kernel is all of Q^N and the condition holds only when N = k.
inline KernelConditionReport mm_condition_iii_report(const PartiteHypergraph& g) {
  KernelConditionReport rep;
  const std::size_t n = g.vertex_count();
  rep.target = n - g.k();
  const auto basis = cycle_space_basis(g);
  rep.kernel_dim = basis.size();
  RowSpace<RationalField> span(RationalField{}, n);
  for (const auto& w : basis) {
    const auto a = adjacency_matrix<RationalField>(g, w);
    span.insert_rows(a);
    if (span.rank() >= rep.target) break;
  }
  rep.stack_rank = span.rank();
  if (rep.stack_rank > rep.target) throw RankBoundViolation("stacked A_w rank exceeds N-k");
  rep.satisfied = rep.stack_rank == rep.target;
  return rep;
}

inline bool mm_condition_iii(const PartiteHypergraph& g) { return mm_condition_iii_report(g).satisfied; }

/// r_{G_0}(F) = dim of the span of the images of A_{w_e}, e in F.
inline std::size_t cycle_polymatroid_rank(const CanonicalCycleBasis& basis, std::span<const Edge> f) {
  const std::size_t n = basis.graph().vertex_count();
  RowSpace<RationalField> span(RationalField{}, n);
  for (const auto& e : f) {
    if (basis.base().contains(e)) continue;
    // A_w is symmetric, so its row space is its image.
    span.insert_rows(basis.adjacency(e));
    if (span.rank() == n) break;
  }
  return span.rank();
}

// ---------------------------------------------------------------------------
// Stress test

struct StressConditionReport : KernelConditionReport {
  unsigned trials = 0;
  std::uint64_t prime = kLargePrime;
};

/// The stress test at one configuration over GF(P).
inline KernelConditionReport co_condition_at(const PartiteHypergraph& g,
                                             const PointConfiguration<PrimeField>& p) {
  KernelConditionReport rep;
  const std::size_t n = g.vertex_count();
  rep.target = n - g.k();
  const auto stresses = kernel_basis(jacobian(g, p), KernelSide::left);
  rep.kernel_dim = stresses.dimension();
  const auto ys = first_coordinate_part_vectors(g, p);
  const std::vector<std::uint64_t> zero(n, 0);
  RowSpace<PrimeField> span(p.field(), n);
  for (const auto& w : stresses.vectors) {
    const auto a = detail::weighted_adjacency<PrimeField>(g, g.edges(), w, p.field(), &p);
    for (const auto& y : ys)
      if (tensorrig::apply(a, std::span<const std::uint64_t>(y)) != zero)
        throw RankBoundViolation("y_j is not in the kernel of A^1_w");
    span.insert_rows(a);
  }
  rep.stack_rank = span.rank();
  if (rep.stack_rank > rep.target) throw RankBoundViolation("stacked A^1_w rank exceeds N-k");
  rep.satisfied = rep.stack_rank == rep.target;
  return rep;
}

/// Randomized stress test in dimension d; passing any trial passes.
inline StressConditionReport co_condition(const PartiteHypergraph& g, std::size_t d,
                                          const RandomizedOptions& opts = {}) {
  StressConditionReport rep;
  const PrimeField f(kLargePrime);
  for (unsigned t = 0; t < std::max(1u, opts.trials); ++t) {
    Rng rng = Rng::stream(opts.seed, t, 0xC0);
    const auto p = sample_generic(f, g.vertex_count(), d, rng);
    const auto r = co_condition_at(g, p);
    static_cast<KernelConditionReport&>(rep) = r;
    rep.trials = t + 1;
    if (r.satisfied) break;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// One-dimensional global rigidity

/// Smith-normal-form work is refused above this many vertices.
inline constexpr std::size_t kSnfVertexLimit = 60;

struct OneDimensionalReport {
  std::size_t rank_q = 0;
  std::size_t rank_gf2 = 0;
  std::size_t target = 0;  // N-(k-1)
  bool local = false;
  bool global_real = false;
  std::optional<SnfResult> snf;  // present when the complex test ran
  bool global_complex = false;
};

inline OneDimensionalReport one_dimensional_report(const PartiteHypergraph& g, bool with_snf) {
  OneDimensionalReport rep;
  const auto inc = incidence_matrix(g);
  rep.target = g.vertex_count() - (g.k() - 1);
  rep.rank_q = rank(inc);
  rep.rank_gf2 = rank(inc.map_to(PrimeField(2)));
  rep.local = rep.rank_q == rep.target;
  rep.global_real = rep.local && rep.rank_gf2 == rep.target;
  if (with_snf) {
    if (g.vertex_count() > kSnfVertexLimit)
      throw GuardViolation("Smith normal form limited to N <= " + std::to_string(kSnfVertexLimit));
    rep.snf = smith_normal_form(inc);
    rep.global_complex = rep.local && rep.snf->bad_primes.empty();
  }
  return rep;
}

/// Globally rigid in R^1 iff rank over Q and over GF(2) both equal N-(k-1).
inline bool global_rigid_1d_real(const PartiteHypergraph& g) {
  return one_dimensional_report(g, false).global_real;
}

/// Sufficient for global rigidity in C^1: full rank N-(k-1) over Q and over
/// every prime field (no elementary divisor exceeds 1).
inline bool global_rigid_1d_complex(const PartiteHypergraph& g) {
  return one_dimensional_report(g, true).global_complex;
}

// ---------------------------------------------------------------------------
// Composite certificate

enum class FieldKind { real, complex };
enum class Verdict { globally_rigid, not_globally_rigid, unknown };

inline std::string to_string(FieldKind f) { return f == FieldKind::real ? "real" : "complex"; }
inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::globally_rigid: return "globally_rigid";
    case Verdict::not_globally_rigid: return "not_globally_rigid";
    default: return "unknown";
  }
}

struct CertificateEvidence {
  std::size_t incidence_rank_q = 0;
  std::size_t incidence_rank_gf2 = 0;
  std::vector<BigInt> bad_primes;
  std::size_t jacobian_rank = 0;      // dimension d+1
  std::size_t jacobian_required = 0;  // (d+1)N - (d+1)(k-1)
  std::size_t stack_rank = 0;         // cycle test
  std::size_t co_stack_rank = 0;      // stress test
  std::size_t min_degree = 0;
};

struct GlobalRigidityCertificate {
  std::size_t d = 1;
  FieldKind field = FieldKind::real;
  bool local_1d = false;
  bool global_1d_real = false;
  bool global_1d_complex_allprimes = false;
  bool mm_i = false;
  bool mm_ii = false;
  bool mm_iii = false;
  bool co_condition = false;
  Verdict verdict = Verdict::unknown;
  /// Which rule produced the verdict.
  std::string reason;
  CertificateEvidence evidence;
  unsigned trials = 0;
  std::uint64_t seed = 0;
};

/// Verdict from already-evaluated conditions. A failed sufficient condition
/// never yields a negative; only the minimum-degree bound and the exact
/// one-dimensional characterizations do.
inline Verdict combine_verdict(std::size_t d, FieldKind field, std::size_t min_deg, bool local_1d, bool mm_i,
                               bool mm_ii, bool mm_iii, bool co, std::string* reason = nullptr) {
  auto say = [&](const char* r) {
    if (reason) *reason = r;
  };
  if (min_deg < d) {
    say("minimum degree below d: not locally rigid");
    return Verdict::not_globally_rigid;
  }
  if (d == 1) {
    if (!local_1d) {
      say("incidence rank below N-(k-1): not locally rigid in dimension 1");
      return Verdict::not_globally_rigid;
    }
    if (mm_i) {
      say(field == FieldKind::real ? "rank over Q and GF(2) is N-(k-1)" : "rank N-(k-1) over every prime field");
      return Verdict::globally_rigid;
    }
    if (field == FieldKind::real) {
      say("GF(2) rank deficient: not globally rigid in R^1");
      return Verdict::not_globally_rigid;
    }
    say("some prime field is rank deficient; sufficient condition not met");
    return Verdict::unknown;
  }
  if (mm_i && mm_ii && mm_iii) {
    say("cycle test: 1-d global, local in d+1, common kernel of A_w is k");
    return Verdict::globally_rigid;
  }
  if (mm_i && co) {
    say("stress test: 1-d global, common kernel of A^1_w is k");
    return Verdict::globally_rigid;
  }
  say("sufficient conditions not met");
  return Verdict::unknown;
}

inline GlobalRigidityCertificate global_rigid(const PartiteHypergraph& g, std::size_t d, FieldKind field,
                                              const RandomizedOptions& opts = {}) {
  if (d == 0) throw std::invalid_argument("global_rigid: d must be positive");
  GlobalRigidityCertificate c;
  c.d = d;
  c.field = field;
  c.trials = opts.trials;
  c.seed = opts.seed;
  c.evidence.min_degree = min_degree(g);

  const auto one = one_dimensional_report(g, true);
  c.local_1d = one.local;
  c.global_1d_real = one.global_real;
  c.global_1d_complex_allprimes = one.global_complex;
  c.evidence.incidence_rank_q = one.rank_q;
  c.evidence.incidence_rank_gf2 = one.rank_gf2;
  c.evidence.bad_primes = one.snf->bad_primes;
  c.mm_i = field == FieldKind::real ? one.global_real : one.global_complex;

  const auto lr = local_rigid(g, d + 1, opts);
  c.mm_ii = lr.rigid;
  c.evidence.jacobian_rank = lr.rank_observed;
  c.evidence.jacobian_required = lr.rank_required;

  const auto cyc = mm_condition_iii_report(g);
  c.mm_iii = cyc.satisfied;
  c.evidence.stack_rank = cyc.stack_rank;

  const auto co = co_condition(g, d, opts);
  c.co_condition = co.satisfied;
  c.evidence.co_stack_rank = co.stack_rank;

  c.verdict = combine_verdict(d, field, c.evidence.min_degree, c.local_1d, c.mm_i, c.mm_ii, c.mm_iii,
                              c.co_condition, &c.reason);
  return c;
}

inline nlohmann::ordered_json to_json(const GlobalRigidityCertificate& c) {
  nlohmann::ordered_json j;
  j["d"] = c.d;
  j["field"] = to_string(c.field);
  j["mm"] = {{"i", c.mm_i}, {"ii", c.mm_ii}, {"iii", c.mm_iii}};
  j["co"] = c.co_condition;
  j["verdict"] = to_string(c.verdict);
  j["reason"] = c.reason;
  j["local_1d"] = c.local_1d;
  j["global_1d_real"] = c.global_1d_real;
  j["global_1d_complex"] = c.global_1d_complex_allprimes;
  nlohmann::ordered_json primes = nlohmann::ordered_json::array();
  for (const auto& p : c.evidence.bad_primes) {
    if (p <= std::numeric_limits<std::uint64_t>::max())
      primes.push_back(static_cast<std::uint64_t>(p));
    else
      primes.push_back(p.str());
  }
  j["evidence"] = {{"incidence_rank_q", c.evidence.incidence_rank_q},
                   {"incidence_rank_gf2", c.evidence.incidence_rank_gf2},
                   {"bad_primes", primes},
                   {"jacobian_rank", c.evidence.jacobian_rank},
                   {"jacobian_required", c.evidence.jacobian_required},
                   {"stack_rank", c.evidence.stack_rank},
                   {"co_stack_rank", c.evidence.co_stack_rank},
                   {"min_degree", c.evidence.min_degree}};
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["probabilistic"] = c.d > 1;
  return j;
}

}  // namespace tensorrig
