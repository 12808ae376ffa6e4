// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run everything
//   acceptance --only 7   run a single criterion

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tensorrig/tensorrig.hpp"

using namespace tensorrig;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

PartiteHypergraph small_example() {
  return PartiteHypergraph({2, 2, 2}, {{0, 0, 0}, {0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
}

PartiteHypergraph two_by_two(std::size_t k) {
  std::vector<std::uint32_t> parts(k, 1);
  parts[0] = parts[1] = 2;
  return PartiteHypergraph::complete(parts);
}

std::vector<std::uint32_t> random_parts(Rng& rng, std::size_t k, std::uint32_t lo, std::size_t max_total) {
  const auto cap = static_cast<std::uint32_t>(max_total / k);
  std::vector<std::uint32_t> parts(k);
  for (auto& x : parts) x = lo + static_cast<std::uint32_t>(rng.below(cap - lo + 1));
  return parts;
}

template <class... Args>
std::string format(Args&&... args) {
  std::ostringstream os;
  os << std::boolalpha;
  (os << ... << args);
  return os.str();
}

// ---------------------------------------------------------------------------

Outcome golden_incidence() {
  const auto g = small_example();
  const auto inc = incidence_matrix(g);
  const auto rq = rank(inc.map_to(RationalField{}));
  const auto r2 = rank(inc.map_to(PrimeField(2)));
  const bool local = local_rigid(g, 1).rigid && local_rigid_1d_exact(g);
  const auto real = global_rigid(g, 1, FieldKind::real);
  const auto cplx = global_rigid(g, 1, FieldKind::complex);
  const auto snf = smith_normal_form(inc);
  bool units = !snf.elementary_divisors.empty();
  for (const auto& d : snf.elementary_divisors) units = units && d == 1;
  const bool pass = rq == 4 && r2 == 4 && local && real.verdict == Verdict::globally_rigid &&
                    cplx.verdict == Verdict::globally_rigid && units;
  return {pass, format("rank_Q=", rq, " rank_GF2=", r2, " local=", local, " real=", to_string(real.verdict),
                       " complex=", to_string(cplx.verdict), " snf_all_one=", units)};
}

Outcome golden_adjacency() {
  const auto g = small_example();
  const std::vector<Rational> w{-1, 2, -1, -1, 1};
  const auto kernel = kernel_basis(incidence_matrix(g, RationalField{}));
  bool proportional = kernel.dimension() == 1;
  if (proportional)
    for (std::size_t i = 0; i < 5; ++i) proportional = proportional && kernel.vectors[0][i] * w[4] == w[i] * kernel.vectors[0][4];
  const auto r = rank(adjacency_matrix<RationalField>(g, w));
  const auto iii = mm_condition_iii_report(g);
  const bool pass = proportional && r == 3 && iii.satisfied && iii.stack_rank == 3;
  return {pass, format("kernel_proportional=", proportional, " rank A=", r, " N-k=3 condition_iii=", iii.satisfied)};
}

Outcome golden_jacobian() {
  const auto g = PartiteHypergraph::complete_balanced(2, 3);
  unsigned hits = 0;
  for (unsigned t = 0; t < 1000; ++t) {
    RandomizedOptions opts;
    opts.trials = 1;
    opts.seed = derive_seed(0xACCE97, t, 3);
    hits += local_rigid(g, 2, opts).rank_observed == 8;
  }
  return {hits >= 999, format(hits, "/1000 trials with rank 8 (need >= 999)")};
}

Outcome golden_two_by_two() {
  std::string detail;
  bool pass = true;
  for (std::size_t k : {3, 4, 5}) {
    const auto g = two_by_two(k);
    const std::vector<Rational> w{1, -1, -1, 1};
    const auto r = rank(adjacency_matrix<RationalField>(g, w));
    pass = pass && r == 2 && g.vertex_count() - k == 2;
    detail += format("k=", k, ":rank=", r, " ");
  }
  return {pass, detail};
}

Outcome dtree_suite() {
  Rng rng(0x5);
  std::size_t bad_local = 0, bad_one = 0, bad_iii = 0, bad_co = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 3 + rng.below(2);
    const auto d = static_cast<std::uint32_t>(1 + rng.below(3));
    const auto g = random_dtree(k, d, random_parts(rng, k, d, 30), rng.next());
    RandomizedOptions opts;
    opts.seed = rng.next();
    bad_local += !local_rigid(g, d, opts).rigid;
  }
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 3 + rng.below(2);
    const auto g = random_dtree(k, 1, random_parts(rng, k, 1, 30), rng.next());
    const auto inc = incidence_matrix(g);
    const std::size_t target = g.vertex_count() - (k - 1);
    bool ok = rank(inc.map_to(RationalField{})) == target;
    for (std::uint64_t q : {2, 3, 5}) ok = ok && rank(inc.map_to(PrimeField(q))) == target;
    bad_one += !ok;
  }
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 3 + rng.below(2);
    bad_iii += !mm_condition_iii(random_dtree(k, 2, random_parts(rng, k, 2, 30), rng.next()));
  }
  for (int t = 0; t < 50; ++t) {
    const std::size_t k = 3 + rng.below(2);
    const auto d = static_cast<std::uint32_t>(1 + rng.below(2));
    const auto g = random_dtree(k, d + 1, random_parts(rng, k, d + 1, 30), rng.next());
    RandomizedOptions opts;
    opts.seed = rng.next();
    bad_co += !co_condition(g, d, opts).satisfied;
  }
  const bool pass = bad_local + bad_one + bad_iii + bad_co == 0;
  return {pass, format("failures: d-tree local=", bad_local, "/100 1-tree rank=", bad_one,
                       "/100 2-tree iii=", bad_iii, "/100 (d+1)-tree co=", bad_co, "/50")};
}

Outcome structural_invariants() {
  Rng rng(0x6);
  std::size_t bad_rank = 0, bad_kernel = 0, bad_adj = 0, bad_trivial = 0, bad_conj = 0;
  const PrimeField f(kLargePrime);
  for (int t = 0; t < 500; ++t) {
    const auto n = static_cast<std::uint32_t>(1 + rng.below(6));
    const auto g = gnp(n, 3, rng.uniform(0.05, 0.9), rng.next());
    const std::size_t d = 1 + rng.below(3);
    const std::size_t nv = g.vertex_count();

    RandomizedOptions opts;
    opts.seed = rng.next();
    if (local_rigid(g, d, opts).rank_observed > required_rank(g, d)) ++bad_rank;

    try {
      const auto p = sample_generic(f, nv, d, rng);
      if (nv - co_condition_at(g, p).stack_rank < g.k()) ++bad_kernel;
    } catch (const RankBoundViolation&) {
      ++bad_kernel;
    }

    std::vector<Rational> w(g.edge_count());
    for (auto& x : w) x = rng.between(-5, 5);
    const auto a = adjacency_matrix<RationalField>(g, w);
    bool zero_diag = true;
    for (std::size_t i = 0; i < nv; ++i) zero_diag = zero_diag && a(i, i) == 0;
    if (!zero_diag || !a.is_symmetric()) ++bad_adj;

    const auto inc_t = incidence_matrix(g).transpose();
    for (const auto& x : trivial_kernel_vectors(g))
      if (tensorrig::apply(inc_t, std::span<const BigInt>(x)) != std::vector<BigInt>(g.edge_count(), 0)) {
        ++bad_trivial;
        break;
      }

    // A_{w'} = diag(p) A^1_w diag(p) with w'_e = w_e * prod_{v in e} p_v, d = 1.
    const auto p = sample_integer_points(nv, 1, rng, 30);
    const auto stresses = kernel_basis(jacobian(g, p), KernelSide::left);
    std::vector<Rational> s(g.edge_count(), 0);
    for (const auto& v : stresses.vectors) {
      const Rational c = rng.between(-3, 3);
      for (std::size_t i = 0; i < s.size(); ++i) s[i] += c * v[i];
    }
    std::vector<Rational> sp(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      sp[i] = s[i];
      for (std::size_t part = 0; part < g.k(); ++part) sp[i] *= p.at(g.flat(part, g.edges()[i][part]), 0);
    }
    const auto lhs = adjacency_matrix<RationalField>(g, sp);
    const auto a1 = coordinated_adjacency_matrix(g, p, std::span<const Rational>(s));
    bool same = true;
    for (std::size_t i = 0; i < nv && same; ++i)
      for (std::size_t j = 0; j < nv && same; ++j) same = lhs(i, j) == p.at(i, 0) * a1(i, j) * p.at(j, 0);
    bad_conj += !same;
  }
  const bool pass = bad_rank + bad_kernel + bad_adj + bad_trivial + bad_conj == 0;
  return {pass, format("failures over 500 graphs: rank_bound=", bad_rank, " kernel_dim=", bad_kernel,
                       " adjacency_shape=", bad_adj, " trivial_kernel=", bad_trivial, " conjugation=", bad_conj)};
}

Outcome snf_oracle() {
  Rng rng(0x7);
  std::size_t disagreements = 0;
  auto compare = [&](const IntMatrix& m) {
    const auto s = smith_normal_form(m);
    const auto rq = rank(m.map_to(RationalField{}));
    for (std::uint64_t q : {2, 3, 5, 7, 11}) {
      const auto rp = rank(m.map_to(PrimeField(q)));
      const bool bad = std::find(s.bad_primes.begin(), s.bad_primes.end(), BigInt(q)) != s.bad_primes.end();
      if (bad != (rp < rq) || s.rank_mod(BigInt(q)) != rp) ++disagreements;
    }
  };
  for (int t = 0; t < 100; ++t) {
    IntMatrix m(IntegerRing{}, 1 + rng.below(12), 1 + rng.below(12));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) m.set(i, j, rng.between(-6, 6));
    compare(m);
  }
  for (int t = 0; t < 100; ++t) {
    const auto n = static_cast<std::uint32_t>(1 + rng.below(5));
    compare(incidence_matrix(gnp(n, 3 + rng.below(2), rng.uniform(0.1, 0.8), rng.next())));
  }
  return {disagreements == 0, format(disagreements, " disagreements over 200 matrices x 5 primes")};
}

Outcome randomized_vs_exact() {
  std::size_t disagree = 0;
  Rng rng(0x8);
  for (int t = 0; t < 200; ++t) {
    const auto g = gnp(4, 3, rng.uniform(0.02, 0.4), rng.next());
    RandomizedOptions opts;
    opts.seed = rng.next();
    disagree += local_rigid(g, 1, opts).rigid != local_rigid_1d_exact(g);
  }
  return {disagree == 0, format(disagree, "/200 disagreements")};
}

Outcome completion_crosscheck() {
  const auto g = small_example();
  const auto cert = global_rigid(g, 1, FieldKind::real);
  SolverOptions opts;  // 50 starts, residual 1e-9, class tolerance 1e-6
  std::size_t unique = 0;
  for (unsigned t = 0; t < 20; ++t) {
    const auto prob = make_problem(g, 1, derive_seed(0x9, t, 1));
    unique += multistart_solve(prob, prob.seed, opts).distinct_tensor_classes == 1;
  }
  // Three edges of the example: incidence rank 3 < N-(k-1) = 4.
  const PartiteHypergraph deficient({2, 2, 2}, {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}});
  std::size_t several = 0;
  for (unsigned t = 0; t < 10; ++t) {
    const auto prob = make_problem(deficient, 1, derive_seed(0x9, t, 2));
    several += multistart_solve(prob, prob.seed, opts).distinct_tensor_classes > 1;
  }
  const bool pass = cert.verdict == Verdict::globally_rigid && unique == 20 && several == 10;
  return {pass, format("certificate=", to_string(cert.verdict), " unique ", unique, "/20, deficient several ",
                       several, "/10")};
}

Outcome threshold_trend() {
  SweepConfig cfg;
  cfg.k = 3;
  cfg.n_list = {6, 8, 10, 12};
  cfg.mode = SweepMode::at_threshold;
  cfg.trials = 200;
  cfg.seed = 0x10;
  cfg.timing = false;

  cfg.d = 1;
  cfg.certificates = {.local = false, .global_1d = true};
  const auto one = threshold_sweep(cfg);
  cfg.d = 2;
  cfg.certificates = {.local = true, .global_1d = false};
  const auto two = threshold_sweep(cfg);

  std::string detail = "P[global R^1 at M_1]:";
  bool monotone = true;
  double prev = -1, last_global = 0;
  for (auto n : cfg.n_list) {
    const double r = success_rate(one, n, kModeAtMd, &ExperimentRecord::global1d_real);
    detail += format(" n=", n, ":", r);
    monotone = monotone && r >= prev;
    prev = last_global = r;
  }
  const double local = success_rate(two, 12, kModeAtMd, &ExperimentRecord::local);
  detail += format(" | P[local F^2 at M_2, n=12]=", local);
  return {monotone && last_global >= 0.8 && local >= 0.8, detail};
}

Outcome min_degree_window() {
  const auto s = md_statistics(20, 3, 1, 500, 0x11);
  std::ostringstream os;
  os << "median M_1/n^3=" << s.median_density << " window=[" << s.p_minus << "," << s.p_plus
     << "] median M_1/n^2=" << s.median_scaled << " inside=" << s.inside << "/500 wilson=[" << s.inside_interval.lo
     << "," << s.inside_interval.hi << "]";
  return {s.median_inside, os.str()};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // 0: no budget
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--only", only, "Run a single criterion (1-11)")->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all{
      {1, "golden incidence ranks and 1-d verdicts", 1, golden_incidence},
      {2, "golden adjacency rank and condition iii", 1, golden_adjacency},
      {3, "golden Jacobian rank of K(2,2,2) at d=2", 5, golden_jacobian},
      {4, "golden two-by-two adjacency ranks", 1, golden_two_by_two},
      {5, "d-tree suite", 300, dtree_suite},
      {6, "structural invariants", 0, structural_invariants},
      {7, "SNF vs direct modular ranks", 0, snf_oracle},
      {8, "randomized vs exact local rigidity", 0, randomized_vs_exact},
      {9, "completion cross-check", 600, completion_crosscheck},
      {10, "threshold trend", 1800, threshold_trend},
      {11, "min-degree window", 0, min_degree_window},
  };

  bool ok = true;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.budget_s == 0 || secs < c.budget_s;
    const bool pass = out.pass && in_time;
    ok = ok && pass;
    std::printf("C%02d %s  %s  [%s] (%.2fs%s)\n", c.id, pass ? "PASS" : "FAIL", c.name, out.detail.c_str(), secs,
                in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  return ok ? 0 : 1;
}
