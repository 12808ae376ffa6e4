#pragma once

// Numerical completion oracle: recover a rank-d configuration from the
// observed entries by multi-start Levenberg-Marquardt and count how many
// distinct full tensors the converged solutions produce.

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hypergraph.hpp"
#include "identifiability.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "rigidity.hpp"

namespace tensorrig {

using RealConfiguration = PointConfiguration<RealField>;

struct CompletionProblem {
  PartiteHypergraph graph;
  std::size_t d = 1;
  std::vector<double> observed;  // one value per edge
  RealConfiguration hidden;      // the generating configuration
  std::uint64_t seed = 0;
};

/// Hidden entries are uniform on [-1.5,-0.5] u [0.5,1.5].
inline CompletionProblem make_problem(const PartiteHypergraph& g, std::size_t d, std::uint64_t seed) {
  Rng rng = Rng::stream(seed, 0, 0xB1);
  RealConfiguration p(RealField{}, g.vertex_count(), d);
  for (auto& x : p.values()) {
    const double mag = rng.uniform(0.5, 1.5);
    x = rng.bernoulli(0.5) ? mag : -mag;
  }
  auto obs = rigidity_map(g, p);
  return CompletionProblem{g, d, std::move(obs), std::move(p), seed};
}

/// The full tensor sigma^d_n(p): one entry per edge of the complete graph,
/// in rank order.
inline std::vector<double> full_tensor(const PartiteHypergraph& g, const RealConfiguration& p) {
  const std::uint64_t total = g.total_edges();
  std::vector<double> t(total);
  for (std::uint64_t r = 0; r < total; ++r) {
    const Edge e = g.unrank(r);
    double s = 0;
    for (std::size_t j = 0; j < p.dim(); ++j) s += edge_product(g, e, p, j, g.k(), g.k());
    t[r] = s;
  }
  return t;
}

inline double norm2(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

/// Euclidean norm of f(p) - observed.
inline double residual_norm(const CompletionProblem& prob, const RealConfiguration& p) {
  const auto f = rigidity_map(prob.graph, p);
  double s = 0;
  for (std::size_t i = 0; i < f.size(); ++i) s += (f[i] - prob.observed[i]) * (f[i] - prob.observed[i]);
  return std::sqrt(s);
}

struct SolverOptions {
  unsigned starts = 50;
  double init_box = 2.0;          // starts are uniform in [-box, box]
  double residual_tol = 1e-9;     // relative to |observed|
  double congruence_tol = 1e-6;   // relative full-tensor distance
  unsigned max_iterations = 2000;
  unsigned width = 1;             // worker threads
};

struct DescentResult {
  RealConfiguration solution;
  double residual = 0;
  unsigned iterations = 0;
  bool converged = false;
};

/// Damped Gauss-Newton from `start`.
inline DescentResult levenberg_marquardt(const CompletionProblem& prob, RealConfiguration start,
                                         const SolverOptions& opts) {
  const double tol = opts.residual_tol * std::max(1.0, norm2(prob.observed));
  const std::size_t m = prob.observed.size();
  const std::size_t n = start.values().size();

  auto residual_vec = [&](const RealConfiguration& p) {
    const auto f = rigidity_map(prob.graph, p);
    Eigen::VectorXd r(m);
    for (std::size_t i = 0; i < m; ++i) r[i] = f[i] - prob.observed[i];
    return r;
  };

  DescentResult out{std::move(start)};
  Eigen::VectorXd r = residual_vec(out.solution);
  double lambda = 1e-3;
  for (; out.iterations < opts.max_iterations; ++out.iterations) {
    if (r.norm() <= tol) break;
    const auto jm = jacobian(prob.graph, out.solution);
    Eigen::MatrixXd jac(m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t c = 0; c < n; ++c) jac(i, c) = jm(i, c);
    const Eigen::MatrixXd normal = jac.transpose() * jac;
    const Eigen::VectorXd grad = jac.transpose() * r;

    bool accepted = false;
    while (lambda < 1e16) {
      Eigen::MatrixXd damped = normal;
      damped.diagonal().array() += lambda;
      const Eigen::VectorXd step = damped.ldlt().solve(-grad);
      RealConfiguration trial = out.solution;
      for (std::size_t c = 0; c < n; ++c) trial.values()[c] += step[c];
      const Eigen::VectorXd rt = residual_vec(trial);
      if (rt.norm() < r.norm()) {
        out.solution = std::move(trial);
        r = rt;
        lambda = std::max(lambda / 3.0, 1e-15);
        accepted = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!accepted) break;
  }
  out.residual = r.norm();
  out.converged = out.residual <= tol;
  return out;
}

struct SolveOutcome {
  std::vector<RealConfiguration> solutions;  // converged only, in start order
  std::vector<double> residuals;
  std::vector<std::size_t> class_of;         // tensor class per solution
  std::size_t distinct_tensor_classes = 0;
  std::size_t nonconverged = 0;
  /// Whether some converged solution matches the hidden tensor.
  bool hidden_class_found = false;
};

inline bool same_tensor(std::span<const double> a, std::span<const double> b, double tol) {
  double diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) diff += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(diff) <= tol * std::max({norm2(a), norm2(b), 1e-300});
}

/// Greedy clustering against class representatives, in solution order.
inline void cluster_solutions(const CompletionProblem& prob, SolveOutcome& out, double tol) {
  std::vector<std::vector<double>> reps;
  out.class_of.clear();
  for (const auto& s : out.solutions) {
    const auto t = full_tensor(prob.graph, s);
    std::size_t c = 0;
    while (c < reps.size() && !same_tensor(reps[c], t, tol)) ++c;
    if (c == reps.size()) reps.push_back(t);
    out.class_of.push_back(c);
  }
  out.distinct_tensor_classes = reps.size();
  const auto hidden = full_tensor(prob.graph, prob.hidden);
  out.hidden_class_found = false;
  for (const auto& r : reps)
    if (same_tensor(r, hidden, tol)) out.hidden_class_found = true;
}

/// Solves from explicit starting configurations.
inline SolveOutcome solve_from(const CompletionProblem& prob, std::span<const RealConfiguration> starts,
                               const SolverOptions& opts) {
  std::vector<DescentResult> runs(starts.size());
  parallel_for(starts.size(), opts.width,
               [&](std::size_t i) { runs[i] = levenberg_marquardt(prob, starts[i], opts); });
  SolveOutcome out;
  for (auto& r : runs) {
    if (r.converged) {
      out.solutions.push_back(std::move(r.solution));
      out.residuals.push_back(r.residual);
    } else {
      ++out.nonconverged;
    }
  }
  cluster_solutions(prob, out, opts.congruence_tol);
  return out;
}

inline SolveOutcome multistart_solve(const CompletionProblem& prob, std::uint64_t seed,
                                     const SolverOptions& opts = {}) {
  if (opts.starts < 1) throw std::invalid_argument("multistart_solve: starts must be positive");
  std::vector<RealConfiguration> starts;
  for (unsigned s = 0; s < opts.starts; ++s) {
    Rng rng = Rng::stream(seed, s, 0x5A);
    RealConfiguration p(RealField{}, prob.graph.vertex_count(), prob.d);
    for (auto& x : p.values()) x = rng.uniform(-opts.init_box, opts.init_box);
    starts.push_back(std::move(p));
  }
  return solve_from(prob, starts, opts);
}

// ---------------------------------------------------------------------------
// Consistency checks

/// Applies a random element of the stabilizer: a shared permutation of the
/// d coordinates and, per coordinate, part scalings whose product is one.
inline RealConfiguration apply_random_stabilizer(const PartiteHypergraph& g, const RealConfiguration& p,
                                                 Rng& rng) {
  const std::size_t d = p.dim();
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm);
  std::vector<std::vector<double>> scale(g.k(), std::vector<double>(d, 1.0));
  for (std::size_t j = 0; j < d; ++j) {
    double prod = 1.0;
    for (std::size_t part = 1; part < g.k(); ++part) {
      const double s = rng.uniform(0.5, 2.0) * (rng.bernoulli(0.5) ? 1.0 : -1.0);
      scale[part][j] = s;
      prod *= s;
    }
    scale[0][j] = 1.0 / prod;
  }
  RealConfiguration q(RealField{}, p.vertices(), d);
  for (std::size_t v = 0; v < p.vertices(); ++v) {
    const auto part = g.vertex(v).part;
    for (std::size_t j = 0; j < d; ++j) q.set(v, perm[j], p.at(v, j) * scale[part][j]);
  }
  return q;
}

/// Largest relative deviation between the analytic Jacobian and central
/// differences with step h.
inline double jacobian_fd_error(const PartiteHypergraph& g, const RealConfiguration& p, double h = 1e-6) {
  const auto analytic = jacobian(g, p);
  double worst = 0;
  for (std::size_t c = 0; c < p.values().size(); ++c) {
    RealConfiguration plus = p, minus = p;
    plus.values()[c] += h;
    minus.values()[c] -= h;
    const auto fp = rigidity_map(g, plus), fm = rigidity_map(g, minus);
    for (std::size_t r = 0; r < fp.size(); ++r) {
      const double fd = (fp[r] - fm[r]) / (2 * h);
      const double a = analytic(r, c);
      worst = std::max(worst, std::abs(fd - a) / std::max(1.0, std::abs(a)));
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Cross-check against the certificate

enum class CrosscheckExpectation { unique, multiple, none };

struct CrosscheckTrial {
  std::uint64_t seed = 0;
  std::size_t converged = 0;
  std::size_t nonconverged = 0;
  std::size_t classes = 0;
  /// nullopt when the certificate makes no prediction or nothing converged.
  std::optional<bool> agrees;
};

struct CrosscheckReport {
  GlobalRigidityCertificate certificate;
  CrosscheckExpectation expectation = CrosscheckExpectation::none;
  std::vector<CrosscheckTrial> trials;
  std::size_t agreements = 0;
  std::size_t disagreements = 0;

  /// Only "certified rigid but several classes" counts as a failure.
  bool sound() const { return expectation != CrosscheckExpectation::unique || disagreements == 0; }
};

inline CrosscheckReport crosscheck(const PartiteHypergraph& g, std::size_t d, unsigned trials,
                                   std::uint64_t seed, const SolverOptions& opts = {},
                                   const RandomizedOptions& cert_opts = {}) {
  CrosscheckReport rep;
  rep.certificate = global_rigid(g, d, FieldKind::real, cert_opts);
  if (rep.certificate.verdict == Verdict::globally_rigid) rep.expectation = CrosscheckExpectation::unique;
  if (rep.certificate.verdict == Verdict::not_globally_rigid) rep.expectation = CrosscheckExpectation::multiple;
  for (unsigned t = 0; t < trials; ++t) {
    CrosscheckTrial tr;
    tr.seed = derive_seed(seed, t, 0xCC);
    const auto prob = make_problem(g, d, tr.seed);
    const auto out = multistart_solve(prob, tr.seed, opts);
    tr.converged = out.solutions.size();
    tr.nonconverged = out.nonconverged;
    tr.classes = out.distinct_tensor_classes;
    if (tr.converged > 0 && rep.expectation != CrosscheckExpectation::none) {
      tr.agrees = rep.expectation == CrosscheckExpectation::unique ? tr.classes == 1 : tr.classes > 1;
      ++(*tr.agrees ? rep.agreements : rep.disagreements);
    }
    rep.trials.push_back(tr);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::ordered_json to_json(const CompletionProblem& prob) {
  nlohmann::ordered_json j;
  j["k"] = prob.graph.k();
  j["parts"] = prob.graph.part_sizes();
  j["edges"] = prob.graph.edges();
  j["d"] = prob.d;
  j["seed"] = prob.seed;
  j["observed"] = prob.observed;
  j["hidden"] = prob.hidden.values();
  return j;
}

inline nlohmann::ordered_json to_json(const SolveOutcome& out) {
  nlohmann::ordered_json j;
  j["converged"] = out.solutions.size();
  j["nonconverged"] = out.nonconverged;
  j["distinct_tensor_classes"] = out.distinct_tensor_classes;
  j["hidden_class_found"] = out.hidden_class_found;
  j["class_of"] = out.class_of;
  j["residuals"] = out.residuals;
  return j;
}

inline nlohmann::ordered_json to_json(const CrosscheckReport& rep) {
  nlohmann::ordered_json j;
  j["certificate"] = to_json(rep.certificate);
  j["expectation"] = rep.expectation == CrosscheckExpectation::unique     ? "unique"
                     : rep.expectation == CrosscheckExpectation::multiple ? "multiple"
                                                                          : "none";
  j["agreements"] = rep.agreements;
  j["disagreements"] = rep.disagreements;
  j["sound"] = rep.sound();
  j["trials"] = nlohmann::ordered_json::array();
  for (const auto& t : rep.trials) {
    nlohmann::ordered_json tj;
    tj["seed"] = t.seed;
    tj["converged"] = t.converged;
    tj["nonconverged"] = t.nonconverged;
    tj["classes"] = t.classes;
    tj["agrees"] = t.agrees ? nlohmann::ordered_json(*t.agrees) : nlohmann::ordered_json(nullptr);
    j["trials"].push_back(tj);
  }
  return j;
}

}  // namespace tensorrig
