#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace tensorrig;

TEST(Problem, ConstructionAndReproducibility) {
  const PartiteHypergraph one({1, 1, 1}, {{0, 0, 0}});
  const auto p = make_problem(one, 1, 3);
  ASSERT_EQ(p.observed.size(), 1u);
  EXPECT_DOUBLE_EQ(p.observed[0], p.hidden.at(0, 0) * p.hidden.at(1, 0) * p.hidden.at(2, 0));
  for (double x : p.hidden.values()) {
    EXPECT_GE(std::abs(x), 0.5);
    EXPECT_LE(std::abs(x), 1.5);
  }
  const auto a = make_problem(fixtures::small_example(), 2, 11);
  const auto b = make_problem(fixtures::small_example(), 2, 11);
  EXPECT_EQ(a.observed, b.observed);
  EXPECT_EQ(a.hidden.values(), b.hidden.values());
  EXPECT_EQ(residual_norm(a, a.hidden), 0.0);
}

TEST(Solve, StartingAtTheHiddenPoint) {
  const auto prob = make_problem(fixtures::small_example(), 1, 5);
  const std::vector<RealConfiguration> starts{prob.hidden};
  const auto out = solve_from(prob, starts, SolverOptions{});
  ASSERT_EQ(out.solutions.size(), 1u);
  EXPECT_EQ(out.distinct_tensor_classes, 1u);
  EXPECT_EQ(out.residuals[0], 0.0);
  EXPECT_TRUE(out.hidden_class_found);
}

TEST(Solve, CompleteObservationGivesOneClass) {
  const auto prob = make_problem(PartiteHypergraph::complete_balanced(2, 3), 2, 8);
  SolverOptions opts;
  opts.starts = 20;
  const auto out = multistart_solve(prob, 8, opts);
  ASSERT_GT(out.solutions.size(), 0u);
  EXPECT_EQ(out.distinct_tensor_classes, 1u);
  EXPECT_TRUE(out.hidden_class_found);
  for (double r : out.residuals) EXPECT_LE(r, opts.residual_tol * std::max(1.0, norm2(prob.observed)));
}

TEST(Solve, IsolatedVertexGivesSeveralClasses) {
  // Vertex 2 lies in no edge, so its coordinates are unconstrained.
  const auto prob = make_problem(fixtures::two_edges(), 2, 9);
  SolverOptions opts;
  opts.starts = 10;
  const auto out = multistart_solve(prob, 9, opts);
  EXPECT_GT(out.distinct_tensor_classes, 1u);
}

TEST(Solve, DeterministicAcrossWidths) {
  const auto prob = make_problem(fixtures::small_example(), 1, 21);
  SolverOptions a, b;
  a.starts = b.starts = 12;
  b.width = 3;
  const auto x = multistart_solve(prob, 4, a);
  const auto y = multistart_solve(prob, 4, b);
  EXPECT_EQ(x.class_of, y.class_of);
  EXPECT_EQ(x.residuals, y.residuals);
}

TEST(Checks, StabilizerPreservesTheFullTensor) {
  Rng rng(12);
  for (int t = 0; t < 30; ++t) {
    const auto g = fixtures::random_subgraph(3, 3, rng.next());
    const std::size_t d = 1 + rng.below(3);
    const auto prob = make_problem(g, d, rng.next());
    const auto q = apply_random_stabilizer(g, prob.hidden, rng);
    const auto a = full_tensor(g, prob.hidden), b = full_tensor(g, q);
    EXPECT_TRUE(same_tensor(a, b, 1e-10));
    EXPECT_NE(q.values(), prob.hidden.values());
  }
}

TEST(Checks, FiniteDifferenceJacobian) {
  Rng rng(13);
  for (int t = 0; t < 20; ++t) {
    const auto g = fixtures::random_subgraph(3, 3, rng.next());
    const auto prob = make_problem(g, 1 + rng.below(3), rng.next());
    EXPECT_LT(jacobian_fd_error(g, prob.hidden, 1e-6), 1e-5);
    // The residual gradient J^T r vanishes at the hidden point since r = 0.
    EXPECT_EQ(residual_norm(prob, prob.hidden), 0.0);
  }
}

TEST(Crosscheck, SmallExampleIsSound) {
  SolverOptions opts;
  opts.starts = 20;
  const auto rep = crosscheck(fixtures::small_example(), 1, 3, 17, opts);
  EXPECT_EQ(rep.expectation, CrosscheckExpectation::unique);
  EXPECT_TRUE(rep.sound());
  EXPECT_EQ(rep.agreements, 3u);
  const auto j = to_json(rep);
  EXPECT_EQ(j["expectation"], "unique");
}

TEST(Crosscheck, DeficientMaskExpectsSeveral) {
  SolverOptions opts;
  opts.starts = 10;
  const auto rep = crosscheck(fixtures::two_edges(), 1, 2, 3, opts);
  EXPECT_EQ(rep.expectation, CrosscheckExpectation::multiple);
  for (const auto& t : rep.trials) EXPECT_GT(t.classes, 1u);
}
