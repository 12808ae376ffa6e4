#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace tensorrig;

namespace {

oracle::Table random_table(Rng& rng, std::size_t rows, std::size_t cols, long long lo, long long hi) {
  oracle::Table t(rows, std::vector<long long>(cols));
  for (auto& row : t)
    for (auto& x : row) x = rng.between(lo, hi);
  return t;
}

IntMatrix to_matrix(const oracle::Table& t) {
  IntMatrix m(IntegerRing{}, t.size(), t.empty() ? 0 : t[0].size());
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = 0; j < t[i].size(); ++j) m.set(i, j, t[i][j]);
  return m;
}

}  // namespace

TEST(Rank, SmallExampleIncidence) {
  const auto inc = incidence_matrix(fixtures::small_example());
  EXPECT_EQ(rank(inc), 4u);
  EXPECT_EQ(rank(inc.map_to(PrimeField(2))), 4u);
  EXPECT_EQ(rank(inc.map_to(RationalField{})), 4u);
  EXPECT_EQ(rank(IntMatrix(IntegerRing{}, 4, 5)), 0u);
}

TEST(Rank, AgreesWithOracleOverQAndSmallPrimes) {
  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    const auto tab = random_table(rng, 1 + rng.below(9), 1 + rng.below(9), -3, 3);
    const auto m = to_matrix(tab);
    EXPECT_EQ(rank(m), oracle::rank_q(tab));
    EXPECT_EQ(bareiss_rank(m), oracle::rank_q(tab));
    for (long long q : {2, 3, 5, 7})
      EXPECT_EQ(rank(m.map_to(PrimeField(static_cast<std::uint64_t>(q)))), oracle::rank_mod(tab, q));
  }
}

TEST(Rank, LargePrimeMatchesRationalOnZeroOneMatrices) {
  Rng rng(2);
  for (int t = 0; t < 10000; ++t) {
    const std::size_t r = 1 + rng.below(40), c = 1 + rng.below(40);
    IntMatrix m(IntegerRing{}, r, c);
    const double density = rng.uniform(0.05, 0.6);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (rng.bernoulli(density)) m.set(i, j, 1);
    const auto exact = bareiss_rank(m);
    auto modular = rank(m.map_to(PrimeField(kLargePrime)));
    if (modular < exact) modular = rank(m.map_to(PrimeField(random_prime_62(rng))));
    ASSERT_LE(modular, exact);
    ASSERT_EQ(modular, exact);
  }
}

TEST(Rank, ModularPathAboveBareissLimit) {
  // 210 x 210 with a planted dependency exercises the two-prime route.
  Rng rng(3);
  IntMatrix m(IntegerRing{}, 210, 210);
  for (std::size_t i = 0; i < 209; ++i)
    for (std::size_t j = 0; j < 210; ++j) m.set(i, j, rng.between(-2, 2));
  for (std::size_t j = 0; j < 210; ++j) m.set(209, j, m(0, j) + 2 * m(1, j));
  EXPECT_EQ(rank(m), 209u);
}

TEST(Rank, BareissIsFractionFree) {
  // bareiss_rank throws FractionFreeViolation on a non-exact division.
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    const auto tab = random_table(rng, 1 + rng.below(12), 1 + rng.below(12), -9, 9);
    EXPECT_NO_THROW(bareiss_rank(to_matrix(tab)));
  }
}

TEST(Kernel, SmallExampleRightKernel) {
  const auto kb = kernel_basis(incidence_matrix(fixtures::small_example()));
  ASSERT_EQ(kb.dimension(), 1u);
  const auto& v = kb.vectors[0];
  const Rational s = v[0] / -1;
  const std::vector<Rational> expected{-1, 2, -1, -1, 1};
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(v[i], s * expected[i]);
}

TEST(Kernel, TwoByTwoRightKernel) {
  const auto kb = kernel_basis(incidence_matrix(fixtures::two_by_two(3)));
  ASSERT_EQ(kb.dimension(), 1u);
  const auto& v = kb.vectors[0];
  const std::vector<Rational> expected{1, -1, -1, 1};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(v[i], v[0] * expected[i]);
}

TEST(Kernel, IdentityHasNone) {
  RationalMatrix id(RationalField{}, 4, 4);
  for (std::size_t i = 0; i < 4; ++i) id.set(i, i, 1);
  EXPECT_EQ(kernel_basis(id).dimension(), 0u);
  EXPECT_EQ(kernel_basis(id, KernelSide::left).dimension(), 0u);
}

TEST(Kernel, VectorsAnnihilateAndRankNullityHolds) {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const auto tab = random_table(rng, 1 + rng.below(8), 1 + rng.below(8), -2, 2);
    const auto m = to_matrix(tab).map_to(RationalField{});
    const auto right = kernel_basis(m);
    const auto left = kernel_basis(m, KernelSide::left);
    const auto r = rank(m);
    EXPECT_EQ(right.dimension(), m.cols() - r);
    EXPECT_EQ(left.dimension(), m.rows() - r);
    for (const auto& v : right.vectors)
      EXPECT_EQ(tensorrig::apply(m, std::span<const Rational>(v)), std::vector<Rational>(m.rows(), 0));
    const auto mt = m.transpose();
    for (const auto& v : left.vectors)
      EXPECT_EQ(tensorrig::apply(mt, std::span<const Rational>(v)), std::vector<Rational>(m.cols(), 0));
  }
  const PrimeField f(kLargePrime);
  for (int t = 0; t < 50; ++t) {
    ModMatrix m(f, 1 + rng.below(8), 1 + rng.below(8));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (rng.bernoulli(0.4)) m.set(i, j, rng.below(f.modulus()));
    const auto kb = kernel_basis(m);
    EXPECT_EQ(kb.dimension(), m.cols() - rank(m));
    for (const auto& v : kb.vectors)
      EXPECT_EQ(tensorrig::apply(m, std::span<const std::uint64_t>(v)), std::vector<std::uint64_t>(m.rows(), 0));
  }
}

TEST(Smith, Examples) {
  IntMatrix d(IntegerRing{}, 3, 3);
  d.set(0, 0, 1);
  d.set(1, 1, 2);
  const auto a = smith_normal_form(d);
  EXPECT_EQ(a.elementary_divisors, (std::vector<BigInt>{1, 2}));
  EXPECT_EQ(a.bad_primes, (std::vector<BigInt>{2}));

  IntMatrix six(IntegerRing{}, 1, 1);
  six.set(0, 0, 6);
  EXPECT_EQ(smith_normal_form(six).bad_primes, (std::vector<BigInt>{2, 3}));

  const auto g = smith_normal_form(incidence_matrix(fixtures::small_example()));
  EXPECT_EQ(g.elementary_divisors, (std::vector<BigInt>{1, 1, 1, 1}));
  EXPECT_TRUE(g.bad_primes.empty());
}

TEST(Smith, DivisibilityChain) {
  Rng rng(6);
  for (int t = 0; t < 100; ++t) {
    const auto s = smith_normal_form(to_matrix(random_table(rng, 1 + rng.below(7), 1 + rng.below(7), -6, 6)));
    for (std::size_t i = 0; i + 1 < s.elementary_divisors.size(); ++i)
      EXPECT_EQ(s.elementary_divisors[i + 1] % s.elementary_divisors[i], 0);
  }
}

TEST(Smith, RankProfileMatchesDirectModularRank) {
  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    const auto tab = random_table(rng, 1 + rng.below(12), 1 + rng.below(12), -5, 5);
    const auto s = smith_normal_form(to_matrix(tab));
    EXPECT_EQ(s.rank(), oracle::rank_q(tab));
    for (long long q : {2, 3, 5, 7, 11}) EXPECT_EQ(s.rank_mod(q), oracle::rank_mod(tab, q)) << "q=" << q;
  }
}

TEST(Smith, PrimeFactors) {
  EXPECT_EQ(prime_factors(BigInt(360)), (std::vector<BigInt>{2, 3, 5}));
  EXPECT_EQ(prime_factors(BigInt(1)), std::vector<BigInt>{});
  const BigInt big = BigInt(1000003) * BigInt(998244353);
  EXPECT_EQ(prime_factors(big), (std::vector<BigInt>{1000003, 998244353}));
}

TEST(StackRank, Examples) {
  const auto inc = incidence_matrix(fixtures::small_example(), RationalField{});
  std::vector<RationalMatrix> one{inc};
  EXPECT_EQ(stack_rank(one), 4u);
  RationalMatrix neg(RationalField{}, inc.rows(), inc.cols());
  for (std::size_t i = 0; i < inc.rows(); ++i)
    for (std::size_t j = 0; j < inc.cols(); ++j) neg.set(i, j, -inc(i, j));
  std::vector<RationalMatrix> pair{inc, neg};
  EXPECT_EQ(stack_rank(pair), 4u);
  std::vector<RationalMatrix> bad{inc, RationalMatrix(RationalField{}, 2, 3)};
  EXPECT_THROW(stack_rank(bad), std::invalid_argument);
}

TEST(RowSpace, InsertAndContains) {
  RowSpace<RationalField> s(RationalField{}, 3);
  const std::vector<Rational> a{1, 2, 3}, b{2, 4, 6}, c{0, 1, 1};
  EXPECT_TRUE(s.insert(a));
  EXPECT_FALSE(s.insert(b));
  EXPECT_TRUE(s.contains(b));
  EXPECT_FALSE(s.contains(c));
  EXPECT_TRUE(s.insert(c));
  EXPECT_EQ(s.rank(), 2u);
}

TEST(Dump, RoundTrip) {
  const auto inc = incidence_matrix(fixtures::small_example(), RationalField{});
  std::ostringstream os;
  write_dump(os, inc);
  std::istringstream is(os.str());
  EXPECT_EQ(read_rational_dump(is), inc);
  const auto m = incidence_matrix(fixtures::small_example(), PrimeField(7));
  std::ostringstream os2;
  write_dump(os2, m);
  std::istringstream is2(os2.str());
  EXPECT_EQ(read_modular_dump(is2), m);
}
