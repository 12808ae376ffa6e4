#pragma once

// Smith normal form over the integers and the prime-characteristic rank
// profile it determines.

#include <boost/multiprecision/miller_rabin.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "matrix.hpp"

namespace tensorrig {

struct SnfResult {
  /// Positive elementary divisors d_1 | d_2 | ... | d_r, r = rank over Q.
  std::vector<BigInt> elementary_divisors;
  /// Primes dividing some divisor (equivalently d_r), ascending.
  std::vector<BigInt> bad_primes;

  std::size_t rank() const { return elementary_divisors.size(); }

  /// Rank over GF(p): the number of divisors not divisible by p.
  std::size_t rank_mod(const BigInt& p) const {
    return static_cast<std::size_t>(std::count_if(
        elementary_divisors.begin(), elementary_divisors.end(),
        [&](const BigInt& d) { return d % p != 0; }));
  }
};

namespace detail {

inline BigInt pollard_rho(const BigInt& n, std::uint64_t seed) {
  if (n % 2 == 0) return 2;
  std::mt19937_64 gen(seed);
  for (;;) {
    BigInt c = BigInt(gen()) % (n - 1) + 1;
    BigInt y = BigInt(gen()) % n;
    BigInt g = 1, q = 1, x, ys;
    const std::size_t m = 64;
    std::size_t r = 1;
    auto step = [&](const BigInt& v) { return (v * v + c) % n; };
    do {
      x = y;
      for (std::size_t i = 0; i < r; ++i) y = step(y);
      std::size_t k = 0;
      while (k < r && g == 1) {
        ys = y;
        for (std::size_t i = 0; i < std::min(m, r - k); ++i) {
          y = step(y);
          q = (q * abs(x - y)) % n;
        }
        g = gcd(q, n);
        k += m;
      }
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = step(ys);
        g = gcd(abs(x - ys), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void factor_into(BigInt n, std::set<BigInt>& primes, std::uint64_t seed) {
  if (n < 2) return;
  std::mt19937_64 gen(seed);
  if (boost::multiprecision::miller_rabin_test(n, 25, gen)) {
    primes.insert(n);
    return;
  }
  const BigInt f = pollard_rho(n, seed);
  factor_into(f, primes, seed + 1);
  factor_into(n / f, primes, seed + 2);
}

}  // namespace detail

/// Distinct prime factors of |n|, ascending.
inline std::vector<BigInt> prime_factors(BigInt n) {
  n = abs(n);
  std::set<BigInt> primes;
  for (unsigned p = 2; p < 1000 && n > 1; ++p) {
    if (n % p == 0) {
      primes.insert(p);
      while (n % p == 0) n /= p;
    }
  }
  detail::factor_into(n, primes, 0x9a1f00dULL);
  return {primes.begin(), primes.end()};
}

/// Smith normal form by gcd-pivoting elimination with a divisibility
/// fix-up step. Entries stay exact throughout.
inline SnfResult smith_normal_form(const IntMatrix& input) {
  const std::size_t m = input.rows(), n = input.cols();
  std::vector<std::vector<BigInt>> a(m, std::vector<BigInt>(n));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = input(i, j);

  auto swap_cols = [&](std::size_t x, std::size_t y) {
    if (x != y)
      for (auto& row : a) std::swap(row[x], row[y]);
  };

  std::vector<BigInt> diag;
  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    for (;;) {
      // Smallest nonzero entry of the trailing block becomes the pivot; its
      // magnitude strictly drops on every pass that is not final.
      std::size_t pi = m, pj = n;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (a[i][j] != 0 && (pi == m || abs(a[i][j]) < abs(a[pi][pj]))) {
            pi = i;
            pj = j;
          }
      if (pi == m) break;
      std::swap(a[t], a[pi]);
      swap_cols(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a[i][t] == 0) continue;
        const BigInt q = a[i][t] / a[t][t];
        for (std::size_t j = t; j < n; ++j) a[i][j] -= q * a[t][j];
        clean = clean && a[i][t] == 0;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a[t][j] == 0) continue;
        const BigInt q = a[t][j] / a[t][t];
        for (std::size_t i = t; i < m; ++i) a[i][j] -= q * a[i][t];
        clean = clean && a[t][j] == 0;
      }
      if (!clean) continue;

      // Fix-up: the pivot must divide the whole trailing block.
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (a[i][j] % a[t][t] != 0) {
            for (std::size_t c = t; c < n; ++c) a[t][c] += a[i][c];
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (a[t][t] == 0) break;
    diag.push_back(abs(a[t][t]));
  }

  SnfResult out;
  out.elementary_divisors = std::move(diag);
  if (!out.elementary_divisors.empty())
    out.bad_primes = prime_factors(out.elementary_divisors.back());
  return out;
}

}  // namespace tensorrig
