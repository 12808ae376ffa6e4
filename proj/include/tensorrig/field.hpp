#pragma once

// Coefficient domains used by FieldMatrix.
//
// Each domain is a small value type that knows how to do arithmetic on its
// elements. Prime fields carry their modulus at runtime so the same code
// serves GF(2), GF(11) and the large evaluation prime.

#include <boost/multiprecision/cpp_int.hpp>

#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "random.hpp"

namespace tensorrig {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// 64-bit modular arithmetic and primality

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b,
                             std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp,
                             std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

/// Deterministic Miller-Rabin for all 64-bit integers.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// The fixed public evaluation prime, 2^62 - 57.
inline constexpr std::uint64_t kLargePrime = 4611686018427387847ULL;

/// Uniformly random prime in [2^61, 2^62).
inline std::uint64_t random_prime_62(Rng& rng) {
  for (;;) {
    std::uint64_t c = (1ULL << 61) | rng.below(1ULL << 61) | 1ULL;
    if (is_prime_u64(c)) return c;
  }
}

// ---------------------------------------------------------------------------
// Domains

/// GF(q) for a prime q < 2^63. Elements are canonical residues in [0, q).
class PrimeField {
 public:
  using value_type = std::uint64_t;

  explicit PrimeField(std::uint64_t modulus = kLargePrime) : q_(modulus) {
    if (modulus >= (1ULL << 63) || !is_prime_u64(modulus))
      throw std::invalid_argument("PrimeField: modulus must be a prime < 2^63");
  }

  std::uint64_t modulus() const { return q_; }
  std::string name() const { return "GF(" + std::to_string(q_) + ")"; }

  value_type zero() const { return 0; }
  value_type one() const { return 1 % q_; }
  value_type from_int(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(q_);
    return static_cast<value_type>(r < 0 ? r + static_cast<std::int64_t>(q_)
                                         : r);
  }
  value_type from_big(const BigInt& v) const {
    BigInt r = v % q_;
    if (r < 0) r += q_;
    return static_cast<value_type>(r);
  }
  value_type normalize(value_type v) const { return v % q_; }

  value_type add(value_type a, value_type b) const {
    value_type s = a + b;  // both < 2^63, no overflow
    return s >= q_ ? s - q_ : s;
  }
  value_type sub(value_type a, value_type b) const {
    return a >= b ? a - b : a + (q_ - b);
  }
  value_type neg(value_type a) const { return a == 0 ? 0 : q_ - a; }
  value_type mul(value_type a, value_type b) const { return mul_mod(a, b, q_); }
  value_type inv(value_type a) const {
    if (a == 0) throw std::domain_error("PrimeField: inverse of zero");
    return pow_mod(a, q_ - 2, q_);
  }
  bool is_zero(value_type a) const { return a == 0; }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint64_t q_;
};

/// The rationals, with exact arbitrary-precision arithmetic.
class RationalField {
 public:
  using value_type = Rational;

  std::string name() const { return "Q"; }
  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(std::int64_t v) const { return v; }
  value_type from_big(const BigInt& v) const { return Rational(v); }
  value_type normalize(const value_type& v) const { return v; }

  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type inv(const value_type& a) const {
    if (a == 0) throw std::domain_error("RationalField: inverse of zero");
    return 1 / a;
  }
  bool is_zero(const value_type& a) const { return a == 0; }

  friend bool operator==(const RationalField&, const RationalField&) = default;
};

/// The integers. Not a field: rank goes through fraction-free elimination
/// and the Smith normal form is computed over this ring.
class IntegerRing {
 public:
  using value_type = BigInt;

  std::string name() const { return "Q"; }
  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(std::int64_t v) const { return v; }
  value_type from_big(const BigInt& v) const { return v; }
  value_type normalize(const value_type& v) const { return v; }

  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  bool is_zero(const value_type& a) const { return a == 0; }

  friend bool operator==(const IntegerRing&, const IntegerRing&) = default;
};

/// Double precision reals; only used by the numerical completion oracle.
class RealField {
 public:
  using value_type = double;

  std::string name() const { return "R"; }
  value_type zero() const { return 0.0; }
  value_type one() const { return 1.0; }
  value_type from_int(std::int64_t v) const { return static_cast<double>(v); }
  value_type normalize(value_type v) const { return v; }

  value_type add(value_type a, value_type b) const { return a + b; }
  value_type sub(value_type a, value_type b) const { return a - b; }
  value_type neg(value_type a) const { return -a; }
  value_type mul(value_type a, value_type b) const { return a * b; }
  value_type inv(value_type a) const { return 1.0 / a; }
  bool is_zero(value_type a) const { return a == 0.0; }

  friend bool operator==(const RealField&, const RealField&) = default;
};

template <class F>
concept ExactField = requires(const F f, typename F::value_type a) {
  { f.inv(a) } -> std::convertible_to<typename F::value_type>;
} && !std::same_as<F, RealField>;

}  // namespace tensorrig
