#pragma once

// Dense matrices over an explicit coefficient domain, plus exact rank,
// kernel, and row-space machinery.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "field.hpp"

namespace tensorrig {

template <class Field>
class FieldMatrix {
 public:
  using field_type = Field;
  using value_type = typename Field::value_type;

  FieldMatrix() = default;
  FieldMatrix(Field field, std::size_t rows, std::size_t cols)
      : field_(std::move(field)),
        rows_(rows),
        cols_(cols),
        data_(rows * cols, field_.zero()) {}

  const Field& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  const value_type& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  void set(std::size_t r, std::size_t c, value_type v) {
    data_[r * cols_ + c] = field_.normalize(std::move(v));
  }
  void add_to(std::size_t r, std::size_t c, const value_type& v) {
    auto& x = data_[r * cols_ + c];
    x = field_.add(x, field_.normalize(v));
  }

  std::span<const value_type> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  FieldMatrix transpose() const {
    FieldMatrix t(field_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t.data_[c * rows_ + r] = (*this)(r, c);
    return t;
  }

  /// Re-interprets integer-valued entries in another domain.
  template <class Target>
  FieldMatrix<Target> map_to(const Target& target) const {
    FieldMatrix<Target> out(target, rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out.set(r, c, convert(target, (*this)(r, c)));
    return out;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(),
                       [&](const value_type& v) { return field_.is_zero(v); });
  }

  bool is_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = r + 1; c < cols_; ++c)
        if ((*this)(r, c) != (*this)(c, r)) return false;
    return true;
  }

  friend bool operator==(const FieldMatrix& a, const FieldMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  template <class Target>
  static typename Target::value_type convert(const Target& target,
                                             const value_type& v) {
    if constexpr (std::is_same_v<value_type, typename Target::value_type>) {
      return target.normalize(v);
    } else if constexpr (std::is_same_v<value_type, BigInt>) {
      return target.from_big(v);
    } else if constexpr (std::is_same_v<value_type, Rational>) {
      if (denominator(v) != 1)
        throw std::domain_error("map_to: non-integer rational entry");
      return target.from_big(numerator(v));
    } else {
      static_assert(std::is_integral_v<value_type>, "unsupported conversion");
      // Residues are mapped by their canonical integer representative.
      return target.from_big(BigInt(v));
    }
  }

  Field field_{};
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<value_type> data_;
};

using IntMatrix = FieldMatrix<IntegerRing>;
using RationalMatrix = FieldMatrix<RationalField>;
using ModMatrix = FieldMatrix<PrimeField>;

/// Vertical stack; all inputs must share the column count.
template <class Field>
FieldMatrix<Field> vstack(std::span<const FieldMatrix<Field>> mats) {
  if (mats.empty()) throw std::invalid_argument("vstack: empty list");
  const std::size_t cols = mats.front().cols();
  std::size_t rows = 0;
  for (const auto& m : mats) {
    if (m.cols() != cols) throw std::invalid_argument("vstack: column count mismatch");
    rows += m.rows();
  }
  FieldMatrix<Field> out(mats.front().field(), rows, cols);
  std::size_t at = 0;
  for (const auto& m : mats) {
    for (std::size_t r = 0; r < m.rows(); ++r, ++at)
      for (std::size_t c = 0; c < cols; ++c) out.set(at, c, m(r, c));
  }
  return out;
}

/// M * v.
template <class Field>
std::vector<typename Field::value_type> apply(
    const FieldMatrix<Field>& m, std::span<const typename Field::value_type> v) {
  if (v.size() != m.cols()) throw std::invalid_argument("apply: size mismatch");
  const auto& f = m.field();
  std::vector<typename Field::value_type> out(m.rows(), f.zero());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (!f.is_zero(m(r, c)) && !f.is_zero(v[c])) out[r] = f.add(out[r], f.mul(m(r, c), v[c]));
  return out;
}

// ---------------------------------------------------------------------------
// Elimination over fields

template <class Field>
struct EchelonForm {
  FieldMatrix<Field> reduced;          // reduced row echelon form
  std::vector<std::size_t> pivots;     // pivot column of each nonzero row
};

template <ExactField Field>
EchelonForm<Field> reduced_row_echelon(FieldMatrix<Field> m) {
  const auto& f = m.field();
  EchelonForm<Field> out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t pivot = r;
    while (pivot < m.rows() && f.is_zero(m(pivot, c))) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != r)
      for (std::size_t j = 0; j < m.cols(); ++j) {
        auto tmp = m(pivot, j);
        m.set(pivot, j, m(r, j));
        m.set(r, j, std::move(tmp));
      }
    const auto scale = f.inv(m(r, c));
    for (std::size_t j = c; j < m.cols(); ++j) m.set(r, j, f.mul(m(r, j), scale));
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || f.is_zero(m(i, c))) continue;
      const auto factor = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (!f.is_zero(m(r, j))) m.set(i, j, f.sub(m(i, j), f.mul(factor, m(r, j))));
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.reduced = std::move(m);
  return out;
}

/// Rank over a prime field by Gaussian elimination (forward pass only).
inline std::size_t rank(ModMatrix m) {
  const auto& f = m.field();
  std::size_t r = 0;
  std::vector<std::uint64_t> pivot_row;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t pivot = r;
    while (pivot < m.rows() && m(pivot, c) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != r)
      for (std::size_t j = c; j < m.cols(); ++j) {
        auto tmp = m(pivot, j);
        m.set(pivot, j, m(r, j));
        m.set(r, j, tmp);
      }
    const auto scale = f.inv(m(r, c));
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (m(i, c) == 0) continue;
      const auto factor = f.mul(m(i, c), scale);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (m(r, j) != 0) m.set(i, j, f.sub(m(i, j), f.mul(factor, m(r, j))));
    }
    ++r;
  }
  return r;
}

/// Thrown when a Bareiss step would leave the integers; indicates a bug.
class FractionFreeViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Fraction-free (Bareiss) rank of an integer matrix. Every division is
/// checked to be exact.
inline std::size_t bareiss_rank(IntMatrix m) {
  std::size_t r = 0;
  BigInt prev = 1;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t pivot = r;
    while (pivot < m.rows() && m(pivot, c) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != r)
      for (std::size_t j = c; j < m.cols(); ++j) {
        BigInt tmp = m(pivot, j);
        m.set(pivot, j, m(r, j));
        m.set(r, j, std::move(tmp));
      }
    const BigInt p = m(r, c);
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      const BigInt lead = m(i, c);
      for (std::size_t j = c + 1; j < m.cols(); ++j) {
        BigInt num = p * m(i, j) - lead * m(r, j);
        BigInt q, rem;
        boost::multiprecision::divide_qr(num, prev, q, rem);
        if (rem != 0) throw FractionFreeViolation("bareiss_rank: inexact division");
        m.set(i, j, std::move(q));
      }
      m.set(i, c, 0);
    }
    prev = p;
    ++r;
  }
  return r;
}

/// Matrices at or below this size are ranked exactly by Bareiss; larger
/// ones go through two independent random 62-bit primes first.
inline constexpr std::size_t kBareissLimit = 200;

inline std::size_t rank(const IntMatrix& m) {
  if (m.rows() <= kBareissLimit && m.cols() <= kBareissLimit) return bareiss_rank(m);
  Rng rng(0x5eed0fbaULL ^ (m.rows() * 1000003ULL + m.cols()));
  const PrimeField f1(random_prime_62(rng));
  PrimeField f2(random_prime_62(rng));
  while (f2 == f1) f2 = PrimeField(random_prime_62(rng));
  const std::size_t r1 = rank(m.map_to(f1));
  const std::size_t r2 = rank(m.map_to(f2));
  if (r1 == r2) return r1;
  return bareiss_rank(m);
}

/// Integer matrix with the same row space as `m` (rows scaled by the lcm of
/// their denominators).
inline IntMatrix clear_denominators(const RationalMatrix& m) {
  IntMatrix out(IntegerRing{}, m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    BigInt l = 1;
    for (std::size_t c = 0; c < m.cols(); ++c) l = boost::multiprecision::lcm(l, denominator(m(r, c)));
    for (std::size_t c = 0; c < m.cols(); ++c)
      out.set(r, c, numerator(m(r, c)) * (l / denominator(m(r, c))));
  }
  return out;
}

inline std::size_t rank(const RationalMatrix& m) { return rank(clear_denominators(m)); }

/// Rank of the vertical stack of `mats`.
template <class Field>
std::size_t stack_rank(std::span<const FieldMatrix<Field>> mats) {
  return rank(vstack(mats));
}

template <class Field>
std::size_t stack_rank(const std::vector<FieldMatrix<Field>>& mats) {
  return stack_rank(std::span<const FieldMatrix<Field>>(mats));
}

// ---------------------------------------------------------------------------
// Kernels

enum class KernelSide { left, right };

template <class Field>
struct KernelBasis {
  Field field;
  std::vector<std::vector<typename Field::value_type>> vectors;

  std::size_t dimension() const { return vectors.size(); }
};

template <ExactField Field>
KernelBasis<Field> right_kernel(const FieldMatrix<Field>& m) {
  const auto& f = m.field();
  const auto ech = reduced_row_echelon(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : ech.pivots) is_pivot[c] = true;
  KernelBasis<Field> out{f, {}};
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<typename Field::value_type> v(m.cols(), f.zero());
    v[free] = f.one();
    for (std::size_t i = 0; i < ech.pivots.size(); ++i)
      v[ech.pivots[i]] = f.neg(ech.reduced(i, free));
    out.vectors.push_back(std::move(v));
  }
  return out;
}

/// Basis of the requested kernel. The left kernel is the right kernel of
/// the explicit transpose.
template <ExactField Field>
KernelBasis<Field> kernel_basis(const FieldMatrix<Field>& m,
                                KernelSide side = KernelSide::right) {
  return side == KernelSide::right ? right_kernel(m) : right_kernel(m.transpose());
}

inline KernelBasis<RationalField> kernel_basis(const IntMatrix& m,
                                               KernelSide side = KernelSide::right) {
  return kernel_basis(m.map_to(RationalField{}), side);
}

// ---------------------------------------------------------------------------
// Incremental row space

/// Echelon basis of a growing set of vectors. Stored rows are normalized
/// (pivot entry one) and vanish on the pivots of earlier rows.
template <ExactField Field>
class RowSpace {
 public:
  using value_type = typename Field::value_type;

  RowSpace(Field field, std::size_t dim) : field_(std::move(field)), dim_(dim) {}

  std::size_t dimension() const { return dim_; }
  std::size_t rank() const { return rows_.size(); }

  /// Adds v; returns true iff it was independent of the current span.
  bool insert(std::span<const value_type> v) {
    auto w = reduce(v);
    std::size_t piv = 0;
    while (piv < dim_ && field_.is_zero(w[piv])) ++piv;
    if (piv == dim_) return false;
    const auto scale = field_.inv(w[piv]);
    for (auto& x : w) x = field_.mul(x, scale);
    rows_.push_back(std::move(w));
    pivots_.push_back(piv);
    return true;
  }

  bool contains(std::span<const value_type> v) const {
    const auto w = reduce(v);
    return std::all_of(w.begin(), w.end(), [&](const value_type& x) { return field_.is_zero(x); });
  }

  /// Inserts every row of m; returns the number of independent rows added.
  std::size_t insert_rows(const FieldMatrix<Field>& m) {
    std::size_t added = 0;
    for (std::size_t r = 0; r < m.rows() && rank() < dim_; ++r) added += insert(m.row(r));
    return added;
  }

 private:
  std::vector<value_type> reduce(std::span<const value_type> v) const {
    if (v.size() != dim_) throw std::invalid_argument("RowSpace: dimension mismatch");
    std::vector<value_type> w(v.begin(), v.end());
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const auto factor = w[pivots_[i]];
      if (field_.is_zero(factor)) continue;
      for (std::size_t j = 0; j < dim_; ++j)
        if (!field_.is_zero(rows_[i][j])) w[j] = field_.sub(w[j], field_.mul(factor, rows_[i][j]));
    }
    return w;
  }

  Field field_;
  std::size_t dim_;
  std::vector<std::vector<value_type>> rows_;
  std::vector<std::size_t> pivots_;
};

// ---------------------------------------------------------------------------
// Debug dump: header "field=Q" or "field=GF(q)", then tab-separated rows.

template <class Field>
void write_dump(std::ostream& os, const FieldMatrix<Field>& m) {
  os << "field=" << m.field().name() << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) os << '\t';
      os << m(r, c);
    }
    os << '\n';
  }
}

namespace detail {
inline std::vector<std::vector<std::string>> read_dump_cells(std::istream& is,
                                                             std::string& header) {
  if (!std::getline(is, header)) throw std::runtime_error("matrix dump: missing header");
  std::vector<std::vector<std::string>> cells;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, '\t')) row.push_back(cell);
    if (!cells.empty() && row.size() != cells.front().size())
      throw std::runtime_error("matrix dump: ragged rows");
    cells.push_back(std::move(row));
  }
  return cells;
}
}  // namespace detail

inline RationalMatrix read_rational_dump(std::istream& is) {
  std::string header;
  const auto cells = detail::read_dump_cells(is, header);
  if (header != "field=Q") throw std::runtime_error("matrix dump: expected field=Q");
  RationalMatrix m(RationalField{}, cells.size(), cells.empty() ? 0 : cells.front().size());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) m.set(r, c, Rational(cells[r][c]));
  return m;
}

inline ModMatrix read_modular_dump(std::istream& is) {
  std::string header;
  const auto cells = detail::read_dump_cells(is, header);
  if (header.rfind("field=GF(", 0) != 0 || header.back() != ')')
    throw std::runtime_error("matrix dump: expected field=GF(q)");
  const PrimeField f(std::stoull(header.substr(9, header.size() - 10)));
  ModMatrix m(f, cells.size(), cells.empty() ? 0 : cells.front().size());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) m.set(r, c, f.from_big(BigInt(cells[r][c])));
  return m;
}

}  // namespace tensorrig
