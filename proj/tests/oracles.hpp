#pragma once

// Reference computations for the tests. These deliberately avoid the
// library's elimination and adjacency code.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <vector>

#include "tensorrig/hypergraph.hpp"

namespace oracle {

using Q = boost::multiprecision::cpp_rational;
using Table = std::vector<std::vector<long long>>;

/// Rank over Q by textbook Gaussian elimination with fractions.
inline std::size_t rank_q(const Table& a) {
  if (a.empty()) return 0;
  std::vector<std::vector<Q>> m(a.size(), std::vector<Q>(a[0].size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) m[i][j] = a[i][j];
  std::size_t r = 0;
  for (std::size_t c = 0; c < m[0].size() && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Q f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < m[0].size(); ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

/// Rank over GF(q) for a small prime q.
inline std::size_t rank_mod(const Table& a, long long q) {
  if (a.empty()) return 0;
  Table m = a;
  for (auto& row : m)
    for (auto& x : row) x = ((x % q) + q) % q;
  auto inv = [q](long long x) {
    for (long long y = 1; y < q; ++y)
      if (x * y % q == 1) return y;
    return 0LL;
  };
  std::size_t r = 0;
  for (std::size_t c = 0; c < m[0].size() && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    const long long iv = inv(m[r][c]);
    for (auto& x : m[r]) x = x * iv % q;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      const long long f = m[i][c];
      for (std::size_t j = 0; j < m[0].size(); ++j) m[i][j] = ((m[i][j] - f * m[r][j]) % q + q) % q;
    }
    ++r;
  }
  return r;
}

/// Incidence table built directly from edge lists.
inline Table incidence(const tensorrig::PartiteHypergraph& g) {
  Table t(g.vertex_count(), std::vector<long long>(g.edge_count(), 0));
  std::size_t offset = 0;
  for (std::size_t part = 0; part < g.k(); ++part) {
    for (std::size_t c = 0; c < g.edge_count(); ++c) t[offset + g.edges()[c][part]][c] = 1;
    offset += g.part_size(part);
  }
  return t;
}

/// A_w by scanning every vertex pair against every edge.
inline std::vector<std::vector<Q>> adjacency(const tensorrig::PartiteHypergraph& g, const std::vector<Q>& w) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<Q>> a(n, std::vector<Q>(n, 0));
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) {
      if (u == v) continue;
      const auto pu = g.vertex(u), pv = g.vertex(v);
      if (pu.part == pv.part) continue;
      for (std::size_t c = 0; c < g.edge_count(); ++c) {
        const auto& e = g.edges()[c];
        if (e[pu.part] == pu.index && e[pv.part] == pv.index) a[u][v] += w[c];
      }
    }
  return a;
}

inline std::size_t rank_q(const std::vector<std::vector<Q>>& m0) {
  auto m = m0;
  if (m.empty()) return 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m[0].size() && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Q f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < m[0].size(); ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

/// Minimum degree by counting appearances.
inline std::size_t min_degree(const tensorrig::PartiteHypergraph& g) {
  std::size_t best = SIZE_MAX;
  for (std::size_t part = 0; part < g.k(); ++part)
    for (std::uint32_t v = 0; v < g.part_size(part); ++v) {
      std::size_t c = 0;
      for (const auto& e : g.edges()) c += e[part] == v;
      best = std::min(best, c);
    }
  return best;
}

}  // namespace oracle
