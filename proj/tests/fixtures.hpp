#pragma once

#include "tensorrig/tensorrig.hpp"

namespace fixtures {

using tensorrig::Edge;
using tensorrig::PartiteHypergraph;

/// Six vertices {1,2} u {3,4} u {5,6}, edges 135 136 146 236 245 (zero-based
/// within each part).
inline PartiteHypergraph small_example() {
  return PartiteHypergraph({2, 2, 2}, {{0, 0, 0}, {0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
}

/// K^k on parts (2,2,1,...,1); edges sort as e11, e12, e21, e22.
inline PartiteHypergraph two_by_two(std::size_t k) {
  std::vector<std::uint32_t> parts(k, 1);
  parts[0] = parts[1] = 2;
  return PartiteHypergraph::complete(parts);
}

/// Two edges (1,3,5), (1,4,6) on parts (2,2,2).
inline PartiteHypergraph two_edges() { return PartiteHypergraph({2, 2, 2}, {{0, 0, 0}, {0, 1, 1}}); }

/// Uniformly random subgraph of K^k_n with edge probability drawn per call.
inline PartiteHypergraph random_subgraph(std::uint32_t n, std::size_t k, std::uint64_t seed) {
  tensorrig::Rng rng(seed ^ 0x51ab5eedULL);
  const double p = rng.uniform(0.1, 0.9);
  return tensorrig::gnp(n, k, p, seed);
}

/// Random 1-tree with the given per-part sizes.
inline PartiteHypergraph random_one_tree(std::size_t k, std::uint32_t n, std::uint64_t seed) {
  std::vector<std::uint32_t> target(k, n);
  return tensorrig::random_dtree(k, 1, target, seed);
}

}  // namespace fixtures
