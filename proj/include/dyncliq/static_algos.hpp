#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dyncliq/update_stream.hpp"

namespace dyncliq {

// Sorted per-vertex neighbor lists.
std::vector<std::vector<vertex_id>> build_adjacency(const Graph& graph);

struct Orientation {
  std::vector<vertex_id> order;            // repeated-min-degree peel order
  std::vector<uint32_t> rank;              // rank[v] = position of v in order
  std::vector<std::vector<vertex_id>> out; // neighbors later in order, sorted by id
  uint32_t degeneracy = 0;                 // max out-degree == graph degeneracy
};

Orientation degeneracy_order(const Graph& graph);

// Exact triangle count: orient along the degeneracy order, then sum
// |out(u) ∩ out(v)| over directed edges.
uint64_t static_triangle_count(const Graph& graph);

// Calls visitor (if any) once per k-clique with the clique as an id-sorted
// vertex tuple; returns the total count. Recursive out-neighborhood
// intersection over the orientation.
using CliqueVisitor = std::function<void(const std::vector<vertex_id>&)>;
uint64_t enumerate_cliques(const Graph& graph, int k, const CliqueVisitor& visitor = nullptr);

// Test oracle: counts k-subsets inducing complete subgraphs by direct
// enumeration. Refuses with BudgetError when C(n,k) exceeds ~1.2e8 (n <= 64
// with k <= 6 always fits).
uint64_t brute_force_count(const Graph& graph, int k);

}  // namespace dyncliq
