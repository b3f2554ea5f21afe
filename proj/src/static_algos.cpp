#include "dyncliq/static_algos.hpp"

#include <omp.h>

#include <algorithm>

#include "dyncliq/threading.hpp"

namespace dyncliq {

std::vector<std::vector<vertex_id>> build_adjacency(const Graph& graph) {
  std::vector<std::vector<vertex_id>> adj(graph.n);
  for (uint64_t key : graph.edges) {
    vertex_id u = key_min(key), v = key_max(key);
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

Orientation degeneracy_order(const Graph& graph) {
  size_t n = graph.n;
  auto adj = build_adjacency(graph);
  Orientation o;
  o.order.reserve(n);
  o.rank.assign(n, 0);

  // Bucketed min-degree peeling.
  std::vector<uint32_t> deg(n);
  size_t max_deg = 0;
  for (size_t v = 0; v < n; ++v) {
    deg[v] = static_cast<uint32_t>(adj[v].size());
    max_deg = std::max<size_t>(max_deg, deg[v]);
  }
  std::vector<std::vector<vertex_id>> buckets(max_deg + 1);
  for (size_t v = 0; v < n; ++v) buckets[deg[v]].push_back(static_cast<vertex_id>(v));
  std::vector<bool> removed(n, false);
  size_t cur = 0;
  while (o.order.size() < n) {
    while (cur < buckets.size() && buckets[cur].empty()) ++cur;
    if (cur >= buckets.size()) break;
    vertex_id v = buckets[cur].back();
    buckets[cur].pop_back();
    if (removed[v] || deg[v] != cur) continue;  // stale bucket entry
    removed[v] = true;
    o.rank[v] = static_cast<uint32_t>(o.order.size());
    o.order.push_back(v);
    o.degeneracy = std::max(o.degeneracy, deg[v]);
    for (vertex_id w : adj[v]) {
      if (removed[w]) continue;
      --deg[w];
      buckets[deg[w]].push_back(w);
      if (deg[w] < cur) cur = deg[w];
    }
  }

  o.out.assign(n, {});
  for (size_t v = 0; v < n; ++v) {
    for (vertex_id w : adj[v])
      if (o.rank[w] > o.rank[v]) o.out[v].push_back(w);
  }
  // adj rows are sorted, so out rows inherit id order.
  return o;
}

namespace {

uint64_t intersect_count(const std::vector<vertex_id>& a, const std::vector<vertex_id>& b) {
  uint64_t count = 0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (a[i] > b[j]) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

void intersect_into(const std::vector<vertex_id>& a, const std::vector<vertex_id>& b,
                    std::vector<vertex_id>& out) {
  out.clear();
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (a[i] > b[j]) {
      ++j;
    } else {
      out.push_back(a[i]);
      ++i;
      ++j;
    }
  }
}

struct CliqueSearch {
  const Orientation& o;
  int k;
  const CliqueVisitor& visitor;
  std::vector<vertex_id> prefix;
  std::vector<std::vector<vertex_id>> scratch;  // per-depth candidate buffers

  uint64_t expand(const std::vector<vertex_id>& cands, int depth) {
    if (depth == k - 1) {
      if (visitor) {
        for (vertex_id w : cands) {
          prefix.push_back(w);
          std::vector<vertex_id> clique(prefix);
          std::sort(clique.begin(), clique.end());
          visitor(clique);
          prefix.pop_back();
        }
      }
      return cands.size();
    }
    uint64_t total = 0;
    for (vertex_id w : cands) {
      auto& next = scratch[depth];
      intersect_into(cands, o.out[w], next);
      if (next.size() + depth + 1 < static_cast<size_t>(k)) continue;
      prefix.push_back(w);
      total += expand(next, depth + 1);
      prefix.pop_back();
    }
    return total;
  }
};

}  // namespace

uint64_t static_triangle_count(const Graph& graph) {
  Orientation o = degeneracy_order(graph);
  int64_t n = static_cast<int64_t>(graph.n);
  uint64_t total = 0;
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : total) \
    num_threads(get_num_threads())
  for (int64_t u = 0; u < n; ++u) {
    for (vertex_id v : o.out[u]) total += intersect_count(o.out[u], o.out[v]);
  }
  return total;
}

uint64_t enumerate_cliques(const Graph& graph, int k, const CliqueVisitor& visitor) {
  if (k < 1) throw ParameterError("clique size must be >= 1");
  if (k == 1) {
    if (visitor) {
      for (vertex_id v = 0; v < graph.n; ++v) visitor({v});
    }
    return graph.n;
  }
  Orientation o = degeneracy_order(graph);
  int64_t n = static_cast<int64_t>(graph.n);
  uint64_t total = 0;
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : total) \
    num_threads(get_num_threads())
  for (int64_t v = 0; v < n; ++v) {
    CliqueSearch search{o, k, visitor, {}, {}};
    search.scratch.assign(k, {});
    search.prefix.push_back(static_cast<vertex_id>(v));
    total += search.expand(o.out[v], 1);
  }
  return total;
}

namespace {

// Bit-matrix adjacency for the oracle: row v holds n bits.
struct BitAdjacency {
  size_t n, words;
  std::vector<uint64_t> bits;
  explicit BitAdjacency(const Graph& g) : n(g.n), words((g.n + 63) / 64), bits(g.n * words, 0) {
    for (uint64_t key : g.edges) {
      vertex_id u = key_min(key), v = key_max(key);
      bits[u * words + v / 64] |= uint64_t{1} << (v % 64);
      bits[v * words + u / 64] |= uint64_t{1} << (u % 64);
    }
  }
  bool test(vertex_id u, vertex_id v) const {
    return (bits[u * words + v / 64] >> (v % 64)) & 1;
  }
};

uint64_t brute_rec(const BitAdjacency& adj, std::vector<vertex_id>& chosen, vertex_id from,
                   int remaining) {
  if (remaining == 0) return 1;
  uint64_t total = 0;
  for (vertex_id v = from; v < adj.n; ++v) {
    bool ok = true;
    for (vertex_id u : chosen) {
      if (!adj.test(u, v)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    chosen.push_back(v);
    total += brute_rec(adj, chosen, v + 1, remaining - 1);
    chosen.pop_back();
  }
  return total;
}

}  // namespace

uint64_t brute_force_count(const Graph& graph, int k) {
  if (k < 1) throw ParameterError("clique size must be >= 1");
  if (k == 1) return graph.n;
  // Guard C(n,k) before enumerating.
  long double combos = 1.0L;
  for (int i = 0; i < k; ++i) combos *= static_cast<long double>(graph.n - i) / (i + 1);
  if (combos > 1.2e8L)
    throw BudgetError("brute-force guard exceeded: C(" + std::to_string(graph.n) + "," +
                      std::to_string(k) + ") too large");
  if (graph.n < static_cast<uint64_t>(k)) return 0;
  BitAdjacency adj(graph);
  uint64_t total = 0;
  int64_t n = static_cast<int64_t>(graph.n);
#pragma omp parallel for schedule(dynamic, 8) reduction(+ : total) \
    num_threads(get_num_threads())
  for (int64_t v = 0; v < n; ++v) {
    std::vector<vertex_id> chosen{static_cast<vertex_id>(v)};
    total += brute_rec(adj, chosen, static_cast<vertex_id>(v) + 1, k - 1);
  }
  return total;
}

}  // namespace dyncliq
