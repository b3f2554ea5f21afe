#include "dyncliq/kclique_enum.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>

#include "dyncliq/static_algos.hpp"

namespace dyncliq {

bool is_lex_first_batch_edge(const EdgeUpdate& e, const std::vector<vertex_id>& clique_vertices,
                             const std::unordered_map<uint64_t, UpdateKind>& batch_table) {
  std::vector<vertex_id> vs = clique_vertices;
  std::sort(vs.begin(), vs.end());
  // Sorted vertices visit the C(k,2) canonical keys in increasing order, so
  // the first table hit is the lexicographically first batch edge.
  for (size_t i = 0; i + 1 < vs.size(); ++i)
    for (size_t j = i + 1; j < vs.size(); ++j) {
      uint64_t key = edge_key(vs[i], vs[j]);
      if (batch_table.count(key)) return key == e.key();
    }
  return false;
}

KCliqueCounter::KCliqueCounter(const Graph& g, int k, int max_k) : graph_(g), k_(k) {
  if (k < 3) throw ParameterError("clique size must be at least 3");
  if (k > max_k) throw ParameterError("clique size exceeds the configured cap");
  count_ = enumerate_cliques(graph_, k_);
}

std::vector<EdgeUpdate> KCliqueCounter::filter_redundant(const Batch& batch) const {
  std::vector<EdgeUpdate> out;
  out.reserve(batch.updates.size());
  for (const auto& upd : batch.updates) {
    bool present = graph_.has_edge(upd.u, upd.v);
    if (upd.is_insert() ? !present : present) out.push_back(upd);
  }
  return out;
}

uint64_t KCliqueCounter::apply_batch(const Batch& batch) {
  {
    std::vector<uint64_t> keys;
    keys.reserve(batch.updates.size());
    for (const auto& upd : batch.updates) keys.push_back(upd.key());
    std::sort(keys.begin(), keys.end());
    if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
      throw ContractViolation("apply_batch: batch is not normalized");
  }

  std::vector<EdgeUpdate> survivors = filter_redundant(batch);
  if (survivors.empty()) return count_;

  if (survivors.size() >= graph_.m()) {
    for (const auto& upd : survivors)
      if (upd.is_insert())
        graph_.add_edge(upd.u, upd.v);
      else
        graph_.remove_edge(upd.u, upd.v);
    count_ = enumerate_cliques(graph_, k_);
    return count_;
  }

  for (const auto& upd : survivors)
    if (upd.is_insert()) graph_.add_edge(upd.u, upd.v);

  std::unordered_map<uint64_t, UpdateKind> batch_table;
  batch_table.reserve(survivors.size() * 2);
  std::vector<std::vector<vertex_id>> batch_adj(graph_.n);
  for (const auto& upd : survivors) {
    batch_table.emplace(upd.key(), upd.kind);
    batch_adj[upd.u].push_back(upd.v);
    batch_adj[upd.v].push_back(upd.u);
  }

  auto adj = build_adjacency(graph_);
  std::atomic<int64_t> delta{0};

  enumerate_cliques(graph_, k_ - 2, [&](const std::vector<vertex_id>& core) {
    // Vertices adjacent to the whole core in the union graph.
    std::vector<vertex_id> cn = adj[core[0]];
    std::vector<vertex_id> next;
    for (size_t i = 1; i < core.size() && !cn.empty(); ++i) {
      next.clear();
      std::set_intersection(cn.begin(), cn.end(), adj[core[i]].begin(), adj[core[i]].end(),
                            std::back_inserter(next));
      cn.swap(next);
    }
    if (cn.size() < 2) return;

    std::vector<vertex_id> clique(core);
    clique.resize(core.size() + 2);
    for (vertex_id u : cn) {
      for (vertex_id v : batch_adj[u]) {
        if (v <= u || !std::binary_search(cn.begin(), cn.end(), v)) continue;
        clique[core.size()] = u;
        clique[core.size() + 1] = v;

        int ins = 0, del = 0;
        for (size_t i = 0; i + 1 < clique.size(); ++i)
          for (size_t j = i + 1; j < clique.size(); ++j) {
            auto it = batch_table.find(edge_key(clique[i], clique[j]));
            if (it == batch_table.end()) continue;
            if (it->second == UpdateKind::Insert)
              ++ins;
            else
              ++del;
          }
        if (ins > 0 && del > 0) continue;  // gone and born nowhere: no net change

        EdgeUpdate e(u, v, batch_table.at(edge_key(u, v)), 0);
        if (!is_lex_first_batch_edge(e, clique, batch_table)) continue;
        delta.fetch_add(ins > 0 ? 1 : -1, std::memory_order_relaxed);
      }
    }
  });

  for (const auto& upd : survivors)
    if (!upd.is_insert()) graph_.remove_edge(upd.u, upd.v);

  int64_t d = delta.load();
  if (d < 0 && uint64_t(-d) > count_)
    throw ContractViolation("apply_batch: clique count would go negative");
  count_ = uint64_t(int64_t(count_) + d);
  return count_;
}

}  // namespace dyncliq
