#include "dyncliq/kclique_mm.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>

#include "dyncliq/matmul.hpp"
#include "dyncliq/static_algos.hpp"

namespace dyncliq {

namespace {

uint64_t binom(uint64_t n, uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  uint64_t out = 1;
  for (uint64_t i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

void validate_normalized(const Batch& batch) {
  std::vector<uint64_t> keys;
  keys.reserve(batch.updates.size());
  for (const auto& upd : batch.updates) keys.push_back(upd.key());
  std::sort(keys.begin(), keys.end());
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
    throw ContractViolation("batch is not normalized");
}

// Emits every clique of `need` vertices inside `pool` whose members are also
// pairwise adjacent to the current stack (used to grow cliques around an edge).
template <typename F>
void emit_extensions(const std::vector<vertex_id>& pool, const Graph& g, size_t start,
                     uint32_t need, std::vector<vertex_id>& cur, F&& f) {
  if (need == 0) {
    f();
    return;
  }
  for (size_t i = start; i + need <= pool.size(); ++i) {
    vertex_id w = pool[i];
    bool ok = true;
    for (vertex_id c : cur)
      if (!g.has_edge(c, w)) {
        ok = false;
        break;
      }
    if (!ok) continue;
    cur.push_back(w);
    emit_extensions(pool, g, i + 1, need - 1, cur, f);
    cur.pop_back();
  }
}

// All cliques of size extra+2 through edge (u,v); sorted tuples land in out.
void cliques_through_edge(const std::vector<std::vector<vertex_id>>& rows, const Graph& g,
                          vertex_id u, vertex_id v, uint32_t extra,
                          std::set<std::vector<vertex_id>>& out) {
  std::vector<vertex_id> common;
  if (u < rows.size() && v < rows.size())
    std::set_intersection(rows[u].begin(), rows[u].end(), rows[v].begin(), rows[v].end(),
                          std::back_inserter(common));
  if (common.size() < extra) return;
  std::vector<vertex_id> cur;
  emit_extensions(common, g, 0, extra, cur, [&]() {
    std::vector<vertex_id> tuple = cur;
    tuple.push_back(u);
    tuple.push_back(v);
    std::sort(tuple.begin(), tuple.end());
    out.insert(std::move(tuple));
  });
}

template <typename F>
void combo_rec(size_t n, size_t need, size_t start, std::vector<size_t>& cur, F&& f) {
  if (cur.size() == need) {
    f(cur);
    return;
  }
  for (size_t i = start; i + (need - cur.size()) <= n; ++i) {
    cur.push_back(i);
    combo_rec(n, need, i + 1, cur, f);
    cur.pop_back();
  }
}

// Unordered splits of a sorted 2l-set into two l-sets; the first part keeps
// the smallest vertex so each split appears once.
template <typename F>
void for_each_bipartition(const std::vector<vertex_id>& w, uint32_t l, F&& f) {
  std::vector<size_t> cur;
  combo_rec(w.size() - 1, l - 1, 0, cur, [&](const std::vector<size_t>& picks) {
    std::vector<char> used(w.size(), 0);
    used[0] = 1;
    std::vector<vertex_id> s1{w[0]};
    for (size_t p : picks) {
      used[p + 1] = 1;
      s1.push_back(w[p + 1]);
    }
    std::vector<vertex_id> s2;
    for (size_t i = 1; i < w.size(); ++i)
      if (!used[i]) s2.push_back(w[i]);
    f(s1, s2);
  });
}

// Unordered partitions of a sorted 3l-set into three l-sets: the first part
// keeps the global minimum, the second the minimum of the remainder.
template <typename F>
void for_each_partition3(const std::vector<vertex_id>& k_set, uint32_t l, F&& f) {
  std::vector<size_t> cur;
  combo_rec(k_set.size() - 1, l - 1, 0, cur, [&](const std::vector<size_t>& first) {
    std::vector<char> used(k_set.size(), 0);
    used[0] = 1;
    std::vector<vertex_id> p0{k_set[0]};
    for (size_t p : first) {
      used[p + 1] = 1;
      p0.push_back(k_set[p + 1]);
    }
    std::vector<vertex_id> rem;
    for (size_t i = 1; i < k_set.size(); ++i)
      if (!used[i]) rem.push_back(k_set[i]);
    std::vector<size_t> cur2;
    combo_rec(rem.size() - 1, l - 1, 0, cur2, [&](const std::vector<size_t>& second) {
      std::vector<char> used2(rem.size(), 0);
      used2[0] = 1;
      std::vector<vertex_id> p1{rem[0]};
      for (size_t p : second) {
        used2[p + 1] = 1;
        p1.push_back(rem[p + 1]);
      }
      std::vector<vertex_id> p2;
      for (size_t i = 1; i < rem.size(); ++i)
        if (!used2[i]) p2.push_back(rem[i]);
      f(p0, p1, p2);
    });
  });
}

}  // namespace

uint32_t CliqueGraph::intern(const std::vector<vertex_id>& tuple) {
  auto it = q.find(tuple);
  if (it != q.end()) return it->second;
  uint32_t id = uint32_t(tuples.size());
  q.emplace(tuple, id);
  tuples.push_back(tuple);
  alive.push_back(1);
  deg.push_back(0);
  return id;
}

std::optional<uint32_t> CliqueGraph::find(const std::vector<vertex_id>& tuple) const {
  auto it = q.find(tuple);
  if (it == q.end()) return std::nullopt;
  return it->second;
}

MMStore::MMStore(const Graph& g, int k, MMOptions opts) : graph_(g), k_(k), opts_(opts) {
  if (k < 6 || k % 3 != 0)
    throw ParameterError("clique size must be a multiple of three, at least six");
  cg_.l = uint32_t(k / 3);
  init_from_graph();
}

double MMStore::t_exponent() const {
  double omega = std::log2(7.0);
  return (3.0 - k_ + k_ * omega) / (k_ + k_ * omega);
}

uint64_t MMStore::divisor() const {
  uint32_t l = cg_.l;
  return binom(uint64_t(k_), l) * binom(uint64_t(2) * l, l);
}

void MMStore::init_from_graph() {
  cg_.q.clear();
  cg_.tuples.clear();
  cg_.alive.clear();
  cg_.deg.clear();
  class_.clear();
  low_nbrs_.clear();
  high_low_.clear();
  high_high_.clear();

  uint32_t l = cg_.l;
  m_ = graph_.m();
  big_m_ = 2 * m_ + 1;
  base_ = opts_.threshold_override ? *opts_.threshold_override
                                   : std::pow(double(big_m_), t_exponent() * l);

  if (enumerate_cliques(graph_, int(l)) > opts_.clique_budget)
    throw BudgetError("part-clique count exceeds the configured budget");
  std::set<std::vector<vertex_id>> parts;
  enumerate_cliques(graph_, int(l), [&](const std::vector<vertex_id>& c) {
#pragma omp critical
    parts.insert(c);
  });
  for (const auto& t : parts) cg_.intern(t);

  std::vector<std::pair<uint32_t, uint32_t>> edges;
  enumerate_cliques(graph_, int(2 * l), [&](const std::vector<vertex_id>& w) {
    std::vector<std::pair<uint32_t, uint32_t>> local;
    for_each_bipartition(w, l, [&](const std::vector<vertex_id>& s1,
                                   const std::vector<vertex_id>& s2) {
      auto a = cg_.find(s1);
      auto b = cg_.find(s2);
      if (!a || !b) throw ContractViolation("bipartition part missing from the clique graph");
      local.emplace_back(std::min(*a, *b), std::max(*a, *b));
    });
#pragma omp critical
    edges.insert(edges.end(), local.begin(), local.end());
  });
  std::sort(edges.begin(), edges.end());

  std::vector<uint32_t> deg(cg_.tuples.size(), 0);
  for (const auto& [a, b] : edges) {
    ++deg[a];
    ++deg[b];
  }
  class_.assign(cg_.tuples.size(), 0);
  for (uint32_t v = 0; v < class_.size(); ++v) {
    class_[v] = double(deg[v]) > base_ ? 1 : 0;
    if (class_[v]) {
      high_low_.try_emplace(v);
      high_high_.try_emplace(v);
    } else {
      low_nbrs_.try_emplace(v);
    }
  }
  for (const auto& [a, b] : edges) add_gedge(a, b);

  c_low_ = 6 * count_low_triangles_full();
  c_high_ = compute_high_trace();
  int64_t total = c_low_ + c_high_;
  if (total < 0 || uint64_t(total) % divisor() != 0)
    throw ContractViolation("triangle total is not a multiple of the partition constant");
  count_ = uint64_t(total) / divisor();
}

void MMStore::add_gedge(uint32_t a, uint32_t b) {
  ++cg_.deg[a];
  ++cg_.deg[b];
  bool la = class_[a] == 0, lb = class_[b] == 0;
  if (la) low_nbrs_[a].insert(b);
  if (lb) low_nbrs_[b].insert(a);
  if (la && !lb) high_low_[b].insert(a);
  if (!la && lb) high_low_[a].insert(b);
  if (!la && !lb) {
    high_high_[a].insert(b);
    high_high_[b].insert(a);
  }
}

void MMStore::remove_gedge(uint32_t a, uint32_t b) {
  --cg_.deg[a];
  --cg_.deg[b];
  bool la = class_[a] == 0, lb = class_[b] == 0;
  if (la) low_nbrs_[a].erase(b);
  if (lb) low_nbrs_[b].erase(a);
  if (la && !lb) high_low_[b].erase(a);
  if (!la && lb) high_low_[a].erase(b);
  if (!la && !lb) {
    high_high_[a].erase(b);
    high_high_[b].erase(a);
  }
}

bool MMStore::edge_present(uint32_t a, uint32_t b) const {
  if (class_[a] == 0) {
    auto it = low_nbrs_.find(a);
    return it != low_nbrs_.end() && it->second.count(b) > 0;
  }
  if (class_[b] == 0) {
    auto it = low_nbrs_.find(b);
    return it != low_nbrs_.end() && it->second.count(a) > 0;
  }
  auto it = high_high_.find(a);
  return it != high_high_.end() && it->second.count(b) > 0;
}

void MMStore::promote(uint32_t v) {
  std::vector<uint32_t> nbrs(low_nbrs_[v].begin(), low_nbrs_[v].end());
  low_nbrs_.erase(v);
  class_[v] = 1;
  auto& hl = high_low_[v];
  auto& hh = high_high_[v];
  for (uint32_t x : nbrs) {
    if (class_[x] == 0) {
      hl.insert(x);  // x keeps v inside its own neighbor set
    } else {
      high_low_[x].erase(v);
      hh.insert(x);
      high_high_[x].insert(v);
    }
  }
}

void MMStore::demote(uint32_t v) {
  class_[v] = 0;
  auto& ln = low_nbrs_[v];
  for (uint32_t x : high_low_[v]) ln.insert(x);
  for (uint32_t x : high_high_[v]) {
    ln.insert(x);
    high_high_[x].erase(v);
    high_low_[x].insert(v);
  }
  high_low_.erase(v);
  high_high_.erase(v);
}

GPrimeUpdates MMStore::derive_gprime_updates(const Batch& batch) {
  validate_normalized(batch);
  std::vector<EdgeUpdate> ins, del;
  for (const auto& upd : batch.updates) {
    bool present = graph_.has_edge(upd.u, upd.v);
    if (upd.is_insert() && !present) ins.push_back(upd);
    if (!upd.is_insert() && present) del.push_back(upd);
  }
  GPrimeUpdates out;
  if (ins.empty() && del.empty()) return out;

  Graph final_g = graph_;
  for (const auto& e : ins) final_g.add_edge(e.u, e.v);
  for (const auto& e : del) final_g.remove_edge(e.u, e.v);
  auto rows_pre = build_adjacency(graph_);
  auto rows_post = build_adjacency(final_g);

  uint32_t l = cg_.l;
  std::set<std::vector<vertex_id>> born, dead, wide_born, wide_dead;
  for (const auto& e : ins) {
    cliques_through_edge(rows_post, final_g, e.u, e.v, l - 2, born);
    cliques_through_edge(rows_post, final_g, e.u, e.v, 2 * l - 2, wide_born);
  }
  for (const auto& e : del) {
    cliques_through_edge(rows_pre, graph_, e.u, e.v, l - 2, dead);
    cliques_through_edge(rows_pre, graph_, e.u, e.v, 2 * l - 2, wide_dead);
  }

  for (const auto& t : born) out.added_vertices.push_back(cg_.intern(t));
  for (const auto& t : dead) {
    auto id = cg_.find(t);
    if (!id) throw ContractViolation("destroyed part-clique was never interned");
    out.removed_vertices.push_back(*id);
  }
  for (const auto& w : wide_born)
    for_each_bipartition(w, l, [&](const std::vector<vertex_id>& s1,
                                   const std::vector<vertex_id>& s2) {
      auto a = cg_.find(s1);
      auto b = cg_.find(s2);
      if (!a || !b) throw ContractViolation("bipartition part missing from the clique graph");
      out.insert_edges.emplace_back(std::min(*a, *b), std::max(*a, *b));
    });
  for (const auto& w : wide_dead)
    for_each_bipartition(w, l, [&](const std::vector<vertex_id>& s1,
                                   const std::vector<vertex_id>& s2) {
      auto a = cg_.find(s1);
      auto b = cg_.find(s2);
      if (!a || !b) throw ContractViolation("bipartition part missing from the clique graph");
      out.delete_edges.emplace_back(std::min(*a, *b), std::max(*a, *b));
    });
  class_.resize(cg_.tuples.size(), 0);
  return out;
}

uint64_t MMStore::count_updated_low_degree_triangles(const std::array<uint32_t, 3>& tri,
                                                     std::pair<uint32_t, uint32_t> update_edge,
                                                     const LowCountPhase& phase) const {
  std::vector<vertex_id> k_set;
  k_set.reserve(size_t(k_));
  for (uint32_t id : tri)
    for (vertex_id x : cg_.tuples[id]) k_set.push_back(x);
  std::sort(k_set.begin(), k_set.end());
  if (k_set.size() != size_t(k_) ||
      std::adjacent_find(k_set.begin(), k_set.end()) != k_set.end())
    throw ContractViolation("triangle parts are not disjoint");

  bool changed = false;
  for (size_t i = 0; i + 1 < k_set.size() && !changed; ++i)
    for (size_t j = i + 1; j < k_set.size(); ++j)
      if (phase.batch_edges.count(edge_key(k_set[i], k_set[j]))) {
        changed = true;
        break;
      }

  auto other_low = [&](uint32_t id) {
    auto it = phase.other_class.find(id);
    return (it != phase.other_class.end() ? it->second : class_[id]) == 0;
  };

  uint64_t pool_moves = 0;
  std::array<uint32_t, 3> best_tri{};
  uint64_t best_key = 0;
  bool have_best = false;
  for_each_partition3(k_set, cg_.l, [&](const std::vector<vertex_id>& p0,
                                        const std::vector<vertex_id>& p1,
                                        const std::vector<vertex_id>& p2) {
    auto a = cg_.find(p0);
    auto b = cg_.find(p1);
    auto c = cg_.find(p2);
    if (!a || !b || !c) throw ContractViolation("sibling part-clique missing");
    std::array<uint32_t, 3> ids{*a, *b, *c};
    std::sort(ids.begin(), ids.end());

    bool cur_low = class_[ids[0]] == 0 || class_[ids[1]] == 0 || class_[ids[2]] == 0;
    if (cur_low) {
      if (changed) {
        ++pool_moves;
      } else {
        bool oth_low = other_low(ids[0]) || other_low(ids[1]) || other_low(ids[2]);
        if (!oth_low) ++pool_moves;
      }
    }

    const std::array<std::pair<uint32_t, uint32_t>, 3> sides{
        std::pair{ids[0], ids[1]}, std::pair{ids[0], ids[2]}, std::pair{ids[1], ids[2]}};
    for (const auto& [p, q] : sides) {
      if (class_[p] != 0 && class_[q] != 0) continue;
      uint64_t fkey = edge_key(p, q);
      if (!phase.scan_edges.count(fkey)) continue;
      if (!have_best || ids < best_tri || (ids == best_tri && fkey < best_key)) {
        best_tri = ids;
        best_key = fkey;
        have_best = true;
      }
    }
  });

  if (!have_best) {
    if (pool_moves > 0)
      throw ContractViolation("pool change without a low-incident scan witness");
    return 0;
  }
  std::array<uint32_t, 3> sorted_tri = tri;
  std::sort(sorted_tri.begin(), sorted_tri.end());
  uint64_t ekey = edge_key(update_edge.first, update_edge.second);
  if (sorted_tri != best_tri || ekey != best_key) return 0;
  return 6 * pool_moves;
}

int64_t MMStore::scan_low_triangles(const LowCountPhase& phase) const {
  std::vector<uint64_t> edges(phase.scan_edges.begin(), phase.scan_edges.end());
  std::sort(edges.begin(), edges.end());
  int64_t total = 0;
#pragma omp parallel for schedule(dynamic, 8) reduction(+ : total)
  for (size_t i = 0; i < edges.size(); ++i) {
    uint32_t p = uint32_t(key_min(edges[i]));
    uint32_t q = uint32_t(key_max(edges[i]));
    bool pl = class_[p] == 0, ql = class_[q] == 0;
    if (!pl && !ql) continue;  // a low-incident witness edge always exists
    uint32_t x = pl ? p : q;
    uint32_t o = pl ? q : p;
    auto it = low_nbrs_.find(x);
    if (it == low_nbrs_.end()) continue;
    for (uint32_t y : it->second) {
      if (y == o || !edge_present(y, o)) continue;
      std::array<uint32_t, 3> tri{p, q, y};
      std::sort(tri.begin(), tri.end());
      total += int64_t(count_updated_low_degree_triangles(tri, {p, q}, phase));
    }
  }
  return total;
}

int64_t MMStore::count_low_triangles_full() const {
  std::vector<uint32_t> lows;
  for (uint32_t v = 0; v < class_.size(); ++v)
    if (cg_.alive[v] && class_[v] == 0) lows.push_back(v);
  int64_t total = 0;
#pragma omp parallel for schedule(dynamic, 8) reduction(+ : total)
  for (size_t i = 0; i < lows.size(); ++i) {
    uint32_t x = lows[i];
    auto it = low_nbrs_.find(x);
    if (it == low_nbrs_.end()) continue;
    std::vector<uint32_t> nb(it->second.begin(), it->second.end());
    std::sort(nb.begin(), nb.end());
    for (size_t p = 0; p < nb.size(); ++p) {
      uint32_t a = nb[p];
      if (class_[a] == 0 && a < x) continue;  // charged to the smaller low vertex
      for (size_t q = p + 1; q < nb.size(); ++q) {
        uint32_t b = nb[q];
        if (class_[b] == 0 && b < x) continue;
        if (edge_present(a, b)) ++total;
      }
    }
  }
  return total;
}

int64_t MMStore::compute_high_trace() const {
  std::vector<uint32_t> highs;
  for (uint32_t v = 0; v < class_.size(); ++v)
    if (cg_.alive[v] && class_[v] != 0) highs.push_back(v);
  if (highs.size() < 3) return 0;
  std::unordered_map<uint32_t, int> idx;
  idx.reserve(highs.size() * 2);
  for (size_t i = 0; i < highs.size(); ++i) idx.emplace(highs[i], int(i));
  DenseMatrix a(int(highs.size()));
  for (size_t i = 0; i < highs.size(); ++i) {
    auto it = high_high_.find(highs[i]);
    if (it == high_high_.end()) continue;
    for (uint32_t g : it->second) a.at(int(i), idx.at(g)) = 1;
  }
  int64_t trace = cube_diagonal_sum(a);
  if (trace < 0 || trace % 6 != 0)
    throw ContractViolation("high-core trace must be a nonnegative multiple of six");
  return trace;
}

uint64_t MMStore::high_degree_triangle_count() const {
  return uint64_t(compute_high_trace()) / 6;
}

uint64_t MMStore::apply_batch(const Batch& batch) {
  validate_normalized(batch);
  std::vector<EdgeUpdate> ins, del;
  for (const auto& upd : batch.updates) {
    bool present = graph_.has_edge(upd.u, upd.v);
    if (upd.is_insert() && !present) ins.push_back(upd);
    if (!upd.is_insert() && present) del.push_back(upd);
  }
  if (ins.empty() && del.empty()) return count_;

  GPrimeUpdates ups = derive_gprime_updates(batch);

  std::vector<uint32_t> deg_final(cg_.deg.begin(), cg_.deg.end());
  for (const auto& [a, b] : ups.insert_edges) {
    ++deg_final[a];
    ++deg_final[b];
  }
  for (const auto& [a, b] : ups.delete_edges) {
    --deg_final[a];
    --deg_final[b];
  }

  std::unordered_set<uint32_t> removed(ups.removed_vertices.begin(), ups.removed_vertices.end());
  std::unordered_set<uint32_t> added(ups.added_vertices.begin(), ups.added_vertices.end());
  std::vector<uint32_t> to_high, to_low;
  for (uint32_t v = 0; v < class_.size(); ++v) {
    if (!cg_.alive[v] || removed.count(v) || added.count(v)) continue;
    if (class_[v] == 0 && double(deg_final[v]) > 1.5 * base_)
      to_high.push_back(v);
    else if (class_[v] != 0 && double(deg_final[v]) < 0.5 * base_)
      to_low.push_back(v);
  }

  // Pass 1: triangles leaving the low pool, against the pre-batch tables.
  LowCountPhase del_phase;
  del_phase.insert_phase = false;
  for (const auto& [a, b] : ups.delete_edges) del_phase.scan_edges.insert(edge_key(a, b));
  for (uint32_t v : to_high)
    for (uint32_t x : low_nbrs_.at(v)) {
      uint64_t key = edge_key(v, x);
      if (!del_phase.scan_edges.count(key)) del_phase.scan_edges.insert(key);
    }
  for (const auto& upd : del) del_phase.batch_edges.insert(upd.key());
  for (uint32_t v : to_high) del_phase.other_class[v] = 1;
  for (uint32_t v : to_low) del_phase.other_class[v] = 0;
  int64_t t_d = scan_low_triangles(del_phase);
  c_low_ -= t_d;
  if (c_low_ < 0) throw ContractViolation("apply_batch: low triangle pool went negative");

  for (const auto& [a, b] : ups.delete_edges) remove_gedge(a, b);
  for (uint32_t v : ups.removed_vertices) {
    if (cg_.deg[v] != 0) throw ContractViolation("apply_batch: removed vertex still has edges");
    cg_.alive[v] = 0;
    cg_.q.erase(cg_.tuples[v]);
    low_nbrs_.erase(v);
    high_low_.erase(v);
    high_high_.erase(v);
  }
  for (uint32_t v : ups.added_vertices) {
    class_[v] = double(deg_final[v]) > base_ ? 1 : 0;
    if (class_[v]) {
      high_low_.try_emplace(v);
      high_high_.try_emplace(v);
    } else {
      low_nbrs_.try_emplace(v);
    }
  }
  for (const auto& [a, b] : ups.insert_edges) add_gedge(a, b);

  std::vector<std::pair<uint32_t, bool>> movers;
  for (uint32_t v : to_high) movers.emplace_back(v, true);
  for (uint32_t v : to_low) movers.emplace_back(v, false);
  std::sort(movers.begin(), movers.end());
  for (const auto& [v, up] : movers) up ? promote(v) : demote(v);

  // Pass 2: triangles entering the low pool, against the final tables.
  LowCountPhase ins_phase;
  ins_phase.insert_phase = true;
  for (const auto& [a, b] : ups.insert_edges) ins_phase.scan_edges.insert(edge_key(a, b));
  for (uint32_t v : to_low)
    for (uint32_t x : low_nbrs_.at(v)) {
      uint64_t key = edge_key(v, x);
      if (!ins_phase.scan_edges.count(key)) ins_phase.scan_edges.insert(key);
    }
  for (const auto& upd : ins) ins_phase.batch_edges.insert(upd.key());
  for (uint32_t v : to_high) ins_phase.other_class[v] = 0;
  for (uint32_t v : to_low) ins_phase.other_class[v] = 1;
  int64_t t_i = scan_low_triangles(ins_phase);
  c_low_ += t_i;

  c_high_ = compute_high_trace();
  int64_t total = c_low_ + c_high_;
  if (total < 0 || uint64_t(total) % divisor() != 0)
    throw ContractViolation("triangle total is not a multiple of the partition constant");
  count_ = uint64_t(total) / divisor();

  for (const auto& e : ins) graph_.add_edge(e.u, e.v);
  for (const auto& e : del) graph_.remove_edge(e.u, e.v);
  m_ = graph_.m();
  if (m_ > big_m_ || 4 * m_ < big_m_) init_from_graph();
  return count_;
}

std::vector<uint32_t> MMStore::gprime_vertices() const {
  std::vector<uint32_t> out;
  for (uint32_t v = 0; v < cg_.tuples.size(); ++v)
    if (cg_.alive[v]) out.push_back(v);
  return out;
}

std::vector<uint32_t> MMStore::gprime_neighbors(uint32_t id) const {
  std::vector<uint32_t> out;
  if (class_[id] == 0) {
    auto it = low_nbrs_.find(id);
    if (it != low_nbrs_.end()) out.assign(it->second.begin(), it->second.end());
  } else {
    auto lo = high_low_.find(id);
    if (lo != high_low_.end()) out.assign(lo->second.begin(), lo->second.end());
    auto hi = high_high_.find(id);
    if (hi != high_high_.end()) out.insert(out.end(), hi->second.begin(), hi->second.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

uint64_t MMStore::gprime_edge_count() const {
  uint64_t halves = 0;
  for (uint32_t v = 0; v < cg_.tuples.size(); ++v)
    if (cg_.alive[v]) halves += cg_.deg[v];
  return halves / 2;
}

std::vector<std::string> MMStore::audit(bool check_counts) const {
  std::vector<std::string> issues;
  auto complain = [&](const std::string& s) { issues.push_back(s); };
  size_t n = cg_.tuples.size();
  if (cg_.alive.size() != n || cg_.deg.size() != n || class_.size() != n) {
    complain("table sizes disagree");
    return issues;
  }
  size_t alive_count = 0;
  for (uint32_t v = 0; v < n; ++v) {
    if (!cg_.alive[v]) {
      if (low_nbrs_.count(v) || high_low_.count(v) || high_high_.count(v))
        complain("dead vertex still has tables");
      continue;
    }
    ++alive_count;
    const auto& t = cg_.tuples[v];
    if (t.size() != cg_.l || !std::is_sorted(t.begin(), t.end()) ||
        std::adjacent_find(t.begin(), t.end()) != t.end())
      complain("malformed tuple");
    auto found = cg_.find(t);
    if (!found || *found != v) complain("tuple key does not round-trip");
    for (size_t i = 0; i + 1 < t.size(); ++i)
      for (size_t j = i + 1; j < t.size(); ++j)
        if (!graph_.has_edge(t[i], t[j])) complain("tuple is not a clique in the base graph");

    std::vector<uint32_t> nbrs = gprime_neighbors(v);
    if (nbrs.size() != cg_.deg[v]) complain("degree does not match the tables");
    if (class_[v] == 0) {
      if (!low_nbrs_.count(v)) complain("low vertex missing its table");
      if (high_low_.count(v) || high_high_.count(v)) complain("low vertex in high tables");
    } else {
      if (low_nbrs_.count(v)) complain("high vertex in the low table");
      if (!high_low_.count(v) || !high_high_.count(v)) complain("high vertex missing its tables");
      for (uint32_t x : high_low_.at(v))
        if (class_[x] != 0) complain("high-side low neighbor is not low");
      for (uint32_t x : high_high_.at(v))
        if (class_[x] == 0) complain("high-side high neighbor is not high");
    }
    for (uint32_t x : nbrs) {
      if (x >= n || !cg_.alive[x]) {
        complain("neighbor is not alive");
        continue;
      }
      if (!edge_present(x, v) || !edge_present(v, x)) complain("edge is not mirrored");
      const auto& s = cg_.tuples[x];
      std::vector<vertex_id> uni(t.begin(), t.end());
      uni.insert(uni.end(), s.begin(), s.end());
      std::sort(uni.begin(), uni.end());
      if (std::adjacent_find(uni.begin(), uni.end()) != uni.end()) {
        complain("edge endpoints overlap");
        continue;
      }
      for (size_t i = 0; i + 1 < uni.size(); ++i)
        for (size_t j = i + 1; j < uni.size(); ++j)
          if (!graph_.has_edge(uni[i], uni[j])) complain("edge union is not a clique");
    }
  }
  if (cg_.q.size() != alive_count) complain("tuple index size mismatch");
  if (m_ != graph_.m()) complain("edge count is stale");
  if (m_ > big_m_ || (m_ > 0 && 4 * m_ < big_m_)) complain("m outside [M/4, M]");
  if (check_counts) {
    if (c_low_ != 6 * count_low_triangles_full()) complain("low triangle pool is stale");
    if (c_high_ != compute_high_trace()) complain("high triangle pool is stale");
    int64_t total = c_low_ + c_high_;
    if (total < 0 || uint64_t(total) % divisor() != 0 || count_ != uint64_t(total) / divisor())
      complain("count does not match the pools");
  }
  return issues;
}

}  // namespace dyncliq
